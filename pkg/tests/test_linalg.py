from __future__ import annotations

import random
from fractions import Fraction

from wblowup.linalg import AugmentedEchelon, SparseEchelon, kernel_of_columns


def dense_rank(rows, ncols):
    """Independent Gaussian elimination over Fraction lists."""
    mat = [list(r) for r in rows]
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = mat[rank][col]
        mat[rank] = [v / inv for v in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][col]:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def random_sparse_rows(rng, nrows, ncols, density=0.4):
    rows = []
    for _ in range(nrows):
        rows.append([Fraction(rng.randint(-3, 3)) if rng.random() < density else Fraction(0)
                     for _ in range(ncols)])
    return rows


def test_echelon_rank_matches_dense_oracle():
    rng = random.Random(7)
    for trial in range(25):
        nrows, ncols = rng.randint(1, 8), rng.randint(1, 8)
        rows = random_sparse_rows(rng, nrows, ncols)
        ech = SparseEchelon()
        for row in rows:
            ech.insert({j: v for j, v in enumerate(row) if v})
        assert ech.rank == dense_rank(rows, ncols), (trial, rows)


def test_reduce_is_idempotent_and_in_span():
    ech = SparseEchelon()
    ech.insert({0: Fraction(1), 1: Fraction(2)})
    ech.insert({1: Fraction(1), 2: Fraction(-1)})
    # combination of the two rows reduces to zero
    assert ech.reduce({0: Fraction(2), 1: Fraction(5), 2: Fraction(-1)}) == {}
    residual = ech.reduce({2: Fraction(1)})
    assert ech.reduce(residual) == residual


def test_kernel_vectors_annihilate_columns():
    rng = random.Random(11)
    for trial in range(25):
        ncols, dim = rng.randint(1, 7), rng.randint(1, 6)
        cols = [{i: v for i, v in enumerate(col) if v}
                for col in zip(*random_sparse_rows(rng, dim, ncols))]
        rank, kernel = kernel_of_columns(cols)
        assert rank + len(kernel) == ncols
        for combo in kernel:
            image = {}
            for j, c in combo.items():
                for i, v in cols[j].items():
                    image[i] = image.get(i, Fraction(0)) + c * v
            assert all(v == 0 for v in image.values()), trial


def test_augmented_echelon_tracks_combinations():
    ech = AugmentedEchelon()
    v1 = {0: Fraction(1), 1: Fraction(1)}
    v2 = {1: Fraction(1)}
    ech.insert(v1, "a")
    ech.insert(v2, "b")
    residual, combo = ech.reduce({0: Fraction(1)})
    assert residual == {}
    # combination must rebuild the reduced vector: 1*v1 - 1*v2
    rebuilt = {}
    for label, c in combo.items():
        src = v1 if label == "a" else v2
        for k, v in src.items():
            rebuilt[k] = rebuilt.get(k, Fraction(0)) + c * v
    rebuilt = {k: v for k, v in rebuilt.items() if v}
    assert rebuilt == {0: Fraction(1)}
