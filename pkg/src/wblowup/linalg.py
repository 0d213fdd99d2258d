"""Exact sparse linear algebra over Q.

Vectors are dicts mapping column keys (any sortable hashables; in practice
monomial tuples or tagged monomials) to nonzero Fractions.  The central
object is a sparse row-echelon accumulator: rows are inserted one at a time,
each new row is reduced against existing pivots, and a nonzero residual
becomes a new pivot row.  Everything is exact; no pivots are ever chosen
for numerical reasons, only by a deterministic key order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Tuple

Vector = Dict[Hashable, Fraction]


def _default_key(col):
    return repr(col)


class SparseEchelon:
    """Row space accumulator with exact reduction.

    Rows are normalized so the pivot coefficient is 1.  Rows are not kept in
    reduced echelon form; reduction loops until the work vector contains no
    pivot column, which yields a residual independent of elimination order.
    """

    def __init__(self, key=None):
        self.key = key if key is not None else _default_key
        self.pivots: Dict[Hashable, Vector] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Vector) -> Vector:
        """Residual of vec modulo the accumulated row space."""
        work = dict(vec)
        pivots = self.pivots
        while True:
            hit = None
            for c in work:
                if c in pivots:
                    hit = c
                    break
            if hit is None:
                return work
            coeff = work.pop(hit)
            for c2, v2 in pivots[hit].items():
                if c2 == hit:
                    continue
                nv = work.get(c2, _ZERO) - coeff * v2
                if nv:
                    work[c2] = nv
                else:
                    work.pop(c2, None)

    def insert(self, vec: Vector) -> Optional[Hashable]:
        """Insert a row; return its pivot column, or None if dependent."""
        residual = self.reduce(vec)
        if not residual:
            return None
        pivot = min(residual, key=self.key)
        inv = 1 / residual[pivot]
        self.pivots[pivot] = {c: v * inv for c, v in residual.items()}
        return pivot

    def extend(self, rows) -> int:
        added = 0
        for row in rows:
            if self.insert(row) is not None:
                added += 1
        return added

    def rows(self) -> List[Vector]:
        return list(self.pivots.values())


_ZERO = Fraction(0)


class AugmentedEchelon:
    """Echelon that tracks each residual as a combination of inserted labels."""

    def __init__(self, key=None):
        self.key = key if key is not None else _default_key
        self.pivots: Dict[Hashable, Tuple[Vector, Vector]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Vector, combo: Optional[Vector] = None) -> Tuple[Vector, Vector]:
        """Return (residual, coefficients) with vec = residual + sum c_l * row_l."""
        work = dict(vec)
        acc: Vector = dict(combo) if combo else {}
        pivots = self.pivots
        while True:
            hit = None
            for c in work:
                if c in pivots:
                    hit = c
                    break
            if hit is None:
                return work, acc
            coeff = work.pop(hit)
            row, row_combo = pivots[hit]
            for c2, v2 in row.items():
                if c2 == hit:
                    continue
                nv = work.get(c2, _ZERO) - coeff * v2
                if nv:
                    work[c2] = nv
                else:
                    work.pop(c2, None)
            for l2, v2 in row_combo.items():
                nv = acc.get(l2, _ZERO) + coeff * v2
                if nv:
                    acc[l2] = nv
                else:
                    acc.pop(l2, None)

    def insert(self, vec: Vector, label: Hashable) -> bool:
        """Insert a labelled row; False if it was already in the span."""
        residual, acc = self.reduce(vec)
        return self.insert_reduced(residual, acc, label)

    def insert_reduced(self, residual: Vector, acc: Vector, label: Hashable) -> bool:
        """Insert an already-reduced row, given its reduce() output."""
        if not residual:
            return False
        pivot = min(residual, key=self.key)
        inv = 1 / residual[pivot]
        row = {c: v * inv for c, v in residual.items()}
        # vec = residual + sum acc: store residual's expression in labels
        combo = {l: -v * inv for l, v in acc.items()}
        combo[label] = combo.get(label, _ZERO) + inv
        self.pivots[pivot] = (row, {l: v for l, v in combo.items() if v})
        return True


@dataclass
class LinearMap:
    """Sparse matrix between indexed bases; entries (row, col) -> Fraction."""

    domain_dim: int
    codomain_dim: int
    entries: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)
    domain: object = None
    codomain: object = None

    def column(self, j: int) -> Vector:
        return {i: c for (i, jj), c in self.entries.items() if jj == j}

    def columns(self) -> List[Vector]:
        cols: List[Vector] = [dict() for _ in range(self.domain_dim)]
        for (i, j), c in self.entries.items():
            cols[j][i] = Fraction(c)
        return cols


def kernel_of_columns(columns: List[Vector], key=None) -> Tuple[int, List[Vector]]:
    """Rank of the column span and a basis of the kernel (combos over indices)."""
    ech = AugmentedEchelon(key=key)
    kernel: List[Vector] = []
    for j, col in enumerate(columns):
        residual, acc = ech.reduce(col)
        if residual:
            ech.insert_reduced(residual, acc, label=j)
        else:
            vec = {l: -v for l, v in acc.items()}
            vec[j] = Fraction(1)
            kernel.append(vec)
    return ech.rank, kernel


def rank_kernel_cokernel(mapping: LinearMap):
    """Exact rank, kernel basis and cokernel representatives.

    The kernel basis is a list of coordinate vectors over the domain.  The
    cokernel is returned as the list of codomain indices whose classes form
    a basis of codomain / im (the non-pivot coordinates of the column span).
    Rank-nullity holds exactly: rank + len(kernel) == domain_dim and
    codomain_dim - rank == len(cokernel).
    """
    columns = mapping.columns()
    rank, kernel = kernel_of_columns(columns)
    ech = SparseEchelon()
    for col in columns:
        ech.insert(col)
    pivot_rows = set(ech.pivots)
    cokernel = [i for i in range(mapping.codomain_dim) if i not in pivot_rows]
    return rank, kernel, cokernel
