"""Cohomology of truncated cochain complexes of graded-piece cells.

A "level" is a list of cells, each cell being a truncated graded piece of
some presented (possibly localized) ring together with a hashable tag.  The
differential maps a single basis element of a cell to a raw vector over
columns (tag, monomial) at the next level.  Raw columns are deliberately
NOT restricted to the window: products of a window monomial with a
differential entry may leave the window, and clipping them would create
phantom homology classes.  Instead every raw vector is first passed through
the cell's exact elimination projection (a ring isomorphism, see pieces),
and the residual relation span rows of each cell are stacked into every
rank computation, so classes are counted modulo relations without any lossy
projection.

Cohomology at level m is computed as

    dim H^m = rank(W_m + boundaries + cycles) - rank(W_m + boundaries)

where cycles are the kernel of the differential out of level m taken modulo
the relation span of level m+1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Tuple

from .linalg import SparseEchelon, Vector, kernel_of_columns
from .pieces import GradedPieceBasis
from .rings import _monomial_sort_key


class Cell:
    """One truncated graded piece inside a level, with a raw-column tag."""

    __slots__ = ("tag", "piece")

    def __init__(self, tag: Hashable, piece: GradedPieceBasis):
        self.tag = tag
        self.piece = piece


Levels = Dict[int, List[Cell]]
# diff(level, cell_index, basis_index) -> raw vector {(tag, monomial): coeff}
Differential = Callable[[int, int, int], Vector]


def _column_key(col):
    tag, mono = col
    return (tag, _monomial_sort_key(mono))


def _relation_echelon(cells: List[Cell]) -> SparseEchelon:
    ech = SparseEchelon(key=_column_key)
    for cell in cells:
        for row in cell.piece.relation_rows():
            ech.insert({(cell.tag, m): c for m, c in row.items()})
    return ech


def _projector(cells: List[Cell]):
    """Project raw (tag, monomial) vectors through each cell's elimination."""
    by_tag = {cell.tag: cell.piece for cell in cells}

    def compress(vec: Vector) -> Vector:
        out: Vector = {}
        for (tag, mono), c in vec.items():
            pr = by_tag[tag].project(mono)
            if pr is None:
                continue
            mono2, q = pr
            col = (tag, mono2)
            nv = out.get(col, Fraction(0)) + c * q
            if nv:
                out[col] = nv
            else:
                out.pop(col, None)
        return out

    return compress


def _domain_coords(cells: List[Cell]) -> List[Tuple[int, int]]:
    return [(ci, bi) for ci, cell in enumerate(cells) for bi in range(cell.piece.dim)]


def cohomology_dims(levels: Levels, diff: Differential, indices) -> Dict[int, int]:
    """Cohomology dimensions of the truncated total complex at the given levels."""
    image_cache: Dict[Tuple[int, int, int], Vector] = {}

    def image(level: int, ci: int, bi: int) -> Vector:
        key = (level, ci, bi)
        if key not in image_cache:
            image_cache[key] = diff(level, ci, bi)
        return image_cache[key]

    dims: Dict[int, int] = {}
    for m in indices:
        cells = levels.get(m, [])
        cells_next = levels.get(m + 1, [])
        cells_prev = levels.get(m - 1, [])
        to_here = _projector(cells)
        to_next = _projector(cells_next)

        # cycles: kernel of the outgoing differential modulo next-level relations
        w_next = _relation_echelon(cells_next)
        coords = _domain_coords(cells)
        reduced_cols = [w_next.reduce(to_next(image(m, ci, bi))) for ci, bi in coords]
        _, kernel = kernel_of_columns(reduced_cols, key=_column_key)
        cycles: List[Vector] = []
        for combo in kernel:
            vec: Vector = {}
            for idx, coeff in combo.items():
                ci, bi = coords[idx]
                col = (cells[ci].tag, cells[ci].piece.basis[bi])
                vec[col] = vec.get(col, Fraction(0)) + coeff
            cycles.append({c: v for c, v in vec.items() if v})

        # boundaries from the previous level, projected
        ech = _relation_echelon(cells)
        for ci, bi in _domain_coords(cells_prev):
            ech.insert(to_here(image(m - 1, ci, bi)))
        base_rank = ech.rank
        for vec in cycles:
            ech.insert(vec)
        dims[m] = ech.rank - base_rank
    return dims


def cycles_at_level(levels: Levels, diff: Differential, m: int) -> Tuple[SparseEchelon, List[Vector]]:
    """Relation echelon W_m and raw cycle vectors at level m.

    A cycle is a combination of basis elements whose outgoing image lies in
    the relation span of level m+1; cohomology classes at m are the cycles
    modulo W_m and the incoming boundaries.
    """
    cells = levels.get(m, [])
    cells_next = levels.get(m + 1, [])
    to_next = _projector(cells_next)
    w_next = _relation_echelon(cells_next)
    coords = _domain_coords(cells)
    reduced_cols = [w_next.reduce(to_next(diff(m, ci, bi))) for ci, bi in coords]
    _, kernel = kernel_of_columns(reduced_cols, key=_column_key)
    cycles: List[Vector] = []
    for combo in kernel:
        vec: Vector = {}
        for idx, coeff in combo.items():
            ci, bi = coords[idx]
            col = (cells[ci].tag, cells[ci].piece.basis[bi])
            vec[col] = vec.get(col, Fraction(0)) + coeff
        cycles.append({c: v for c, v in vec.items() if v})
    return _relation_echelon(cells), cycles


def witness_cycle(levels: Levels, diff: Differential, m: int):
    """A cycle at level m that is not a boundary (None if cohomology vanishes).

    Returned as a list of ((tag, monomial), coeff) pairs.
    """
    cells = levels.get(m, [])
    cells_next = levels.get(m + 1, [])
    cells_prev = levels.get(m - 1, [])
    to_here = _projector(cells)
    to_next = _projector(cells_next)
    w_next = _relation_echelon(cells_next)
    coords = _domain_coords(cells)
    reduced_cols = [w_next.reduce(to_next(diff(m, ci, bi))) for ci, bi in coords]
    _, kernel = kernel_of_columns(reduced_cols, key=_column_key)
    ech = _relation_echelon(cells)
    for ci, bi in _domain_coords(cells_prev):
        ech.insert(to_here(diff(m - 1, ci, bi)))
    for combo in kernel:
        vec: Vector = {}
        for idx, coeff in combo.items():
            ci, bi = coords[idx]
            col = (cells[ci].tag, cells[ci].piece.basis[bi])
            vec[col] = vec.get(col, Fraction(0)) + coeff
        vec = {c: v for c, v in vec.items() if v}
        if ech.reduce(vec):
            return sorted(vec.items(), key=lambda cv: _column_key(cv[0]))
    return None
