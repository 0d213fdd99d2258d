"""Finite graded complexes of twisted free modules.

Complexes are homologically indexed: d_k maps C_k to C_{k-1}.  Each module
is a direct sum of twists O(t); the degree-r graded piece of O(t) is the
ring piece in degree r + t.  A differential entry from a generator of twist
a to a generator of twist b must be homogeneous of weighted degree b - a,
and consecutive differentials must compose to zero symbolically.

Sign conventions (fixed once, Koszul rule):
  * Koszul differential: contraction, d(e_{i1<...<ip}) =
      sum_k (-1)^(k-1) f_{ik} e_{S minus ik}.
  * Hom complex: Hom(C, D)_n = sum_k Hom(C_k, D_{k+n}) with
      (d phi) = d_D . phi - (-1)^n phi . d_C.
  * Cone of f: C -> D: cone_k = C_{k-1} (+) D_k with differential
      (c, e) |-> (-d_C c, f(c) + d_D e).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import Vector
from .pieces import graded_piece
from .rings import GradedRing, Polynomial
from .stab import FAIL, INCONCLUSIVE, PASS, StabilizedDims, Truncation, split_table, stabilize
from .truncated import Cell, cohomology_dims, witness_cycle

Matrix = Dict[Tuple[int, int], Polynomial]


@dataclass(frozen=True)
class TwistedFreeModule:
    ring: GradedRing
    twists: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.twists)


class GradedComplex:
    """modules: homological index -> TwistedFreeModule; diffs[k]: C_k -> C_{k-1}."""

    def __init__(self, ring: GradedRing, modules: Dict[int, TwistedFreeModule],
                 diffs: Dict[int, Matrix], check: bool = True):
        self.ring = ring
        self.modules = dict(modules)
        self.diffs = {k: dict(m) for k, m in diffs.items()}
        if check:
            self.validate()

    def twists(self, k: int) -> Tuple[int, ...]:
        mod = self.modules.get(k)
        return mod.twists if mod else ()

    @property
    def support(self) -> List[int]:
        return sorted(self.modules)

    def validate(self) -> None:
        for k, mat in self.diffs.items():
            src = self.twists(k)
            tgt = self.twists(k - 1)
            for (i, j), entry in mat.items():
                if not (0 <= i < len(tgt) and 0 <= j < len(src)):
                    raise ValueError(f"entry ({i},{j}) outside shape at index {k}")
                if entry.is_zero():
                    continue
                expected = tgt[i] - src[j]
                if entry.degree() != expected:
                    raise ValueError(
                        f"entry d_{k}[{i},{j}] = {entry} has degree {entry.degree()}, "
                        f"expected {expected} (twists {src[j]} -> {tgt[i]})"
                    )
        for k in list(self.diffs):
            if (k - 1) in self.diffs:
                self._check_composite_zero(k)

    def _check_composite_zero(self, k: int) -> None:
        lower = self.diffs[k - 1]
        upper = self.diffs[k]
        comp: Dict[Tuple[int, int], Polynomial] = {}
        for (l, j), g in upper.items():
            for (i, l2), h in lower.items():
                if l2 != l:
                    continue
                key = (i, j)
                prod = h * g
                comp[key] = comp[key] + prod if key in comp else prod
        for key, entry in comp.items():
            if not entry.is_zero():
                raise ValueError(f"d_{k-1} . d_{k} != 0 at {key}: {entry}")

    def entry(self, k: int, i: int, j: int) -> Optional[Polynomial]:
        return self.diffs.get(k, {}).get((i, j))

    def twisted(self, shift: int) -> "GradedComplex":
        """Tensor with O(shift)."""
        modules = {
            k: TwistedFreeModule(self.ring, tuple(t + shift for t in mod.twists))
            for k, mod in self.modules.items()
        }
        return GradedComplex(self.ring, modules, self.diffs, check=False)


def single_module_complex(ring: GradedRing, twist: int = 0, index: int = 0) -> GradedComplex:
    return GradedComplex(ring, {index: TwistedFreeModule(ring, (twist,))}, {})


def two_term_complex(ring: GradedRing, top_twist: int, bottom_twist: int,
                     entry: Polynomial) -> GradedComplex:
    """[O(top) -> O(bottom)] with the top term in homological index 1."""
    modules = {
        1: TwistedFreeModule(ring, (top_twist,)),
        0: TwistedFreeModule(ring, (bottom_twist,)),
    }
    return GradedComplex(ring, modules, {1: {(0, 0): entry}})


# ---------------------------------------------------------------------------
# Koszul complexes
# ---------------------------------------------------------------------------


def koszul_complex(ring: GradedRing, sequence: Sequence[Tuple[Polynomial, int]]) -> GradedComplex:
    """Exterior-algebra complex on the sequence, with contraction differential.

    sequence entries are (polynomial, weighted degree); each polynomial must
    be homogeneous of its stated degree.  The generator e_S of K_p carries
    twist -sum of the degrees over S.
    """
    polys = []
    degrees = []
    for f, d in sequence:
        f = Polynomial(ring, dict(f.terms))
        if f.is_zero() or f.degree() != d:
            raise ValueError(f"sequence entry {f} is not homogeneous of degree {d}")
        polys.append(f)
        degrees.append(d)
    n = len(polys)
    subsets: Dict[int, List[Tuple[int, ...]]] = {
        p: list(itertools.combinations(range(n), p)) for p in range(n + 1)
    }
    index_of = {p: {S: i for i, S in enumerate(subsets[p])} for p in subsets}
    modules = {
        p: TwistedFreeModule(ring, tuple(-sum(degrees[i] for i in S) for S in subsets[p]))
        for p in range(n + 1)
    }
    diffs: Dict[int, Matrix] = {}
    for p in range(1, n + 1):
        mat: Matrix = {}
        for j, S in enumerate(subsets[p]):
            for pos, gen in enumerate(S):
                T = tuple(g for g in S if g != gen)
                i = index_of[p - 1][T]
                sign = -1 if pos % 2 else 1
                mat[(i, j)] = sign * polys[gen]
        diffs[p] = mat
    return GradedComplex(ring, modules, diffs)


# ---------------------------------------------------------------------------
# Hom complexes, chain maps, cones
# ---------------------------------------------------------------------------


def hom_complex(source: GradedComplex, target: GradedComplex) -> GradedComplex:
    """Hom(C, D) with Hom_n = sum over k of Hom(C_k, D_{k+n})."""
    if source.ring != target.ring:
        raise ValueError("hom_complex requires complexes over the same ring")
    ring = source.ring
    gens: Dict[int, List[Tuple[int, int, int]]] = {}
    lo = min(target.support) - max(source.support)
    hi = max(target.support) - min(source.support)
    for n in range(lo, hi + 1):
        lst = []
        for k in source.support:
            if (k + n) not in target.modules:
                continue
            for i in range(len(source.twists(k))):
                for j in range(len(target.twists(k + n))):
                    lst.append((k, i, j))
        if lst:
            gens[n] = lst
    index_of = {n: {g: a for a, g in enumerate(lst)} for n, lst in gens.items()}
    modules = {
        n: TwistedFreeModule(
            ring,
            tuple(target.twists(k + n)[j] - source.twists(k)[i] for (k, i, j) in lst),
        )
        for n, lst in gens.items()
    }
    diffs: Dict[int, Matrix] = {}
    for n, lst in gens.items():
        if (n - 1) not in gens:
            continue
        mat: Matrix = {}
        tgt_index = index_of[n - 1]
        for a, (k, i, j) in enumerate(lst):
            # d_D . phi : entry of d_D at index k+n, from gen j to gen j2
            for (j2, jj), g in target.diffs.get(k + n, {}).items():
                if jj != j:
                    continue
                b = tgt_index.get((k, i, j2))
                if b is None:
                    continue
                mat[(b, a)] = mat.get((b, a), ring.zero()) + g
            # -(-1)^n phi . d_C : entry of d_C at index k+1, from gen i2 to gen i
            sign = -1 if n % 2 == 0 else 1
            for (ii, i2), g in source.diffs.get(k + 1, {}).items():
                if ii != i:
                    continue
                b = tgt_index.get((k + 1, i2, j))
                if b is None:
                    continue
                mat[(b, a)] = mat.get((b, a), ring.zero()) + sign * g
        diffs[n] = {key: val for key, val in mat.items() if not val.is_zero()}
    return GradedComplex(ring, modules, diffs)


@dataclass
class ChainMap:
    """Degree-0 chain map; maps[k]: source C_k -> target D_k."""

    source: GradedComplex
    target: GradedComplex
    maps: Dict[int, Matrix] = field(default_factory=dict)

    def validate(self) -> None:
        if self.source.ring != self.target.ring:
            raise ValueError("chain map between complexes over different rings")
        ring = self.source.ring
        for k in set(self.source.diffs) | set(self.target.diffs):
            # d_D . f_k - f_{k-1} . d_C = 0
            comp: Dict[Tuple[int, int], Polynomial] = {}
            for (l, j), g in self.maps.get(k, {}).items():
                for (i, l2), h in self.target.diffs.get(k, {}).items():
                    if l2 != l:
                        continue
                    key = (i, j)
                    comp[key] = comp.get(key, ring.zero()) + h * g
            for (l, j), g in self.source.diffs.get(k, {}).items():
                for (i, l2), h in self.maps.get(k - 1, {}).items():
                    if l2 != l:
                        continue
                    key = (i, j)
                    comp[key] = comp.get(key, ring.zero()) - h * g
            for key, entry in comp.items():
                if not entry.is_zero():
                    raise ValueError(f"not a chain map at index {k}, entry {key}: {entry}")


def cone(chain_map: ChainMap) -> GradedComplex:
    """Mapping cone: cone_k = C_{k-1} (+) D_k, d(c, e) = (-dc, f(c) + de)."""
    chain_map.validate()
    C, D = chain_map.source, chain_map.target
    ring = C.ring
    indices = sorted(set(k + 1 for k in C.modules) | set(D.modules))
    modules: Dict[int, TwistedFreeModule] = {}
    offsets: Dict[int, int] = {}
    for k in indices:
        c_tw = C.twists(k - 1)
        d_tw = D.twists(k)
        offsets[k] = len(c_tw)
        modules[k] = TwistedFreeModule(ring, tuple(c_tw) + tuple(d_tw))
    diffs: Dict[int, Matrix] = {}
    for k in indices:
        mat: Matrix = {}
        for (i, j), g in C.diffs.get(k - 1, {}).items():
            mat[(i, j)] = -g
        for (i, j), g in chain_map.maps.get(k - 1, {}).items():
            mat[(offsets.get(k - 1, 0) + i, j)] = g
        for (i, j), g in D.diffs.get(k, {}).items():
            mat[(offsets.get(k - 1, 0) + i, offsets[k] + j)] = g
        if mat:
            diffs[k] = mat
    return GradedComplex(ring, modules, diffs)


# ---------------------------------------------------------------------------
# truncated homology
# ---------------------------------------------------------------------------


def _complex_levels(cx: GradedComplex, graded_degree: int, bound: int):
    """Cochain levels (level = -homological index) with one cell per generator."""
    levels = {}
    for k, mod in cx.modules.items():
        cells = [
            Cell((k, g), graded_piece(cx.ring, graded_degree + t, bound))
            for g, t in enumerate(mod.twists)
        ]
        levels[-k] = cells
    return levels


def _complex_diff(cx: GradedComplex, levels):
    def diff(level: int, ci: int, bi: int) -> Vector:
        k = -level
        tag = levels[level][ci].tag
        _, gen = tag
        mono = levels[level][ci].piece.basis[bi]
        out: Vector = {}
        for (i, j), g in cx.diffs.get(k, {}).items():
            if j != gen:
                continue
            for t, c in g.terms.items():
                col = ((k - 1, i), tuple(a + b for a, b in zip(mono, t)))
                nv = out.get(col, Fraction(0)) + c
                if nv:
                    out[col] = nv
                else:
                    out.pop(col, None)
        return out

    return diff


def homology_dims_at_bound(cx: GradedComplex, graded_degree: int, bound: int,
                           indices: Sequence[int]) -> Dict[int, int]:
    """dim H_k at one graded degree and one truncation bound (k in indices)."""
    levels = _complex_levels(cx, graded_degree, bound)
    diff = _complex_diff(cx, levels)
    cohom = cohomology_dims(levels, diff, [-k for k in indices])
    return {k: cohom[-k] for k in indices}


@dataclass
class HomologyTable:
    """Stabilized homology dimensions per (homological index, graded degree)."""

    cells: Dict[Tuple[int, int], StabilizedDims]

    def dim(self, k: int, degree: int):
        return self.cells[(k, degree)].value

    def stable(self, k: int, degree: int) -> bool:
        return self.cells[(k, degree)].stable

    def all_stable(self) -> bool:
        return all(c.stable for c in self.cells.values())


def homology(cx: GradedComplex, graded_degrees: Sequence[int], trunc: Truncation,
             indices: Optional[Sequence[int]] = None) -> HomologyTable:
    """Per-degree homology dimensions with stabilization across bounds."""
    if indices is None:
        indices = cx.support
    cells: Dict[Tuple[int, int], StabilizedDims] = {}
    for r in graded_degrees:
        table = stabilize(
            lambda b, r=r: homology_dims_at_bound(cx, r, b, indices), trunc
        )
        for k, cell in split_table(table, indices).items():
            cells[(k, r)] = cell
    return HomologyTable(cells)


# ---------------------------------------------------------------------------
# Koszul regularity
# ---------------------------------------------------------------------------


@dataclass
class RegularityReport:
    verdict: str
    cells: Dict[Tuple[int, int], StabilizedDims]
    witness: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "cells": {f"H_{k} deg {r}": c.to_dict() for (k, r), c in self.cells.items()},
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def koszul_regularity_check(ring: GradedRing, sequence: Sequence[Tuple[Polynomial, int]],
                            degree_window: Sequence[int], trunc: Truncation) -> RegularityReport:
    """PASS if all higher Koszul homology vanishes (stabilized) on the window."""
    cx = koszul_complex(ring, sequence)
    positive = [k for k in cx.support if k > 0]
    table = homology(cx, degree_window, trunc, indices=positive)
    witness = None
    verdict = PASS
    for (k, r), cell in sorted(table.cells.items()):
        if cell.stable and cell.value == 0:
            continue
        if cell.stable and cell.value > 0:
            verdict = FAIL
            bound = cell.history[-1][0]
            levels = _complex_levels(cx, r, bound)
            cyc = witness_cycle(levels, _complex_diff(cx, levels), -k)
            witness = {
                "homological_index": k,
                "graded_degree": r,
                "cycle": [
                    {"generator": tag[1], "monomial": list(mono), "coeff": str(c)}
                    for (tag, mono), c in (cyc or [])
                ],
            }
            break
        if verdict != FAIL:
            verdict = INCONCLUSIVE
    return RegularityReport(verdict=verdict, cells=table.cells, witness=witness)
