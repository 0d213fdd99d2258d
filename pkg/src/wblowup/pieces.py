"""Truncated graded-piece bases of presented rings.

The degree-d piece of a presented ring R = k[vars]/(relations) is
approximated inside the window of monomials whose exponents are bounded by
B per variable (in [-B, B] for invertible variables, [0, B] otherwise).
The relation span is the set of products g*m over relations g and window
monomials m of complementary degree; note those products may leave the
window, which is fine - they just contribute extra columns.

The quotient basis is chosen greedily from the window monomials in
graded-lexicographic order, so bases are deterministic and reduction of any
window monomial of the right degree expresses it in the basis.

Before any truncation, presentations are simplified exactly: a relation of
the form v - M (variable = monomial) is the graph of a substitution and is
eliminated, shrinking blowup presentations with monomial centres down to
free rings.  This keeps window sizes small without changing any stabilized
value; consumers must project raw monomials through the piece before
comparing coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple

from .linalg import AugmentedEchelon, SparseEchelon, Vector
from .rings import GradedRing, Monomial, Polynomial, _monomial_sort_key
from .stab import StabilizedDims, Truncation, stabilize


def exponent_range(ring: GradedRing, i: int, bound: int) -> Tuple[int, int]:
    v = ring.variables[i]
    return (-bound if v.invertible else 0, bound)


def truncated_monomials(ring: GradedRing, degree: int, bound: int,
                        pinned=frozenset()) -> List[Monomial]:
    """All window monomials of the given weighted degree, sorted graded-lex.

    Variables in pinned are held at exponent 0 (used for eliminated ones).
    """
    weights = ring.weights
    n = ring.arity
    ranges = [(0, 0) if i in pinned else exponent_range(ring, i, bound)
              for i in range(n)]
    # suffix bounds on the achievable remaining degree, for pruning
    min_suffix = [0] * (n + 1)
    max_suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        lo, hi = ranges[i]
        w = weights[i]
        contrib = sorted((w * lo, w * hi))
        min_suffix[i] = min_suffix[i + 1] + contrib[0]
        max_suffix[i] = max_suffix[i + 1] + contrib[1]

    out: List[Monomial] = []
    exps = [0] * n

    def rec(i: int, remaining: int):
        if i == n:
            if remaining == 0:
                out.append(tuple(exps))
            return
        if not (min_suffix[i] <= remaining <= max_suffix[i]):
            return
        lo, hi = ranges[i]
        w = weights[i]
        for e in range(lo, hi + 1):
            exps[i] = e
            rec(i + 1, remaining - w * e)
        exps[i] = 0

    rec(0, degree)
    out.sort(key=_monomial_sort_key)
    return out


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


class Elimination:
    """Exact simplification of a presentation by substituting variables out.

    A relation c1*v + c2*M with v a non-invertible variable absent from M is
    the graph of v = (-c2/c1) M, so substituting it away is a ring
    isomorphism, not an approximation.  A one-term relation c*v pins v to
    zero.  Substitutions are applied to the remaining relations and chained
    to a fixpoint; whatever relations survive are kept as the residual
    presentation.  trivial means the ring collapsed (a nonzero constant, or
    an invertible variable, was forced to vanish).
    """

    def __init__(self, ring: GradedRing):
        self.ring = ring
        self.trivial = False
        # var index -> None (v = 0) or (coeff, monomial over surviving vars)
        self.subst: Dict[int, Tuple[Fraction, Monomial]] = {}
        rels = [dict(r.terms) for r in ring.relations]
        progress = True
        while progress and not self.trivial:
            progress = False
            for i, terms in enumerate(rels):
                if terms is None:
                    continue
                terms = self._substituted(terms)
                rels[i] = terms
                v = self._eliminable(terms)
                if v is None:
                    continue
                rels[i] = None
                progress = True
                if self.trivial:
                    break
                if len(terms) == 1:
                    self.subst[v] = None
                else:
                    (m1, c1), (m2, c2) = sorted(terms.items(), key=lambda t: -t[0][v])
                    self.subst[v] = (-c2 / c1, m2)
                break
        self.residual: Tuple[Polynomial, ...] = tuple(
            Polynomial(ring, t) for t in rels if t
        )
        self.pinned = frozenset(self.subst)

    def _eliminable(self, terms):
        if not terms:
            return None
        if len(terms) == 1:
            (m, c), = terms.items()
            live = [j for j, e in enumerate(m) if e]
            if not live:
                self.trivial = True
                return -1
            if len(live) == 1 and m[live[0]] == 1:
                v = live[0]
                if self.ring.variables[v].invertible:
                    self.trivial = True
                return v
            return None
        if len(terms) == 2:
            (m1, _), (m2, _) = terms.items()
            for a, b in ((m1, m2), (m2, m1)):
                live = [j for j, e in enumerate(a) if e]
                if len(live) != 1:
                    continue
                v = live[0]
                if a[v] == 1 and b[v] == 0 and not self.ring.variables[v].invertible:
                    return v
            return None
        return None

    def _substituted(self, terms):
        out: Dict[Monomial, Fraction] = {}
        for m, c in terms.items():
            pr = self.project(m)
            if pr is None:
                continue
            m2, q = pr
            nv = out.get(m2, Fraction(0)) + c * q
            if nv:
                out[m2] = nv
            else:
                out.pop(m2, None)
        return out

    def project(self, mono: Monomial):
        """Image of a monomial under the substitutions: (monomial, scalar).

        None means the monomial vanishes (a pinned-to-zero variable, or a
        trivial ring).  Exponents of eliminated variables are nonnegative
        since those variables are never invertible.
        """
        if self.trivial:
            return None
        coeff = Fraction(1)
        exps = list(mono)
        while True:
            hit = None
            for v in self.subst:
                if exps[v]:
                    hit = v
                    break
            if hit is None:
                return (tuple(exps), coeff)
            rule = self.subst[hit]
            if rule is None:
                return None
            q, m = rule
            e = exps[hit]
            coeff *= q ** e
            exps[hit] = 0
            for j, x in enumerate(m):
                exps[j] += e * x


_elim_cache: Dict[tuple, Elimination] = {}


def eliminated(ring: GradedRing) -> Elimination:
    key = ring.key()
    elim = _elim_cache.get(key)
    if elim is None:
        elim = Elimination(ring)
        _elim_cache[key] = elim
    return elim


class GradedPieceBasis:
    """Basis of the truncated degree-d piece of a presented ring.

    basis      -- window monomials whose classes are linearly independent
    reduction  -- reduce_monomial / reduce_vector express any window
                  monomial of this degree uniquely in the basis
    """

    def __init__(self, ring: GradedRing, degree: int, bound: int):
        self.ring = ring
        self.degree = degree
        self.bound = bound
        self._elim = eliminated(ring)
        self._relation_span = SparseEchelon(key=_monomial_sort_key)
        self.basis: List[Monomial] = []
        self._expr = AugmentedEchelon(key=_monomial_sort_key)
        if self._elim.trivial:
            return
        pinned = self._elim.pinned
        window = truncated_monomials(ring, degree, bound, pinned)
        for rel in self._elim.residual:
            e = rel.degree()
            if e is None:
                continue
            for m in truncated_monomials(ring, degree - e, bound, pinned):
                self._relation_span.insert(
                    {_mono_mul(m, t): c for t, c in rel.terms.items()}
                )
        for m in window:
            residual = self._relation_span.reduce({m: Fraction(1)})
            if not residual:
                continue
            res2, acc = self._expr.reduce(residual)
            if res2:
                self._expr.insert_reduced(res2, acc, label=len(self.basis))
                self.basis.append(m)

    def project(self, mono: Monomial):
        """Exact image of a monomial in the eliminated presentation.

        Returns (monomial, scalar), or None when the monomial is zero in
        the ring.  Raw differential columns must pass through this before
        any rank computation so that all coordinates agree with basis."""
        return self._elim.project(mono)

    def project_vector(self, vec: Vector) -> Vector:
        out: Vector = {}
        for m, c in vec.items():
            pr = self._elim.project(m)
            if pr is None:
                continue
            m2, q = pr
            nv = out.get(m2, Fraction(0)) + c * q
            if nv:
                out[m2] = nv
            else:
                out.pop(m2, None)
        return out

    @property
    def dim(self) -> int:
        return len(self.basis)

    def relation_rows(self) -> List[Vector]:
        """Echelon rows spanning (the window slice of) the relation span."""
        return self._relation_span.rows()

    def reduce_vector(self, vec: Vector) -> Dict[int, Fraction]:
        """Express a window-supported vector in the basis (index -> coeff)."""
        residual = self._relation_span.reduce(self.project_vector(vec))
        res2, acc = self._expr.reduce(residual)
        if res2:
            raise ValueError(
                f"vector not representable in truncated piece "
                f"(degree {self.degree}, bound {self.bound})"
            )
        return dict(acc)

    def reduce_monomial(self, mono: Monomial) -> Dict[int, Fraction]:
        return self.reduce_vector({mono: Fraction(1)})

    def reduce_polynomial(self, poly: Polynomial) -> Dict[int, Fraction]:
        return self.reduce_vector(dict(poly.terms))


_piece_cache: Dict[tuple, GradedPieceBasis] = {}


def graded_piece(ring: GradedRing, degree: int, trunc) -> GradedPieceBasis:
    """Truncated degree piece; trunc may be a Truncation or a plain bound."""
    bound = trunc.bound if isinstance(trunc, Truncation) else int(trunc)
    if bound < 1:
        raise ValueError("truncation bound must be >= 1")
    key = (ring.key(), degree, bound)
    piece = _piece_cache.get(key)
    if piece is None:
        piece = GradedPieceBasis(ring, degree, bound)
        _piece_cache[key] = piece
    return piece


def clear_piece_cache() -> None:
    _piece_cache.clear()
    _elim_cache.clear()


def stabilized_piece_dims(ring: GradedRing, degree: int, trunc: Truncation) -> StabilizedDims:
    return stabilize(lambda b: graded_piece(ring, degree, b).dim, trunc)


# ---------------------------------------------------------------------------
# ideal comparison up to a degree bound
# ---------------------------------------------------------------------------


@dataclass
class IdealComparison:
    """Per-degree span comparison of two generating sets."""

    per_degree: Dict[int, StabilizedDims]  # values: (rank_a, rank_b, rank_joint)
    max_degree: int

    def equal_at(self, degree: int):
        cell = self.per_degree[degree]
        if not cell.stable:
            return None
        ra, rb, rj = cell.value
        return ra == rb == rj

    @property
    def first_unequal_degree(self):
        for d in sorted(self.per_degree):
            if self.equal_at(d) is False:
                return d
        return None

    @property
    def verdict(self) -> str:
        states = [self.equal_at(d) for d in self.per_degree]
        if any(s is False for s in states):
            return "FAIL"
        if any(s is None for s in states):
            return "INCONCLUSIVE"
        return "PASS"

    @property
    def equal(self) -> bool:
        return self.verdict == "PASS"


def _total_degree_ring(ring: GradedRing) -> GradedRing:
    """Re-grade every variable with weight 1 (auxiliary total-degree grading)."""
    from .rings import Variable

    new_vars = tuple(Variable(v.name, 1, v.invertible) for v in ring.variables)
    free = GradedRing(new_vars)
    rels = [Polynomial(free, dict(r.terms)) for r in ring.relations]
    return GradedRing(new_vars, rels)


def _span_rank(gens: Sequence[Polynomial], ring: GradedRing, degree: int, bound: int,
               ech: SparseEchelon) -> None:
    for g in gens:
        e = g.degree()
        if e is None:
            continue
        for m in truncated_monomials(ring, degree - e, bound):
            ech.insert({_mono_mul(m, t): c for t, c in g.terms.items()})
    for rel in ring.relations:
        e = rel.degree()
        if e is None:
            continue
        for m in truncated_monomials(ring, degree - e, bound):
            ech.insert({_mono_mul(m, t): c for t, c in rel.terms.items()})


def ideal_equal_up_to_degree(gens_a: Sequence[Polynomial], gens_b: Sequence[Polynomial],
                             ring: GradedRing, max_degree: int, trunc: Truncation,
                             total_degree: bool = False) -> IdealComparison:
    """Compare the homogeneous spans of two generating sets degree by degree.

    With total_degree=True the ring is re-graded so every variable has
    weight 1, which makes sense of ideals in a weight-0 base ring.  Each
    generator must be homogeneous in the grading used.
    """
    if total_degree:
        ring = _total_degree_ring(ring)
        gens_a = [Polynomial(ring, dict(g.terms)) for g in gens_a]
        gens_b = [Polynomial(ring, dict(g.terms)) for g in gens_b]
    for g in list(gens_a) + list(gens_b):
        if not g.is_homogeneous():
            raise ValueError(f"generator {g} is not homogeneous in the chosen grading")

    per_degree: Dict[int, StabilizedDims] = {}
    for d in range(0, max_degree + 1):
        def ranks(bound: int, d=d):
            ech_a = SparseEchelon(key=_monomial_sort_key)
            _span_rank(gens_a, ring, d, bound, ech_a)
            ech_b = SparseEchelon(key=_monomial_sort_key)
            _span_rank(gens_b, ring, d, bound, ech_b)
            ech_j = SparseEchelon(key=_monomial_sort_key)
            _span_rank(gens_a, ring, d, bound, ech_j)
            _span_rank(gens_b, ring, d, bound, ech_j)
            return (ech_a.rank, ech_b.rank, ech_j.rank)

        per_degree[d] = stabilize(ranks, trunc)
    return IdealComparison(per_degree=per_degree, max_degree=max_degree)
