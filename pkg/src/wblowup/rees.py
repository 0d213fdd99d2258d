"""Weighted centres, Rees algebra degree pieces, and blowup presentations.

A weighted centre on an affine base R is a list of pairs (f_i, d_i) with
f_i in R and d_i >= 1.  The associated Rees algebra is the smallest graded
subalgebra of R[t] containing each f_i in degree d_i, so its degree-d piece
is the ideal I_d generated by the products f^a with sum(a_i d_i) >= d.

The extended algebra adjoins all negative powers of t; for a centre whose
deformed sequence is Koszul-regular it is presented by fresh variables
u_0..u_n (weights d_i) and s (weight -1, standing for t^{-1}) subject to
f_i - u_i s^{d_i}.  The exceptional divisor is the vanishing locus of s.

Base variables have weight 0, so ideal comparisons inside R use the
auxiliary total-degree grading (every variable re-graded to weight 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .pieces import IdealComparison, graded_piece, ideal_equal_up_to_degree
from .rings import GradedRing, Polynomial, Variable
from .stab import INCONCLUSIVE, PASS, StabilizedDims, Truncation, combine_verdicts, stabilize


@dataclass(frozen=True)
class WeightedCentre:
    """Entries (f_i, d_i) over an affine base; kept sorted by weight."""

    base: GradedRing
    entries: Tuple[Tuple[Polynomial, int], ...]

    def __init__(self, base: GradedRing, entries: Sequence[Tuple[Polynomial, int]]):
        if not entries:
            raise ValueError("a weighted centre needs at least one entry")
        if any(w != 0 for w in base.weights):
            raise ValueError("base ring variables must have weight 0")
        norm = []
        for f, d in entries:
            f = Polynomial(base, dict(f.terms))
            if f.is_zero():
                raise ValueError("zero polynomial in centre")
            if int(d) < 1:
                raise ValueError(f"centre weight {d} must be >= 1")
            norm.append((f, int(d)))
        norm.sort(key=lambda e: e[1])
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "entries", tuple(norm))

    def __hash__(self):
        return hash((self.base.key(), tuple((f, d) for f, d in self.entries)))

    @property
    def weights(self) -> Tuple[int, ...]:
        return tuple(d for _, d in self.entries)

    @property
    def polynomials(self) -> Tuple[Polynomial, ...]:
        return tuple(f for f, _ in self.entries)

    @property
    def size(self) -> int:
        return len(self.entries)


def minimal_exponents(weights: Sequence[int], degree: int) -> List[Tuple[int, ...]]:
    """Componentwise-minimal tuples a >= 0 with sum(a_i * weights_i) >= degree."""
    n = len(weights)
    # a_i never needs to exceed ceil(degree / weights_i)
    caps = [-(-degree // w) for w in weights]
    found: List[Tuple[int, ...]] = []
    for a in itertools.product(*(range(c + 1) for c in caps)):
        if sum(x * w for x, w in zip(a, weights)) < degree:
            continue
        if any(all(x >= y for x, y in zip(a, b)) and a != b for b in found):
            continue
        found = [b for b in found if not all(y >= x for x, y in zip(a, b)) or a == b]
        found.append(a)
    found.sort()
    return found


@dataclass
class ReesDegreeGenerators:
    degree: int
    generators: List[Polynomial]
    exponents: List[Tuple[int, ...]]
    pruning: Optional[IdealComparison] = None

    @property
    def verdict(self) -> str:
        return self.pruning.verdict if self.pruning else PASS


def _max_total_degree(gens: Sequence[Polynomial]) -> int:
    return max((g.total_degree() or 0) for g in gens)


def rees_generators(centre: WeightedCentre, degree: int,
                    trunc: Optional[Truncation] = None) -> ReesDegreeGenerators:
    """Generators of I_d: products f^a over minimal exponents, then pruned.

    A product is dropped when the remaining generators already span the
    same ideal up to the generators' total degree (checked exactly via
    per-degree span ranks in the total-degree grading).
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    exps = minimal_exponents(centre.weights, degree)
    gens = []
    for a in exps:
        g = centre.base.one()
        for f, x in zip(centre.polynomials, a):
            g = g * f ** x
        gens.append(g)
    if trunc is None:
        trunc = Truncation(bound=max(4, _max_total_degree(gens) + 1), step=1,
                           max_bound=max(12, _max_total_degree(gens) + 4))
    comparison = None
    keep_gens, keep_exps = list(gens), list(exps)
    i = 0
    while i < len(keep_gens):
        others = keep_gens[:i] + keep_gens[i + 1:]
        if not others:
            break
        cmp = ideal_equal_up_to_degree(
            keep_gens, others, centre.base,
            max_degree=_max_total_degree(keep_gens), trunc=trunc, total_degree=True,
        )
        if cmp.verdict == PASS:
            del keep_gens[i]
            del keep_exps[i]
        else:
            if cmp.verdict == INCONCLUSIVE:
                comparison = cmp
            i += 1
    return ReesDegreeGenerators(degree=degree, generators=keep_gens,
                                exponents=keep_exps, pruning=comparison)


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------


def _fresh_names(taken, wanted: List[str]) -> List[str]:
    taken = set(taken)
    out = []
    for name in wanted:
        candidate = name
        k = 0
        while candidate in taken:
            candidate = f"{name}_{k}"
            k += 1
        taken.add(candidate)
        out.append(candidate)
    return out


@dataclass(frozen=True)
class BlowupPresentation:
    """A^ext = R[u_0..u_n, s]/(f_i - u_i s^{d_i}), s of weight -1."""

    centre: WeightedCentre
    ring: GradedRing
    irrelevant: Tuple[str, ...]  # the u_i, cut out to form Pproj
    s_name: str

    @property
    def weights(self) -> Tuple[int, ...]:
        return self.centre.weights

    def s_poly(self) -> Polynomial:
        return self.ring.var(self.s_name)

    def chart_ring(self, name: str) -> GradedRing:
        if name not in self.irrelevant:
            raise ValueError(f"{name!r} is not an irrelevant-locus variable")
        return self.ring.invert([name])


def extended_rees_presentation(centre: WeightedCentre) -> BlowupPresentation:
    base = centre.base
    n = centre.size
    fresh = _fresh_names(base.names, [f"u{i}" for i in range(n)] + ["s"])
    u_names, s_name = fresh[:n], fresh[n]
    variables = tuple(base.variables) + tuple(
        Variable(u_names[i], centre.weights[i]) for i in range(n)
    ) + (Variable(s_name, -1),)
    free = GradedRing(variables)
    pad = (0,) * (n + 1)
    lifted_relations = [
        Polynomial(free, {m + pad: c for m, c in rel.terms.items()})
        for rel in base.relations
    ]
    relations = list(lifted_relations)
    for i, (f, d) in enumerate(centre.entries):
        lifted = Polynomial(free, {m + pad: c for m, c in f.terms.items()})
        relations.append(lifted - free.var(u_names[i]) * free.var(s_name) ** d)
    ring = GradedRing(variables, relations)
    return BlowupPresentation(centre=centre, ring=ring,
                              irrelevant=tuple(u_names), s_name=s_name)


@dataclass
class PresentationCheck:
    per_degree: Dict[int, IdealComparison]

    @property
    def verdict(self) -> str:
        return combine_verdicts(c.verdict for c in self.per_degree.values())

    @property
    def equal(self) -> bool:
        return self.verdict == PASS

    def first_unequal_degree(self) -> Optional[int]:
        for d in sorted(self.per_degree):
            if self.per_degree[d].verdict == "FAIL":
                return d
        return None


def verify_presentation_against_rees(centre: WeightedCentre,
                                     presentation: Sequence[Tuple[str, Polynomial, int]],
                                     max_degree: int,
                                     trunc: Optional[Truncation] = None) -> PresentationCheck:
    """Compare user-supplied Rees generators against the enumeration, degreewise.

    presentation entries are (name, image in R, Rees degree); the image of a
    name of degree e stands for (image)*t^e.  For each d <= max_degree the
    ideal spanned by products of images of total Rees degree exactly d must
    equal the enumerated I_d.
    """
    per_degree: Dict[int, IdealComparison] = {}
    degrees = [e for _, _, e in presentation]
    images = [Polynomial(centre.base, dict(g.terms)) for _, g, _ in presentation]
    for d in range(1, max_degree + 1):
        enumerated = rees_generators(centre, d, trunc).generators
        supplied: List[Polynomial] = []
        caps = [d // e for e in degrees]
        for a in itertools.product(*(range(c + 1) for c in caps)):
            if sum(x * e for x, e in zip(a, degrees)) != d:
                continue
            g = centre.base.one()
            for img, x in zip(images, a):
                g = g * img ** x
            supplied.append(g)
        tops = [g.total_degree() or 0 for g in enumerated + supplied]
        tr = trunc or Truncation(bound=max(4, max(tops) + 1), step=1,
                                 max_bound=max(12, max(tops) + 4))
        per_degree[d] = ideal_equal_up_to_degree(
            enumerated, supplied, centre.base,
            max_degree=max(tops), trunc=tr, total_degree=True,
        )
    return PresentationCheck(per_degree=per_degree)


# ---------------------------------------------------------------------------
# exceptional divisor
# ---------------------------------------------------------------------------


@dataclass
class ExceptionalDivisorPresentation:
    """(R/(f_0..f_n))[x_0..x_n] with x_i of weight d_i; E = V(s) in the blowup."""

    centre: WeightedCentre
    ring: GradedRing
    coordinate_names: Tuple[str, ...]
    agreement: Dict[int, StabilizedDims] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        states = []
        for cell in self.agreement.values():
            if not cell.stable:
                states.append(INCONCLUSIVE)
            else:
                states.append(PASS if cell.value == 0 else "FAIL")
        return combine_verdicts(states) if states else PASS


def exceptional_divisor(centre: WeightedCentre,
                        degree_window: Sequence[int] = range(0, 4),
                        trunc: Optional[Truncation] = None) -> ExceptionalDivisorPresentation:
    """Quotient of the blowup by (s), simplified to a ring over R/(f).

    The simplification is verified degreewise: the graded piece dimensions
    of (R/(f))[x_0..x_n] must agree with those of A^ext/(s) on the window.
    The stabilized quantity is the dimension difference, which settles at 0
    even when both sides grow with the bound (infinite-dimensional pieces).
    """
    pres = extended_rees_presentation(centre)
    base = centre.base
    n = centre.size
    x_names = _fresh_names(base.names, [f"x{i}" for i in range(n)])
    variables = tuple(base.variables) + tuple(
        Variable(x_names[i], centre.weights[i]) for i in range(n)
    )
    free = GradedRing(variables)
    pad = (0,) * n
    relations = [Polynomial(free, {m + pad: c for m, c in rel.terms.items()})
                 for rel in base.relations]
    relations += [Polynomial(free, {m + pad: c for m, c in f.terms.items()})
                  for f in centre.polynomials]
    e_ring = GradedRing(variables, relations)

    quotient = pres.ring.quotient([pres.s_poly()])
    tr = trunc or Truncation(bound=2, step=1, max_bound=8)
    agreement = {
        r: stabilize(
            lambda b, r=r: graded_piece(e_ring, r, b).dim - graded_piece(quotient, r, b).dim,
            tr,
        )
        for r in degree_window
    }
    return ExceptionalDivisorPresentation(centre=centre, ring=e_ring,
                                          coordinate_names=tuple(x_names),
                                          agreement=agreement)


# ---------------------------------------------------------------------------
# deformed sequence
# ---------------------------------------------------------------------------


def deformed_sequence(pres: BlowupPresentation) -> List[Tuple[Polynomial, int]]:
    """The relations f_i - u_i s^{d_i} of A^ext, as a weighted-degree sequence.

    Koszul-regularity of this sequence over the ambient ring R[u, s] is the
    working regularity condition for the centre.
    """
    ring = pres.ring
    ambient = ring.free() if not pres.centre.base.relations else GradedRing(
        ring.variables,
        [r for r in ring.relations[: len(pres.centre.base.relations)]],
    )
    return [(Polynomial(ambient, dict(rel.terms)), 0)
            for rel in ring.relations[len(pres.centre.base.relations):]]


def raw_sequence(centre: WeightedCentre) -> List[Tuple[Polynomial, int]]:
    """The centre's polynomials over R in the total-degree grading."""
    from .pieces import _total_degree_ring

    ring = _total_degree_ring(centre.base)
    out = []
    for f in centre.polynomials:
        g = Polynomial(ring, dict(f.terms))
        out.append((g, g.degree()))
    return out
