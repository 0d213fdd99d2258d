from __future__ import annotations

import itertools

from wblowup import GradedRing, Truncation, Variable, graded_piece, ideal_equal_up_to_degree
from wblowup.pieces import eliminated, truncated_monomials
from wblowup.stab import PASS, FAIL


def brute_force_window(ring, degree, bound):
    """Independent window enumeration: product over per-variable ranges."""
    ranges = []
    for v in ring.variables:
        lo = -bound if v.invertible else 0
        ranges.append(range(lo, bound + 1))
    return sorted(m for m in itertools.product(*ranges)
                  if sum(e * w for e, w in zip(m, ring.weights)) == degree)


def test_truncated_monomials_match_brute_force():
    ring = GradedRing((Variable("x", 1), Variable("y", 2), Variable("s", -1)))
    for degree in range(-3, 5):
        for bound in (1, 2, 3):
            got = sorted(truncated_monomials(ring, degree, bound))
            assert got == brute_force_window(ring, degree, bound), (degree, bound)


def test_truncated_monomials_with_inverted_variable():
    ring = GradedRing((Variable("x", 1),)).invert(["x"])
    assert sorted(truncated_monomials(ring, 0, 2)) == [(0,)]
    assert sorted(truncated_monomials(ring, -2, 3)) == [(-2,)]


def test_free_ring_piece_dims():
    ring = GradedRing((Variable("x", 1), Variable("y", 2)))
    # degree 4 monomials: x^4, x^2 y, y^2
    assert graded_piece(ring, 4, 5).dim == 3
    assert graded_piece(ring, -1, 5).dim == 0


def test_quotient_piece_dims_hand_checked():
    # Q[x]/(x^2) in the total-degree grading: dims 1, 1, 0, 0, ...
    free = GradedRing((Variable("x", 1),))
    ring = free.quotient([free.parse("x^2")])
    dims = [graded_piece(ring, d, 6).dim for d in range(4)]
    assert dims == [1, 1, 0, 0]


def test_binomial_elimination_is_exact():
    # Q[x, u, s]/(x - u s^2): elimination pins x, leaving a free ring on u, s.
    free = GradedRing((Variable("x", 0), Variable("u", 2), Variable("s", -1)))
    ring = free.quotient([free.parse("x - u*s^2")])
    elim = eliminated(ring)
    assert not elim.residual
    # projection rewrites x^k exactly to (u s^2)^k
    mono, coeff = elim.project((3, 0, 0))
    assert coeff == 1 and mono == (0, 3, 6)
    # piece dims therefore match the free ring on (u, s)
    reduced = GradedRing((Variable("u", 2), Variable("s", -1)))
    for degree in (-2, -1, 0, 1, 2):
        for bound in (2, 3, 4):
            assert graded_piece(ring, degree, bound).dim == \
                graded_piece(reduced, degree, bound).dim, (degree, bound)


def test_elimination_skips_relations_it_cannot_solve():
    free = GradedRing((Variable("x", 1), Variable("y", 1)))
    ring = free.quotient([free.parse("x^2 - y^2")])
    elim = eliminated(ring)
    assert len(elim.residual) == 1
    # the piece basis still quotients correctly: degree 2 has x^2 ~ y^2
    assert graded_piece(ring, 2, 4).dim == 2


def test_one_term_relation_pins_variable_to_zero():
    free = GradedRing((Variable("x", 1), Variable("y", 1)))
    ring = free.quotient([free.parse("x")])
    assert graded_piece(ring, 3, 5).dim == 1  # y^3 only


def test_reduce_polynomial_respects_relations():
    free = GradedRing((Variable("x", 0), Variable("u", 1), Variable("s", -1)))
    ring = free.quotient([free.parse("x - u*s")])
    piece = graded_piece(ring, 0, 3)
    a = piece.reduce_polynomial(ring.parse("x^2"))
    b = piece.reduce_polynomial(ring.parse("u^2*s^2"))
    assert a == b and a


def test_ideal_comparison_equal_and_unequal():
    ring = GradedRing((Variable("x", 0), Variable("y", 0)))
    tr = Truncation(bound=4, step=1, max_bound=10)
    x, y = ring.var("x"), ring.var("y")
    same = ideal_equal_up_to_degree([x, y], [x + y, y], ring,
                                    max_degree=2, trunc=tr, total_degree=True)
    assert same.verdict == PASS
    diff = ideal_equal_up_to_degree([x, y], [x], ring,
                                    max_degree=2, trunc=tr, total_degree=True)
    assert diff.verdict == FAIL
    assert diff.first_unequal_degree == 1
