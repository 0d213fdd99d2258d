from __future__ import annotations

import pytest

from wblowup import (FAIL, PASS, Truncation, WeightedCentre, exceptional_divisor,
                     extended_rees_presentation, minimal_exponents, rees_generators,
                     verify_presentation_against_rees)
from wblowup.rees import deformed_sequence
from conftest import base_ring, centre


def test_minimal_exponents():
    assert minimal_exponents((1, 1), 2) == [(0, 2), (1, 1), (2, 0)]
    assert minimal_exponents((2, 1), 2) == [(0, 2), (1, 0)]
    # degree 3 with weights (2, 1): u^a x^b with 2a + b >= 3, minimal
    assert minimal_exponents((2, 1), 3) == [(0, 3), (1, 1), (2, 0)]


def test_rees_generators_prune_redundant_products(qxy):
    c = centre(qxy, ("x", 2), ("y", 1))
    gens = rees_generators(c, 2)
    # degree 2: y^2 and x; x y^2 is NOT needed (x*y^2 in (x) already),
    # but x itself and y^2 are independent
    texts = sorted(str(g) for g in gens.generators)
    assert gens.verdict == PASS
    assert texts == ["x", "y^2"]


def test_rees_degree_one(qxy):
    c = centre(qxy, ("x", 1), ("y", 1))
    gens = rees_generators(c, 1)
    assert sorted(str(g) for g in gens.generators) == ["x", "y"]


def test_extended_rees_presentation_shape(qxy):
    c = centre(qxy, ("x", 2), ("y", 1))
    pres = extended_rees_presentation(c)
    assert pres.ring.weights[-1] == -1  # s
    assert len(pres.irrelevant) == 2
    # one deformed relation per centre entry
    assert len(deformed_sequence(pres)) == 2
    for rel, d in deformed_sequence(pres):
        assert d == 0 and rel.degree() == 0


def test_presentation_with_extra_generator_passes(qxy):
    # U = x t, V = y t, W = x t^2: the second-case presentation
    c = centre(qxy, ("x", 2), ("y", 1))
    x, y = qxy.var("x"), qxy.var("y")
    check = verify_presentation_against_rees(
        c, [("U", x, 1), ("V", y, 1), ("W", x, 2)], max_degree=6
    )
    assert check.verdict == PASS


def test_presentation_without_extra_generator_fails_at_two(qxy):
    # U, V alone generate x^2, xy, y^2 in degree 2, missing x itself
    c = centre(qxy, ("x", 2), ("y", 1))
    x, y = qxy.var("x"), qxy.var("y")
    check = verify_presentation_against_rees(
        c, [("U", x, 1), ("V", y, 1)], max_degree=6
    )
    assert check.verdict == FAIL
    assert check.first_unequal_degree() == 2


def test_exceptional_divisor_matches_quotient(qxy, trunc):
    c = centre(qxy, ("x", 1), ("y", 1))
    div = exceptional_divisor(c, degree_window=range(0, 3), trunc=trunc)
    assert div.verdict == PASS
    # coordinates inherit the centre weights
    assert div.ring.weights[-2:] == (1, 1)


def test_centre_validation(qxy):
    with pytest.raises(ValueError):
        WeightedCentre(qxy, [])
    with pytest.raises(ValueError):
        centre(qxy, ("x", 0))
    with pytest.raises(ValueError):
        centre(qxy, ("x - x", 1))


def test_centre_sorted_by_weight(qxy):
    c = centre(qxy, ("x", 3), ("y", 1))
    assert c.weights == (1, 3)
