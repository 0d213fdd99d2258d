from __future__ import annotations

import pytest

from wblowup import (PASS, CechCover, GradedRing, Truncation, Variable,
                     blowup_cohomology_cech, cech_cohomology,
                     extended_rees_presentation, h0_structure_check,
                     pushforward_structure_check, spectral_cech_agreement,
                     weighted_proj_cohomology_cech, weighted_proj_cohomology_formula)
from conftest import base_ring, centre

RATIONALS = GradedRing(())


def tr(b0=2, extra=6):
    return Truncation(bound=b0, step=1, max_bound=b0 + extra)


def test_punctured_line_every_twist_is_one_dimensional():
    ring = GradedRing((Variable("x", 1),))
    cover = CechCover(ring, ("x",))
    table = cech_cohomology(cover, range(-3, 4), tr(4))
    for r in range(-3, 4):
        assert table.stable(0, r) and table.dim(0, r) == 1, r


def test_punctured_plane_h1():
    ring = GradedRing((Variable("x", 1), Variable("y", 1)))
    cover = CechCover(ring, ("x", "y"))
    table = cech_cohomology(cover, [-2, -1, 0], tr(3))
    # H^1 = x^-a y^-b with a, b >= 1: dim 1 at degree -2, 0 at -1 and 0
    assert table.dim(1, -2) == 1
    assert table.dim(1, -1) == 0
    assert table.dim(1, 0) == 0
    assert table.dim(0, 0) == 1


def test_formula_counts():
    assert weighted_proj_cohomology_formula((1, 1), 2) == {0: 3, 1: 0}
    assert weighted_proj_cohomology_formula((1, 1), -2) == {0: 0, 1: 1}
    assert weighted_proj_cohomology_formula((2, 3), -5) == {0: 0, 1: 1}
    assert weighted_proj_cohomology_formula((1, 2, 3), -6) == {0: 0, 1: 0, 2: 1}
    # single weight: both contributions land in index 0
    assert weighted_proj_cohomology_formula((2,), -2) == {0: 1}


def test_formula_agrees_with_cech_on_small_sweep():
    for weights in [(1, 1), (1, 2), (2, 3)]:
        for r in range(-5, 4):
            b0 = max(2, 1 + abs(r))
            row = weighted_proj_cohomology_cech(RATIONALS, weights, r,
                                                Truncation(b0, 1, b0 + 4))
            want = weighted_proj_cohomology_formula(weights, r)
            for i, cell in row.items():
                assert cell.stable, (weights, r, i)
                assert cell.value == want.get(i, 0), (weights, r, i)


def test_proj_over_quotient_base():
    # P(1) over Q[x]/(x): the punctured line over a point
    base = base_ring("x")
    quotient = base.quotient([base.var("x")])
    row = weighted_proj_cohomology_cech(quotient, (1,), 0, tr())
    assert row[0].stable and row[0].value == 1


def test_blowup_cech_h1(qxy):
    c = centre(qxy, ("x", 1), ("y", 1))
    blowup = extended_rees_presentation(c)
    row = blowup_cohomology_cech(blowup, -2, Truncation(3, 1, 9))
    assert row[1].stable and row[1].value == 1


def test_spectral_cech_agreement_across_twists(qxy):
    c = centre(qxy, ("x", 2), ("y", 1))
    blowup = extended_rees_presentation(c)
    for r in range(-4, 2):
        b0 = max(2, 1 + abs(r))
        agreement = spectral_cech_agreement(blowup, r, Truncation(b0, 1, b0 + 4))
        assert agreement.verdict == PASS, r


def test_pushforward_structure(qxy, trunc):
    for entries in [[("x", 1), ("y", 1)], [("x", 2), ("y", 1)], [("x", 2)]]:
        check = pushforward_structure_check(centre(qxy, *entries), trunc)
        assert check.verdict == PASS, entries


def test_h0_structure_negative_twists(qxy):
    c = centre(qxy, ("x", 2), ("y", 1))
    blowup = extended_rees_presentation(c)
    for r in (-2, -1):
        b0 = max(2, 1 - r)
        check = h0_structure_check(blowup, r, Truncation(b0, 1, b0 + 6))
        assert check.verdict == PASS, r


def test_h0_structure_rejects_positive_twist(qxy, trunc):
    c = centre(qxy, ("x", 1), ("y", 1))
    blowup = extended_rees_presentation(c)
    with pytest.raises(ValueError):
        h0_structure_check(blowup, 1, trunc)
