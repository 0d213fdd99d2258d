from __future__ import annotations

from wblowup import (FAIL, PASS, Truncation, beilinson_resolution, blocks_for,
                     blowup_generation_witness, exceptional_triangle_check,
                     extended_rees_presentation, hom_vanishing_matrix,
                     proj_generation_witness, resolution_support_check, sod_report,
                     twist_window)
from wblowup.sod import deformed_regularity_check, regularity_gate
from conftest import base_ring, centre


def tr(b0=2, extra=6):
    return Truncation(bound=b0, step=1, max_bound=b0 + extra)


def test_twist_window_and_block_count(qxy):
    assert list(twist_window((1, 1))) == [-1]
    assert list(twist_window((2, 1))) == [-2, -1]
    blowup = extended_rees_presentation(centre(qxy, ("x", 2), ("y", 1)))
    blocks = blocks_for(blowup)
    assert [b.label for b in blocks] == ["exceptional(-2)", "exceptional(-1)", "pullback"]


def test_hom_vanishing_matrix_small(qxy):
    blowup = extended_rees_presentation(centre(qxy, ("x", 1), ("y", 1)))
    matrix = hom_vanishing_matrix(blowup, tr())
    assert matrix.verdict == PASS
    # the diagonal exceptional block has endomorphisms only in index 0
    diag = matrix.cells[(0, 0)]
    assert diag.dims[0].stable and diag.dims[0].value == 1
    assert all(c.value == 0 for i, c in diag.dims.items() if i != 0 and c.stable)
    # forbidden cell Hom(pullback, exceptional) vanishes everywhere
    forbidden = matrix.cells[(1, 0)]
    assert forbidden.forbidden
    assert all(c.stable and c.value == 0 for c in forbidden.dims.values())


def test_exceptional_triangles(qxy):
    blowup = extended_rees_presentation(centre(qxy, ("x", 2), ("y", 1)))
    for r in twist_window((2, 1)):
        check = exceptional_triangle_check(blowup, r, tr(max(2, 1 - r)))
        assert check.verdict == PASS, r


def test_beilinson_resolution_twists():
    cx, ring, charts = beilinson_resolution((1, 2, 3))
    assert cx.support == [0, 1, 2, 3]
    assert cx.twists(0) == (0,)
    assert sorted(cx.twists(1)) == [-3, -2, -1]
    assert cx.twists(3) == (-6,)
    assert len(charts) == 3


def test_support_check_passes_on_coordinates():
    for weights in [(1, 1), (1, 2), (1, 2, 3)]:
        check = resolution_support_check(weights, range(0, sum(weights) + 1), tr())
        assert check.verdict == PASS, weights


def test_support_check_fails_on_repeated_coordinate():
    check = resolution_support_check((1, 1), range(0, 3), tr(),
                                     sequence=[("x0", 1), ("x0", 1)])
    assert check.verdict == FAIL
    assert check.witness is not None
    assert check.witness["not_annihilated_by"] == ["x1"]


def test_generation_witness_on_proj():
    witness = proj_generation_witness((1, 2), 1, tr(3))
    assert witness.verdict == PASS
    assert len(witness.steps) == 1
    far = proj_generation_witness((1, 1), 3, tr(4))
    assert far.verdict == PASS
    assert len(far.steps) >= 2


def test_generation_witness_on_blowup(qxy):
    blowup = extended_rees_presentation(centre(qxy, ("x", 2), ("y", 1)))
    witness = blowup_generation_witness(blowup, -2, tr(3))
    assert witness.verdict == PASS
    assert len(witness.steps) == 2


def test_generation_witness_dispatch(qxy):
    from wblowup import generation_witness
    blowup = extended_rees_presentation(centre(qxy, ("x", 1), ("y", 1)))
    assert generation_witness(blowup, -1, tr(3)).verdict == PASS
    assert generation_witness((1, 2), 1, tr(3)).verdict == PASS


def test_regularity_gate_raw_vs_deformed(qx):
    good = centre(qx, ("x", 2))
    assert regularity_gate(good, tr()).verdict == PASS
    assert deformed_regularity_check(good, tr()).verdict == PASS
    bad = centre(qx, ("x", 1), ("x", 1))
    report = regularity_gate(bad, tr())
    assert report.verdict == FAIL and report.witness is not None


def test_sod_report_two_summands(qxy, trunc):
    report = sod_report(centre(qxy, ("x", 1), ("y", 1)), trunc)
    assert report.verdict == PASS
    assert report.summand_count == 2
    doc = report.to_dict()
    assert doc["verdict"] == PASS
    assert len(doc["triangles"]) == 1 and len(doc["witnesses"]) == 1


def test_sod_report_fails_on_non_regular_centre(qx, trunc):
    report = sod_report(centre(qx, ("x", 1), ("x", 1)), trunc)
    assert report.verdict == FAIL
    assert report.regularity.verdict == FAIL
