from __future__ import annotations

import pytest

from wblowup import (FAIL, PASS, GradedRing, Truncation, Variable, cone, hom_complex,
                     homology, koszul_complex, koszul_regularity_check,
                     single_module_complex, two_term_complex)
from wblowup.complexes import ChainMap


def total_ring(*names):
    return GradedRing(tuple(Variable(n, 1) for n in names))


def test_koszul_shape_and_twists():
    ring = total_ring("x", "y")
    cx = koszul_complex(ring, [(ring.var("x"), 1), (ring.var("y"), 1)])
    assert cx.support == [0, 1, 2]
    assert cx.twists(0) == (0,)
    assert cx.twists(1) == (-1, -1)
    assert cx.twists(2) == (-2,)


def test_koszul_regular_sequence_has_no_higher_homology():
    ring = total_ring("x", "y")
    cx = koszul_complex(ring, [(ring.var("x"), 1), (ring.var("y"), 1)])
    table = homology(cx, range(0, 4), Truncation(bound=3, step=1, max_bound=9))
    for (k, r), cell in table.cells.items():
        assert cell.stable
        if k > 0:
            assert cell.value == 0, (k, r)
    # H_0 = Q[x,y]/(x,y) is Q in degree 0
    assert table.dim(0, 0) == 1
    assert table.dim(0, 1) == 0


def test_koszul_detects_repeated_entry():
    ring = total_ring("x")
    report = koszul_regularity_check(
        ring, [(ring.var("x"), 1), (ring.var("x"), 1)],
        range(0, 3), Truncation(bound=3, step=1, max_bound=9),
    )
    assert report.verdict == FAIL
    assert report.witness is not None
    assert report.witness["homological_index"] == 1
    # the witness cycle is e_1 - e_2 (up to sign)
    coeffs = sorted(entry["coeff"] for entry in report.witness["cycle"])
    assert coeffs == ["-1", "1"]


def test_regularity_passes_on_regular_pair():
    ring = total_ring("x", "y")
    report = koszul_regularity_check(
        ring, [(ring.var("x"), 1), (ring.parse("x + y"), 1)],
        range(0, 4), Truncation(bound=3, step=1, max_bound=9),
    )
    assert report.verdict == PASS


def test_two_term_complex_degree_convention():
    ring = GradedRing((Variable("s", -1),))
    cx = two_term_complex(ring, 1, 0, ring.var("s"))
    assert cx.twists(1) == (1,) and cx.twists(0) == (0,)
    with pytest.raises(ValueError):
        two_term_complex(ring, 0, 1, ring.var("s"))


def test_hom_complex_twists_and_square_zero():
    ring = total_ring("x", "y")
    cx = koszul_complex(ring, [(ring.var("x"), 1), (ring.var("y"), 1)])
    hom = hom_complex(cx, cx)
    # validate() ran in the constructor: degrees match and d^2 = 0
    assert 0 in hom.modules
    assert sorted(hom.support) == [-2, -1, 0, 1, 2]
    # Hom_0 contains id components: one generator per module generator
    assert hom.modules[0].rank == 1 + 4 + 1


def test_cone_of_identity_is_acyclic():
    ring = total_ring("x")
    a = single_module_complex(ring)
    mapping = ChainMap(source=a, target=a, maps={0: {(0, 0): ring.one()}})
    c = cone(mapping)
    table = homology(c, range(0, 3), Truncation(bound=2, step=1, max_bound=6))
    for (k, r), cell in table.cells.items():
        assert cell.stable and cell.value == 0, (k, r)


def test_cone_of_multiplication_is_quotient():
    ring = total_ring("x")
    a = single_module_complex(ring, twist=-1)
    b = single_module_complex(ring)
    mapping = ChainMap(source=a, target=b, maps={0: {(0, 0): ring.var("x")}})
    c = cone(mapping)
    table = homology(c, range(0, 3), Truncation(bound=3, step=1, max_bound=9))
    # H_0 = Q[x]/(x): dim 1 in degree 0, 0 above
    assert table.dim(0, 0) == 1
    assert table.dim(0, 1) == 0
    assert table.dim(1, 0) == 0


def test_chain_map_validation_rejects_non_commuting():
    ring = total_ring("x", "y")
    ax = koszul_complex(ring, [(ring.var("x"), 1)])
    bad = ChainMap(source=ax, target=ax.twisted(0),
                   maps={0: {(0, 0): ring.one()}, 1: {(0, 0): ring.zero() + 2}})
    with pytest.raises(ValueError):
        bad.validate()
