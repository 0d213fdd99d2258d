from __future__ import annotations

import pytest

from wblowup import FAIL, INCONCLUSIVE, PASS, Truncation, combine_verdicts, stabilize


def test_stabilize_stops_at_first_agreement():
    calls = []

    def fn(bound):
        calls.append(bound)
        return min(bound, 4)

    out = stabilize(fn, Truncation(bound=2, step=1, max_bound=12))
    assert out.stable and out.value == 4
    assert calls == [2, 3, 4, 5]


def test_exhaustion_is_not_stable():
    out = stabilize(lambda b: b, Truncation(bound=2, step=1, max_bound=5))
    assert not out.stable
    assert out.history[-1][0] == 5


def test_single_bound_cannot_stabilize():
    out = stabilize(lambda b: 1, Truncation(bound=3, step=2, max_bound=3))
    assert not out.stable


def test_combine_verdicts():
    assert combine_verdicts([]) == PASS
    assert combine_verdicts([PASS, PASS]) == PASS
    assert combine_verdicts([PASS, FAIL, INCONCLUSIVE]) == FAIL
    assert combine_verdicts([PASS, INCONCLUSIVE]) == INCONCLUSIVE


def test_truncation_validation():
    with pytest.raises(ValueError):
        Truncation(bound=5, step=1, max_bound=4)
    with pytest.raises(ValueError):
        Truncation(bound=2, step=0, max_bound=4)
