from __future__ import annotations

import pytest

from wblowup import GradedRing, Truncation, Variable, WeightedCentre


def base_ring(*names: str) -> GradedRing:
    return GradedRing(tuple(Variable(n, 0) for n in names))


def centre(ring: GradedRing, *entries) -> WeightedCentre:
    return WeightedCentre(ring, [(ring.parse(poly), weight) for poly, weight in entries])


@pytest.fixture
def qxy() -> GradedRing:
    return base_ring("x", "y")


@pytest.fixture
def qx() -> GradedRing:
    return base_ring("x")


@pytest.fixture
def trunc() -> Truncation:
    return Truncation(bound=2, step=1, max_bound=8)
