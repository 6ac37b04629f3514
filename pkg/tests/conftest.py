from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from charp_lab.ffpoly import PolyRing
from charp_lab.frobpure import RingPresentation

settings.register_profile("charp", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("charp")


@pytest.fixture(scope="session")
def axes():
    """A = F_2[X,Y,Z] modulo the three coordinate axes."""
    return RingPresentation.from_strings(2, "XYZ", ["X*Y", "X*Z", "Y*Z"])


@pytest.fixture(scope="session")
def plane_line():
    return RingPresentation.from_strings(2, "XYZ", ["X*Y", "Y*Z"])


@pytest.fixture(scope="session")
def fermat():
    return RingPresentation.from_strings(7, "XYZ", ["X^3+Y^3+Z^3"], declared_prime=True)


@pytest.fixture
def F2xyz():
    return PolyRing(2, ("X", "Y", "Z"))
