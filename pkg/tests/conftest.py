import pytest

from transverse.ideals import minimalize_generators
from transverse.poly import Ring


@pytest.fixture
def R4():
    return Ring(("x1", "x2", "x3", "x4"))


@pytest.fixture
def Rxy():
    return Ring(("x", "y"))


def ideal(ring, *gens):
    return minimalize_generators(ring, [ring.parse_monomial(g) for g in gens])


@pytest.fixture
def flagship(R4):
    # the running example: transverse pair (x1,x2), (x3,x4)
    return ideal(R4, "x1", "x2"), ideal(R4, "x3", "x4")
