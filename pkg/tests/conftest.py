from fractions import Fraction

import pytest

from antichains.model import GrowthFunction


@pytest.fixture(scope="session")
def gf_matrix():
    """The growth functions exercised by the cross-validation suites."""
    return {
        "zero": GrowthFunction.zero(),
        "c0b1": GrowthFunction.formula(0, 1),
        "c0b2": GrowthFunction.formula(0, 2),
        "chalf": GrowthFunction.formula(Fraction(1, 2), 0),
    }


@pytest.fixture(scope="session")
def gf_paper():
    return GrowthFunction.paper()
