from fractions import Fraction
from pathlib import Path

import pytest

from hgperiods import HGParams, derive_ab
from hgperiods import fixtures as fx

FIXTURE_PATH = Path(__file__).parent / "fixtures" / "derived.json"


@pytest.fixture(scope="session")
def ref():
    return HGParams(Fraction(1, 3), Fraction(1, 5), Fraction(7, 2), 2)


@pytest.fixture(scope="session")
def ref_theta():
    return derive_ab([1], [0, 1, -1])


@pytest.fixture(scope="session")
def stored():
    return fx.by_id(fx.load(FIXTURE_PATH))


def cval(pair):
    return complex(pair[0], pair[1])
