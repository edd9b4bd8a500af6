from fractions import Fraction

import pytest

from hgperiods import derive_ab
from hgperiods.errors import P1Error
from hgperiods.ratfunc import Poly
from hgperiods.thetadata import reconstruct


def test_reference_coefficients(stored):
    td = derive_ab([1], [0, 1, -1])
    want = stored["derive_ab_reference"]["value"]
    assert list(td.a) == [Poly([Fraction(c) for c in row]) for row in want["a"]]
    assert list(td.b) == [Poly([Fraction(c) for c in row]) for row in want["b"]]
    assert td.a[0] == Poly([1]) and all(a.is_zero() for a in td.a[1:])
    assert td.b[0] == Poly([0, 1, -1]) and td.b[1] == Poly([-1, 2]) and td.b[2] == Poly([-1])


@pytest.mark.parametrize("p0,p1", [([1], [0, 1, -1]), ([0, 2, 0, -1], [0, 3, -3]), ([Fraction(1, 2)], [0, 1, 1, -2])])
def test_reconstruction(p0, p1):
    td = derive_ab(p0, p1)
    for which, poly in (("p0", Poly(p0)), ("p1", Poly(p1))):
        rec = reconstruct(td, which)
        # only pure t-powers survive, and they reproduce the polynomial
        assert all(dl == 0 for (_, dl) in rec)
        assert {j: c for (j, _), c in rec.items()} == {j: c for j, c in enumerate(poly.coeffs) if c}


def test_P1_gate():
    with pytest.raises(P1Error):
        derive_ab([1], [0, 0, 1])


def test_zero_theta():
    td = derive_ab([], [])
    assert td.N == 0 and td.a_at(0).is_zero() and td.b_at(0).is_zero()
