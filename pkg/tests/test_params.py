from fractions import Fraction

import pytest

from hgperiods import HGParams, HypothesisError


def make(a, b, mu, l=1, **kw):
    return HGParams(Fraction(a), Fraction(b), Fraction(mu), l, **kw)


def test_reference_valid(ref):
    assert ref.m == 7 and ref.k == 1 and ref.q_chi == Fraction(1, 2)


def test_integer_mu():
    with pytest.raises(HypothesisError) as exc:
        make("1/3", "1/5", 3)
    assert any("q_chi ≢ 0 (mod Z)" in v for v in exc.value.violations)


@pytest.mark.parametrize(
    "args,fragment",
    [
        (("1/3", "1/5", "4/3", 3), "mu ≢ alpha"),
        (("1/3", "1/5", "11/5", 5), "mu ≢ beta"),
        (("1/3", "1/5", "23/15", 15), "mu ≢ alpha + beta"),
        (("1/3", "1/5", "1/2", 2), "mu > 1"),
        (("4/3", "1/5", "7/2", 2), "alpha must lie in [0, 1)"),
    ],
)
def test_each_hypothesis_named(args, fragment):
    with pytest.raises(HypothesisError) as exc:
        make(*args)
    assert any(fragment in v for v in exc.value.violations)


def test_l_must_match():
    with pytest.raises(HypothesisError):
        make("1/3", "1/5", "7/2", 3)


def test_exact_only():
    with pytest.raises(TypeError):
        HGParams(0.3, Fraction(1, 5), Fraction(7, 2), 2)


def test_admissible_m(ref):
    ms = ref.admissible_m(5)
    assert len(ms) == 5 and all(m > ref.l and m % ref.l == ref.k for m in ms)
    assert ms == sorted(ms)


def test_with_m(ref):
    assert ref.with_m(9).mu == Fraction(9, 2)
    with pytest.raises(HypothesisError):
        ref.with_m(8)
