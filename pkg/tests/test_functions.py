import math
from fractions import Fraction

import numpy as np
import pytest

from hgperiods import HGParams
from hgperiods.core import pow_lambda_minus_one
from hgperiods.errors import DomainError, PoleError
from hgperiods.functions import (
    F_function,
    G_function,
    G_prefactor,
    H_function,
    boundary_distance,
    check_kummer_relation,
    derivative,
    derivatives_at,
    eval_f1,
    eval_f2,
    eval_f3,
    eval_F_mu,
    eval_G_mu,
    eval_H_mu,
)
from hgperiods.quadrature import H_integral
from conftest import cval


class TestKummerSolutions:
    def test_f1_at_zero(self):
        assert eval_f1(0.3, 0.4, 0) == 1

    def test_f2_at_one(self):
        assert eval_f2(0.3, 0.4, 1) == 1

    def test_f3_leading_behaviour(self):
        a, b = Fraction(1, 3), Fraction(1, 5)
        c = float(1 - a - b)
        for t in (1e-1, 1e-2, 1e-4, 1e-6):
            ratio = eval_f3(a, b, t) * t ** (-c)
            assert abs(ratio - 1) < 2 * t

    def test_f3_log_log_slope(self):
        a, b = Fraction(1, 3), Fraction(1, 5)
        t1, t2 = 1e-2, 1e-3
        slope = (math.log(abs(eval_f3(a, b, t1))) - math.log(abs(eval_f3(a, b, t2)))) / math.log(t1 / t2)
        # the next-order term shifts the two-point slope by O(t); see the limit below
        assert abs(slope - float(1 - a - b)) < 5e-3

    def test_f3_slope_limit(self):
        a, b = Fraction(1, 3), Fraction(1, 5)
        t1, t2 = 1e-5, 1e-6
        slope = (math.log(abs(eval_f3(a, b, t1))) - math.log(abs(eval_f3(a, b, t2)))) / math.log(t1 / t2)
        assert abs(slope - float(1 - a - b)) < 1e-3

    def test_f3_cut(self):
        with pytest.raises(DomainError):
            eval_f3(0.3, 0.4, -0.5)


class TestKummerRelation:
    def test_real(self):
        assert check_kummer_relation(Fraction(1, 4), Fraction(1, 3), 0.5) < 1e-10

    def test_complex(self):
        assert check_kummer_relation(Fraction(1, 5), Fraction(2, 5), 0.3 + 0.1j) < 1e-10

    def test_lower_half_lens(self):
        assert check_kummer_relation(Fraction(1, 5), Fraction(2, 5), 0.4 - 0.2j) < 1e-10

    def test_integer_sum_rejected(self):
        with pytest.raises(DomainError):
            check_kummer_relation(Fraction(1, 4), Fraction(3, 4), 0.5)

    def test_f1_equals_f3_at_sum_one(self):
        a, b = Fraction(1, 4), Fraction(3, 4)
        for t in (0.2, 0.5 + 0.1j):
            assert abs(eval_f1(a, b, t) - eval_f3(a, b, t)) < 1e-13

    def test_outside_lens_rejected(self):
        with pytest.raises(DomainError):
            check_kummer_relation(Fraction(1, 4), Fraction(1, 3), 1.5)


class TestF:
    def test_vanishes_at_one(self, ref):
        assert eval_F_mu(ref, 1.0) == 0

    def test_derivative_recurrence(self, ref):
        d = derivative(F_function(ref), 0.6)
        want = float(ref.mu - 1) * eval_F_mu(ref, 0.6, -1)
        assert abs(d - want) < 1e-9 * abs(want)

    def test_integral_fixture(self, ref, stored):
        entry = stored["F_mu_integral"]
        assert abs(eval_F_mu(ref, 0.5) - cval(entry["value"])) < 1e-9

    def test_outside_disc(self, ref):
        with pytest.raises(DomainError):
            eval_F_mu(ref, -0.5)

    def test_vectorized(self, ref):
        lam = np.array([0.5, 0.7 + 0.2j, 1.2 - 0.3j])
        vals = eval_F_mu(ref, lam)
        assert all(abs(v - eval_F_mu(ref, z)) < 1e-16 for v, z in zip(vals, lam))


class TestG:
    def test_prefactor_fixture(self, ref, stored):
        pref = G_prefactor(ref)
        mag = cval(stored["gamma_product_G_prefactor"]["value"])
        # e^{i pi mu} times the gamma quotient
        assert abs(pref - np.exp(1j * math.pi * 3.5) * mag) < 1e-13

    def test_derivative_recurrence(self, ref):
        d = derivative(G_function(ref), 0.4)
        want = float(ref.mu - 1) * eval_G_mu(ref, 0.4, -1)
        assert abs(d - want) < 1e-9 * abs(want)

    def test_pole_guard(self):
        p = HGParams(Fraction(1, 3), Fraction(1, 6), Fraction(3, 2), 2, validate=False)
        with pytest.raises(PoleError):
            G_prefactor(p)


class TestH:
    def test_derivative_recurrence(self, ref):
        d = derivative(H_function(ref), -1.3)
        want = float(ref.mu - 1) * eval_H_mu(ref, -1.3, -1)
        assert abs(d - want) < 1e-9 * abs(want)

    def test_integral(self, ref):
        v = eval_H_mu(ref, -1.5)
        assert abs(H_integral(ref, -1.5) - v) < 1e-8 * abs(v)

    def test_inhomogeneous_ode(self, ref):
        lam = 2.4 + 0.3j
        f = H_function(ref)
        h0 = eval_H_mu(ref, lam)
        h1 = derivative(f, lam)
        h2 = derivative(f, lam, 2)
        a, b, mu = (float(x) for x in (ref.alpha, ref.beta, ref.mu))
        DH = lam * (1 - lam) * h2 + (a + b - mu - (a + b - 2 * mu + 1) * lam) * h1 - (a - mu) * (b - mu) * h0
        src = pow_lambda_minus_one(lam, mu - 1)
        assert abs(DH + src) < 1e-9 * abs(src)

    def test_cut(self, ref):
        with pytest.raises(DomainError):
            eval_H_mu(ref, 3.0)


class TestDerivative:
    def test_constant(self):
        assert abs(derivative(lambda z: np.ones_like(z), 0.3)) < 1e-13

    def test_square(self):
        assert abs(derivative(lambda z: z * z, 3.0, radius=0.5) - 6) < 1e-12

    def test_vectorized_matches_scalar(self, ref):
        lams = np.array([0.6, 0.8 + 0.1j])
        many = derivatives_at(F_function(ref), lams)
        for z, d in zip(lams, many):
            assert abs(d - derivative(F_function(ref), z)) < 1e-12 * abs(d)

    def test_leaves_domain(self, ref):
        with pytest.raises(DomainError):
            derivative(F_function(ref), 0.6, radius=0.5)


def test_boundary_distance_tags():
    assert boundary_distance("disc_at_1", 0.5) == pytest.approx(0.5)
    assert boundary_distance("disc_at_0", 0.5j) == pytest.approx(0.5)
    assert boundary_distance("exterior_of_1", -1.0) == pytest.approx(1.0)
    assert boundary_distance("disc_at_1", 1.5 + 0.1j) == pytest.approx(0.1)
