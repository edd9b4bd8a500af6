from fractions import Fraction

import numpy as np
import pytest

from hgperiods import HGParams, derive_ab
from hgperiods.core import beta, hyp2f1, hyp3f2
from hgperiods.errors import DomainError, HypothesisError, IntegrationError
from hgperiods.functions import eval_H_mu
from hgperiods.quadrature import (
    H_integral,
    Q_integral,
    WeightedIntegrand,
    integrate_01,
    verify_H_integral,
    verify_int_rep_2F1,
    verify_int_rep_3F2,
)
from conftest import cval

one = lambda t, omt: np.ones_like(t)


class TestTanhSinh:
    def test_beta_weight(self):
        v, _ = integrate_01(WeightedIntegrand(-0.3, 0.4, one))
        assert abs(v - beta(0.7, 1.4)) < 1e-11

    def test_constant(self):
        v, _ = integrate_01(WeightedIntegrand(0, 0, one))
        assert abs(v - 1) < 1e-14

    def test_inverse_sqrt(self):
        v, _ = integrate_01(WeightedIntegrand(-0.5, 0, one))
        assert abs(v - 2) < 1e-12

    def test_beta_fixture(self, stored):
        v, _ = integrate_01(WeightedIntegrand(-2 / 3, -1 / 3, one))
        assert abs(v - cval(stored["beta_1_3_2_3"]["value"])) < 1e-12

    def test_non_integrable(self):
        with pytest.raises(DomainError):
            WeightedIntegrand(-1.0, 0, one)

    def test_tolerance_failure_reported(self):
        wild = lambda t, omt: np.sin(1e4 * t)
        with pytest.raises(IntegrationError):
            integrate_01(WeightedIntegrand(0, 0, wild), tol=1e-14, max_levels=3)


class TestEulerIntegrals:
    def test_2f1_real(self):
        assert verify_int_rep_2F1(Fraction(1, 3), Fraction(1, 2), Fraction(3, 2), 0.4) < 1e-9

    def test_2f1_at_zero(self):
        assert verify_int_rep_2F1(0.3, 0.6, 1.7, 0) < 1e-12

    def test_2f1_complex_fixture(self, stored):
        x = 0.3 + 0.2j
        assert verify_int_rep_2F1(Fraction(1, 3), Fraction(1, 2), Fraction(3, 2), x) < 1e-9
        lhs = beta(0.5, 1.0) * hyp2f1(1 / 3, 0.5, 1.5, x)
        assert abs(lhs - cval(stored["int_rep_2F1_complex"]["value"])) < 1e-9

    def test_3f2_at_zero(self):
        assert verify_int_rep_3F2(0.2, 0.4, 0.6, 1.1, 1.3, 0) < 1e-12

    def test_3f2_P_m_reduction(self):
        lam = 0.55
        assert verify_int_rep_3F2(Fraction(1, 3), Fraction(1, 5), 1, 1, Fraction(9, 2), 1 - lam) < 1e-9

    def test_3f2_fixture(self, stored):
        args = (Fraction(1, 3), Fraction(2, 5), Fraction(3, 4), Fraction(6, 5), Fraction(9, 4))
        assert verify_int_rep_3F2(*args, 0.25) < 1e-9
        rhs = beta(0.75, 1.5) * hyp3f2(1 / 3, 0.4, 0.75, 1.2, 2.25, 0.25)
        assert abs(rhs - cval(stored["int_rep_3F2_025"]["value"])) < 1e-9

    def test_bad_weights(self):
        with pytest.raises(DomainError):
            verify_int_rep_2F1(0.3, 1.5, 1.2, 0.2)


class TestHIntegral:
    def test_negative_real(self, ref):
        assert verify_H_integral(ref, -1.5) < 1e-8

    def test_upper_half_plane(self, ref, stored):
        assert verify_H_integral(ref, 2.6 + 0.4j) < 1e-8
        want = cval(stored["H_integral_upper"]["value"])
        assert abs(H_integral(ref, 2.6 + 0.4j) - want) < 1e-8 * abs(want)

    def test_lower_half_plane_same_branch(self, ref):
        assert verify_H_integral(ref, -0.5 - 1.2j) < 1e-8

    def test_integer_mu_rejected(self):
        p = HGParams(Fraction(1, 3), Fraction(1, 5), 3, 1, validate=False)
        with pytest.raises(HypothesisError):
            verify_H_integral(p, -1.5)

    def test_inside_disc_rejected(self, ref):
        with pytest.raises(DomainError):
            H_integral(ref, 0.5)


class TestQIntegral:
    def test_identity_theta_is_H_over_l(self, ref):
        td = derive_ab([1], [])
        lam = -1.4
        assert abs(Q_integral(ref, td, lam) - eval_H_mu(ref, lam) / ref.l) < 1e-9 * abs(eval_H_mu(ref, lam))

    def test_reference_fixture(self, ref, ref_theta, stored):
        entry = stored["Q_m_reference"]
        for lam, want in zip(entry["lam"], entry["value"]):
            v = Q_integral(ref, ref_theta, cval(lam))
            assert abs(v - cval(want)) < 1e-7 * abs(cval(want))
