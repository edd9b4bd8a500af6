import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from hgperiods.core import (
    HGSeriesSpec,
    TruncationPolicy,
    beta,
    cpow,
    eval_pFq,
    gamma,
    gamma_product,
    pochhammer,
    pow_lambda_minus_one,
)
from hgperiods.errors import DomainError, PoleError
from conftest import cval


class TestPochhammer:
    def test_empty_product(self):
        assert pochhammer(Fraction(2, 7), 0) == 1

    def test_factorial(self):
        assert pochhammer(1, 5) == 120

    def test_half(self):
        assert pochhammer(Fraction(1, 2), 3) == Fraction(15, 8)

    def test_float_matches_exact(self):
        assert pochhammer(0.5, 3) == pytest.approx(15 / 8)

    def test_negative_n(self):
        with pytest.raises(ValueError):
            pochhammer(1, -1)


class TestGamma:
    def test_one(self):
        assert abs(gamma(1) - 1) < 1e-15

    def test_recurrence_complex(self):
        s = 0.3 + 0.2j
        assert abs(gamma(s + 1) - s * gamma(s)) < 1e-14 * abs(gamma(s + 1))

    def test_half_against_fixture(self, stored):
        assert abs(gamma(0.5) - cval(stored["gamma_half"]["value"])) < 1e-13
        assert abs(gamma(0.5) - math.sqrt(math.pi)) < 1e-14

    def test_reflection_region(self):
        for z in (-0.5, -1.3 + 0.4j, 0.1):
            assert abs(gamma(z) * gamma(1 - z) - math.pi / cmath.sin(math.pi * z)) < 1e-12 * abs(gamma(z) * gamma(1 - z))

    @pytest.mark.parametrize("z", [0, -1, -7])
    def test_poles(self, z):
        with pytest.raises(PoleError):
            gamma(z)

    def test_matches_math_gamma(self):
        for x in np.linspace(0.2, 25, 40):
            assert abs(gamma(x) - math.gamma(x)) < 2e-14 * math.gamma(x)


class TestBeta:
    @pytest.mark.parametrize("i", range(4))
    def test_one_mu(self, i):
        mu = 3.5
        assert abs(beta(1, mu + i) - 1 / (mu + i)) < 1e-15

    def test_symmetry(self):
        assert abs(beta(0.3, 0.8) - beta(0.8, 0.3)) < 1e-15

    def test_one_third_against_fixture(self, stored):
        want = cval(stored["beta_1_3_2_3"]["value"])
        assert abs(beta(1 / 3, 2 / 3) - want) < 1e-12 * abs(want)
        assert abs(want - 2 * math.pi / math.sqrt(3)) < 1e-13


class TestGammaProduct:
    def test_cancellation(self):
        assert abs(gamma_product([0.37], [0.37]) - 1) < 1e-15

    def test_G_prefactor_fixture(self, stored):
        a, b, mu = 1 / 3, 1 / 5, 3.5
        v = gamma_product([mu, mu + 1 - a - b], [mu + 1 - a, mu + 1 - b])
        assert abs(v - cval(stored["gamma_product_G_prefactor"]["value"])) < 1e-13

    def test_kummer_fixture(self, stored):
        a, b = 0.25, 1 / 3
        v = gamma_product([1 - a - b], [1 - a, 1 - b])
        entry = stored["gamma_product_kummer"]
        assert abs(v - cval(entry["value"])) < 1e-13
        assert abs(v - cval(entry["cross_check"])) < 1e-13

    def test_denominator_pole_raises(self):
        with pytest.raises(PoleError):
            gamma_product([1.0], [-2])


class TestPFQ:
    def test_at_zero(self):
        v, err, used = eval_pFq(HGSeriesSpec((0.3, 0.7, 1.1), (1.9, 2.2)), 0)
        assert v == 1 and used >= 1

    def test_binomial_fixture(self, stored):
        v, _, _ = eval_pFq(HGSeriesSpec((0.5, 7), (7,)), 0.3)
        want = cval(stored["hyp2f1_binomial"]["value"])
        assert abs(v - want) < 1e-13
        assert abs(want - 0.7 ** -0.5) < 1e-15

    def test_3f2_fixture(self, stored):
        v, _, _ = eval_pFq(HGSeriesSpec((0.2, 0.4, 0.6), (1.1, 1.3)), 0.5)
        assert abs(v - cval(stored["hyp3f2_euler"]["value"])) < 1e-9

    def test_terminating(self):
        # 2F1(-2, b; c; x) is a quadratic
        b, c, x = 0.3, 1.7, 2.5
        want = 1 - 2 * b / c * x + b * (b + 1) / (c * (c + 1)) * x * x
        v, err, used = eval_pFq(HGSeriesSpec((-2, b), (c,)), x)
        assert abs(v - want) < 1e-14 and used <= 4

    def test_lower_pole_rejected(self):
        with pytest.raises(PoleError):
            HGSeriesSpec((1, 1), (-3,))

    def test_outside_disc_rejected(self):
        with pytest.raises(DomainError):
            eval_pFq(HGSeriesSpec((0.3, 0.4), (1.5,)), 1.2)

    def test_gauss_sum_at_one(self):
        a, b, c = 0.2, 0.3, 1.7
        v, _, _ = eval_pFq(HGSeriesSpec((a, b), (c,)), 1.0)
        assert abs(v - math.gamma(c) * math.gamma(c - a - b) / (math.gamma(c - a) * math.gamma(c - b))) < 1e-13

    def test_vectorized_matches_scalar(self):
        spec = HGSeriesSpec((0.3, 0.6), (1.4,))
        xs = np.array([0.1, -0.5 + 0.3j, 0.8j])
        vals, errs, used = eval_pFq(spec, xs)
        for x, v in zip(xs, vals):
            assert abs(v - eval_pFq(spec, x)[0]) < 1e-15

    def test_error_estimate_bounds_truth(self):
        import mpmath

        spec = HGSeriesSpec((0.3, 0.6), (1.4,))
        for x in (0.5, 0.9, -0.7 + 0.6j):
            v, err, _ = eval_pFq(spec, x, TruncationPolicy(1e-8))
            true = abs(v - complex(mpmath.hyp2f1(0.3, 0.6, 1.4, x)))
            assert true <= err

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            TruncationPolicy(relative_tolerance=0)
        with pytest.raises(ValueError):
            TruncationPolicy(max_terms=0)


class TestBranches:
    def test_cpow_principal(self):
        assert abs(cpow(-1, 0.5) - 1j) < 1e-15

    def test_lambda_minus_one_branch(self):
        # arg(lambda - 1) in (0, 2 pi]: just below the cut gives angle near 2 pi
        below = pow_lambda_minus_one(1.5 - 1e-12j, 0.5)
        above = pow_lambda_minus_one(1.5 + 1e-12j, 0.5)
        assert abs(above - math.sqrt(0.5)) < 1e-9
        assert abs(below + math.sqrt(0.5)) < 1e-9

    def test_lambda_minus_one_upper_half_plane_principal(self):
        lam = 0.3 + 0.8j
        assert abs(pow_lambda_minus_one(lam, 0.7) - cpow(lam - 1, 0.7)) < 1e-15
