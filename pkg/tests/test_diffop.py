from fractions import Fraction

import numpy as np
import pytest

from hgperiods import derive_ab
from hgperiods.diffop import (
    DiffOperator,
    apply_to_derivatives,
    build_D,
    build_H_annihilator,
    build_P_HG,
    build_Q_HG,
    build_Q_HG_expanded,
    build_Theta,
    build_Theta_parts,
    build_theta_lambda,
    compose,
    derivative_of_first_order,
    right_divide,
    theta2_step,
)
from hgperiods.functions import F_function, H_function, derivative, eval_F_mu
from hgperiods.period_reg import eval_P_m
from hgperiods.ratfunc import Poly, RationalFunction

LAM = RationalFunction.x()
d = DiffOperator.partial()


def _derivs(fn, lam, n):
    return [complex(fn(lam))] + [derivative(fn, lam, k, radius=0.1) for k in range(1, n + 1)]


class TestAlgebra:
    def test_leibniz(self):
        lam = DiffOperator.multiplication(LAM)
        assert compose(d, lam) == DiffOperator({1: LAM, 0: 1})

    def test_identity(self, ref):
        L = build_D(ref)
        assert compose(L, DiffOperator.identity()) == L
        assert compose(DiffOperator.identity(), L) == L

    def test_basis_round_trip(self, ref):
        L = build_D(ref)
        assert L.to_D_basis().to_d_basis() == L

    def test_associative(self, ref):
        A, B, C = build_D(ref), DiffOperator({1: LAM * LAM, 0: 3}), DiffOperator({2: 1, 0: LAM})
        assert compose(compose(A, B), C) == compose(A, compose(B, C))

    def test_mixed_basis_rejected(self, ref):
        with pytest.raises(ValueError):
            compose(build_P_HG(ref), build_D(ref))

    def test_json_round_trip(self, ref):
        L = build_Q_HG(ref)
        assert DiffOperator.from_json(L.to_json()) == L


class TestDivision:
    def test_self(self, ref):
        D = build_D(ref)
        q, r = right_divide(D, D)
        assert q == DiffOperator.identity() and r.is_zero()

    def test_exact_multiple(self, ref):
        D = build_D(ref)
        q, r = right_divide(compose(d, D), D)
        assert q == d and r.is_zero()

    def test_reconstruction(self, ref):
        D = build_D(ref)
        L = DiffOperator({4: LAM, 2: 1 / (LAM - 1), 0: LAM * LAM})
        q, r = right_divide(L, D)
        assert compose(q, D) + r == L and r.order < D.order

    def test_zero_divisor(self, ref):
        with pytest.raises(ZeroDivisionError):
            right_divide(build_D(ref), DiffOperator.zero())


class TestHGOperators:
    def test_P_is_lambda_D(self, ref):
        assert build_P_HG(ref) == build_D(ref).to_D_basis().scale(LAM)

    def test_Q_factorization(self, ref):
        assert build_Q_HG(ref) == compose(build_theta_lambda(ref), build_P_HG(ref))
        assert build_Q_HG(ref) == build_Q_HG_expanded(ref)

    def test_monomials(self, ref):
        # D acting on lambda^n, expanded by hand
        a, b, mu = ref.alpha, ref.beta, ref.mu
        D = build_D(ref)
        for n in range(3):
            c = [D.coeff(k) for k in range(3)]
            got = c[0] * LAM**n
            if n >= 1:
                got = got + c[1] * LAM ** (n - 1) * n
            if n >= 2:
                got = got + c[2] * LAM ** (n - 2) * n * (n - 1)
            hand = (
                LAM**n * (-(a - mu) * (b - mu) - n * (a + b - 2 * mu + 1) - n * (n - 1))
                + (LAM ** (n - 1) * n * (a + b - mu + n - 1) if n else RationalFunction.const(0))
            )
            assert got == hand

    def test_D_annihilates_F(self, ref):
        v = apply_to_derivatives(build_D(ref), 0.5, _derivs(F_function(ref), 0.5, 2))
        assert abs(v) < 1e-9

    def test_Q_HG_annihilates_F(self, ref, stored):
        v = apply_to_derivatives(build_Q_HG(ref), 0.5, _derivs(F_function(ref), 0.5, 3))
        assert abs(v) < 1e-8 * stored["Q_HG_on_F"]["scale"]

    def test_literal_Q_HG_on_H(self, ref, stored):
        # theta o lambda D sends H to lambda (lambda - 1)^mu, not 0
        lam = -1.4
        v = apply_to_derivatives(build_Q_HG(ref), lam, _derivs(H_function(ref), lam, 3))
        entry = stored["Q_HG_on_H"]
        want = complex(*entry["value"])
        assert abs(v - want) < 1e-8 * entry["scale"]

    def test_H_annihilator(self, ref, stored):
        lam = -1.4
        v = apply_to_derivatives(build_H_annihilator(ref), lam, _derivs(H_function(ref), lam, 3))
        assert abs(v) < 1e-8 * stored["H_annihilator_on_H"]["scale"]

    def test_theta2_step(self, ref):
        S = theta2_step(ref, 1)
        lam = 0.55
        v = apply_to_derivatives(S, lam, _derivs(F_function(ref), lam, 1))
        assert abs(v - eval_F_mu(ref, lam, 1)) < 1e-9 * abs(v)


class TestTheta:
    @pytest.mark.parametrize(
        "p0,p1", [([1], [0, 1, -1]), ([1], []), ([0, 1], [0, 1, -1]), ([Fraction(-1, 2), 0, 1], [0, 1, 2, -3])]
    )
    def test_first_order_and_value(self, ref, p0, p1):
        td = derive_ab(p0, p1)
        theta = build_Theta(ref, td)
        assert theta.order <= 1
        for c in theta.coeffs.values():
            assert c.denominator_divides(Poly.from_roots([0] * 8 + [1] * 8))
        lam = 0.55 + 0.1j
        v = 2j * np.pi * apply_to_derivatives(theta, lam, _derivs(F_function(ref), lam, 1))
        want = eval_P_m(ref, td, ref.m, lam)
        assert abs(v - want) < 1e-8 * max(1, abs(want))

    def test_identity_theta(self, ref, stored):
        td = derive_ab([1], [])
        theta = build_Theta(ref, td)
        v = 2j * np.pi * apply_to_derivatives(theta, 0.5, _derivs(F_function(ref), 0.5, 1))
        assert abs(v - complex(*stored["P_m_identity_theta"]["value"])) < 1e-8

    def test_parts_degree_bound(self, ref, ref_theta):
        with pytest.raises(ValueError):
            build_Theta_parts(ref, ref_theta, N=0)

    def test_derivative_of_first_order(self, ref, ref_theta):
        theta = build_Theta(ref, ref_theta)
        dtheta = derivative_of_first_order(theta, ref)
        assert dtheta.order <= 1
