import cmath
import math

import numpy as np
import pytest

from hgperiods import continuation as cont
from hgperiods.diffop import build_D
from hgperiods.errors import DomainError
from hgperiods.functions import eval_F_mu
from conftest import cval

TOL = 1e-12


def xi_of(p):
    return cmath.exp(2j * math.pi * float((p.mu - p.alpha - p.beta) % 1))


def e(x):
    return cmath.exp(2j * math.pi * float(x))


class TestIntegrate:
    def test_constant_path(self, ref):
        init = (0.3 + 0.1j, -0.2j)
        out = cont.integrate_ode(build_D(ref), init, cont.PathSpec.polyline([0.5]))
        assert out == init

    def test_arc_matches_series(self, ref, stored):
        entry = stored["ode_endpoint"]
        v = entry["value"]
        (a, b) = [complex(*z) for z in entry["path"]]
        out = cont.integrate_ode(build_D(ref), [cval(v["start"]), cval(v["start_derivative"])], cont.PathSpec.polyline([a, b]), TOL)
        assert abs(out[0] - cval(v["end"])) < 1e-8
        assert abs(out[1] - cval(v["end_derivative"])) < 1e-8
        assert abs(out[0] - eval_F_mu(ref, b)) < 1e-8

    def test_contractible_loop(self, ref):
        lam = 0.5
        init = (eval_F_mu(ref, lam), float(ref.mu - 1) * eval_F_mu(ref, lam, -1))
        # the circle about 0.5 starts and ends at 0.2, so transport there first
        start = cont.integrate_ode(build_D(ref), init, cont.PathSpec.polyline([0.5, 0.2]), TOL)
        out = cont.integrate_ode(build_D(ref), start, cont.PathSpec.circle(0.5, 0.3, 1, math.pi), TOL)
        assert max(abs(o - s) for o, s in zip(out, start)) < 1e-8

    def test_clearance(self, ref):
        with pytest.raises(DomainError):
            cont.integrate_ode(build_D(ref), (1, 0), cont.PathSpec.polyline([0.5, 0.01]))

    def test_disjoint_pieces_rejected(self, ref):
        with pytest.raises(ValueError):
            cont.integrate_ode(build_D(ref), (1, 0), [cont.PathSpec.polyline([0.5, 0.6]), cont.PathSpec.polyline([0.7, 0.8])])

    def test_concatenated_path(self, ref):
        lam = 0.5
        init = (eval_F_mu(ref, lam), float(ref.mu - 1) * eval_F_mu(ref, lam, -1))
        path = [cont.PathSpec.polyline([0.5, 0.6]), cont.PathSpec.polyline([0.6, 0.7 + 0.2j])]
        out = cont.integrate_ode(build_D(ref), init, path, TOL)
        assert abs(out[0] - eval_F_mu(ref, 0.7 + 0.2j)) < 1e-8


class TestMonodromy:
    def test_zero(self, ref):
        M = cont.monodromy_at_zero(ref, TOL).entries
        xi = xi_of(ref)
        assert np.max(np.abs(M - np.array([[xi, 0], [1 - xi, 1]]))) < 1e-6

    def test_zero_eigenvalues(self, ref):
        eig = sorted(cont.monodromy_at_zero(ref, TOL).eigenvalues(), key=lambda z: z.imag)
        want = sorted([xi_of(ref), 1], key=lambda z: complex(z).imag)
        assert all(abs(g - w) < 1e-6 for g, w in zip(eig, want))

    def test_xi_mod_Z(self, ref):
        from hgperiods.period_reg import params_for_m

        a = cont.monodromy_at_zero(ref, TOL).entries[0, 0]
        b = cont.monodromy_at_zero(params_for_m(ref, ref.m + ref.l), TOL).entries[0, 0]
        assert abs(a - b) < 1e-8

    def test_infinity_eigenvalues(self, ref):
        eig = list(cont.monodromy_at_infinity(ref, TOL).eigenvalues())
        want = [e(ref.alpha - ref.mu), e(ref.beta - ref.mu)]
        err = min(
            max(abs(eig[0] - want[0]), abs(eig[1] - want[1])),
            max(abs(eig[0] - want[1]), abs(eig[1] - want[0])),
        )
        assert err < 1e-6

    def test_H_around_infinity(self, ref):
        f = cont.H_factor_at_infinity(ref)
        assert abs(f - e(-ref.mu)) < 1e-6

    def test_loop_product(self, ref):
        P = (
            cont.monodromy_at_infinity(ref, TOL).entries
            @ cont.monodromy_at_one(ref, TOL).entries
            @ cont.monodromy_at_zero(ref, TOL).entries
        )
        assert np.max(np.abs(P - np.eye(2))) < 1e-5
        assert abs(np.linalg.det(P) - 1) < 1e-5

    def test_one_eigenvalues(self, ref):
        eig = list(cont.monodromy_at_one(ref, TOL).eigenvalues())
        want = [1, e(ref.mu)]
        err = min(
            max(abs(eig[0] - want[0]), abs(eig[1] - want[1])),
            max(abs(eig[0] - want[1]), abs(eig[1] - want[0])),
        )
        assert err < 1e-6


class TestLaurent:
    def test_origin(self, ref):
        assert cont.laurent_solution_check(ref, 0) == 0

    def test_point(self, ref):
        assert cont.laurent_solution_check(ref, 0.4) < 1e-12

    def test_nonpositive_indices_vanish(self, ref):
        coeffs = cont.laurent_coefficients(ref, 6, n_min=-8)
        assert all(coeffs[n] == 0 for n in range(-8, 1))
        assert coeffs[1] == 1

    def test_closed_form(self, ref):
        from hgperiods.core import pochhammer
        import math as m

        coeffs = cont.laurent_coefficients(ref, 8)
        a, b, mu = ref.alpha, ref.beta, ref.mu
        for n in range(1, 9):
            want = pochhammer(a, n - 1) * pochhammer(b, n - 1) / (m.factorial(n - 1) * pochhammer(1 + mu, n - 1))
            assert coeffs[n] == want

    def test_outside_disc(self, ref):
        with pytest.raises(DomainError):
            cont.laurent_solution_check(ref, 1.2)
