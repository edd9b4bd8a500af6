"""Period functions P_m, regulator functions Q_m, the period matrix, and the
three-term recursion that rewrites Q_m through H_s and H_{s-1}.

Three-term relation
-------------------
Write ``F(s) = 3F2(1, 1, 1 - s; a, b; x)`` with ``a = 2 - alpha``,
``b = 2 - beta`` and ``x = 1/(1 - lambda)``. From the hypergeometric ODE one
gets, for every ``s``,

    F(s + 1) = A(s) F(s) + (lambda - 1)^-1 B(s) F(s - 1) + c(s),
    c(s) = (a - 1)(b - 1) / ((a + s - 1)(b + s - 1)),

and iterating with ``(C_{i+1}, D_{i+1})(s) = M(s) (C_i, D_i)(s + 1)``,
``M = [[A, (lambda - 1)^-1], [B, 0]]``, ``(C_{-1}, D_{-1}) = (0, 1)``:

    F(s + i) = (lambda - 1) C_i(s) F(s) + D_i(s) F(s - 1) + rho_i(s),
    rho_{i+1}(s) = (lambda - 1) C_i(s + 1) c(s) + rho_i(s + 1).

Note the factor ``lambda - 1`` on ``C_i``; without it the relation already
fails at ``i = 0``. Translated to ``H`` and summed over the ``Q_m``
expansion this gives, with base exponent ``s = m/l - n``,

    Q_m = (1/l) (lambda - 1)^(n+1) [E1^(n)(s) H_s + E2^(n)(s) H_{s-1}]
          + (lambda - 1)^(m/l - 1) * (rational function of lambda).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
from sympy import QQ
from sympy.polys.fields import field as sympy_field

from .core import hyp3f2, pow_lambda_minus_one
from .diffop import DiffOperator, build_Theta, derivative_of_first_order
from .errors import DegenerateParameterError, FitError, HypothesisError, PoleError
from .functions import AnalyticFunction, boundary_distance, eval_F_mu, eval_G_mu, eval_H_mu
from .params import HGParams
from .quadrature import Q_integral
from .ratfit import fit_laurent, fit_rational, radial_test_mask
from .ratfunc import Poly, RationalFunction
from .thetadata import ThetaData, derive_ab

__all__ = [
    "ThetaData",
    "derive_ab",
    "params_for_m",
    "eval_P_m",
    "eval_Q_m",
    "P_m_function",
    "Q_m_function",
    "P_m_via_theta",
    "Q_m_quadrature",
    "PeriodMatrixResult",
    "period_matrix",
    "nondegenerate_m",
    "RegulatorRecursionState",
    "regulator_recursion",
    "recursion_by_products",
    "three_term_residual",
    "ThreeTermReport",
    "check_three_term_congruence",
    "RegulatorReport",
    "check_regulator_congruence",
    "default_exterior_sample",
]


def params_for_m(p: HGParams, m: int) -> HGParams:
    """``p`` with ``mu = m/l``; only the congruence ``m = k (mod l)`` and ``m > 0`` are enforced."""
    if m <= 0:
        raise HypothesisError([f"m must be positive (m = {m})"])
    if (m - p.m) % p.l:
        raise HypothesisError([f"m = {m} is not congruent to k = {p.k} mod l = {p.l}"])
    return replace(p, mu=Fraction(m, p.l), validate=False)


# --- P_m and Q_m ---------------------------------------------------------------


def _expansion(p: HGParams, td: ThetaData, m: int, lam, evaluator):
    """``(1/l) sum_i (a_i + b_i d) X_{mu+i}`` with ``d X_nu = (nu - 1) X_{nu-1}``."""
    q = params_for_m(p, m)
    lam_a = np.asarray(lam, dtype=complex)
    total = np.zeros_like(lam_a)
    for i in range(td.N + 1):
        ai, bi = td.a_at(i), td.b_at(i)
        if not ai.is_zero():
            total = total + ai(lam_a) * evaluator(q, lam_a, i)
        if not bi.is_zero():
            total = total + bi(lam_a) * float(q.mu + i - 1) * evaluator(q, lam_a, i - 1)
    total = total / q.l
    return complex(total) if np.ndim(lam) == 0 else total


def eval_P_m(p: HGParams, td: ThetaData, m: int, lam):
    """``(2 pi i / l) sum_i (a_i + b_i d) F_{mu+i}``; needs ``|1 - lambda| < 1``."""
    return 2j * math.pi * _expansion(p, td, m, lam, eval_F_mu)


def eval_Q_m(p: HGParams, td: ThetaData, m: int, lam):
    """``(1/l) sum_i (a_i + b_i d) H_{mu+i}``; needs ``|1 - lambda| > 1``."""
    return _expansion(p, td, m, lam, eval_H_mu)


def P_m_function(p: HGParams, td: ThetaData, m: int) -> AnalyticFunction:
    return AnalyticFunction("P_m", lambda z: eval_P_m(p, td, m, z), "disc_at_1", params_for_m(p, m))


def Q_m_function(p: HGParams, td: ThetaData, m: int) -> AnalyticFunction:
    return AnalyticFunction("Q_m", lambda z: eval_Q_m(p, td, m, z), "exterior_of_1", params_for_m(p, m))


def _apply_first_order(op: DiffOperator, q: HGParams, lam, evaluator):
    c0, c1 = op.coeff(0), op.coeff(1)
    return c0(lam) * evaluator(q, lam) + c1(lam) * float(q.mu - 1) * evaluator(q, lam, -1)


def P_m_via_theta(p: HGParams, td: ThetaData, m: int, lam, N: int | None = None):
    """``2 pi i (Theta F_mu)(lambda)`` with ``Theta`` reduced modulo the ODE."""
    q = params_for_m(p, m)
    theta = build_Theta(q, td, N)
    return 2j * math.pi * _apply_first_order(theta, q, np.asarray(lam, dtype=complex), eval_F_mu)


def Q_m_quadrature(p: HGParams, td: ThetaData, m: int, lam, tol: float = 1e-12) -> complex:
    return Q_integral(params_for_m(p, m), td, lam, tol=tol)


# --- period matrix -------------------------------------------------------------


@dataclass(frozen=True)
class PeriodMatrixResult:
    """Evaluators for ``2 pi i (1 - zeta^m) diag(1, 1/(mu-1)) W [[1, xi], [0, 1 - xi]]``.

    ``W = [[Theta F, Theta G], [d Theta F, d Theta G]]`` is the inner block.
    """

    params: HGParams
    m: int
    mu: Fraction
    zeta: complex
    prefactor_zeta: complex
    xi: complex
    theta: DiffOperator = field(repr=False)
    dtheta: DiffOperator = field(repr=False)

    def inner_block(self, lam) -> np.ndarray:
        """``W`` at ``lam``; an array of points gives shape ``(2, 2, len(lam))``."""
        q = self.params
        z = np.asarray(lam, dtype=complex)
        row0 = [_apply_first_order(self.theta, q, z, ev) for ev in (eval_F_mu, eval_G_mu)]
        row1 = [_apply_first_order(self.dtheta, q, z, ev) for ev in (eval_F_mu, eval_G_mu)]
        return np.array([row0, row1], dtype=complex)

    def inner_det(self, lam):
        w = self.inner_block(lam)
        d = w[0, 0] * w[1, 1] - w[0, 1] * w[1, 0]
        return complex(d) if np.ndim(d) == 0 else d

    def relative_det(self, lam):
        """``|det W|`` divided by the larger of its two products (1 means no cancellation)."""
        w = self.inner_block(lam)
        scale = np.maximum(np.abs(w[0, 0] * w[1, 1]), np.abs(w[0, 1] * w[1, 0]))
        det = np.abs(w[0, 0] * w[1, 1] - w[0, 1] * w[1, 0])
        out = np.where(scale > 0, det / np.where(scale > 0, scale, 1.0), 0.0)
        return float(out) if np.ndim(out) == 0 else out

    def matrix(self, lam) -> np.ndarray:
        left = np.diag([1.0, 1.0 / float(self.mu - 1)])
        right = np.array([[1, self.xi], [0, 1 - self.xi]])
        return self.prefactor_zeta * left @ self.inner_block(complex(lam)) @ right

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "mu": str(self.mu),
            "xi": [self.xi.real, self.xi.imag],
            "prefactor_zeta": [self.prefactor_zeta.real, self.prefactor_zeta.imag],
            "theta": self.theta.pretty(),
        }


def period_matrix(p: HGParams, td: ThetaData, m: int, N: int | None = None) -> PeriodMatrixResult:
    if m <= p.l:
        raise HypothesisError([f"m > l required (m = {m}, l = {p.l})"])
    q = params_for_m(p, m)
    problems = q.violations()
    degenerate = m % p.l == 0
    if degenerate:
        # integral mu: the matrix collapses, reported as a warning rather than an error
        problems = [v for v in problems if not v.startswith("q_chi")]
    if problems:
        raise HypothesisError(problems)
    zeta = cmath.exp(2j * math.pi / p.l)
    pref = 2j * math.pi * (1 - zeta**m)
    if degenerate:
        warnings.warn(f"l divides m = {m}: the prefactor 1 - zeta^m vanishes", stacklevel=2)
        pref = 0j
    frac = (q.mu - p.alpha - p.beta) % 1
    xi = cmath.exp(2j * math.pi * float(frac))
    theta = build_Theta(q, td, N)
    dtheta = derivative_of_first_order(theta, q)
    return PeriodMatrixResult(q, m, q.mu, zeta, pref, xi, theta, dtheta)


def nondegenerate_m(p: HGParams, td: ThetaData, lam_grid, count: int = 5, threshold: float = 1e-10):
    """Scan the first ``count`` admissible ``m``; return ``{m: min relative |det|}`` over the grid."""
    out = {}
    for m in p.admissible_m(count):
        res = period_matrix(p, td, m)
        out[m] = float(np.min(res.relative_det(np.asarray(lam_grid, dtype=complex))))
    return out


# --- regulator recursion ---------------------------------------------------------

_K, _S, _L = sympy_field("s,lam", QQ)


def _q(c: Fraction):
    return QQ(c.numerator, c.denominator)


def _to_field(poly: Poly):
    out = _K(0)
    for k, c in enumerate(poly.coeffs):
        out += _q(c) * _L**k
    return out


def _shift_s(f, by: int):
    if by == 0:
        return f
    s_gen = f.numer.ring.gens[0]
    num = f.numer.compose(s_gen, s_gen + by)
    den = f.denom.compose(s_gen, s_gen + by)
    return _K(num) / _K(den)


def _lam_poly_from_ring(elem) -> Poly:
    """Univariate ring element (in lam only) -> Poly."""
    coeffs: dict[int, Fraction] = {}
    for monom, c in elem.terms():
        if any(monom[:-1]):
            raise ValueError("element still depends on s")
        coeffs[monom[-1]] = Fraction(int(c.numerator), int(c.denominator))
    n = max(coeffs, default=-1)
    return Poly([coeffs.get(k, 0) for k in range(n + 1)])


def _instantiate(f, s0: Fraction) -> RationalFunction:
    num = f.numer.evaluate(f.numer.ring.gens[0], _q(s0))
    den = f.denom.evaluate(f.denom.ring.gens[0], _q(s0))
    dpoly = _lam_poly_from_ring(den)
    if dpoly.is_zero():
        raise PoleError(f"rational function has a pole at s = {s0}")
    return RationalFunction(_lam_poly_from_ring(num), dpoly)


def _AB(a: Fraction, b: Fraction):
    s, lam = _S, _L
    den = (_q(a) + s - 1) * (_q(b) + s - 1)
    A = s * (_q(a) + _q(b) + 2 * s - 3 - s / (1 - lam)) / den
    B = s * (1 - s) * lam / den
    c = (_q(a) - 1) * (_q(b) - 1) / den
    return A, B, c


@dataclass
class RegulatorRecursionState:
    """Exact recursion data; ``C``, ``D``, ``rho`` map ``i`` to bivariate functions of ``(s, lambda)``."""

    params: HGParams
    td: ThetaData
    n: int
    s_value: Fraction  # base exponent m/l - n at which E1, E2 are instantiated
    a_lower: Fraction
    b_lower: Fraction
    C: dict
    D: dict
    rho: dict
    E1: RationalFunction
    E2: RationalFunction

    def C_at(self, i: int, s0: Fraction | None = None) -> RationalFunction:
        return _instantiate(self.C[i], self.s_value if s0 is None else s0)

    def D_at(self, i: int, s0: Fraction | None = None) -> RationalFunction:
        return _instantiate(self.D[i], self.s_value if s0 is None else s0)

    def rho_at(self, i: int, s0: Fraction | None = None) -> RationalFunction:
        return _instantiate(self.rho[i], self.s_value if s0 is None else s0)

    def E(self, r: int, s0: Fraction | None = None):
        """``(E1^(r)(s0), E2^(r)(s0))`` as rational functions of lambda."""
        s0 = self.s_value if s0 is None else s0
        e1, e2 = _E_pair(self, r)
        return _instantiate(e1, s0), _instantiate(e2, s0)

    def remainder(self, r: int, s0: Fraction | None = None) -> RationalFunction:
        """``sum_i e_i(s + r) rho_{r+i}(s)``: the exact rational part, see module docstring."""
        s0 = self.s_value if s0 is None else s0
        total = _K(0)
        for i, ei in _e_family(self.td).items():
            total += _shift_s(ei, r) * self.rho[r + i]
        return _instantiate(total, s0)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "s": str(self.s_value),
            "a": str(self.a_lower),
            "b": str(self.b_lower),
            "E1": self.E1.to_json(),
            "E2": self.E2.to_json(),
            "E1_pretty": self.E1.pretty(),
            "E2_pretty": self.E2.pretty(),
        }


def _e_family(td: ThetaData) -> dict:
    """``e_i(s) = (-1)^i (a_i + (s + i) b_{i+1}) (1 - lambda)^i`` for ``i = -1 .. N``."""
    s, lam = _S, _L
    out = {}
    for i in range(-1, td.N + 1):
        ai = _to_field(td.a_at(i)) if i >= 0 else _K(0)
        bi = _to_field(td.b_at(i + 1))
        out[i] = (-1) ** i * (ai + (s + i) * bi) * (1 - lam) ** i
    return out


def _E_pair(state: RegulatorRecursionState, r: int):
    e1 = _K(0)
    e2 = _K(0)
    for i, ei in _e_family(state.td).items():
        shifted = _shift_s(ei, r)
        e1 += shifted * state.C[r + i]
        e2 += shifted * state.D[r + i]
    return e1, e2


def _run_recursion(a: Fraction, b: Fraction, top: int):
    A, B, c = _AB(a, b)
    lam = _L
    C = {-1: _K(0)}
    D = {-1: _K(1)}
    rho = {-1: _K(0), 0: _K(0)}
    for i in range(-1, top):
        Cs, Ds = _shift_s(C[i], 1), _shift_s(D[i], 1)
        C[i + 1] = A * Cs + Ds / (lam - 1)
        D[i + 1] = B * Cs
        if i >= 0:
            rho[i + 1] = (lam - 1) * Cs * c + _shift_s(rho[i], 1)
    return C, D, rho


def regulator_recursion(p: HGParams, td: ThetaData, n: int = 0, m: int | None = None) -> RegulatorRecursionState:
    """Build ``C_i``, ``D_i`` (``i <= n + N``) and ``E^(n)`` at the base exponent ``m/l - n``.

    ``m`` defaults to ``p.m``; ``n`` is the recursion depth.
    """
    if n < 0:
        raise ValueError("recursion depth n must be >= 0")
    m = p.m if m is None else m
    q = params_for_m(p, m)
    a, b = 2 - p.alpha, 2 - p.beta
    s0 = q.mu - n
    top = n + td.N + 1
    for j in range(-1, top + 2):
        if (a + s0 + j - 1) * (b + s0 + j - 1) == 0:
            raise DegenerateParameterError(f"(a + s - 1)(b + s - 1) vanishes at s = {s0 + j}")
    C, D, rho = _run_recursion(a, b, top)
    state = RegulatorRecursionState(p, td, n, s0, a, b, C, D, rho, RationalFunction.const(0), RationalFunction.const(0))
    state.E1, state.E2 = state.E(n)
    return state


def recursion_by_products(p: HGParams, s0: Fraction, i: int, left_first: bool = True):
    """``(C_i(s0), D_i(s0))`` from ``M(s0) M(s0+1) ... M(s0+i) (0, 1)^T`` in exact arithmetic.

    ``left_first`` chooses the association order of the matrix product.
    """
    a, b = 2 - p.alpha, 2 - p.beta
    lam = RationalFunction.x()
    inv = 1 / (lam - 1)

    def M(s):
        den = (a + s - 1) * (b + s - 1)
        if den == 0:
            raise DegenerateParameterError(f"(a + s - 1)(b + s - 1) vanishes at s = {s}")
        A = (RationalFunction.const(s * (a + b + 2 * s - 3)) - s * s / (1 - lam)) * Fraction(1, 1) / den
        B = lam * (s * (1 - s) / den)
        return [[A, inv], [B, RationalFunction.const(0)]]

    def mul(X, Y):
        return [[X[r][0] * Y[0][c] + X[r][1] * Y[1][c] for c in range(2)] for r in range(2)]

    mats = [M(s0 + j) for j in range(i + 1)]
    if not mats:
        return RationalFunction.const(0), RationalFunction.const(1)
    if left_first:
        P = mats[0]
        for X in mats[1:]:
            P = mul(P, X)
    else:
        P = mats[-1]
        for X in reversed(mats[:-1]):
            P = mul(X, P)
    return P[0][1], P[1][1]


# --- three-term congruence --------------------------------------------------------


def default_exterior_sample(count: int = 72, seed: int = 0, rmin: float = 0.2, rmax: float = 0.95):
    """Points with ``|1 - lambda| > 1``: ``x = 1/(1 - lambda)`` in an annulus, off the negative axis.

    Two thirds of the points lie in ``rmin <= |x| <= 0.7`` and one third in
    ``0.8 <= |x| <= rmax``, so the default radial split fits on the inner
    ring and scores extrapolation towards the branch point ``x = 1``.
    """
    rng = np.random.default_rng(seed)
    n_in = count - count // 3
    r = np.concatenate([rng.uniform(rmin, 0.7, n_in), rng.uniform(0.8, rmax, count - n_in)])
    phi = rng.uniform(-0.85 * math.pi, 0.85 * math.pi, count)
    x = r * np.exp(1j * phi)
    return 1 - 1 / x


def _F3(s: Fraction, a, b, x):
    return hyp3f2(1, 1, float(1 - s), float(a), float(b), x)


def three_term_residual(p: HGParams, i: int, lam, s0: Fraction | None = None, literal: bool = False, state=None):
    """``F(s+i) - (lambda - 1) C_i F(s) - D_i F(s-1)`` at ``s = s0`` (default ``mu``).

    ``literal=True`` drops the ``lambda - 1`` factor (the uncorrected form).
    Returns ``(R, scale)`` arrays, ``scale`` being the largest term magnitude.
    """
    s0 = p.mu if s0 is None else s0
    a, b = 2 - p.alpha, 2 - p.beta
    if state is None:
        C, D, _ = _run_recursion(a, b, max(i, 0))
    else:
        C, D = state.C, state.D
    Ci, Di = _instantiate(C[i], s0), _instantiate(D[i], s0)
    lam = np.asarray(lam, dtype=complex)
    x = 1 / (1 - lam)
    fac = 1 if literal else (lam - 1)
    t0 = _F3(s0 + i, a, b, x)
    t1 = fac * Ci(lam) * _F3(s0, a, b, x)
    t2 = Di(lam) * _F3(s0 - 1, a, b, x)
    scale = np.maximum(np.maximum(np.abs(t0), np.abs(t1)), np.abs(t2))
    return t0 - t1 - t2, scale


@dataclass(frozen=True)
class ThreeTermReport:
    i: int
    fit_residual: float
    oracle_residual: float  # against the exact rho_i
    condition: float
    samples: int
    literal: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def check_three_term_congruence(
    p: HGParams, i: int, sample=None, literal: bool = False, deg: int | None = None
) -> ThreeTermReport:
    """Fit ``R(lambda)`` by a rational function of degree ``<= i + 3`` over ``<= i + 3``.

    The fit runs in ``x = 1/(1 - lambda)`` (same degree class, better
    conditioned), on the inner two thirds of the sample by ``|x|``; the
    residual is measured on the outer third. ``R`` is also compared with the
    exact remainder ``rho_i``.
    """
    if i < -1:
        raise ValueError("i must be >= -1")
    sample = default_exterior_sample() if sample is None else np.asarray(sample, dtype=complex)
    if len(sample) < 40:
        raise FitError("at least 40 sample points are required")
    if np.any(np.abs(1 - sample) <= 1):
        raise FitError("samples must satisfy |1 - lambda| > 1")
    a, b = 2 - p.alpha, 2 - p.beta
    C, D, rho = _run_recursion(a, b, max(i, 0))
    R, scale = three_term_residual(p, i, sample, literal=literal, state=_Bundle(C, D))
    exact = _instantiate(rho[i], p.mu)(sample)
    oracle = float(np.max(np.abs(R - exact)) / np.max(scale))
    rel = float(np.max(np.abs(R)) / np.max(scale))
    if rel < 1e-12:
        # R vanishes to rounding: trivially rational
        return ThreeTermReport(i, rel, oracle, 1.0, len(sample), literal)
    d = i + 3 if deg is None else deg
    x = 1 / (1 - sample)
    fit = fit_rational(x, R, d, d, test_mask=radial_test_mask(np.abs(x)))
    return ThreeTermReport(i, fit.residual, oracle, fit.condition, len(sample), literal)


@dataclass
class _Bundle:
    C: dict
    D: dict


# --- regulator congruence ------------------------------------------------------------


@dataclass(frozen=True)
class RegulatorReport:
    variant: str
    m: int
    n: int
    C_estimate: complex
    C_expected: float
    fit_residual: float
    oracle_residual: float
    condition: float
    literal: bool

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["C_estimate"] = [self.C_estimate.real, self.C_estimate.imag]
        return d


def _regulator_terms(p, td, m_target, r, lam, literal, state):
    q = params_for_m(p, m_target)
    s0 = q.mu - r
    shift = (s0 - p.mu)
    assert shift.denominator == 1
    shift = int(shift)
    E1, E2 = state.E(r, s0)
    Hs = eval_H_mu(p, lam, shift)
    Hs1 = eval_H_mu(p, lam, shift - 1)
    bracket = E1(lam) * Hs + E2(lam) * Hs1
    if literal:
        Y = (1 - lam) ** r * bracket
    else:
        Y = pow_lambda_minus_one(lam, r + 1) * bracket
    Q = eval_Q_m(p, td, m_target, lam)
    norm = pow_lambda_minus_one(lam, q.mu - 1)
    exact = state.remainder(r, s0)(lam) / float(q.l * (1 - p.alpha) * (1 - p.beta))
    return Q / norm, Y / norm, exact


def check_regulator_congruence(
    p: HGParams,
    td: ThetaData,
    m: int | None = None,
    sample=None,
    n: int = 0,
    variant: str = "phi1",
    literal: bool = False,
    deg: int | None = None,
) -> RegulatorReport:
    """Test ``Q ~ C (lambda - 1)^(r+1) [E1^(r) H_s + E2^(r) H_{s-1}]`` modulo rational functions.

    ``variant="phi1"`` targets ``Q_m`` with ``r = n``; ``"phi2"`` targets
    ``Q_{m-l}`` with ``r = n - 1``. Both use base ``s = m/l - n``. Everything
    is divided by ``(lambda - 1)^(m/l - 1)`` so the remainder is a rational
    function of lambda. ``C`` is estimated on the inner ring jointly with a
    Laurent-polynomial remainder in ``x = 1/(1 - lambda)``; then a rational
    fit of degree ``r + N + 2`` of ``normalized Q - C * normalized form`` is
    scored on the outer ring.
    ``literal=True`` uses the factor ``(1 - lambda)^r`` instead.
    """
    m = p.m if m is None else m
    if variant == "phi1":
        m_target, r = m, n
    elif variant == "phi2":
        if n < 1:
            raise ValueError("the phi2 variant needs n >= 1")
        m_target, r = m - p.l, n - 1
    else:
        raise ValueError("variant must be 'phi1' or 'phi2'")
    sample = default_exterior_sample() if sample is None else np.asarray(sample, dtype=complex)
    if np.any(np.abs(1 - sample) <= 1):
        raise FitError("samples must satisfy |1 - lambda| > 1")
    if np.any(boundary_distance("exterior_of_1", sample) <= 0):
        raise FitError("samples must avoid the cut lambda >= 2")
    state = regulator_recursion(p, td, n, m)
    qn, yn, exact = _regulator_terms(p, td, m_target, r, sample, literal, state)
    x = 1 / (1 - sample)
    test = radial_test_mask(np.abs(x))
    span = r + td.N + 3
    _, C_est, _ = fit_laurent(x[~test], qn[~test], -span, span, extra=yn[~test])
    rem = qn - C_est * yn
    oracle = float(np.max(np.abs(qn - yn / p.l - exact)) / np.max(np.abs(qn)))
    rel = float(np.max(np.abs(rem)) / np.max(np.abs(qn)))
    if rel < 1e-12:
        # the remainder vanishes to rounding: trivially rational
        return RegulatorReport(variant, m, n, C_est, 1 / p.l, rel, oracle, 1.0, literal)
    d = r + td.N + 2 if deg is None else deg
    fit = fit_rational(x, rem, d, d, test_mask=test)
    return RegulatorReport(variant, m, n, C_est, 1 / p.l, fit.residual, oracle, fit.condition, literal)
