"""Tanh-sinh quadrature on (0, 1) and the Euler-integral checks built on it.

The substitution ``t = (1 + tanh(pi/2 sinh u)) / 2`` clusters nodes
double-exponentially at both endpoints. Nodes are generated together with
``1 - t`` and both logarithms, so algebraic endpoint weights
``t^p (1 - t)^q`` are applied in log space and never overflow or lose
precision next to the endpoints.
"""

from __future__ import annotations

import functools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from .core import beta, hyp2f1, hyp3f2, pow_lambda_minus_one
from .errors import DomainError, HypothesisError, IntegrationError
from .functions import eval_H_mu
from .params import HGParams

__all__ = [
    "WeightedIntegrand",
    "integrate_01",
    "verify_int_rep_2F1",
    "verify_int_rep_3F2",
    "verify_H_integral",
    "H_integral",
    "Q_integral",
    "pow_upper_branch",
    "hyp2f1_near_one",
]

MAX_LEVELS = 12


@dataclass(frozen=True)
class WeightedIntegrand:
    """``t^exponent_left (1 - t)^exponent_right smooth_part(t, 1 - t)``.

    ``smooth_part`` receives both ``t`` and ``1 - t`` as arrays so that it can
    resolve behaviour next to ``t = 1`` without cancellation.
    """

    exponent_left: float
    exponent_right: float
    smooth_part: Callable[[np.ndarray, np.ndarray], np.ndarray]

    def __post_init__(self):
        if not (self.exponent_left > -1 and self.exponent_right > -1):
            raise DomainError(
                f"non-integrable weight: exponents ({self.exponent_left}, {self.exponent_right}) must exceed -1"
            )


def _nodes(u: np.ndarray):
    v = 0.5 * math.pi * np.sinh(u)
    log_t = -np.logaddexp(0.0, -2.0 * v)
    log_omt = -np.logaddexp(0.0, 2.0 * v)
    t = np.exp(log_t)
    omt = np.exp(log_omt)
    # dt/du = pi cosh(u) t (1 - t)
    log_jac = np.log(math.pi * np.cosh(u)) + log_t + log_omt
    return t, omt, log_t, log_omt, log_jac


def _u_max(w: WeightedIntegrand) -> float:
    # the weight decays like exp(-2 v (e + 1)) at each end; make that < 1e-18
    e = min(w.exponent_left, w.exponent_right) + 1.0
    v = min(21.0 / e, 1e4)
    return math.asinh(v / (0.5 * math.pi))


def _sum(w: WeightedIntegrand, u: np.ndarray) -> complex:
    t, omt, log_t, log_omt, log_jac = _nodes(u)
    logw = w.exponent_left * log_t + w.exponent_right * log_omt + log_jac
    weight = np.exp(logw)
    keep = weight > 0
    if not keep.any():
        return 0j
    vals = np.asarray(w.smooth_part(t[keep], omt[keep]), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise IntegrationError("integrand is not finite at a quadrature node")
    return complex(np.sum(weight[keep] * vals))


def integrate_01(w: WeightedIntegrand, tol: float = 1e-12, max_levels: int = MAX_LEVELS):
    """Return ``(value, est_error)``; the estimate is the last level-to-level change.

    Raises :class:`IntegrationError` when ``est_error > tol * max(1, |value|)``
    after ``max_levels`` halvings of the step.
    """
    umax = _u_max(w)
    h = 0.5
    k = np.arange(-math.ceil(umax / h), math.ceil(umax / h) + 1)
    total = _sum(w, k * h)
    prev = h * total
    est = math.inf
    for _ in range(max_levels):
        h /= 2
        odd = np.arange(-math.ceil(umax / h), math.ceil(umax / h) + 1)
        odd = odd[odd % 2 == 1]
        total += _sum(w, odd * h)
        cur = h * total
        est = abs(cur - prev)
        if est <= tol * max(1.0, abs(cur)) and h <= 1 / 16:
            return cur, est
        prev = cur
    raise IntegrationError(f"tanh-sinh tolerance {tol:g} not met after {max_levels} levels (est {est:.3g})")


def _residual(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def verify_int_rep_2F1(a, b, c, x, tol: float = 1e-12) -> float:
    """Normalized gap between the Euler integral and ``B(b, c - b) 2F1(a, b; c; x)``."""
    a, b, c = (float(Fraction(v)) if isinstance(v, (Fraction, str)) else v for v in (a, b, c))
    x = complex(x)
    if not (np.real(b) > 0 and np.real(c - b) > 0):
        raise DomainError("need Re b > 0 and Re(c - b) > 0")
    if abs(x) >= 1 or (x.imag == 0 and x.real >= 1):
        raise DomainError("need |x| < 1")
    w = WeightedIntegrand(
        float(np.real(b)) - 1, float(np.real(c - b)) - 1, lambda t, omt: (1 - x * t) ** (-a)
    )
    lhs, _ = integrate_01(w, tol)
    rhs = beta(b, c - b) * hyp2f1(a, b, c, x)
    return _residual(lhs, rhs)


def verify_int_rep_3F2(a, b, c, d, e, x, tol: float = 1e-12) -> float:
    """Normalized gap for ``int_0^1 2F1(a,b;d;xt) t^(c-1)(1-t)^(e-c-1) dt = B(c,e-c) 3F2``."""
    a, b, c, d, e = (float(Fraction(v)) if isinstance(v, (Fraction, str)) else v for v in (a, b, c, d, e))
    x = complex(x)
    if not (np.real(c) > 0 and np.real(e - c) > 0):
        raise DomainError("need Re c > 0 and Re(e - c) > 0")
    if abs(x) >= 1:
        raise DomainError("need |x| < 1")
    w = WeightedIntegrand(
        float(np.real(c)) - 1,
        float(np.real(e - c)) - 1,
        lambda t, omt: hyp2f1(a, b, d, x * t),
    )
    lhs, _ = integrate_01(w, tol)
    rhs = beta(c, e - c) * hyp3f2(a, b, c, d, e, x)
    return _residual(lhs, rhs)


# --- the integrals behind H_mu and Q_m ---------------------------------------


def pow_upper_branch(z, s):
    """``z^s`` with ``arg z`` in ``(0, 2 pi]``, the branch used for ``(lambda - 1)^s``."""
    return pow_lambda_minus_one(np.asarray(z, dtype=complex) + 1, s)


_local = threading.local()


def _mp():
    # a private context per thread: workdps on the shared one races under the verify pool
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = _local.ctx = mpmath.MPContext()
        ctx.dps = 45
    return ctx


@functools.lru_cache(maxsize=1 << 16)
def hyp2f1_near_one(a, b, c, t: float, omt: float, derivative: bool = False) -> complex:
    """``2F1(a, b; c; t)`` for real ``t`` in (0, 1), accurate up to ``t -> 1``.

    ``omt`` (= 1 - t) is passed separately; the point is rebuilt in extended
    precision. Cached: quadrature nodes repeat across ``lambda``. With ``derivative=True`` returns ``(1 - t) d/dt 2F1``, which
    stays finite at ``t = 1`` when ``c - a - b = 0``.
    """
    omt = max(omt, 1e-30)
    mp = _mp()
    tt = 1 - mp.mpf(omt) if t > 0.5 else mp.mpf(t)
    if derivative:
        # (1 - t) * (ab/c) 2F1(a+1, b+1; c+1; t) via Euler's transformation
        val = (a * b / c) * mp.hyp2f1(c - a, c - b, c + 1, tt) * (1 - tt) ** (c - a - b)
    else:
        val = mp.hyp2f1(a, b, c, tt)
    return complex(val)


def _H_kernel(p: HGParams, lam: complex, nu: float):
    """Smooth part ``(lambda - t)^(nu - 1) 2F1(1-a, 1-b; 2-a-b; t)`` as a vectorized callable."""
    a, b = float(p.alpha), float(p.beta)
    A, B, C = 1 - a, 1 - b, 2 - a - b

    def g(t, omt):
        f = np.array([hyp2f1_near_one(A, B, C, float(ti), float(oi)) for ti, oi in zip(t, omt)])
        return pow_upper_branch(lam - t, nu - 1) * f

    return g


def _check_H_point(lam: complex):
    if abs(1 - lam) <= 1:
        raise DomainError(f"lambda = {lam} must satisfy |1 - lambda| > 1")
    if lam.imag == 0 and 0 <= lam.real <= 1:
        raise DomainError("lambda must stay off [0, 1]")


def H_integral(p: HGParams, lam, shift: int = 0, tol: float = 1e-12) -> complex:
    """``B(1-a, 1-b) int_0^1 (lambda - t)^(mu-1) t^(1-a-b) 2F1(1-a,1-b;2-a-b;t) dt``."""
    lam = complex(lam)
    _check_H_point(lam)
    nu = float(p.mu + shift)
    a, b = float(p.alpha), float(p.beta)
    w = WeightedIntegrand(1 - a - b, 0.0, _H_kernel(p, lam, nu))
    val, _ = integrate_01(w, tol)
    return beta(1 - a, 1 - b) * val


def verify_H_integral(p: HGParams, lam, tol: float = 1e-12) -> float:
    """Normalized gap between :func:`H_integral` and the series ``H_mu``.

    Only runs under the full hypotheses on ``p`` (``mu`` non-integral etc.).
    """
    problems = p.violations()
    if problems:
        raise HypothesisError(problems)
    lam = complex(lam)
    return _residual(H_integral(p, lam, tol=tol), complex(eval_H_mu(p, lam)))


def Q_integral(p: HGParams, td, lam, shift: int = 0, tol: float = 1e-12) -> complex:
    """``(1/l) B(1-a,1-b) int_0^1 (lambda - t)^(mu-1) theta(g)(t) dt``, ``g = t^(1-a-b) 2F1(...)``.

    ``theta = p0 + p1 d/dt``. ``p1`` carries the factor ``t(1 - t)``, which
    tames ``g'`` at both endpoints: ``p1 g' = p1/t (1-a-b) t^(1-a-b) f +
    p1/(1-t) t^(1-a-b) (1-t) f'``.
    """
    lam = complex(lam)
    _check_H_point(lam)
    nu = float(p.mu + shift)
    a, b = float(p.alpha), float(p.beta)
    A, B, C = 1 - a, 1 - b, 2 - a - b
    p0 = [float(c) for c in td.p0.coeffs]
    p1_over_t = [float(c) for c in (td.p1 // td.p1.x()).coeffs] if not td.p1.is_zero() else []
    p1_over_omt = [float(c) for c in (td.p1 // (1 - td.p1.x())).coeffs] if not td.p1.is_zero() else []

    def poly(cs, t):
        return np.polynomial.polynomial.polyval(t, cs) if cs else np.zeros_like(t)

    def g(t, omt):
        f = np.array([hyp2f1_near_one(A, B, C, float(ti), float(oi)) for ti, oi in zip(t, omt)])
        fp = np.array([hyp2f1_near_one(A, B, C, float(ti), float(oi), True) for ti, oi in zip(t, omt)])
        # integrand divided by the weight t^(1-a-b)
        body = poly(p0, t) * f + poly(p1_over_t, t) * (1 - a - b) * f + poly(p1_over_omt, t) * fp
        return pow_upper_branch(lam - t, nu - 1) * body

    w = WeightedIntegrand(1 - a - b, 0.0, g)
    val, _ = integrate_01(w, tol)
    return beta(1 - a, 1 - b) * val / p.l
