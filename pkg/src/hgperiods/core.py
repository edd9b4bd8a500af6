"""Scalar special functions: Pochhammer symbols, gamma/beta, and pFq series.

Everything here works in double precision complex arithmetic. Exact inputs
(ints and ``Fraction``) are accepted wherever a complex number is, and
:func:`pochhammer` stays exact on them.

Branch conventions
------------------
:func:`cpow` is the principal power, ``arg z in (-pi, pi]``. Negative zero
imaginary parts are folded to ``+0`` first so that ``cpow(-1, s)`` is always
``exp(i pi s)``.

:func:`pow_lambda_minus_one` is the power ``(lambda - 1)**s`` used by every
function of ``lambda`` downstream. It equals the principal power on the
closed upper half plane (and on the real line left of 1) and is continued
into the lower half plane, so its cut is the ray ``lambda > 1`` and
``arg(lambda - 1) in (0, 2 pi]``. Cauchy-circle differentiation around the
real points the formulas are usually evaluated at (``0 < lambda < 1`` and
``lambda < 0``) would otherwise straddle the principal cut.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, NonConvergenceError, PoleError

__all__ = [
    "TruncationPolicy",
    "HGSeriesSpec",
    "pochhammer",
    "gamma",
    "beta",
    "gamma_product",
    "eval_pFq",
    "pfq_values",
    "cpow",
    "pow_lambda_minus_one",
    "is_nonpositive_integer",
]

# Godfrey's coefficients for g = 607/128 (15 terms).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class TruncationPolicy:
    relative_tolerance: float = 1e-13
    max_terms: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.relative_tolerance < 1.0:
            raise ValueError("relative_tolerance must lie in (0, 1)")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class HGSeriesSpec:
    """Parameters of ``pF(p-1)(upper; lower; x)``."""

    upper_params: tuple = ()
    lower_params: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "upper_params", tuple(self.upper_params))
        object.__setattr__(self, "lower_params", tuple(self.lower_params))
        if len(self.upper_params) != len(self.lower_params) + 1:
            raise ValueError("need len(upper_params) == len(lower_params) + 1")
        for b in self.lower_params:
            if is_nonpositive_integer(b):
                raise PoleError(f"lower parameter {b} is a non-positive integer")

    @property
    def p(self) -> int:
        return len(self.upper_params)


def is_nonpositive_integer(z, tol: float = 0.0) -> bool:
    if isinstance(z, (int, Fraction)):
        return z <= 0 and Fraction(z).denominator == 1
    z = complex(z)
    if abs(z.imag) > tol:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= tol


def _is_finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


def pochhammer(alpha, n: int):
    """Rising factorial ``(alpha)_n``; exact for int/Fraction ``alpha``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if isinstance(alpha, (int, Fraction)):
        out = Fraction(1)
        for i in range(n):
            out *= alpha + i
        return out
    out = 1.0 + 0.0j
    a = complex(alpha)
    for i in range(n):
        out *= a + i
    return out


def _sinpi(z: complex) -> complex:
    # exact reduction of the real part keeps sin(pi z) accurate near integers
    x = z.real - 2.0 * round(z.real / 2.0)
    return cmath.sin(math.pi * complex(x, z.imag))


def gamma(z) -> complex:
    """Gamma function via a 15-term Lanczos sum, reflected for ``Re z < 1/2``."""
    z = complex(z)
    if not _is_finite(z):
        raise ValueError(f"non-finite argument {z}")
    if is_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        s = _sinpi(z)
        return math.pi / (s * gamma(1.0 - z))
    x = z - 1.0
    acc = _LANCZOS_COEF[0]
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (x + k)
    t = x + _LANCZOS_G + 0.5
    return _SQRT_2PI * cmath.exp((x + 0.5) * cmath.log(t) - t) * acc


def beta(a, b) -> complex:
    """``B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)``."""
    return gamma_product([a, b], [complex(a) + complex(b)])


def gamma_product(numer: Sequence, denom: Sequence) -> complex:
    """``prod Gamma(numer_i) / prod Gamma(denom_j)``.

    Poles in either list raise :class:`PoleError`; a pole in the denominator
    would make the value zero, but the callers never want that silently.
    """
    out = 1.0 + 0.0j
    for a in numer:
        out *= gamma(a)
    for b in denom:
        out /= gamma(b)
    return out


def cpow(z, s) -> complex:
    """Principal power ``z**s`` with ``arg z in (-pi, pi]``."""
    z = complex(z) + 0.0  # folds -0.0 imaginary parts to +0.0
    if z == 0:
        if complex(s).real > 0:
            return 0j
        raise PoleError("0 raised to a non-positive power")
    return cmath.exp(complex(s) * cmath.log(z))


def pow_lambda_minus_one(lam, s):
    """``(lam - 1)**s`` with ``arg(lam - 1) in (0, 2 pi]`` (cut on ``lam > 1``).

    Works elementwise on numpy arrays.
    """
    s = complex(s)
    if np.ndim(lam):
        lam = np.asarray(lam, dtype=complex)
        w = (1.0 - lam) + 0.0
        if np.any(w == 0):
            raise PoleError("(lambda - 1)**s evaluated at lambda = 1")
        return np.exp(s * (np.log(w) + 1j * math.pi))
    w = (1.0 - complex(lam)) + 0.0
    if w == 0:
        if s.real > 0:
            return 0j
        raise PoleError("(lambda - 1)**s evaluated at lambda = 1")
    return cmath.exp(s * (cmath.log(w) + 1j * math.pi))


_EPS = np.finfo(float).eps


def _series(upper, lower, x: np.ndarray, policy: TruncationPolicy):
    """Vectorized partial sums with the 3-consecutive-small-terms rule."""
    upper = [complex(a) for a in upper]
    lower = [complex(b) for b in lower]
    x = np.asarray(x, dtype=complex)
    absx = np.abs(x)
    total = np.ones_like(x)
    term = np.ones_like(x)
    small = np.zeros(x.shape, dtype=int)
    done = np.zeros(x.shape, dtype=bool)
    err = np.zeros(x.shape)
    absum = np.ones(x.shape)
    used = np.ones(x.shape, dtype=int)
    tol = policy.relative_tolerance
    for n in range(policy.max_terms):
        num = 1.0 + 0.0j
        den = complex(n + 1)
        for a in upper:
            num *= a + n
        for b in lower:
            den *= b + n
        ratio = num / den
        nxt = term * ratio * x
        active = ~done
        total = np.where(active, total + nxt, total)
        used = np.where(active, n + 2, used)
        tiny = np.abs(nxt) < tol * np.abs(total)
        small = np.where(active & tiny, small + 1, np.where(active, 0, small))
        absum = np.where(active, absum + np.abs(nxt), absum)
        # the tail is geometric once the term ratio is below one; the first
        # omitted term is nxt * ratio_(n+1) * x
        num1, den1 = 1.0 + 0.0j, complex(n + 2)
        for a in upper:
            num1 *= a + n + 1
        for b in lower:
            den1 *= b + n + 1
        r_next = abs(num1 / den1) * absx
        r = np.maximum(r_next, absx)
        stop = active & (small >= 3) & (r < 1.0)
        if np.any(stop):
            tail = np.abs(nxt) * r_next / np.where(r < 1.0, 1.0 - r, 1.0)
            rounding = _EPS * absum * math.sqrt(n + 2)
            err = np.where(stop, tail + rounding, err)
            done = done | stop
        # a terminating series has an exact zero term
        zero_hit = active & (nxt == 0) & (term != 0) & (ratio == 0)
        if np.any(zero_hit):
            err = np.where(zero_hit, 0.0, err)
            done = done | zero_hit
        term = nxt
        if done.all():
            break
    else:
        bad = int(np.count_nonzero(~done))
        raise NonConvergenceError(
            f"pFq series did not converge in {policy.max_terms} terms at {bad} point(s)"
        )
    return total, err, used


def _check_pfq_domain(spec: HGSeriesSpec, x: np.ndarray):
    ax = np.abs(x)
    if np.all(ax < 1.0):
        return
    if np.any(ax > 1.0) or np.any((ax == 1.0) & (x != 1.0)):
        raise DomainError("pFq series requires |x| < 1 (continuation is not done here)")
    balance = sum(complex(b) for b in spec.lower_params) - sum(
        complex(a) for a in spec.upper_params
    )
    if balance.real <= 0:
        raise DomainError("pFq at x = 1 diverges unless Re(sum(lower) - sum(upper)) > 0")


def _terminates(spec: HGSeriesSpec) -> bool:
    return any(is_nonpositive_integer(a) for a in spec.upper_params)


def eval_pFq(spec: HGSeriesSpec, x, policy: TruncationPolicy = DEFAULT_POLICY):
    """Evaluate ``pF(p-1)`` by direct summation.

    Returns ``(value, est_error, terms_used)``. ``x`` may be a scalar or a
    numpy array, in which case all three outputs are arrays.
    """
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=complex))
    if not np.all(np.isfinite(xa)):
        raise ValueError("non-finite argument")
    if not _terminates(spec):
        _check_pfq_domain(spec, xa)
    if spec.p == 2 and np.any(xa == 1.0) and not _terminates(spec):
        # Gauss summation; the series itself converges too slowly at x = 1
        a, b = spec.upper_params
        (c,) = spec.lower_params
        c, a, b = complex(c), complex(a), complex(b)
        gauss = gamma_product([c, c - a - b], [c - a, c - b])
        at_one = xa == 1.0
        vals = np.empty_like(xa)
        errs = np.zeros(xa.shape)
        used = np.zeros(xa.shape, dtype=int)
        vals[at_one] = gauss
        if np.any(~at_one):
            v, e, u = _series(spec.upper_params, spec.lower_params, xa[~at_one], policy)
            vals[~at_one], errs[~at_one], used[~at_one] = v, e, u
    else:
        vals, errs, used = _series(spec.upper_params, spec.lower_params, xa, policy)
    if not np.all(np.isfinite(vals)):
        raise NonConvergenceError("pFq partial sum overflowed")
    if scalar:
        return complex(vals[0]), float(errs[0]), int(used[0])
    return vals, errs, used


def pfq_values(upper, lower, x, policy: TruncationPolicy = DEFAULT_POLICY):
    """Convenience wrapper returning only the value(s)."""
    return eval_pFq(HGSeriesSpec(tuple(upper), tuple(lower)), x, policy)[0]


def hyp2f1(a, b, c, x, policy: TruncationPolicy = DEFAULT_POLICY):
    return pfq_values((a, b), (c,), x, policy)


def hyp3f2(a1, a2, a3, b1, b2, x, policy: TruncationPolicy = DEFAULT_POLICY):
    return pfq_values((a1, a2, a3), (b1, b2), x, policy)
