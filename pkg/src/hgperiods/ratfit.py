"""Linearized least-squares rational fits used as falsifiable 'is this rational?' tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FitError

__all__ = ["RationalFit", "fit_rational", "fit_laurent", "radial_test_mask"]


@dataclass(frozen=True)
class RationalFit:
    num: np.ndarray  # coefficients in the fit variable, low degree first
    den: np.ndarray
    residual: float  # max |y - fit| / max |y| on the held-out points
    train_residual: float
    condition: float  # sigma_max / sigma_min of the linearized system
    gap: float  # sigma_min / sigma_second_smallest; tiny when the ansatz fits

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        return np.polynomial.polynomial.polyval(x, self.num) / np.polynomial.polynomial.polyval(x, self.den)

    def to_dict(self) -> dict:
        return {"residual": self.residual, "train_residual": self.train_residual, "condition": self.condition}


def _split(x, y, holdout: float):
    n = len(x)
    k = max(int(round(n * holdout)), 1) if holdout > 0 else 0
    idx = np.arange(n)
    test = idx[::max(n // k, 1)][:k] if k else idx[:0]
    train = np.setdiff1d(idx, test)
    return train, test


def _rel(y, f):
    scale = np.max(np.abs(y))
    return float(np.max(np.abs(y - f)) / scale) if scale > 0 else float(np.max(np.abs(f)))


def radial_test_mask(r, outer_fraction: float = 1 / 3) -> np.ndarray:
    """Mark the ``outer_fraction`` of points with the largest ``r`` as test points."""
    r = np.asarray(r, dtype=float)
    cut = np.quantile(r, 1 - outer_fraction)
    return r > cut


def fit_rational(
    x, y, deg_num: int, deg_den: int, holdout: float = 0.25, test_mask=None
) -> RationalFit:
    """Fit ``y ~ P(x)/Q(x)`` with ``deg P <= deg_num``, ``deg Q <= deg_den``.

    Solves ``P(x_j) - y_j Q(x_j) = 0`` in the least-squares sense through the
    smallest right singular vector (unit-norm coefficients), after scaling
    ``x`` to the unit disc. Residuals are measured on held-out points: an
    interleaved ``holdout`` fraction, or the points flagged by ``test_mask``
    (e.g. an outer ring, which turns the check into an extrapolation test
    that smooth non-rational data fails).
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    n_unknown = deg_num + deg_den + 2
    if test_mask is not None:
        test_mask = np.asarray(test_mask, dtype=bool)
        idx = np.arange(len(x))
        train, test = idx[~test_mask], idx[test_mask]
    else:
        train, test = _split(x, y, holdout)
    if len(train) < n_unknown + 2:
        raise FitError(f"need at least {n_unknown + 2} training points, got {len(train)}")
    xs = max(np.max(np.abs(x)), 1e-300)
    u = x / xs
    yscale = np.max(np.abs(y[train])) or 1.0
    yy = y / yscale
    V_num = np.vander(u[train], deg_num + 1, increasing=True)
    V_den = np.vander(u[train], deg_den + 1, increasing=True)
    A = np.hstack([V_num, -yy[train, None] * V_den])
    _, sv, vh = np.linalg.svd(A)
    coef = vh[-1].conj()
    pn, qd = coef[: deg_num + 1], coef[deg_num + 1 :]
    if np.max(np.abs(qd)) == 0:
        raise FitError("degenerate fit: denominator vanished")
    scale_pow_n = xs ** -np.arange(deg_num + 1)
    scale_pow_d = xs ** -np.arange(deg_den + 1)
    num = pn * scale_pow_n * yscale
    den = qd * scale_pow_d
    fit = RationalFit(
        num,
        den,
        0.0,
        0.0,
        float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf"),
        float(sv[-1] / sv[-2]) if len(sv) > 1 and sv[-2] > 0 else 0.0,
    )
    train_res = _rel(y[train], fit(x[train]))
    test_res = _rel(y[test], fit(x[test])) if len(test) else train_res
    if not np.isfinite(test_res):
        raise FitError("rational fit produced a pole at a sample point")
    return RationalFit(num, den, test_res, train_res, fit.condition, fit.gap)


def fit_laurent(x, y, lo: int, hi: int, extra=None):
    """Least squares ``y ~ sum_{j=lo}^{hi} c_j x^j (+ C * extra)``.

    Returns ``(coeffs, C, residual)``; ``C`` is ``None`` without ``extra``.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    cols = [x**j for j in range(lo, hi + 1)]
    if extra is not None:
        cols.append(np.asarray(extra, dtype=complex))
    A = np.column_stack(cols)
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    res = _rel(y, A @ sol) if len(y) else 0.0
    if extra is not None:
        return sol[:-1], complex(sol[-1]), res
    return sol, None, res
