"""Analytic continuation by integrating linear ODEs along paths in C minus {0, 1}.

Loops are based at ``BASE_POINT = 0.5`` and composed with the rule that
continuing along ``gamma`` then ``delta`` multiplies matrices as
``M_delta @ M_gamma``. With ``gamma_0``, ``gamma_1`` counterclockwise around
0 and 1 and ``gamma_inf`` a clockwise loop around both (positive around
infinity), ``gamma_0 gamma_1 gamma_inf`` is null-homotopic, so
``M_inf @ M_1 @ M_0 = I``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .core import hyp2f1
from .diffop import DiffOperator, build_D, build_H_annihilator
from .errors import DomainError, IntegrationError, NonConvergenceError
from .functions import eval_F_mu, eval_G_mu, eval_H_mu
from .params import HGParams

__all__ = [
    "PathSpec",
    "MonodromyMatrix",
    "BASE_POINT",
    "integrate_ode",
    "continue_solutions",
    "loop_at_zero",
    "loop_at_one",
    "loop_at_infinity",
    "monodromy_along",
    "monodromy_at_zero",
    "monodromy_at_one",
    "monodromy_at_infinity",
    "H_factor_at_infinity",
    "laurent_coefficients",
    "laurent_solution_check",
]

BASE_POINT = 0.5
SINGULAR = (0.0, 1.0)
MIN_CLEARANCE = 0.05


@dataclass(frozen=True)
class PathSpec:
    """A circle arc or a polyline; a list of pieces is a concatenated path.

    ``circle``: ``center + radius exp(i(start_angle + 2 pi turns tau))``,
    ``tau`` in [0, 1]; negative ``turns`` run clockwise.
    """

    kind: str
    center: complex = 0j
    radius: float = 0.0
    turns: float = 1.0
    start_angle: float = 0.0
    points: tuple = ()

    def __post_init__(self):
        if self.kind not in ("circle", "polyline"):
            raise ValueError("kind must be 'circle' or 'polyline'")
        if self.kind == "polyline" and len(self.points) < 1:
            raise ValueError("a polyline needs at least one point")

    @classmethod
    def circle(cls, center, radius, turns=1.0, start_angle=0.0):
        return cls("circle", complex(center), float(radius), float(turns), float(start_angle))

    @classmethod
    def polyline(cls, points):
        return cls("polyline", points=tuple(complex(z) for z in points))

    @property
    def base_point(self) -> complex:
        if self.kind == "circle":
            return self.center + self.radius * cmath.exp(1j * self.start_angle)
        return self.points[0]

    @property
    def end_point(self) -> complex:
        if self.kind == "circle":
            return self.center + self.radius * cmath.exp(1j * (self.start_angle + 2 * math.pi * self.turns))
        return self.points[-1]

    def pieces(self):
        """Yield ``(z(tau), z'(tau))`` callables on ``tau`` in [0, 1]."""
        if self.kind == "circle":
            c, r, phi0, w = self.center, self.radius, self.start_angle, 2 * math.pi * self.turns
            if r == 0 or w == 0:
                return
            yield (
                lambda tau: c + r * np.exp(1j * (phi0 + w * tau)),
                lambda tau: 1j * w * r * np.exp(1j * (phi0 + w * tau)),
            )
            return
        for z0, z1 in zip(self.points, self.points[1:]):
            if z0 == z1:
                continue
            yield (lambda tau, z0=z0, z1=z1: z0 + (z1 - z0) * tau, lambda tau, z0=z0, z1=z1: z1 - z0)

    def distance_to(self, point: complex) -> float:
        if self.kind == "circle":
            if self.radius == 0:
                return abs(self.center - point)
            if abs(self.turns) >= 1:
                return abs(abs(point - self.center) - self.radius)
            tau = np.linspace(0, 1, 2001)
            z = self.center + self.radius * np.exp(1j * (self.start_angle + 2 * math.pi * self.turns * tau))
            return float(np.min(np.abs(z - point)))
        if len(self.points) == 1:
            return abs(self.points[0] - point)
        best = math.inf
        for z0, z1 in zip(self.points, self.points[1:]):
            d = z1 - z0
            if d == 0:
                best = min(best, abs(point - z0))
                continue
            s = min(max(((point - z0) * d.conjugate()).real / abs(d) ** 2, 0.0), 1.0)
            best = min(best, abs(point - (z0 + s * d)))
        return best

    def check_clearance(self, singular=SINGULAR, clearance=MIN_CLEARANCE):
        for s in singular:
            if self.distance_to(s) < clearance:
                raise DomainError(f"path passes within {clearance} of the singular point {s}")


def _as_path_list(path) -> list[PathSpec]:
    if isinstance(path, PathSpec):
        return [path]
    out = list(path)
    for a, b in zip(out, out[1:]):
        if abs(a.end_point - b.base_point) > 1e-12:
            raise ValueError("consecutive path pieces do not join")
    return out


def integrate_ode(op: DiffOperator, initial: Sequence[complex], path, tol: float = 1e-10):
    """Transport ``(f, f', ..., f^(n-1))`` along ``path`` for ``op f = 0``.

    Runs the 8(5,3) Dormand-Prince pair on the companion system in the path
    parameter. The leading coefficient must not vanish on the path.
    """
    op = op.to_d_basis()
    n = op.order
    if n < 1:
        raise ValueError("operator must have order >= 1")
    state = np.asarray(initial, dtype=complex)
    if state.shape != (n,):
        raise ValueError(f"need {n} initial values (function and {n - 1} derivatives)")
    coeffs = [op.coeff(k) for k in range(n + 1)]
    singular = _singular_points(coeffs[n])
    for piece in _as_path_list(path):
        piece.check_clearance(singular)
        for z, dz in piece.pieces():

            def rhs(tau, y):
                lam = z(tau)
                c = [ck(lam) for ck in coeffs]
                top = -sum(c[k] * y[k] for k in range(n)) / c[n]
                return dz(tau) * np.append(y[1:], top)

            sol = solve_ivp(rhs, (0.0, 1.0), state, method="DOP853", rtol=tol, atol=tol * 1e-3)
            if not sol.success:
                raise IntegrationError(f"ODE integration failed: {sol.message}")
            state = sol.y[:, -1]
            if not np.all(np.isfinite(state)):
                raise IntegrationError("non-finite state during continuation")
    return tuple(complex(v) for v in state)


def _singular_points(lead) -> tuple:
    roots = np.roots([float(c) for c in reversed(lead.num.coeffs)]) if lead.num.degree > 0 else []
    pts = set(SINGULAR)
    for r in roots:
        pts.add(complex(round(r.real, 12), round(r.imag, 12)))
    return tuple(pts)


# --- loops ------------------------------------------------------------------


def loop_at_zero(base: float = BASE_POINT):
    return PathSpec.circle(0, base, 1, 0.0)


def loop_at_one(base: float = BASE_POINT):
    return PathSpec.circle(1, 1 - base, 1, math.pi)


def loop_at_infinity(base: complex = BASE_POINT, radius: float = 1.5):
    """Clockwise loop around both 0 and 1: up, around a circle about 0.5, back down."""
    top = 0.5 + 1j * radius
    up = PathSpec.polyline([base, top])
    around = PathSpec.circle(0.5, radius, -1, math.pi / 2)
    down = PathSpec.polyline([top, base])
    return [up, around, down]


@dataclass(frozen=True)
class MonodromyMatrix:
    """``(f_1, f_2) o loop = (f_1, f_2) @ entries``."""

    entries: np.ndarray
    basis_labels: tuple = ("F_mu", "G_mu")
    wronskian: complex = 0j

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=complex)
        if e.shape != (2, 2) or not np.all(np.isfinite(e)):
            raise ValueError("monodromy matrix must be a finite 2x2 array")
        object.__setattr__(self, "entries", e)

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.entries))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.entries)

    def to_dict(self) -> dict:
        return {
            "basis": list(self.basis_labels),
            "entries": [[[z.real, z.imag] for z in row] for row in self.entries.tolist()],
        }


def _basis_at(p: HGParams, lam: complex):
    F = complex(eval_F_mu(p, lam))
    G = complex(eval_G_mu(p, lam))
    c = float(p.mu - 1)
    Fp = c * complex(eval_F_mu(p, lam, -1))
    Gp = c * complex(eval_G_mu(p, lam, -1))
    return np.array([[F, G], [Fp, Gp]])


def continue_solutions(op: DiffOperator, W: np.ndarray, path, tol: float = 1e-10) -> np.ndarray:
    """Continue every column of a matrix of initial data along ``path``."""
    return np.column_stack([integrate_ode(op, W[:, j], path, tol) for j in range(W.shape[1])])


def monodromy_along(p: HGParams, path, tol: float = 1e-10, base: complex = BASE_POINT) -> MonodromyMatrix:
    """Monodromy of ``(F_mu, G_mu)`` along a loop based at ``base``."""
    W = _basis_at(p, base)
    wr = W[0, 0] * W[1, 1] - W[0, 1] * W[1, 0]
    scale = np.max(np.abs(W)) ** 2
    if abs(wr) < 1e-8 * scale:
        raise NonConvergenceError(f"basis is ill-conditioned at {base} (|Wronskian| = {abs(wr):.3g})")
    cont = continue_solutions(build_D(p), W, path, tol)
    return MonodromyMatrix(np.linalg.solve(W, cont), ("F_mu", "G_mu"), wr)


def monodromy_at_zero(p: HGParams, tol: float = 1e-10) -> MonodromyMatrix:
    return monodromy_along(p, loop_at_zero(), tol)


def monodromy_at_one(p: HGParams, tol: float = 1e-10) -> MonodromyMatrix:
    return monodromy_along(p, loop_at_one(), tol)


def monodromy_at_infinity(p: HGParams, tol: float = 1e-10) -> MonodromyMatrix:
    return monodromy_along(p, loop_at_infinity(), tol)


def H_factor_at_infinity(p: HGParams, tol: float = 1e-11, base: float = -1.5) -> complex:
    """Ratio ``(H_mu continued once around infinity) / H_mu`` at ``base``.

    ``H_mu`` is a solution of the third-order operator ``theta_l o D``; the
    loop is the clockwise circle about 0.5 through ``base``.
    """
    lam = complex(base)
    c = p.mu - 1
    init = [
        complex(eval_H_mu(p, lam)),
        float(c) * complex(eval_H_mu(p, lam, -1)),
        float(c * (c - 1)) * complex(eval_H_mu(p, lam, -2)),
    ]
    path = PathSpec.circle(0.5, abs(lam - 0.5), -1, cmath.phase(lam - 0.5))
    out = integrate_ode(build_H_annihilator(p), init, path, tol)
    return out[0] / init[0]


# --- the Laurent recurrence at lambda = 1 -------------------------------------


def laurent_coefficients(p: HGParams, n_max: int, n_min: int = -5) -> dict[int, Fraction]:
    """Solve ``(n-1)^2 (n-1+mu) a_n = (n-1)(n-2+a)(n-2+b) a_(n-1)`` exactly, ``a_1 = 1``.

    Starts from ``a_(n_min - 1) = 0``; at ``n = 1`` both sides vanish and
    ``a_1`` is the free normalization.
    """
    a, b, mu = p.alpha, p.beta, p.mu
    out: dict[int, Fraction] = {}
    prev = Fraction(0)
    for n in range(n_min, n_max + 1):
        if n == 1:
            cur = Fraction(1)
        else:
            lhs = (n - 1) ** 2 * (n - 1 + mu)
            cur = (n - 1) * (n - 2 + a) * (n - 2 + b) * prev / lhs
        out[n] = cur
        prev = cur
    return out


def laurent_solution_check(p: HGParams, z, rel_tol: float = 1e-17, max_terms: int = 100000) -> float:
    """``|sum a_n z^n - z 2F1(a, b; 1+mu; z)|`` normalized, with ``a_n`` from the recurrence."""
    z = complex(z)
    if abs(z) >= 1:
        raise DomainError("need |z| < 1")
    a, b, mu = float(p.alpha), float(p.beta), float(p.mu)
    term = z  # a_1 z
    total = term
    small = 0
    for n in range(2, max_terms):
        term *= (n - 2 + a) * (n - 2 + b) / ((n - 1) * (n - 1 + mu)) * z
        total += term
        small = small + 1 if abs(term) <= rel_tol * abs(total) else 0
        if small >= 3 or term == 0:
            break
    else:
        raise NonConvergenceError("Laurent series did not converge")
    ref = z * complex(hyp2f1(a, b, 1 + mu, z))
    scale = max(abs(ref), abs(total))
    return 0.0 if scale == 0 else abs(total - ref) / scale
