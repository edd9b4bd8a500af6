"""Registry of numerical and exact checks, run by the CLI and the acceptance tests.

Every check is a function of a private random stream derived from the global
seed and its own id, so results do not depend on scheduling. ``run_checks``
fans checks out to a thread pool and returns records sorted by id.
"""

from __future__ import annotations

import cmath
import functools
import math
import random
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import continuation as cont
from .core import HGSeriesSpec, TruncationPolicy, eval_pFq, gamma, hyp2f1, pochhammer
from .diffop import (
    DiffOperator,
    build_D,
    build_P_HG,
    build_Q_HG,
    build_Q_HG_expanded,
    build_Theta,
    compose,
    right_divide,
    theta2_step,
)
from .functions import (
    F_function,
    G_function,
    H_function,
    boundary_distance,
    check_kummer_relation,
    derivative,
    derivatives_at,
    eval_F_mu,
    eval_f1,
    eval_f3,
    eval_G_mu,
    eval_H_mu,
)
from .params import HGParams, random_params
from .period_reg import (
    P_m_function,
    P_m_via_theta,
    Q_m_function,
    Q_m_quadrature,
    check_regulator_congruence,
    check_three_term_congruence,
    eval_P_m,
    eval_Q_m,
    nondegenerate_m,
    params_for_m,
    recursion_by_products,
    regulator_recursion,
)
from .quadrature import (
    WeightedIntegrand,
    integrate_01,
    verify_H_integral,
    verify_int_rep_2F1,
    verify_int_rep_3F2,
)
from .ratfunc import Poly, RationalFunction
from .thetadata import ThetaData, derive_ab

__all__ = [
    "CheckRecord",
    "Row",
    "Scale",
    "SCALES",
    "CHECKS",
    "SUITES",
    "REFERENCE_PARAMS",
    "REFERENCE_THETA",
    "run_check",
    "run_checks",
    "sample_domain",
    "random_theta",
]

REFERENCE_PARAMS = HGParams(Fraction(1, 3), Fraction(1, 5), Fraction(7, 2), 2)
REFERENCE_THETA = derive_ab([1], [0, 1, -1])


@dataclass(frozen=True)
class Scale:
    params: int  # parameter sets per check
    points: int  # lambda samples per parameter set
    monodromy: int  # parameter sets for the (slow) continuation checks


CAUCHY_RADIUS = 0.1  # samples keep distance >= 0.2 from every domain edge

SCALES = {"full": Scale(20, 50, 3), "quick": Scale(3, 10, 1)}


@dataclass(frozen=True)
class Row:
    lam: complex | None
    value: complex | None
    residual: float


@dataclass
class CheckRecord:
    check_id: str
    suite: str
    params: list
    samples: int
    residual: float
    threshold: float
    passed: bool
    comparison: str = "<"  # residual < threshold passes; ">" for existence checks
    note: str = ""
    rows: list = field(default_factory=list, repr=False)

    def to_dict(self, rows: bool = False) -> dict:
        out = {
            "check_id": self.check_id,
            "params": self.params,
            "samples": self.samples,
            "residual": self.residual,
            "threshold": self.threshold,
            "pass": self.passed,
            "comparison": self.comparison,
        }
        if self.note:
            out["note"] = self.note
        if rows:
            out["rows"] = [
                {
                    "lambda": None if r.lam is None else [r.lam.real, r.lam.imag],
                    "value": None if r.value is None else [r.value.real, r.value.imag],
                    "residual": r.residual,
                }
                for r in self.rows
            ]
        return out


@dataclass
class _Ctx:
    check_id: str
    suite: str
    seed: int
    scale: Scale

    @functools.cached_property
    def rng(self) -> random.Random:
        return random.Random(self.seed * 1_000_003 + zlib.crc32(self.check_id.encode()))

    @functools.cached_property
    def np_rng(self) -> np.random.Generator:
        return np.random.default_rng([self.seed, zlib.crc32(self.check_id.encode())])

    def param_sets(self, count: int | None = None, include_reference: bool = True) -> list[HGParams]:
        count = self.scale.params if count is None else count
        out = [REFERENCE_PARAMS] if include_reference else []
        while len(out) < count:
            out.append(random_params(self.rng))
        return out[:count]

    def record(self, rows, threshold, params, note="", comparison="<", residual=None, passed=None):
        if residual is None:
            vals = [r.residual for r in rows]
            residual = max(vals) if comparison == "<" else min(vals)
        residual = float(residual)
        if passed is None:
            passed = bool(residual < threshold) if comparison == "<" else bool(residual > threshold)
        return CheckRecord(
            self.check_id,
            self.suite,
            [p.to_dict() if hasattr(p, "to_dict") else p for p in params],
            len(rows),
            residual,
            threshold,
            passed,
            comparison,
            note,
            list(rows),
        )


# --- sampling ----------------------------------------------------------------------


def sample_domain(rng: np.random.Generator, count: int, domain: str, margin: float = 0.2) -> np.ndarray:
    """Random points at distance ``>= margin`` from the edge (and cut) of ``domain``.

    ``lens`` is the overlap of the convergence discs at 0 and 1, kept off the
    cut of ``F_mu``; ``exterior_of_1`` is capped at ``|1 - lambda| <= 3``.
    """
    out: list[complex] = []
    while len(out) < count:
        if domain == "disc_at_1":
            z = 1 + rng.uniform(0, 1) * np.exp(1j * rng.uniform(-np.pi, np.pi))
            ok = boundary_distance("disc_at_1", z) >= margin
        elif domain == "disc_at_0":
            z = math.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(-np.pi, np.pi))
            ok = boundary_distance("disc_at_0", z, cut=False) >= margin
        elif domain == "exterior_of_1":
            z = 1 + rng.uniform(1, 3) * np.exp(1j * rng.uniform(-np.pi, np.pi))
            ok = boundary_distance("exterior_of_1", z) >= margin
        elif domain == "lens":
            z = complex(rng.uniform(0, 1), rng.uniform(-0.9, 0.9))
            ok = (
                boundary_distance("disc_at_0", z, cut=False) >= margin
                and boundary_distance("disc_at_1", z) >= margin
            )
        else:
            raise ValueError(f"unknown domain {domain!r}")
        if ok:
            out.append(complex(z))
    return np.array(out)


def random_theta(rng: random.Random) -> ThetaData:
    """Small integer ``p0`` of degree <= 2 and ``p1 = t(1 - t)(c0 + c1 t)``."""
    while True:
        p0 = Poly([rng.randint(-3, 3) for _ in range(rng.randint(1, 3))])
        p1 = Poly([0, 1, -1]) * Poly([rng.randint(-2, 2), rng.randint(-1, 1)])
        if not (p0.is_zero() and p1.is_zero()):
            return derive_ab(p0, p1)


def _theta_choices(rng: random.Random, count: int) -> list[ThetaData]:
    fixed = [
        REFERENCE_THETA,
        derive_ab([1], []),
        derive_ab([0, 1], [0, 1, -1]),
        derive_ab([1, 0, 1], [0, 2, -2]),
        derive_ab([Fraction(-1, 2), 0, 1], [0, 1, 2, -3]),
    ]
    out = fixed[:count]
    while len(out) < count:
        out.append(random_theta(rng))
    return out


def _rel(a: complex, b: complex) -> float:
    s = max(abs(a), abs(b))
    return abs(a - b) / s if s > 0 else 0.0


# --- registry ---------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    check_id: str
    suite: str
    run: Callable[[_Ctx], CheckRecord]
    description: str
    criterion: int | None = None


CHECKS: dict[str, Check] = {}


def _check(check_id: str, description: str, criterion: int | None = None):
    suite = check_id.split(".", 1)[0]

    def deco(fn):
        CHECKS[check_id] = Check(check_id, suite, fn, description, criterion)
        return fn

    return deco


# --- core ---------------------------------------------------------------------------


@_check("core.pochhammer_split", "(a)_(n+m) = (a)_n (a+n)_m, exact and complex")
def _pochhammer_split(ctx: _Ctx):
    rows = []
    for _ in range(10 * ctx.scale.params):
        n, m = ctx.rng.randint(0, 12), ctx.rng.randint(0, 12)
        a = Fraction(ctx.rng.randint(-40, 40), ctx.rng.randint(1, 9))
        exact = pochhammer(a, n + m) == pochhammer(a, n) * pochhammer(a + n, m)
        z = complex(ctx.rng.uniform(-5, 5), ctx.rng.uniform(-5, 5))
        lhs, rhs = pochhammer(z, n + m), pochhammer(z, n) * pochhammer(z + n, m)
        rows.append(Row(z, lhs, (0.0 if exact else 1.0) + _rel(lhs, rhs)))
    return ctx.record(rows, 1e-13, [])


@_check("core.gamma_identities", "Gamma recurrence and reflection on |Re z|, |Im z| <= 20")
def _gamma_identities(ctx: _Ctx):
    rows = []
    for _ in range(10 * ctx.scale.params):
        z = complex(ctx.rng.uniform(-20, 19), ctx.rng.uniform(-20, 20))
        rec = _rel(gamma(z + 1), z * gamma(z))
        refl = _rel(gamma(z) * gamma(1 - z), math.pi / cmath.sin(math.pi * z))
        rows.append(Row(z, gamma(z), max(rec, refl)))
    return ctx.record(rows, 1e-12, [])


@_check("core.contiguity_2f1", "d/dx 2F1(a,b;c;x) = (ab/c) 2F1(a+1,b+1;c+1;x) by Cauchy differentiation")
def _contiguity(ctx: _Ctx):
    rows = []
    for _ in range(2 * ctx.scale.params):
        a, b = ctx.rng.uniform(-2, 3), ctx.rng.uniform(-2, 3)
        c = ctx.rng.uniform(0.3, 4)
        x = complex(*ctx.np_rng.uniform(-0.5, 0.5, 2))
        d = derivative(lambda z: hyp2f1(a, b, c, z), x, radius=0.1)
        ref = a * b / c * hyp2f1(a + 1, b + 1, c + 1, x)
        rows.append(Row(x, ref, _rel(d, ref)))
    return ctx.record(rows, 1e-10, [])


@_check("core.est_error_honest", "re-evaluating at tolerance/100 moves the value by < est_error")
def _est_error(ctx: _Ctx):
    rows = []
    for _ in range(100 if ctx.scale.params >= 10 else 20):
        p = ctx.rng.choice((2, 3))
        upper = tuple(ctx.rng.uniform(-3, 3) for _ in range(p))
        lower = tuple(ctx.rng.uniform(0.2, 4) for _ in range(p - 1))
        r = ctx.rng.uniform(0.05, 0.9)
        x = r * cmath.exp(1j * ctx.rng.uniform(-math.pi, math.pi))
        spec = HGSeriesSpec(upper, lower)
        v1, e1, _ = eval_pFq(spec, x, TruncationPolicy(1e-10))
        v2, _, _ = eval_pFq(spec, x, TruncationPolicy(1e-12))
        # residual < 1 means the change is within the reported bound
        rows.append(Row(x, v1, abs(v1 - v2) / max(e1, 1e-300)))
    return ctx.record(rows, 1.0, [], note="residual = |change| / est_error")


# --- functions ----------------------------------------------------------------------


def _ode_rows(ctx: _Ctx, kind: str):
    rows, params = [], ctx.param_sets()
    for p in params:
        dom = {"F": "disc_at_1", "G": "disc_at_0", "H": "exterior_of_1"}[kind]
        ev = {"F": eval_F_mu, "G": eval_G_mu, "H": eval_H_mu}[kind]
        lam = sample_domain(ctx.np_rng, ctx.scale.points, dom)
        c = float(p.mu - 1)
        derivs = [ev(p, lam), c * ev(p, lam, -1), c * (c - 1) * ev(p, lam, -2)]
        coeffs = build_D(p).evaluate_coeffs(lam)
        terms = [ck * dk for ck, dk in zip(coeffs, derivs)]
        total = sum(terms)
        if kind == "H":
            from .core import pow_lambda_minus_one

            inhom = pow_lambda_minus_one(lam, float(p.mu - 1))
            terms.append(inhom)
            total = total + inhom
        scale = np.max(np.abs(np.array(terms)), axis=0)
        res = np.abs(total) / scale
        rows += [Row(complex(z), complex(v), float(r)) for z, v, r in zip(lam, derivs[0], res)]
    return rows, params


@_check("functions.ode_F", "D F_mu = 0", criterion=1)
def _ode_F(ctx):
    rows, params = _ode_rows(ctx, "F")
    return ctx.record(rows, 1e-9, params)


@_check("functions.ode_G", "D G_mu = 0", criterion=1)
def _ode_G(ctx):
    rows, params = _ode_rows(ctx, "G")
    return ctx.record(rows, 1e-9, params)


@_check("functions.ode_H", "D H_mu + (lambda - 1)^(mu - 1) = 0", criterion=1)
def _ode_H(ctx):
    rows, params = _ode_rows(ctx, "H")
    return ctx.record(rows, 1e-9, params)


def _recurrence_rows(ctx: _Ctx, make, domain: str, shifted):
    rows, params = [], ctx.param_sets()
    for p in params:
        fn = make(p)
        lam = sample_domain(ctx.np_rng, ctx.scale.points, domain)
        ref = shifted(p, lam)
        for z, d, r in zip(lam, derivatives_at(fn, lam, max_radius=CAUCHY_RADIUS), ref):
            rows.append(Row(complex(z), complex(r), _rel(d, r)))
    return rows, params


@_check("functions.recurrence_F", "d F_mu = (mu - 1) F_(mu-1)", criterion=2)
def _rec_F(ctx):
    rows, params = _recurrence_rows(
        ctx, F_function, "disc_at_1", lambda p, z: float(p.mu - 1) * eval_F_mu(p, z, -1)
    )
    return ctx.record(rows, 1e-9, params)


@_check("functions.recurrence_G", "d G_mu = (mu - 1) G_(mu-1)", criterion=2)
def _rec_G(ctx):
    rows, params = _recurrence_rows(
        ctx, G_function, "disc_at_0", lambda p, z: float(p.mu - 1) * eval_G_mu(p, z, -1)
    )
    return ctx.record(rows, 1e-9, params)


@_check("functions.recurrence_H", "d H_mu = (mu - 1) H_(mu-1)", criterion=2)
def _rec_H(ctx):
    rows, params = _recurrence_rows(
        ctx, H_function, "exterior_of_1", lambda p, z: float(p.mu - 1) * eval_H_mu(p, z, -1)
    )
    return ctx.record(rows, 1e-9, params)


def _kummer_pairs(ctx: _Ctx, count: int):
    pairs = [(Fraction(1, 4), Fraction(1, 3)), (Fraction(1, 5), Fraction(2, 5))]
    while len(pairs) < count:
        a = Fraction(ctx.rng.randint(1, 11), 12)
        b = Fraction(ctx.rng.randint(1, 9), 10)
        if (a + b).denominator != 1:
            pairs.append((a, b))
    return pairs[:count]


@_check("functions.kummer_real", "Kummer relation on real t in (0.05, 0.95)", criterion=3)
def _kummer_real(ctx):
    rows, pairs = [], _kummer_pairs(ctx, 10)
    for a, b in pairs:
        for t in ctx.np_rng.uniform(0.05, 0.95, 20 if ctx.scale.params >= 10 else 5):
            rows.append(Row(complex(t), None, check_kummer_relation(a, b, float(t))))
    return ctx.record(rows, 1e-10, [{"alpha": str(a), "beta": str(b)} for a, b in pairs])


@_check("functions.kummer_lens", "Kummer relation on 20 complex points of the lens")
def _kummer_lens(ctx):
    rows, pairs = [], _kummer_pairs(ctx, 3)
    for a, b in pairs:
        for t in sample_domain(ctx.np_rng, 20, "lens", margin=0.05):
            if t.imag == 0:
                continue
            rows.append(Row(complex(t), None, check_kummer_relation(a, b, complex(t))))
    return ctx.record(rows, 1e-10, [{"alpha": str(a), "beta": str(b)} for a, b in pairs])


@_check("functions.f1_f3_basis", "f1, f3 linearly independent near t = 0")
def _f1_f3(ctx):
    rows, pairs = [], _kummer_pairs(ctx, 5)
    for a, b in pairs:
        t1, t2 = 0.2 + 0.1j, 0.45 - 0.2j
        M = np.array([[eval_f1(a, b, t1), eval_f3(a, b, t1)], [eval_f1(a, b, t2), eval_f3(a, b, t2)]])
        det = abs(np.linalg.det(M))
        rows.append(Row(None, complex(np.linalg.det(M)), float(det)))
    return ctx.record(rows, 1e-10, [{"alpha": str(a), "beta": str(b)} for a, b in pairs], comparison=">")


# --- diffop -------------------------------------------------------------------------


def _random_rational_params(rng: random.Random) -> HGParams:
    a = Fraction(rng.randint(-30, 30), rng.randint(1, 12))
    b = Fraction(rng.randint(-30, 30), rng.randint(1, 12))
    l = rng.randint(1, 7)
    mu = Fraction(rng.randint(-40, 40), l)
    return HGParams(a, b, mu, l, validate=False)


@_check("diffop.factorization", "Q_HG = theta_l o P_HG and P_HG = l D, exact", criterion=5)
def _factorization(ctx):
    rows, params = [], [_random_rational_params(ctx.rng) for _ in range(10)]
    for p in params:
        q_ok = build_Q_HG(p) == build_Q_HG_expanded(p)
        p_ok = build_P_HG(p).to_d_basis() == build_D(p).scale(RationalFunction.x())
        rows.append(Row(None, None, 0.0 if (q_ok and p_ok) else 1.0))
    return ctx.record(rows, 0.5, params, note="exact equality; residual 0 means equal")


def _random_operator(rng: random.Random, order: int, basis: str = "d") -> DiffOperator:
    def rf():
        num = Poly([Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(rng.randint(1, 3))])
        den = Poly([Fraction(rng.randint(1, 5), rng.randint(1, 4)) for _ in range(rng.randint(1, 2))])
        return RationalFunction(num, den) if not den.is_zero() else RationalFunction(num)

    coeffs = {k: rf() for k in range(order + 1)}
    coeffs[order] = coeffs[order] + 1 if coeffs[order].is_zero() else coeffs[order]
    return DiffOperator(coeffs, basis)


@_check("diffop.division_invariant", "L = quotient o D + remainder exactly, order(remainder) < 2")
def _division(ctx):
    rows, params = [], ctx.param_sets(min(ctx.scale.params, 8))
    for p in params:
        L = _random_operator(ctx.rng, ctx.rng.randint(0, 5))
        D = build_D(p)
        q, r = right_divide(L, D)
        ok = compose(q, D) + r == L and r.order < D.order
        rows.append(Row(None, None, 0.0 if ok else 1.0))
    return ctx.record(rows, 0.5, params)


@_check("diffop.basis_round_trip", "d-basis <-> Euler-basis conversions are exact inverses")
def _round_trip(ctx):
    rows = []
    for _ in range(min(ctx.scale.params, 8)):
        L = _random_operator(ctx.rng, ctx.rng.randint(0, 4), ctx.rng.choice("dD"))
        other = "D" if L.basis == "d" else "d"
        back = L.to_basis(other).to_basis(L.basis)
        ok = back.basis == L.basis and back.coeffs == L.coeffs
        rows.append(Row(None, None, 0.0 if ok else 1.0))
    return ctx.record(rows, 0.5, [])


@_check("diffop.theta2_step", "(a - mu - j)(b - mu - j) F_(mu+j+1) = step applied to (mu + j) F_(mu+j)")
def _theta2(ctx):
    rows, params = [], ctx.param_sets(min(ctx.scale.params, 5))
    for p in params:
        lam = sample_domain(ctx.np_rng, 10, "disc_at_1")
        for j in range(1, 4):
            step = theta2_step(p, j)
            cs = step.evaluate_coeffs(lam)
            nu = float(p.mu + j - 1)
            applied = cs[0] * eval_F_mu(p, lam, j - 1) + cs[1] * (nu - 1) * eval_F_mu(p, lam, j - 2)
            target = eval_F_mu(p, lam, j)
            rows += [Row(complex(z), complex(t), _rel(a, t)) for z, a, t in zip(lam, applied, target)]
    return ctx.record(rows, 1e-9, params)


def _poles_only_at_0_1(rf: RationalFunction) -> bool:
    d = rf.den.degree
    if d <= 0:
        return True
    return ((Poly([0, -1, 1]) ** d) % rf.den).is_zero()


@_check("diffop.theta_structure", "Theta has order <= 1 and poles only at 0 and 1", criterion=6)
def _theta_structure(ctx):
    rows, tds = [], _theta_choices(ctx.rng, 5)
    params = ctx.param_sets(3)
    for p in params:
        for td in tds:
            theta = build_Theta(p, td)
            ok = theta.order <= 1 and all(_poles_only_at_0_1(c) for c in theta.coeffs.values())
            rows.append(Row(None, None, 0.0 if ok else 1.0))
    return ctx.record(rows, 0.5, params + [td.to_dict() for td in tds])


# --- continuation ------------------------------------------------------------------


MONODROMY_TOL = 1e-12


@functools.lru_cache(maxsize=64)
def _mono(p: HGParams, which: str):
    loops = {"zero": cont.monodromy_at_zero, "one": cont.monodromy_at_one, "inf": cont.monodromy_at_infinity}
    return loops[which](p, MONODROMY_TOL)


def _xi(p: HGParams) -> complex:
    return cmath.exp(2j * math.pi * float((p.mu - p.alpha - p.beta) % 1))


def _match_eigs(got, want) -> float:
    got = list(got)
    return min(max(abs(got[0] - want[0]), abs(got[1] - want[1])), max(abs(got[0] - want[1]), abs(got[1] - want[0])))


@_check("continuation.monodromy_zero", "T_0 = [[xi, 0], [1 - xi, 1]]", criterion=7)
def _mono_zero(ctx):
    rows, params = [], ctx.param_sets(ctx.scale.monodromy)
    for p in params:
        xi = _xi(p)
        M = _mono(p, "zero").entries
        rows.append(Row(None, xi, float(np.max(np.abs(M - np.array([[xi, 0], [1 - xi, 1]]))))))
    return ctx.record(rows, 1e-6, params)


@_check("continuation.xi_mod_Z", "xi depends only on mu mod Z")
def _xi_mod(ctx):
    rows, params = [], ctx.param_sets(ctx.scale.monodromy)
    for p in params:
        a = _mono(p, "zero").entries[0, 0]
        b = _mono(params_for_m(p, p.m + p.l), "zero").entries[0, 0]
        rows.append(Row(None, complex(a), abs(a - b)))
    return ctx.record(rows, 1e-8, params)


@_check("continuation.monodromy_infinity", "eigenvalues of T_inf are e(a - mu), e(b - mu)", criterion=7)
def _mono_inf(ctx):
    rows, params = [], ctx.param_sets(ctx.scale.monodromy)
    for p in params:
        want = [cmath.exp(2j * math.pi * float(p.alpha - p.mu)), cmath.exp(2j * math.pi * float(p.beta - p.mu))]
        rows.append(Row(None, want[0], _match_eigs(_mono(p, "inf").eigenvalues(), want)))
    return ctx.record(rows, 1e-6, params)


@_check("continuation.H_at_infinity", "H_mu continued around infinity gains e(-mu)", criterion=7)
def _H_inf(ctx):
    rows, params = [], ctx.param_sets(ctx.scale.monodromy)
    for p in params:
        f = cont.H_factor_at_infinity(p)
        want = cmath.exp(-2j * math.pi * float(p.mu))
        rows.append(Row(-1.5 + 0j, f, abs(f - want)))
    return ctx.record(rows, 1e-6, params)


@_check("continuation.loop_product", "T_inf T_1 T_0 = identity", criterion=7)
def _loop_product(ctx):
    rows, params = [], ctx.param_sets(ctx.scale.monodromy)
    for p in params:
        P = _mono(p, "inf").entries @ _mono(p, "one").entries @ _mono(p, "zero").entries
        err = max(float(np.max(np.abs(P - np.eye(2)))), abs(np.linalg.det(P) - 1))
        rows.append(Row(None, complex(np.linalg.det(P)), err))
    return ctx.record(rows, 1e-5, params)


@_check("continuation.homotopy_invariance", "homotopic polyline loops around 0 give the same monodromy")
def _homotopy(ctx):
    rows, params = [], ctx.param_sets(ctx.scale.monodromy)
    square = cont.PathSpec.polyline([0.5, 0.5 + 0.6j, -0.6 + 0.6j, -0.6 - 0.6j, 0.5 - 0.6j, 0.5])
    hexagon = cont.PathSpec.polyline(
        [0.5 + 0j] + [-0.1 + 0.6 * cmath.exp(1j * math.pi * k / 3) for k in range(1, 6)] + [0.5 + 0j]
    )
    for p in params:
        A = cont.monodromy_along(p, square).entries
        B = cont.monodromy_along(p, hexagon).entries
        rows.append(Row(None, complex(A[0, 0]), float(np.max(np.abs(A - B)))))
    return ctx.record(rows, 1e-6, params)


@_check("continuation.basis_consistency", "eigenvalues of T_0 do not depend on the base point")
def _basis_consistency(ctx):
    rows, params = [], ctx.param_sets(ctx.scale.monodromy)
    base = 0.4 + 0.25j
    loop = cont.PathSpec.circle(0, abs(base), 1, cmath.phase(base))
    for p in params:
        M = cont.monodromy_along(p, loop, base=base)
        rows.append(Row(base, complex(M.det), _match_eigs(M.eigenvalues(), [_xi(p), 1.0])))
    return ctx.record(rows, 1e-6, params)


@_check("continuation.wronskian", "(F_mu, G_mu) is a basis at the base point")
def _wronskian(ctx):
    rows, params = [], ctx.param_sets()
    for p in params:
        W = cont._basis_at(p, cont.BASE_POINT)
        rel = abs(np.linalg.det(W)) / max(abs(W[0, 0] * W[1, 1]), abs(W[0, 1] * W[1, 0]))
        rows.append(Row(complex(cont.BASE_POINT), complex(np.linalg.det(W)), float(rel)))
    return ctx.record(rows, 1e-8, params, comparison=">")


@_check("continuation.laurent", "Laurent recurrence reproduces z 2F1(a, b; 1 + mu; z)", criterion=9)
def _laurent(ctx):
    rows, params = [], ctx.param_sets(min(ctx.scale.params, 5))
    for p in params:
        for _ in range(10):
            z = ctx.rng.uniform(0, 0.8) * cmath.exp(1j * ctx.rng.uniform(-math.pi, math.pi))
            rows.append(Row(z, None, cont.laurent_solution_check(p, z)))
    return ctx.record(rows, 1e-12, params)


# --- quadrature ------------------------------------------------------------------------


def _q(rng: random.Random, lo: int, hi: int, den: int = 10) -> Fraction:
    return Fraction(rng.randint(lo, hi), den)


@_check("quadrature.int_rep_2F1", "Euler integral of 2F1", criterion=4)
def _int2(ctx):
    rows, cases = [], []
    for _ in range(20 if ctx.scale.params >= 10 else 5):
        a, b = _q(ctx.rng, -10, 20), _q(ctx.rng, 2, 20)
        c = b + _q(ctx.rng, 2, 20)
        x = ctx.rng.uniform(0, 0.8) * cmath.exp(1j * ctx.rng.uniform(-math.pi, math.pi))
        cases.append({"a": str(a), "b": str(b), "c": str(c)})
        rows.append(Row(x, None, verify_int_rep_2F1(a, b, c, x)))
    return ctx.record(rows, 1e-8, cases)


@_check("quadrature.int_rep_3F2", "Euler integral of 3F2", criterion=4)
def _int3(ctx):
    rows, cases = [], []
    for _ in range(20 if ctx.scale.params >= 10 else 5):
        a, b, d = _q(ctx.rng, -10, 20), _q(ctx.rng, -10, 20), _q(ctx.rng, 5, 20)
        c = _q(ctx.rng, 2, 20)
        e = c + _q(ctx.rng, 2, 20)
        x = ctx.rng.uniform(0, 0.8) * cmath.exp(1j * ctx.rng.uniform(-math.pi, math.pi))
        cases.append({k: str(v) for k, v in zip("abcde", (a, b, c, d, e))})
        rows.append(Row(x, None, verify_int_rep_3F2(a, b, c, d, e, x)))
    return ctx.record(rows, 1e-8, cases)


@_check("quadrature.H_integral", "Euler-type integral of H_mu", criterion=4)
def _H_int(ctx):
    rows, params = [], ctx.param_sets(20 if ctx.scale.params >= 10 else 3)
    for p in params:
        lam = sample_domain(ctx.np_rng, 1, "exterior_of_1", margin=0.1)[0]
        rows.append(Row(complex(lam), complex(eval_H_mu(p, lam)), verify_H_integral(p, lam)))
    return ctx.record(rows, 1e-8, params)


@_check("quadrature.self_consistency", "halving tol moves the value by < the previous est_error")
def _self_consistency(ctx):
    rows = []
    for _ in range(50 if ctx.scale.params >= 10 else 10):
        e1, e2 = ctx.rng.uniform(-0.9, 2), ctx.rng.uniform(-0.9, 2)
        w0 = complex(ctx.rng.uniform(-2, 2), ctx.rng.uniform(-2, 2))
        w = WeightedIntegrand(e1, e2, lambda t, omt, w0=w0: np.exp(w0 * t))
        v1, err = integrate_01(w, 1e-10)
        v2, _ = integrate_01(w, 5e-11)
        rows.append(Row(None, v1, abs(v1 - v2) / max(err, 1e-16 * abs(v1), 1e-300)))
    return ctx.record(rows, 1.0, [], note="residual = |change| / est_error")


@_check("quadrature.branch_continuity", "H integral residual has no jumps along an upper half-plane arc")
def _branch_continuity(ctx):
    p = REFERENCE_PARAMS
    rows = []
    for phi in np.linspace(math.pi - 0.15, 0.15, 25):
        lam = 1 + 1.6 * cmath.exp(1j * phi)
        rows.append(Row(lam, complex(eval_H_mu(p, lam)), verify_H_integral(p, lam)))
    res = np.array([r.residual for r in rows])
    spike = float(np.max(res) / max(np.median(res), 1e-14))
    return ctx.record(rows, 10.0, [p], residual=spike, note="residual = max / max(median, 1e-14)")


@_check("quadrature.Q_m_integral", "Q_m series against its integral representation")
def _Q_int(ctx):
    rows, params = [], ctx.param_sets(3)
    tds = _theta_choices(ctx.rng, 3)
    for p, td in zip(params, tds):
        for lam in sample_domain(ctx.np_rng, 3, "exterior_of_1", margin=0.1):
            s = eval_Q_m(p, td, p.m, lam)
            rows.append(Row(complex(lam), complex(s), _rel(s, Q_m_quadrature(p, td, p.m, lam))))
    return ctx.record(rows, 1e-7, params)


# --- period_reg ------------------------------------------------------------------------


def _pq_recurrence(ctx: _Ctx, make, ev, domain):
    rows, params = [], ctx.param_sets()
    for p in params:
        td = REFERENCE_THETA if p is REFERENCE_PARAMS else random_theta(ctx.rng)
        fn = make(p, td, p.m)
        lam = sample_domain(ctx.np_rng, ctx.scale.points, domain)
        ref = float(p.mu - 1) * ev(p, td, p.m - p.l, lam)
        for z, d, r in zip(lam, derivatives_at(fn, lam, max_radius=CAUCHY_RADIUS), ref):
            rows.append(Row(complex(z), complex(r), _rel(d, r)))
    return rows, params


@_check("period_reg.recurrence_P_m", "d P_m = (mu - 1) P_(m-l)", criterion=2)
def _rec_P(ctx):
    rows, params = _pq_recurrence(ctx, P_m_function, eval_P_m, "disc_at_1")
    return ctx.record(rows, 1e-9, params)


@_check("period_reg.recurrence_Q_m", "d Q_m = (mu - 1) Q_(m-l)", criterion=2)
def _rec_Q(ctx):
    rows, params = _pq_recurrence(ctx, Q_m_function, eval_Q_m, "exterior_of_1")
    return ctx.record(rows, 1e-9, params)


@_check("period_reg.theta_vs_P_m", "2 pi i Theta F_mu equals the direct sum for P_m", criterion=6)
def _theta_P(ctx):
    rows, tds = [], _theta_choices(ctx.rng, 5)
    params = [REFERENCE_PARAMS] + ctx.param_sets(4, include_reference=False)
    for p, td in zip(params, tds):
        lam = sample_domain(ctx.np_rng, 30, "disc_at_1")
        direct = eval_P_m(p, td, p.m, lam)
        via = P_m_via_theta(p, td, p.m, lam)
        rows += [Row(complex(z), complex(d), _rel(d, v)) for z, d, v in zip(lam, direct, via)]
    return ctx.record(rows, 1e-8, params + [td.to_dict() for td in tds])


@_check("period_reg.nondegenerate", "some admissible m has a non-vanishing inner period block", criterion=8)
def _nondeg(ctx):
    rows, params = [], ctx.param_sets(min(ctx.scale.params, 5))
    grid = sample_domain(ctx.np_rng, 30, "lens", margin=0.1)
    for p in params:
        td = REFERENCE_THETA if p is REFERENCE_PARAMS else random_theta(ctx.rng)
        best = max(nondegenerate_m(p, td, grid).values())
        rows.append(Row(None, None, float(best)))
    return ctx.record(rows, 1e-10, params, comparison=">", note="best m: min relative |det| over the grid")


@_check("period_reg.initial_step", "(C_0, D_0) = ((lambda - 1)^-1, 0)", criterion=10)
def _initial(ctx):
    rows, params = [], ctx.param_sets(min(ctx.scale.params, 5))
    target = RationalFunction(Poly([1]), Poly([-1, 1]))
    for p in params:
        st = regulator_recursion(p, REFERENCE_THETA, 0)
        ok = st.C_at(0, p.mu) == target and st.D_at(0, p.mu).is_zero()
        ok = ok and st.C_at(-1, p.mu).is_zero() and st.D_at(-1, p.mu) == RationalFunction.const(1)
        rows.append(Row(None, None, 0.0 if ok else 1.0))
    return ctx.record(rows, 0.5, params)


@_check("period_reg.recursion_association", "C_i, D_i identical under both association orders")
def _association(ctx):
    rows, params = [], ctx.param_sets(min(ctx.scale.params, 3))
    for p in params:
        st = regulator_recursion(p, REFERENCE_THETA, 3)
        for i in range(4):
            L = recursion_by_products(p, p.mu, i, left_first=True)
            R = recursion_by_products(p, p.mu, i, left_first=False)
            ok = L == R and L == (st.C_at(i, p.mu), st.D_at(i, p.mu))
            rows.append(Row(None, None, 0.0 if ok else 1.0))
    return ctx.record(rows, 0.5, params)


def _three_term(i: int):
    @_check(f"period_reg.three_term_i{i}", f"three-term relation at i = {i} holds modulo Q(lambda)", criterion=10)
    def run(ctx):
        rep = check_three_term_congruence(REFERENCE_PARAMS, i)
        rows = [Row(None, None, rep.fit_residual)]
        note = f"oracle residual {rep.oracle_residual:.3g}, condition {rep.condition:.3g}"
        return ctx.record(rows, 1e-6, [REFERENCE_PARAMS], note=note)

    return run


for _i in (1, 2, 3):
    _three_term(_i)


def _regulator(check_id, variant, n, td, threshold=1e-5, criterion=None):
    @_check(check_id, f"regulator congruence ({variant}, n = {n})", criterion=criterion)
    def run(ctx):
        rep = check_regulator_congruence(REFERENCE_PARAMS, td, n=n, variant=variant)
        c_err = abs(rep.C_estimate - rep.C_expected) / rep.C_expected
        rows = [Row(None, rep.C_estimate, rep.fit_residual)]
        note = (
            f"C estimate {rep.C_estimate.real:.12g}{rep.C_estimate.imag:+.3g}i "
            f"(1/l = {rep.C_expected:g}, rel. error {c_err:.2g}); oracle residual {rep.oracle_residual:.3g}"
        )
        return ctx.record(rows, threshold, [REFERENCE_PARAMS, td.to_dict()], note=note)

    return run


_regulator("period_reg.regulator_phi1", "phi1", 0, REFERENCE_THETA, criterion=10)
_regulator("period_reg.regulator_phi1_n2", "phi1", 2, REFERENCE_THETA)
_regulator("period_reg.regulator_phi2", "phi2", 1, REFERENCE_THETA)
_regulator("period_reg.regulator_collapse", "phi1", 0, derive_ab([1], []), threshold=1e-10)


@_check("period_reg.literal_forms_rejected", "the uncorrected printed forms fail the exact-remainder oracle")
def _literal(ctx):
    rows = []
    for i in (1, 2):
        rep = check_three_term_congruence(REFERENCE_PARAMS, i, literal=True)
        rows.append(Row(None, None, rep.oracle_residual))
    rep = check_regulator_congruence(REFERENCE_PARAMS, REFERENCE_THETA, n=1, literal=True)
    rows.append(Row(None, rep.C_estimate, rep.oracle_residual))
    return ctx.record(rows, 1e-3, [REFERENCE_PARAMS], comparison=">", note="negative control")


# --- runner -------------------------------------------------------------------------------

SUITES = ("core", "functions", "diffop", "continuation", "quadrature", "period_reg")


def select(suite: str = "all", ids=None) -> list[Check]:
    if ids:
        missing = [i for i in ids if i not in CHECKS]
        if missing:
            raise KeyError(f"unknown check ids: {', '.join(missing)}")
        return [CHECKS[i] for i in ids]
    if suite == "all":
        return list(CHECKS.values())
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose from all, {', '.join(SUITES)}")
    return [c for c in CHECKS.values() if c.suite == suite]


def run_check(check_id: str, seed: int = 42, scale: str | Scale = "full") -> CheckRecord:
    chk = CHECKS[check_id]
    sc = SCALES[scale] if isinstance(scale, str) else scale
    ctx = _Ctx(check_id, chk.suite, seed, sc)
    try:
        return chk.run(ctx)
    except Exception as exc:  # a crashing check is a failing check
        return CheckRecord(check_id, chk.suite, [], 0, math.inf, 0.0, False, note=f"{type(exc).__name__}: {exc}")


def run_checks(suite: str = "all", seed: int = 42, scale: str = "full", workers: int = 4, ids=None):
    checks = select(suite, ids)
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        records = list(pool.map(lambda c: run_check(c.check_id, seed, scale), checks))
    return sorted(records, key=lambda r: r.check_id)
