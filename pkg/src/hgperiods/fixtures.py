"""Oracle-generated reference values.

Each fixture is computed by an oracle that does not go through the package's
own series code: mpmath (high-precision special functions, ``quad`` and
``diff``), sympy (exact symbolic algebra), or the package's tanh-sinh rule
with mpmath integrands. ``generate`` rebuilds the table; ``compare`` checks a
stored table against a fresh one.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import mpmath as mp
import numpy as np
import sympy as sp

from .quadrature import WeightedIntegrand, integrate_01

__all__ = ["generate", "write", "load", "compare", "DEFAULT_PATH", "by_id"]

DEFAULT_PATH = Path("tests") / "fixtures" / "derived.json"
DPS = 40

REF = {"alpha": Fraction(1, 3), "beta": Fraction(1, 5), "mu": Fraction(7, 2), "l": 2}


def _c(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _fix(fid, oracle, value, tolerance, description, **extra):
    out = {"id": fid, "oracle": oracle, "description": description, "tolerance": tolerance}
    out["value"] = value
    out.update(extra)
    return out


def _mpf(q: Fraction):
    return mp.mpf(q.numerator) / q.denominator


def _branch_pow(z, s):
    """``z^s`` with ``arg z`` in ``(0, 2 pi]``."""
    z = mp.mpc(z)
    arg = mp.arg(z)
    if arg <= 0:
        arg += 2 * mp.pi
    return mp.exp(s * (mp.log(abs(z)) + 1j * arg))


def _F(a, b, nu, lam):
    return _branch_pow(lam - 1, nu) / nu * mp.hyp2f1(a, b, nu + 1, 1 - lam)


def _H(a, b, nu, lam):
    return _branch_pow(lam - 1, nu - 1) / ((1 - a) * (1 - b)) * mp.hyp3f2(1, 1, 1 - nu, 2 - a, 2 - b, 1 / (1 - lam))


# --- individual oracles -------------------------------------------------------------


def _gamma_fixtures():
    out = []
    val = mp.quad(lambda t: t ** (-0.5) * mp.exp(-t), [0, 1, mp.inf])
    out.append(_fix("gamma_half", "mpmath.quad of t^(-1/2) e^(-t) on (0, inf)", _c(val), 1e-13, "Gamma(1/2)"))
    w = WeightedIntegrand(-2 / 3, -1 / 3, lambda t, omt: np.ones_like(t))
    val, _ = integrate_01(w, 1e-14)
    out.append(_fix("beta_1_3_2_3", "tanh-sinh of t^(-2/3) (1-t)^(-1/3)", _c(val), 1e-12, "B(1/3, 2/3)"))
    a, b, mu = (_mpf(REF[k]) for k in ("alpha", "beta", "mu"))
    val = mp.gamma(mu) * mp.gamma(mu + 1 - a - b) / (mp.gamma(mu + 1 - a) * mp.gamma(mu + 1 - b))
    out.append(
        _fix(
            "gamma_product_G_prefactor",
            "mpmath.gamma",
            _c(val),
            1e-13,
            "Gamma(mu) Gamma(mu+1-a-b) / (Gamma(mu+1-a) Gamma(mu+1-b)) at (1/3, 1/5, 7/2)",
        )
    )
    a, b = mp.mpf(1) / 4, mp.mpf(1) / 3
    val = mp.gamma(1 - a - b) / (mp.gamma(1 - a) * mp.gamma(1 - b))
    e = lambda x: mp.exp(2j * mp.pi * x)
    K = 2j * mp.pi * (1 - e(a + b)) / ((1 - e(a)) * (1 - e(b)))
    cross = -mp.beta(a, b) / K
    out.append(
        _fix(
            "gamma_product_kummer",
            "mpmath.gamma; cross-checked against -B(a,b)/K with K the f2 coefficient",
            _c(val),
            1e-13,
            "Gamma(1-a-b) / (Gamma(1-a) Gamma(1-b)) at (1/4, 1/3)",
            cross_check=_c(cross),
        )
    )
    return out


def _series_fixtures():
    out = []
    out.append(
        _fix("hyp2f1_binomial", "binomial series (1 - x)^(-a)", _c(mp.mpf("0.7") ** -0.5), 1e-13, "2F1(1/2, 7; 7; 0.3)")
    )
    a, b, c, d, e = 0.2, 0.4, 0.6, 1.1, 1.3
    w = WeightedIntegrand(c - 1, e - c - 1, lambda t, omt: np.array([complex(mp.hyp2f1(a, b, d, 0.5 * x)) for x in t]))
    val, _ = integrate_01(w, 1e-14)
    val = val / float(mp.beta(c, e - c))
    out.append(
        _fix(
            "hyp3f2_euler",
            "tanh-sinh of the Euler integral with an mpmath 2F1 integrand",
            _c(val),
            1e-9,
            "3F2(0.2, 0.4, 0.6; 1.1, 1.3; 0.5)",
        )
    )
    return out


def _function_fixtures():
    out = []
    a, b, mu = (_mpf(REF[k]) for k in ("alpha", "beta", "mu"))
    lam = mp.mpf("0.5")
    # F_mu(l) = (l - 1)^mu int_0^1 (1 - u)^(mu - 1) 2F1(a, b; 1; (1 - l) u) du
    w = WeightedIntegrand(
        0.0, float(mu) - 1, lambda t, omt: np.array([complex(mp.hyp2f1(a, b, 1, (1 - lam) * u)) for u in t])
    )
    integral, _ = integrate_01(w, 1e-14)
    val = complex(_branch_pow(lam - 1, mu)) * integral
    out.append(
        _fix(
            "F_mu_integral",
            "tanh-sinh of int_1^lambda (lambda - t)^(mu-1) f2(t) dt after t = 1 + (lambda - 1) u",
            _c(val),
            1e-9,
            "F_mu(0.5) at (1/3, 1/5, 7/2)",
            lam=_c(0.5),
        )
    )
    out.append(
        _fix(
            "cli_eval_F_mu",
            "mpmath.hyp2f1 closed form",
            _c(_F(a, b, mu, lam)),
            1e-12,
            "value printed by `eval --fn F_mu --alpha 1/3 --beta 1/5 --mu 7/2 --lambda 0.5`",
        )
    )
    # ODE endpoint: transport (F, F') along 0.6 -> 0.7 + 0.3i
    z0, z1 = mp.mpc("0.6"), mp.mpc("0.7", "0.3")
    out.append(
        _fix(
            "ode_endpoint",
            "mpmath.hyp2f1 at both ends of the path",
            {"start": _c(_F(a, b, mu, z0)), "start_derivative": _c((mu - 1) * _F(a, b, mu - 1, z0)),
             "end": _c(_F(a, b, mu, z1)), "end_derivative": _c((mu - 1) * _F(a, b, mu - 1, z1))},
            1e-8,
            "F_mu and F_mu' at 0.6 and 0.7+0.3i",
            path=[_c(0.6), _c(0.7 + 0.3j)],
        )
    )
    # Q_m for td = (1, t(1 - t)), m = 7, at three points of the exterior
    pts = [mp.mpc(-1.4), mp.mpc(2.6, 0.4), mp.mpc(-0.5, -1.2)]
    vals = []
    for z in pts:
        # a_0 = 1, b_0 = l(1-l), b_1 = 2l - 1, b_2 = -1
        H = lambda k: _H(a, b, mu + k, z)
        dH = lambda k: (mu + k - 1) * _H(a, b, mu + k - 1, z)
        total = H(0) + z * (1 - z) * dH(0) + (2 * z - 1) * dH(1) - dH(2)
        vals.append(_c(total / 2))
    out.append(
        _fix(
            "Q_m_reference",
            "mpmath.hyp3f2 evaluation of the defining sum",
            vals,
            1e-11,
            "Q_7 at (1/3, 1/5, 7/2, l=2), theta = (1, t(1-t)), at -1.4, 2.6+0.4i, -0.5-1.2i",
            lam=[_c(z) for z in pts],
        )
    )
    lam = 0.5
    val = 2j * mp.pi / 2 * _F(a, b, mu, lam)
    out.append(
        _fix(
            "P_m_identity_theta",
            "mpmath evaluation of the defining sum with p0 = 1, p1 = 0",
            _c(val),
            1e-10,
            "P_7(0.5) at (1/3, 1/5, 7/2, l=2) for theta = 1",
        )
    )
    return out


def _int_rep_fixtures():
    out = []
    a, b, c, x = mp.mpf(1) / 3, mp.mpf(1) / 2, mp.mpf(3) / 2, mp.mpc("0.3", "0.2")
    val = mp.quad(lambda t: (1 - x * t) ** (-a) * t ** (b - 1) * (1 - t) ** (c - b - 1), [0, 1])
    out.append(_fix("int_rep_2F1_complex", "mpmath.quad", _c(val), 1e-9, "Euler integral, (1/3, 1/2, 3/2, 0.3+0.2i)"))
    a, b, c, d, e = (mp.mpf(1) / 3, mp.mpf(2) / 5, mp.mpf(3) / 4, mp.mpf(6) / 5, mp.mpf(9) / 4)
    x = mp.mpf("0.25")
    val = mp.quad(lambda t: mp.hyp2f1(a, b, d, x * t) * t ** (c - 1) * (1 - t) ** (e - c - 1), [0, 1])
    out.append(
        _fix("int_rep_3F2_025", "mpmath.quad", _c(val), 1e-9, "Euler integral, (1/3, 2/5, 3/4, 6/5, 9/4; 0.25)")
    )
    a, b, mu = (_mpf(REF[k]) for k in ("alpha", "beta", "mu"))
    lam = mp.mpc("2.6", "0.4")
    f = lambda t: (lam - t) ** (mu - 1) * t ** (1 - a - b) * mp.hyp2f1(1 - a, 1 - b, 2 - a - b, t)
    val = mp.beta(1 - a, 1 - b) * mp.quad(f, [0, 0.5, 1])
    out.append(
        _fix("H_integral_upper", "mpmath.quad", _c(val), 1e-8, "B(1-a,1-b) int_0^1 (lambda-t)^(mu-1) ... at 2.6+0.4i")
    )
    return out


def _operator_applications():
    """Apply the operators to mpmath-evaluated functions with sympy-expanded coefficients."""
    out = []
    L, f = sp.symbols("lam"), sp.Function("f")
    a, b, mu = (sp.Rational(REF[k].numerator, REF[k].denominator) for k in ("alpha", "beta", "mu"))
    D = lambda e: L * sp.diff(e, L)
    fx = f(L)
    P = D(D(fx) + (a + b - mu - 1) * fx) - L * (D(D(fx)) + (a + b - 2 * mu) * D(fx) + (a - mu) * (b - mu) * fx)
    Q = sp.expand((1 - L) * D(P) + (mu - 1) * L * P)
    DE = L * (1 - L) * sp.diff(fx, L, 2) + (a + b - mu - (a + b - 2 * mu + 1) * L) * sp.diff(fx, L) - (a - mu) * (b - mu) * fx
    annih = sp.expand((1 - L) * D(DE) + (mu - 1) * L * DE)

    ds = sp.symbols("d0:4")
    linear = lambda e: sp.expand(
        e.subs({sp.Derivative(fx, (L, k)): ds[k] for k in (3, 2, 1)}).subs(fx, ds[0])
    )

    def apply(expr, func, lam0):
        lin = linear(expr)
        derivs = [mp.diff(func, lam0, k) for k in range(4)]
        terms = [sp.lambdify(L, lin.coeff(ds[k]), "mpmath")(lam0) * derivs[k] for k in range(4)]
        return sum(terms), max(abs(t) for t in terms)

    with mp.workdps(DPS):
        am, bm, mum = (_mpf(REF[k]) for k in ("alpha", "beta", "mu"))
        lam0 = mp.mpf("-1.4")
        H = lambda z: _H(am, bm, mum, z)
        qh, scale = apply(Q, H, lam0)
        closed = lam0 * _branch_pow(lam0 - 1, mum)
        out.append(
            _fix(
                "Q_HG_on_H",
                "sympy expansion of theta_l o P_HG, mpmath.diff of the 3F2 form of H_mu",
                _c(qh),
                1e-8,
                "(theta_l P_HG H_mu)(-1.4): nonzero, equals l (l - 1)^mu",
                closed_form=_c(closed),
                scale=float(scale),
            )
        )
        ah, scale = apply(annih, H, lam0)
        out.append(
            _fix(
                "H_annihilator_on_H",
                "sympy expansion of theta_l o D, mpmath.diff",
                _c(ah),
                1e-8,
                "(theta_l D H_mu)(-1.4) = 0",
                scale=float(scale),
            )
        )
        F = lambda z: _F(am, bm, mum, z)
        qf, scale = apply(Q, F, mp.mpf("0.5"))
        out.append(
            _fix("Q_HG_on_F", "sympy + mpmath.diff", _c(qf), 1e-8, "(Q_HG F_mu)(0.5) = 0", scale=float(scale))
        )
    return out


def _exact_fixtures():
    out = []
    t, L = sp.symbols("t lam")
    p0, p1 = sp.Integer(1), t * (1 - t)
    fam = lambda p: [
        [str(c) for c in reversed(sp.Poly(sp.expand((-1) ** i / sp.factorial(i) * sp.diff(p.subs(t, L), L, i)), L).all_coeffs())]
        for i in range(3)
    ]
    out.append(
        _fix(
            "derive_ab_reference",
            "sympy differentiation",
            {"a": fam(p0), "b": fam(p1)},
            0,
            "a_i, b_i for p0 = 1, p1 = t(1 - t); coefficient lists in lambda, low degree first",
        )
    )

    s = sp.symbols("s")
    A2, B2 = 2 - sp.Rational(1, 3), 2 - sp.Rational(1, 5)
    den = lambda s_: (A2 + s_ - 1) * (B2 + s_ - 1)
    Afun = lambda s_: s_ * (A2 + B2 + 2 * s_ - 3 - s_ / (1 - L)) / den(s_)
    Bfun = lambda s_: s_ * (1 - s_) * L / den(s_)
    C, Dd = {-1: sp.Integer(0)}, {-1: sp.Integer(1)}
    for i in range(-1, 3):
        Cs, Ds = C[i].subs(s, s + 1), Dd[i].subs(s, s + 1)
        C[i + 1] = sp.cancel(Afun(s) * Cs + Ds / (L - 1))
        Dd[i + 1] = sp.cancel(Bfun(s) * Cs)
    mu = sp.Rational(7, 2)
    pts = [sp.Rational(-3, 2), sp.Rational(5, 2), sp.Rational(-7, 3)]
    vals = {
        f"{name}{i}": [str(sp.nsimplify(fam_[i].subs({s: mu, L: p}))) for p in pts]
        for name, fam_ in (("C", C), ("D", Dd))
        for i in range(0, 3)
    }
    out.append(
        _fix(
            "C_D_reference",
            "sympy: the 2x2 recursion applied symbolically in (s, lambda), then instantiated",
            vals,
            0,
            "C_i(mu), D_i(mu) for i = 0, 1, 2 at a = 5/3, b = 9/5, mu = 7/2, exact values at lambda = -3/2, 5/2, -7/3",
            lam=[str(p) for p in pts],
        )
    )
    out.append(_rho_fixture(C, Dd, s, L, mu, A2, B2))
    return out


def _rho_fixture(C, Dd, s, L, mu, a, b, K: int = 40):
    """Remainders ``rho_i`` by exact series matching in ``x = 1/(1 - lambda)``.

    ``den * (F(s+i) - (lambda-1) C_i F(s) - D_i F(s-1))`` is computed as a
    power series in ``x`` to order ``K``; it must be a polynomial of low
    degree, and that polynomial over ``den`` is ``rho_i``.
    """
    x = sp.symbols("x")

    def series(s0):
        coef, out = sp.Integer(1), []
        for n in range(K):
            out.append(coef)
            coef = coef * (1 + n) * (1 + n) * (1 - s0 + n) / ((a + n) * (b + n) * (n + 1))
        return sp.Poly(list(reversed(out)), x)

    out = {}
    for i in (1, 2):
        Ci = sp.cancel(C[i].subs(s, mu).subs(L, 1 - 1 / x))
        Di = sp.cancel(Dd[i].subs(s, mu).subs(L, 1 - 1 / x))
        lam_minus_1 = -1 / x
        c1 = sp.cancel(lam_minus_1 * Ci)
        n1, d1 = sp.fraction(c1)
        n2, d2 = sp.fraction(Di)
        den = sp.lcm(sp.Poly(d1, x), sp.Poly(d2, x))
        m1 = sp.Poly(sp.cancel(c1 * den.as_expr()), x)
        m2 = sp.Poly(sp.cancel(Di * den.as_expr()), x)
        total = den * series(mu + i) - m1 * series(mu) - m2 * series(mu - 1)
        coeffs = list(reversed(total.all_coeffs()))
        bound = den.degree() + i
        safe = K - max(den.degree(), m1.degree(), m2.degree()) - 1
        if any(c != 0 for c in coeffs[bound:safe]):
            raise AssertionError(f"series remainder for i = {i} is not a polynomial of degree < {bound}")
        rho = sp.cancel(sp.Poly(list(reversed(coeffs[:bound])), x).as_expr() / den.as_expr())
        num, dd = sp.fraction(rho)
        out[str(i)] = {
            "num": [str(c) for c in reversed(sp.Poly(num, x).all_coeffs())],
            "den": [str(c) for c in reversed(sp.Poly(dd, x).all_coeffs())],
        }
    return _fix(
        "rho_reference",
        "exact series-coefficient matching in x = 1/(1 - lambda) (sympy)",
        out,
        0,
        "rho_i(x) with F(s+i) = (lambda-1) C_i F(s) + D_i F(s-1) + rho_i at the reference parameters",
    )


# --- public -----------------------------------------------------------------------------------


def generate() -> dict:
    with mp.workdps(DPS):
        items = (
            _gamma_fixtures()
            + _series_fixtures()
            + _function_fixtures()
            + _int_rep_fixtures()
            + _operator_applications()
            + _exact_fixtures()
        )
    return {"version": 1, "reference": {k: str(v) for k, v in REF.items()}, "fixtures": items}


def write(path: Path | str = DEFAULT_PATH) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(generate(), indent=1, ensure_ascii=False) + "\n")
    return path


def load(path: Path | str = DEFAULT_PATH) -> dict:
    return json.loads(Path(path).read_text())


def by_id(table: dict) -> dict:
    return {f["id"]: f for f in table["fixtures"]}


def _numbers(v):
    if isinstance(v, dict):
        for k in sorted(v):
            yield from _numbers(v[k])
    elif isinstance(v, list):
        for x in v:
            yield from _numbers(x)
    else:
        yield v


def compare(stored: dict, fresh: dict, rel: float = 1e-10) -> list[str]:
    """Ids whose values differ (numbers beyond ``rel``, strings exactly)."""
    a, b = by_id(stored), by_id(fresh)
    bad = sorted(set(a) ^ set(b))
    for fid in sorted(set(a) & set(b)):
        xs, ys = list(_numbers(a[fid]["value"])), list(_numbers(b[fid]["value"]))
        if len(xs) != len(ys):
            bad.append(fid)
            continue
        nums = [(x, y) for x, y in zip(xs, ys) if isinstance(x, (int, float)) and isinstance(y, (int, float))]
        scale = max([abs(x) for x, _ in nums] + [1e-300])
        if any(isinstance(x, str) and x != y for x, y in zip(xs, ys)) or any(
            abs(x - y) > rel * scale + 1e-300 for x, y in nums
        ):
            bad.append(fid)
    return bad
