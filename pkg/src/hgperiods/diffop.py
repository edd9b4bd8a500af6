"""Exact differential operators with rational-function coefficients in lambda.

An operator is ``sum_k c_k(lambda) d^k`` where ``d`` is either ``d/dlambda``
(basis ``"d"``) or the Euler operator ``lambda d/dlambda`` (basis ``"D"``).
Products are computed with the commutation rule ``d o f = f d + delta(f)``,
``delta`` being the derivation matching the basis, so composition never
leaves exact arithmetic.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Mapping


from .errors import DegenerateParameterError
from .params import HGParams
from .ratfunc import Poly, RationalFunction, as_fraction
from .thetadata import ThetaData

__all__ = [
    "DiffOperator",
    "compose",
    "right_divide",
    "build_D",
    "build_P_HG",
    "build_theta_lambda",
    "build_Q_HG",
    "build_Q_HG_expanded",
    "build_H_annihilator",
    "build_Theta",
    "build_Theta_parts",
    "theta2_step",
    "derivative_of_first_order",
    "apply_to_derivatives",
]

_LAM = RationalFunction.x()
_ONE = RationalFunction.const(1)


def _rf(c) -> RationalFunction:
    if isinstance(c, RationalFunction):
        return c
    if isinstance(c, Poly):
        return RationalFunction(c)
    return RationalFunction.const(as_fraction(c))


def _delta(f: RationalFunction, basis: str) -> RationalFunction:
    d = f.derivative()
    return d if basis == "d" else _LAM * d


class DiffOperator:
    """Immutable finite-order operator; ``coeffs`` maps order -> RationalFunction."""

    __slots__ = ("coeffs", "basis")

    def __init__(self, coeffs: Mapping[int, object] | None = None, basis: str = "d"):
        if basis not in ("d", "D"):
            raise ValueError("basis must be 'd' (d/dlambda) or 'D' (lambda d/dlambda)")
        cs = {}
        for k, c in (coeffs or {}).items():
            c = _rf(c)
            if k < 0:
                raise ValueError("negative derivative order")
            if not c.is_zero():
                cs[int(k)] = c
        self.coeffs = dict(sorted(cs.items()))
        self.basis = basis

    # constructors
    @classmethod
    def identity(cls, basis: str = "d") -> "DiffOperator":
        return cls({0: 1}, basis)

    @classmethod
    def zero(cls, basis: str = "d") -> "DiffOperator":
        return cls({}, basis)

    @classmethod
    def partial(cls, power: int = 1, basis: str = "d") -> "DiffOperator":
        return cls({power: 1}, basis)

    @classmethod
    def multiplication(cls, c, basis: str = "d") -> "DiffOperator":
        return cls({0: c}, basis)

    @property
    def order(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    @property
    def leading(self) -> RationalFunction:
        return self.coeffs[self.order]

    def coeff(self, k: int) -> RationalFunction:
        return self.coeffs.get(k, RationalFunction.const(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        if self.basis != other.basis:
            other = other.to_basis(self.basis)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.basis, tuple(self.coeffs.items())))

    def _same(self, other: "DiffOperator") -> "DiffOperator":
        if other.basis != self.basis:
            raise ValueError("operators are in different bases; convert first")
        return other

    def __add__(self, other: "DiffOperator"):
        other = self._same(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, RationalFunction.const(0)) + c
        return DiffOperator(out, self.basis)

    def __neg__(self):
        return DiffOperator({k: -c for k, c in self.coeffs.items()}, self.basis)

    def __sub__(self, other: "DiffOperator"):
        return self + (-other)

    def scale(self, c) -> "DiffOperator":
        """Left multiplication by a rational function (or number)."""
        c = _rf(c)
        return DiffOperator({k: c * v for k, v in self.coeffs.items()}, self.basis)

    def __matmul__(self, other: "DiffOperator"):
        return compose(self, other)

    # basis changes
    def to_d_basis(self) -> "DiffOperator":
        if self.basis == "d":
            return self
        euler = DiffOperator({1: _LAM}, "d")
        out = DiffOperator.zero("d")
        power = DiffOperator.identity("d")
        for k in range(self.order + 1):
            if k:
                power = compose(euler, power)
            if k in self.coeffs:
                out = out + DiffOperator.multiplication(self.coeffs[k], "d") @ power
        return out

    def to_D_basis(self) -> "DiffOperator":
        if self.basis == "D":
            return self
        # d/dlambda = lambda^{-1} D
        step = DiffOperator({1: 1 / _LAM}, "D")
        out = DiffOperator.zero("D")
        power = DiffOperator.identity("D")
        for k in range(self.order + 1):
            if k:
                power = compose(step, power)
            if k in self.coeffs:
                out = out + DiffOperator.multiplication(self.coeffs[k], "D") @ power
        return out

    def to_basis(self, basis: str) -> "DiffOperator":
        return self.to_d_basis() if basis == "d" else self.to_D_basis()

    # numeric use
    def evaluate_coeffs(self, lam) -> list:
        """Numeric d-basis coefficients ``[c_0(lam), ..., c_n(lam)]``."""
        op = self.to_d_basis()
        return [op.coeff(k)(lam) for k in range(op.order + 1)]

    def denominators(self) -> list:
        return [c.den for c in self.coeffs.values()]

    # text and JSON
    def pretty(self, var: str = "λ") -> str:
        sym = "∂" if self.basis == "d" else "D"
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in self.coeffs.items():
            cs = c.pretty(var)
            if k == 0:
                parts.append(f"({cs})")
            else:
                op = sym if k == 1 else f"{sym}^{k}"
                parts.append(f"({cs})·{op}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        order = self.order
        return {
            "basis": self.basis,
            "coeffs": [self.coeff(k).to_json() for k in range(order + 1)],
        }

    @classmethod
    def from_json(cls, data) -> "DiffOperator":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            {k: RationalFunction.from_json(c) for k, c in enumerate(data["coeffs"])},
            data.get("basis", "d"),
        )

    def __repr__(self):
        return f"DiffOperator[{self.basis}]({self.pretty()})"


def compose(L: DiffOperator, M: DiffOperator) -> DiffOperator:
    """Exact product ``L o M`` via Leibniz' rule."""
    if L.basis != M.basis:
        raise ValueError("compose needs both operators in the same basis")
    basis = L.basis
    out: dict[int, RationalFunction] = {}
    # cache delta^k(M_j)
    for j, mj in M.coeffs.items():
        derivs = [mj]
        for i, li in L.coeffs.items():
            while len(derivs) <= i:
                derivs.append(_delta(derivs[-1], basis))
            for k in range(i + 1):
                dk = derivs[k]
                if dk.is_zero():
                    continue
                term = li * dk * math.comb(i, k)
                key = i - k + j
                out[key] = out[key] + term if key in out else term
    return DiffOperator(out, basis)


def right_divide(L: DiffOperator, D: DiffOperator):
    """Right Euclidean division ``L = Q o D + R`` with ``order(R) < order(D)``."""
    if D.is_zero():
        raise ZeroDivisionError("division by the zero operator")
    if L.basis != D.basis:
        L = L.to_basis(D.basis)
    basis = D.basis
    q = DiffOperator.zero(basis)
    r = L
    lead = D.leading
    while not r.is_zero() and r.order >= D.order:
        s = r.order - D.order
        c = r.leading / lead
        step = DiffOperator({s: c}, basis)
        q = q + step
        r = r - compose(step, D)
    return q, r


# --- the operators of the hypergeometric family -----------------------------


def build_D(p: HGParams, shift: int = 0) -> DiffOperator:
    """``l(1-l) d^2 + (a + b - mu - (a + b - 2mu + 1) l) d - (a - mu)(b - mu)``."""
    a, b, mu = p.alpha, p.beta, p.mu + shift
    return DiffOperator(
        {
            2: Poly([0, 1, -1]),
            1: Poly([a + b - mu, -(a + b - 2 * mu + 1)]),
            0: -(a - mu) * (b - mu),
        },
        "d",
    )


def _D_poly(*roots) -> DiffOperator:
    """``prod (D + r)`` in the Euler basis with constant coefficients."""
    out = DiffOperator.identity("D")
    for r in roots:
        out = compose(out, DiffOperator({1: 1, 0: r}, "D"))
    return out


def build_P_HG(p: HGParams) -> DiffOperator:
    """``D(D - mu + a + b - 1) - l (D + a - mu)(D + b - mu)`` with ``D = l d/dl``."""
    a, b, mu = p.alpha, p.beta, p.mu
    first = _D_poly(0, -mu + a + b - 1)
    second = _D_poly(a - mu, b - mu).scale(_LAM)
    return first - second


def build_theta_lambda(p: HGParams) -> DiffOperator:
    """``(1 - l) D + (mu - 1) l``."""
    return DiffOperator({1: Poly([1, -1]), 0: Poly([0, p.mu - 1])}, "D")


def build_Q_HG(p: HGParams) -> DiffOperator:
    return compose(build_theta_lambda(p), build_P_HG(p))


def _dpoly_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _dpoly_add(*ps) -> list:
    n = max(len(p) for p in ps)
    return [sum((p[k] if k < len(p) else Fraction(0)) for p in ps) for k in range(n)]


def build_Q_HG_expanded(p: HGParams) -> DiffOperator:
    """``theta_l o P_HG`` expanded by hand with ``D o l = l (D + 1)``.

    Writing ``P_HG = P0(D) - l P1(D)`` and ``theta_l = D + l (mu - 1 - D)``:
    ``Q = D P0 + l [(mu - 1 - D) P0 - (D + 1) P1] + l^2 (D + 2 - mu) P1``,
    a construction that does not go through :func:`compose`.
    """
    a, b, mu = p.alpha, p.beta, p.mu
    one = Fraction(1)
    P0 = _dpoly_mul([Fraction(0), one], [a + b - mu - 1, one])
    P1 = _dpoly_mul([a - mu, one], [b - mu, one])
    D = [Fraction(0), one]
    c0 = _dpoly_mul(D, P0)
    c1 = _dpoly_add(_dpoly_mul([mu - 1, -one], P0), [-x for x in _dpoly_mul([one, one], P1)])
    c2 = _dpoly_mul([2 - mu, one], P1)
    coeffs: dict[int, Poly] = {}
    for lam_power, cp in enumerate((c0, c1, c2)):
        for k, c in enumerate(cp):
            if c:
                coeffs[k] = coeffs.get(k, Poly()) + Poly([0] * lam_power + [c])
    return DiffOperator(coeffs, "D")


def build_H_annihilator(p: HGParams) -> DiffOperator:
    """``theta_l o D``: third-order operator killing F_mu, G_mu and H_mu.

    ``D H_mu = -(l - 1)^(mu - 1)`` and ``theta_l`` kills ``(l - 1)^(mu - 1)``.
    (``theta_l o P_HG = theta_l o l D`` does not kill ``H_mu``.)
    """
    return compose(build_theta_lambda(p), build_D(p).to_D_basis())


def theta2_step(p: HGParams, j: int) -> DiffOperator:
    """Operator ``S`` with ``F_{mu+j} = S F_{mu+j-1}``.

    From the ODE at exponent ``nu = mu + j``:
    ``(a - nu)(b - nu) F_nu = (l(1-l) d + g_nu)(nu - 1) F_{nu-1}``.
    """
    a, b = p.alpha, p.beta
    nu = p.mu + j
    div = (a - nu) * (b - nu)
    if div == 0:
        raise DegenerateParameterError(f"(alpha - nu)(beta - nu) vanishes at nu = {nu}")
    g = Poly([a + b - nu, -(a + b - 2 * nu + 1)])
    return DiffOperator({1: Poly([0, 1, -1]), 0: g}, "d").scale(Fraction(nu - 1) / div)


def build_Theta_parts(p: HGParams, td: ThetaData, N: int | None = None):
    """``(Theta1, Theta2)`` with ``P_m = 2 pi i Theta1 F_{mu+N}`` and ``F_{mu+N} = Theta2 F_mu``."""
    if N is None:
        N = td.N
    if N < td.N:
        raise ValueError(f"N = {N} is below the degree bound {td.N}")
    mu = p.mu
    poch = [Fraction(1)]
    for i in range(N):
        poch.append(poch[-1] * (mu + i))
    theta1 = {}
    for i in range(N + 1):
        w = poch[i] / poch[N] / p.l
        ai, bi = td.a_at(i), td.b_at(i)
        for order, c in ((N - i, ai), (N + 1 - i, bi)):
            if c.is_zero():
                continue
            theta1[order] = theta1.get(order, RationalFunction.const(0)) + RationalFunction(c) * w
    theta1 = DiffOperator(theta1, "d")
    theta2 = DiffOperator.identity("d")
    for j in range(1, N + 1):
        theta2 = compose(theta2_step(p, j), theta2)
    return theta1, theta2


def build_Theta(p: HGParams, td: ThetaData, N: int | None = None) -> DiffOperator:
    """First-order ``Theta = q + r d`` with ``P_m = 2 pi i Theta F_mu``."""
    theta1, theta2 = build_Theta_parts(p, td, N)
    _, rem = right_divide(compose(theta1, theta2), build_D(p))
    return rem


def derivative_of_first_order(theta: DiffOperator, p: HGParams) -> DiffOperator:
    """``d o Theta`` reduced modulo the ODE, again first order."""
    _, rem = right_divide(compose(DiffOperator.partial(1), theta.to_d_basis()), build_D(p))
    return rem


def apply_to_derivatives(op: DiffOperator, lam, derivs) -> complex:
    """``sum_k c_k(lam) f^(k)(lam)`` for known derivative values ``derivs[k]``."""
    cs = op.evaluate_coeffs(lam)
    if len(derivs) < len(cs):
        raise ValueError(f"need {len(cs)} derivative values, got {len(derivs)}")
    return sum(c * d for c, d in zip(cs, derivs))
