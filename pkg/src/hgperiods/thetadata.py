"""The first-order operator ``p0(t) + p1(t) d/dt`` and its Taylor data at ``lambda``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import P1Error
from .ratfunc import Poly

__all__ = ["ThetaData", "derive_ab"]

_T_ONE_MINUS_T = Poly([0, 1, -1])


@dataclass(frozen=True)
class ThetaData:
    """``p0``, ``p1`` plus the coefficient families ``a_i``, ``b_i``.

    ``a_i(lambda) = (-1)^i / i! * p0^(i)(lambda)`` (likewise ``b_i`` from ``p1``),
    so that ``p0(t) = sum_i a_i(lambda) (lambda - t)^i``. Lists have length
    ``N + 1`` with ``N = max(deg p0, deg p1, 0)``.
    """

    p0: Poly
    p1: Poly
    a: tuple = field(default=())
    b: tuple = field(default=())

    @property
    def N(self) -> int:
        return len(self.a) - 1

    def a_at(self, i: int) -> Poly:
        return self.a[i] if 0 <= i < len(self.a) else Poly()

    def b_at(self, i: int) -> Poly:
        return self.b[i] if 0 <= i < len(self.b) else Poly()

    def to_dict(self) -> dict:
        return {"p0": [str(c) for c in self.p0.coeffs], "p1": [str(c) for c in self.p1.coeffs]}


def _taylor_family(p: Poly, N: int) -> tuple:
    out = []
    for i in range(N + 1):
        out.append(Poly([c * Fraction((-1) ** i, math.factorial(i)) for c in p.derivative(i).coeffs]))
    return tuple(out)


def derive_ab(p0, p1, check_p1: bool = True) -> ThetaData:
    """Build :class:`ThetaData`; ``p0``, ``p1`` are Polys or coefficient lists (low degree first)."""
    p0 = p0 if isinstance(p0, Poly) else Poly(p0)
    p1 = p1 if isinstance(p1, Poly) else Poly(p1)
    if check_p1 and not (p1 % _T_ONE_MINUS_T).is_zero():
        raise P1Error(f"t(1 - t) does not divide p1 = {p1.pretty('t')}")
    N = max(p0.degree, p1.degree, 0)
    return ThetaData(p0, p1, _taylor_family(p0, N), _taylor_family(p1, N))


def reconstruct(td: ThetaData, which: str = "p0"):
    """``sum_i c_i(lambda) (lambda - t)^i`` as a dict ``{(deg_t, deg_lambda): coeff}``.

    Used to check the reconstruction identity exactly in both variables.
    """
    fam = td.a if which == "p0" else td.b
    out: dict = {}
    for i, c in enumerate(fam):
        # (lambda - t)^i = sum_j binom(i, j) lambda^(i-j) (-t)^j
        for j in range(i + 1):
            coef = math.comb(i, j) * (-1) ** j
            for dl, cl in enumerate(c.coeffs):
                key = (j, dl + i - j)
                out[key] = out.get(key, 0) + coef * cl
    return {k: v for k, v in out.items() if v != 0}
