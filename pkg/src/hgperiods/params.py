"""Exact rational parameter bundle for the hypergeometric family."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import HypothesisError
from .ratfunc import as_fraction

__all__ = ["HGParams", "frac_mod1", "random_params"]


def frac_mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


@dataclass(frozen=True)
class HGParams:
    """Monodromy exponents ``alpha``, ``beta`` and the exponent ``mu = m/l``.

    ``k`` and ``q_chi = k/l`` are derived from ``mu`` and ``l``. ``alpha0`` is
    carried for completeness and must be zero. Construction validates the
    hypotheses unless ``validate=False`` (oracles and tests of the
    validation itself use that).
    """

    alpha: Fraction
    beta: Fraction
    mu: Fraction
    l: int = 1
    alpha0: Fraction = Fraction(0)
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        for name in ("alpha", "beta", "mu", "alpha0"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if not isinstance(self.l, int) or self.l < 1:
            raise HypothesisError([f"l must be a positive integer (got {self.l!r})"])
        if (self.mu * self.l).denominator != 1:
            raise HypothesisError([f"mu = {self.mu} is not of the form m/l with l = {self.l}"])
        if self.validate:
            problems = self.violations()
            if problems:
                raise HypothesisError(problems)

    @property
    def m(self) -> int:
        return int(self.mu * self.l)

    @property
    def k(self) -> int:
        return self.m % self.l

    @property
    def q_chi(self) -> Fraction:
        return Fraction(self.k, self.l)

    def violations(self) -> list[str]:
        out = []
        a, b, mu = self.alpha, self.beta, self.mu
        if not 0 <= a < 1:
            out.append(f"alpha must lie in [0, 1) (alpha = {a})")
        if not 0 <= b < 1:
            out.append(f"beta must lie in [0, 1) (beta = {b})")
        if self.alpha0 != 0:
            out.append(f"alpha0 must be 0 (alpha0 = {self.alpha0})")
        if not mu > 1:
            out.append(f"mu > 1 required (mu = {mu})")
        fm = frac_mod1(mu)
        if fm == 0:
            out.append(f"q_chi ≢ 0 (mod Z) violated: mu = {mu} is an integer")
        if fm == frac_mod1(a):
            out.append(f"mu ≢ alpha (mod Z) violated: mu = {mu}, alpha = {a}")
        if fm == frac_mod1(b):
            out.append(f"mu ≢ beta (mod Z) violated: mu = {mu}, beta = {b}")
        if fm == frac_mod1(a + b):
            out.append(f"mu ≢ alpha + beta (mod Z) violated: mu = {mu}, alpha + beta = {a + b}")
        return out

    def with_m(self, m: int) -> "HGParams":
        """Same family at ``mu = m/l``; ``m`` must be congruent to ``k`` mod ``l``."""
        if (m - self.m) % self.l:
            raise HypothesisError([f"m = {m} is not congruent to k = {self.k} mod l = {self.l}"])
        return replace(self, mu=Fraction(m, self.l))

    def shift_of(self, m: int) -> int:
        """Integer shift ``m/l - mu`` for an admissible ``m``."""
        if (m - self.m) % self.l:
            raise HypothesisError([f"m = {m} is not congruent to k = {self.k} mod l = {self.l}"])
        return (m - self.m) // self.l

    def admissible_m(self, count: int) -> list[int]:
        """First ``count`` values ``m > l``, ``m ≡ k (mod l)`` satisfying the hypotheses."""
        out = []
        m = self.k if self.k else self.l
        while len(out) < count:
            if m > self.l:
                cand = replace(self, mu=Fraction(m, self.l), validate=False)
                if not cand.violations():
                    out.append(m)
            m += self.l
        return out

    def to_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "mu": str(self.mu),
            "l": self.l,
            "k": self.k,
            "q_chi": str(self.q_chi),
        }


def random_params(rng: random.Random, max_den: int = 7, max_mu: int = 5) -> HGParams:
    """Draw parameters satisfying every hypothesis; alpha, beta are kept off 0."""
    while True:
        a = Fraction(rng.randint(1, max_den - 1), max_den) if rng.random() < 0.5 else Fraction(
            rng.randint(1, 5), 6
        )
        b = Fraction(rng.randint(1, 9), 10) if rng.random() < 0.5 else Fraction(rng.randint(1, 4), 5)
        l = rng.randint(2, 6)
        m = rng.randint(l + 1, max_mu * l)
        p = HGParams(a, b, Fraction(m, l), l, validate=False)
        if not p.violations():
            return replace(p, validate=True)
