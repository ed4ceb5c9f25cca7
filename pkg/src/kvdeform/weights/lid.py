"""Closed-form weights of ladder graphs along the upper lid."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import sympy

from ..lie.poly import CoordinatePolynomial


@lru_cache(maxsize=None)
def bernoulli_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients ``c_0..c_n`` of ``b_n(t) = sum c_k t^k`` (so ``b_1(t) = t - 1/2``)."""
    if n < 0:
        raise ValueError("n >= 0 required")
    t = sympy.Symbol("t")
    poly = sympy.Poly(sympy.bernoulli(n, t), t)
    coeffs = [Fraction(0)] * (n + 1)
    for (k,), c in poly.terms():
        coeffs[k] = Fraction(int(c.p), int(c.q))
    return tuple(coeffs)


@lru_cache(maxsize=None)
def lid_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients in ``t = theta/pi`` of ``(-1)^n b_n(t) / n!``."""
    s = Fraction((-1) ** n, math.factorial(n))
    return tuple(s * c for c in bernoulli_polynomial(n))


def bernoulli_lid_exact(n: int, t: Fraction) -> Fraction:
    """Ladder weight at ``theta = t*pi`` for rational ``t`` in ``[0, 1]``."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError("t = theta/pi must lie in [0, 1]")
    return sum((c * t ** k for k, c in enumerate(lid_polynomial(n))), Fraction(0))


def bernoulli_lid(n: int, theta: float) -> float:
    """Ladder weight ``(-1)^n b_n(theta/pi) / n!`` at an upper-lid angle."""
    if not -1e-12 <= theta <= math.pi + 1e-12:
        raise ValueError("theta must lie in [0, pi]")
    t = theta / math.pi
    return float(sum(float(c) * t ** k for k, c in enumerate(lid_polynomial(n))))


def lid_as_polynomial(n: int) -> CoordinatePolynomial:
    """The same weight as a one-variable polynomial in ``t``."""
    return CoordinatePolynomial(1, {(k,): c for k, c in enumerate(lid_polynomial(n))})
