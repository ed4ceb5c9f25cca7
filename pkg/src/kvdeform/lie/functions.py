"""Scalar power series feeding the trace formulas (exact rationals)."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import sympy

from .poly import CoordinatePolynomial, log_series


def _from_poly(p: CoordinatePolynomial, kmax: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(p.terms.get((k,), 0)) for k in range(kmax + 1))


@lru_cache(maxsize=None)
def bernoulli_numbers(kmax: int) -> tuple[Fraction, ...]:
    """``B_0..B_kmax`` with ``B_1 = -1/2`` (generating function ``s / (e^s - 1)``)."""
    out = []
    for k in range(kmax + 1):
        b = sympy.bernoulli(k)
        out.append(Fraction(-1, 2) if k == 1 else Fraction(int(b.p), int(b.q)))
    return tuple(out)


@lru_cache(maxsize=None)
def todd_coefficients(kmax: int) -> tuple[Fraction, ...]:
    """Taylor coefficients of ``s / (e^s - 1)``."""
    return tuple(b / math.factorial(k) for k, b in enumerate(bernoulli_numbers(kmax)))


@lru_cache(maxsize=None)
def log_j_coefficients(kmax: int) -> tuple[Fraction, ...]:
    """Taylor coefficients of ``log((1 - e^{-s}) / s)``."""
    m = CoordinatePolynomial(1, {(k,): Fraction((-1) ** k, math.factorial(k + 1)) for k in range(kmax + 1)}, kmax)
    return _from_poly(log_series(m, kmax), kmax)


@lru_cache(maxsize=None)
def log_q_coefficients(kmax: int) -> tuple[Fraction, ...]:
    """Taylor coefficients of ``log(sinh(s/2) / (s/2))``."""
    m = CoordinatePolynomial(1, {(2 * k,): Fraction(1, 4 ** k * math.factorial(2 * k + 1))
                                 for k in range(kmax // 2 + 1)}, kmax)
    return _from_poly(log_series(m, kmax), kmax)
