"""Exact Campbell-Hausdorff series, computed two independent ways."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import sympy

from .series import LieSeries, bracket, from_tensor, generators

Tensor = dict[tuple[int, ...], Fraction]


def _tmul(a: Tensor, b: Tensor, max_degree: int) -> Tensor:
    out: Tensor = {}
    for u, cu in a.items():
        for v, cv in b.items():
            if len(u) + len(v) <= max_degree:
                out[u + v] = out.get(u + v, 0) + cu * cv
    return {w: c for w, c in out.items() if c != 0}


def _texp_letter(letter: int, max_degree: int) -> Tensor:
    out: Tensor = {}
    fact = 1
    for k in range(max_degree + 1):
        if k:
            fact *= k
        out[(letter,) * k] = Fraction(1, fact)
    return out


def bch_tensor(max_degree: int) -> LieSeries:
    """``log(exp(x) exp(y))`` in the truncated tensor algebra, then rewritten in the Lyndon basis."""
    prod = _tmul(_texp_letter(0, max_degree), _texp_letter(1, max_degree), max_degree)
    q = {w: c for w, c in prod.items() if w}
    log: Tensor = {}
    power: Tensor = {(): Fraction(1)}
    for k in range(1, max_degree + 1):
        power = _tmul(power, q, max_degree)
        sign = Fraction((-1) ** (k + 1), k)
        for w, c in power.items():
            log[w] = log.get(w, 0) + sign * c
    return from_tensor(log, 2, max_degree)


def bch_recursive(max_degree: int) -> LieSeries:
    """Homogeneous recursion in the Lie algebra itself.

    ``(n+1) Z_{n+1} = 1/2 [x-y, Z_n]
        + sum_{p>=1, 2p<=n} B_{2p}/(2p)! sum_{k_1+..+k_2p = n} [Z_k1, [... [Z_k2p, x+y]...]]``
    """
    x, y = generators(2)
    parts = {1: x + y}
    for n in range(1, max_degree):
        acc = bracket(x - y, parts[n], max_degree).scale(Fraction(1, 2))
        for p in range(1, n // 2 + 1):
            coef = Fraction(sympy.bernoulli(2 * p)) / _factorial(2 * p)
            for ks in _compositions(n, 2 * p):
                term = x + y
                for k in reversed(ks):
                    term = bracket(parts[k], term, max_degree)
                acc = acc + term.scale(coef)
        parts[n + 1] = acc.scale(Fraction(1, n + 1))
    out = LieSeries.zero(2, max_degree)
    for d in range(1, max_degree + 1):
        out = out + parts[d]
    return out


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class OracleDisagreement(AssertionError):
    pass


@lru_cache(maxsize=None)
def bch_oracle(max_degree: int) -> LieSeries:
    """Campbell-Hausdorff series through ``max_degree``; both routes must agree exactly."""
    if max_degree < 1:
        raise ValueError("max_degree >= 1 required")
    a = bch_tensor(max_degree)
    b = bch_recursive(max_degree)
    if a != b:
        raise OracleDisagreement(f"BCH routes disagree: {a - b}")
    return a


def single_y_coefficients(max_n: int) -> list[Fraction]:
    """Coefficients ``b_n`` of ``ad(x)^n y`` in the series, ``n = 0..max_n``."""
    z = bch_oracle(max_n + 1)
    return [Fraction(z[(0,) * n + (1,)]) for n in range(max_n + 1)]
