"""Matrices of coordinate polynomials and truncated functional calculus on them."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import CoordinatePolynomial, Matrix, matmul_poly, trace_poly


def identity(nvars: int, dim: int) -> Matrix:
    one = CoordinatePolynomial.constant(nvars, Fraction(1))
    zero = CoordinatePolynomial.zero(nvars)
    return [[one if a == b else zero for b in range(dim)] for a in range(dim)]


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[p + q for p, q in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a: Matrix, s) -> Matrix:
    return [[p.scale(s) for p in row] for row in a]


def truncate(a: Matrix, d: int) -> Matrix:
    return [[p.truncate(d) for p in row] for row in a]


def power_series(a: Matrix, coeffs: Sequence, max_degree: int) -> Matrix:
    """``sum_k coeffs[k] a^k`` for a matrix without constant part, truncated in total degree."""
    dim = len(a)
    nv = a[0][0].nvars
    out = scale(identity(nv, dim), coeffs[0]) if coeffs else [[CoordinatePolynomial.zero(nv)] * dim] * dim
    power = identity(nv, dim)
    for k in range(1, min(len(coeffs), max_degree + 1)):
        power = matmul_poly(power, a, max_degree)
        if coeffs[k]:
            out = add(out, scale(power, coeffs[k]))
    return truncate(out, max_degree)


def log_unipotent(m: Matrix, max_degree: int) -> Matrix:
    """``log(m)`` for ``m = 1 + n`` with ``n`` of positive degree."""
    dim = len(m)
    nv = m[0][0].nvars
    n = add(m, scale(identity(nv, dim), -1))
    for row in n:
        for p in row:
            if p.constant_term() != 0:
                raise ValueError("log_unipotent needs identity constant part")
    coeffs = [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, max_degree + 1)]
    return power_series(n, coeffs, max_degree)


def trace_powers(a: Matrix, kmax: int, max_degree: int) -> list[CoordinatePolynomial]:
    """``[tr a^0, tr a^1, ..., tr a^kmax]`` truncated."""
    dim = len(a)
    nv = a[0][0].nvars
    out = [CoordinatePolynomial.constant(nv, Fraction(dim))]
    power = identity(nv, dim)
    for _ in range(kmax):
        power = matmul_poly(power, a, max_degree)
        out.append(trace_poly(power).truncate(max_degree))
    return out


def apply(a: Matrix, v: list[CoordinatePolynomial], max_degree: int | None = None) -> list[CoordinatePolynomial]:
    out = []
    for row in a:
        acc = CoordinatePolynomial.zero(v[0].nvars, max_degree)
        for p, q in zip(row, v):
            if p.terms and q.terms:
                acc = acc + p.mul(q, max_degree)
        out.append(acc)
    return out


__all__ = ["identity", "add", "scale", "truncate", "power_series", "log_unipotent", "trace_powers",
           "apply", "trace_poly", "matmul_poly"]
