"""Specialization of universal Lie series to a concrete Lie algebra."""
from __future__ import annotations

from fractions import Fraction

from .algebra import LieAlgebraSpec
from .poly import CoordinatePolynomial, Matrix
from .series import LieSeries
from .words import standard_factorization

Vector = list[CoordinatePolynomial]


def coordinate_vector(alg: LieAlgebraSpec, letter: int, alphabet_size: int = 2, max_degree=None) -> Vector:
    """Generic element of the algebra for ``letter``; variables are ordered letter-major."""
    nv = alphabet_size * alg.dim
    return [CoordinatePolynomial.variable(nv, letter * alg.dim + a, max_degree) for a in range(alg.dim)]


def bracket_poly(alg: LieAlgebraSpec, a: Vector, b: Vector, max_degree=None) -> Vector:
    nv = a[0].nvars
    out = [CoordinatePolynomial.zero(nv, max_degree) for _ in range(alg.dim)]
    for (i, j, k), c in alg._table.items():
        if a[i].terms and b[j].terms:
            out[k] = out[k] + a[i].mul(b[j], max_degree).scale(c)
    return out


def eval_on_algebra(s: LieSeries, alg: LieAlgebraSpec, max_degree=None) -> Vector:
    """Evaluate ``s`` with generator ``i`` sent to the generic element of letter ``i``."""
    nv = s.alphabet_size * alg.dim
    gens = [coordinate_vector(alg, i, s.alphabet_size, max_degree) for i in range(s.alphabet_size)]
    memo: dict = {}

    def ev(w):
        if w not in memo:
            if len(w) == 1:
                memo[w] = gens[w[0]]
            else:
                u, v = standard_factorization(w)
                memo[w] = bracket_poly(alg, ev(u), ev(v), max_degree)
        return memo[w]

    out = [CoordinatePolynomial.zero(nv, max_degree) for _ in range(alg.dim)]
    for w, c in s.coeffs.items():
        if max_degree is not None and len(w) > max_degree:
            continue
        vec = ev(w)
        out = [o + p.scale(c) for o, p in zip(out, vec)]
    return out


def ad_matrix(v: Vector, alg: LieAlgebraSpec) -> Matrix:
    """``ad v`` as a matrix of polynomials; entry ``[a][b]`` = e_a-part of ``[v, e_b]``."""
    nv = v[0].nvars
    m = [[CoordinatePolynomial.zero(nv) for _ in range(alg.dim)] for _ in range(alg.dim)]
    for (i, j, k), c in alg._table.items():
        if v[i].terms:
            m[k][j] = m[k][j] + v[i].scale(c)
    return m


def identity_matrix(nvars: int, dim: int, max_degree=None) -> Matrix:
    return [[CoordinatePolynomial.constant(nvars, Fraction(1) if a == b else 0, max_degree)
             for b in range(dim)] for a in range(dim)]
