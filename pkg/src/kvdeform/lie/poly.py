"""Sparse multivariate polynomials with exact or float coefficients."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

Exps = tuple[int, ...]


@dataclass(frozen=True)
class CoordinatePolynomial:
    nvars: int
    terms: Mapping[Exps, object] = field(default_factory=dict)
    max_degree: int | None = None

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            if c == 0:
                continue
            if len(e) != self.nvars:
                raise ValueError("exponent length does not match nvars")
            if self.max_degree is not None and sum(e) > self.max_degree:
                continue
            clean[tuple(e)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def constant(cls, nvars: int, c, max_degree=None) -> "CoordinatePolynomial":
        return cls(nvars, {(0,) * nvars: c}, max_degree)

    @classmethod
    def variable(cls, nvars: int, i: int, max_degree=None) -> "CoordinatePolynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)}, max_degree)

    @classmethod
    def zero(cls, nvars: int, max_degree=None) -> "CoordinatePolynomial":
        return cls(nvars, {}, max_degree)

    def _cap(self, other) -> int | None:
        caps = [d for d in (self.max_degree, getattr(other, "max_degree", None)) if d is not None]
        return min(caps) if caps else None

    def __add__(self, other):
        if not isinstance(other, CoordinatePolynomial):
            other = CoordinatePolynomial.constant(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return CoordinatePolynomial(self.nvars, out, self._cap(other))

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other if isinstance(other, CoordinatePolynomial) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s) -> "CoordinatePolynomial":
        return CoordinatePolynomial(self.nvars, {e: s * c for e, c in self.terms.items()}, self.max_degree)

    def __mul__(self, other):
        if not isinstance(other, CoordinatePolynomial):
            return self.scale(other)
        return self.mul(other, self._cap(other))

    def __rmul__(self, other):
        return self.scale(other)

    def mul(self, other: "CoordinatePolynomial", max_degree: int | None = None) -> "CoordinatePolynomial":
        out: dict[Exps, object] = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if max_degree is not None and d1 + sum(e2) > max_degree:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return CoordinatePolynomial(self.nvars, out, max_degree)

    def __eq__(self, other) -> bool:
        if isinstance(other, CoordinatePolynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        return self.terms == ({(0,) * self.nvars: other} if other != 0 else {})

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous(self, d: int) -> "CoordinatePolynomial":
        return CoordinatePolynomial(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d},
                                    self.max_degree)

    def truncate(self, d: int) -> "CoordinatePolynomial":
        return CoordinatePolynomial(self.nvars, self.terms, d)

    def derivative(self, i: int) -> "CoordinatePolynomial":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return CoordinatePolynomial(self.nvars, out, self.max_degree)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def substitute_zero(self, indices: Sequence[int]) -> "CoordinatePolynomial":
        """Set the listed variables to zero."""
        idx = set(indices)
        return CoordinatePolynomial(self.nvars, {e: c for e, c in self.terms.items()
                                                 if not any(e[i] for i in idx)}, self.max_degree)

    def __call__(self, point: Sequence) -> object:
        total = 0
        for e, c in self.terms.items():
            m = c
            for v, k in zip(point, e):
                if k:
                    m = m * v ** k
            total = total + m
        return total

    def map_coeffs(self, f) -> "CoordinatePolynomial":
        return CoordinatePolynomial(self.nvars, {e: f(c) for e, c in self.terms.items()}, self.max_degree)

    def extend(self, extra: int) -> "CoordinatePolynomial":
        """Append ``extra`` unused variables."""
        return CoordinatePolynomial(self.nvars + extra, {e + (0,) * extra: c for e, c in self.terms.items()},
                                    self.max_degree)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"v{i}^{k}" if k > 1 else f"v{i}" for i, k in enumerate(e) if k)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


Matrix = list[list[CoordinatePolynomial]]


def matmul_poly(a: Matrix, b: Matrix, max_degree: int | None = None) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    nv = a[0][0].nvars
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = CoordinatePolynomial.zero(nv, max_degree)
            for l in range(k):
                if a[i][l].terms and b[l][j].terms:
                    acc = acc + a[i][l].mul(b[l][j], max_degree)
            row.append(acc)
        out.append(row)
    return out


def trace_poly(a: Matrix) -> CoordinatePolynomial:
    acc = CoordinatePolynomial.zero(a[0][0].nvars)
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


def exp_series(p: CoordinatePolynomial, max_degree: int) -> CoordinatePolynomial:
    """``exp(p)`` truncated; ``p`` must have no constant term."""
    if p.constant_term() != 0:
        raise ValueError("exp_series needs a polynomial without constant term")
    one = CoordinatePolynomial.constant(p.nvars, Fraction(1), max_degree)
    out, term = one, one
    for k in range(1, max_degree + 1):
        term = term.mul(p, max_degree).scale(Fraction(1, k))
        if term.is_zero():
            break
        out = out + term
    return out


def log_series(p: CoordinatePolynomial, max_degree: int) -> CoordinatePolynomial:
    """``log(p)`` truncated; ``p`` must have constant term 1."""
    if p.constant_term() != 1:
        raise ValueError("log_series needs constant term 1")
    q = p - 1
    out = CoordinatePolynomial.zero(p.nvars, max_degree)
    term = CoordinatePolynomial.constant(p.nvars, Fraction(1), max_degree)
    for k in range(1, max_degree + 1):
        term = term.mul(q, max_degree)
        if term.is_zero():
            break
        out = out + term.scale(Fraction((-1) ** (k + 1), k))
    return out
