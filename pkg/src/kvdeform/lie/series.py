"""Truncated Lie series in the Lyndon basis of a free Lie algebra.

Coefficients are ``Fraction`` (exact mode) or ``float`` (numeric mode). All
operations take an explicit truncation degree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping

from .words import Word, is_lyndon, standard_factorization, tensor_expansion


class AlphabetMismatch(ValueError):
    pass


@dataclass(frozen=True)
class LieSeries:
    alphabet_size: int
    coeffs: Mapping[Word, object] = field(default_factory=dict)
    max_degree: int = 0

    def __post_init__(self):
        clean = {}
        for w, c in self.coeffs.items():
            w = tuple(w)
            if c == 0:
                continue
            if not is_lyndon(w) or any(not 0 <= a < self.alphabet_size for a in w):
                raise ValueError(f"{w} is not a Lyndon word over {self.alphabet_size} letters")
            clean[w] = c
        deg = max((len(w) for w in clean), default=0)
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "max_degree", max(self.max_degree, deg))

    @classmethod
    def generator(cls, i: int, alphabet_size: int = 2, coeff=1) -> "LieSeries":
        return cls(alphabet_size, {(i,): Fraction(coeff)}, 1)

    @classmethod
    def zero(cls, alphabet_size: int = 2, max_degree: int = 1) -> "LieSeries":
        return cls(alphabet_size, {}, max_degree)

    # -- vector space ------------------------------------------------------
    def _check(self, other: "LieSeries"):
        if self.alphabet_size != other.alphabet_size:
            raise AlphabetMismatch(f"{self.alphabet_size} vs {other.alphabet_size} letters")

    def __add__(self, other: "LieSeries") -> "LieSeries":
        self._check(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return LieSeries(self.alphabet_size, out, max(self.max_degree, other.max_degree))

    def __neg__(self) -> "LieSeries":
        return self.scale(-1)

    def __sub__(self, other: "LieSeries") -> "LieSeries":
        return self + (-other)

    def scale(self, s) -> "LieSeries":
        return LieSeries(self.alphabet_size, {w: s * c for w, c in self.coeffs.items()}, self.max_degree)

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieSeries):
            return NotImplemented
        return self.alphabet_size == other.alphabet_size and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.alphabet_size, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, w) -> object:
        return self.coeffs.get(tuple(w), 0)

    def degree_part(self, d: int) -> "LieSeries":
        return LieSeries(self.alphabet_size, {w: c for w, c in self.coeffs.items() if len(w) == d}, self.max_degree)

    def truncate(self, max_degree: int) -> "LieSeries":
        return LieSeries(self.alphabet_size, {w: c for w, c in self.coeffs.items() if len(w) <= max_degree},
                         max_degree)

    def map_coeffs(self, f: Callable) -> "LieSeries":
        return LieSeries(self.alphabet_size, {w: f(c) for w, c in self.coeffs.items()}, self.max_degree)

    def to_float(self) -> "LieSeries":
        return self.map_coeffs(float)

    def to_tensor(self) -> dict[Word, object]:
        out: dict[Word, object] = {}
        for w, c in self.coeffs.items():
            for u, k in tensor_expansion(w).items():
                out[u] = out.get(u, 0) + c * k
        return {u: c for u, c in out.items() if c != 0}

    def __repr__(self) -> str:
        from .words import bracket_str
        if not self.coeffs:
            return "0"
        items = sorted(self.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))
        return " + ".join(f"({c}){bracket_str(w)}" for w, c in items)


def from_tensor(t: Mapping[Word, object], alphabet_size: int, max_degree: int) -> LieSeries:
    """Rewrite a Lie element given in the tensor algebra into the Lyndon basis.

    Uses triangularity: the bracketed Lyndon word ``P_w`` is ``w`` plus
    lexicographically larger words, so the smallest word of a Lie element is
    Lyndon and carries the basis coefficient. Raises ``ValueError`` when the
    input is not a Lie element.
    """
    rest = {w: c for w, c in t.items() if c != 0 and len(w) <= max_degree}
    out: dict[Word, object] = {}
    while rest:
        w = min(rest, key=lambda u: (len(u), u))
        c = rest[w]
        if not is_lyndon(w):
            raise ValueError(f"not a Lie element: leading word {w}")
        out[w] = c
        for u, k in tensor_expansion(w).items():
            v = rest.get(u, 0) - c * k
            if v == 0:
                rest.pop(u, None)
            else:
                rest[u] = v
    return LieSeries(alphabet_size, out, max_degree)


@lru_cache(maxsize=None)
def _bracket_basis(u: Word, v: Word, alphabet_size: int) -> tuple[tuple[Word, Fraction], ...]:
    if u == v:
        return ()
    pu, pv = tensor_expansion(u), tensor_expansion(v)
    out: dict[Word, int] = {}
    for a, ca in pu.items():
        for b, cb in pv.items():
            out[a + b] = out.get(a + b, 0) + ca * cb
            out[b + a] = out.get(b + a, 0) - ca * cb
    s = from_tensor(out, alphabet_size, len(u) + len(v))
    return tuple(sorted(s.coeffs.items()))


def bracket(a: LieSeries, b: LieSeries, max_degree: int) -> LieSeries:
    """Lie bracket, truncated at ``max_degree``."""
    if a.alphabet_size != b.alphabet_size:
        raise AlphabetMismatch(f"{a.alphabet_size} vs {b.alphabet_size} letters")
    out: dict[Word, object] = {}
    for u, cu in a.coeffs.items():
        for v, cv in b.coeffs.items():
            if len(u) + len(v) > max_degree:
                continue
            for w, k in _bracket_basis(u, v, a.alphabet_size):
                out[w] = out.get(w, 0) + cu * cv * k
    return LieSeries(a.alphabet_size, out, max_degree)


def substitute(s: LieSeries, images: list[LieSeries], max_degree: int) -> LieSeries:
    """Replace generator ``i`` of ``s`` by ``images[i]`` (Lie series over a common alphabet)."""
    if len(images) != s.alphabet_size:
        raise AlphabetMismatch("one image per generator required")
    target = images[0].alphabet_size
    for im in images:
        if im.alphabet_size != target:
            raise AlphabetMismatch("images live in different alphabets")
    memo: dict[Word, LieSeries] = {}

    def img(w: Word) -> LieSeries:
        if w not in memo:
            if len(w) == 1:
                memo[w] = images[w[0]].truncate(max_degree)
            else:
                u, v = standard_factorization(w)
                memo[w] = bracket(img(u), img(v), max_degree)
        return memo[w]

    out = LieSeries.zero(target, max_degree)
    for w, c in s.coeffs.items():
        out = out + img(w).scale(c)
    return out.truncate(max_degree)


def directional_derivative(s: LieSeries, generator: int, u: LieSeries, max_degree: int) -> LieSeries:
    """``d/de s(..., g + e*u, ...)`` at ``e = 0``."""
    if u.alphabet_size != s.alphabet_size:
        raise AlphabetMismatch("direction lives in another alphabet")
    if not 0 <= generator < s.alphabet_size:
        raise AlphabetMismatch(f"generator {generator} not in alphabet")
    memo: dict[Word, LieSeries] = {}

    def gen(w: Word) -> LieSeries:
        return LieSeries.generator(w[0], s.alphabet_size) if len(w) == 1 else LieSeries(s.alphabet_size, {w: 1})

    def d(w: Word) -> LieSeries:
        if w not in memo:
            if len(w) == 1:
                memo[w] = u.truncate(max_degree) if w[0] == generator else LieSeries.zero(s.alphabet_size)
            else:
                a, b = standard_factorization(w)
                memo[w] = bracket(d(a), gen(b), max_degree) + bracket(gen(a), d(b), max_degree)
        return memo[w]

    out = LieSeries.zero(s.alphabet_size, max_degree)
    for w, c in s.coeffs.items():
        out = out + d(w).scale(c)
    return out.truncate(max_degree)


def generators(alphabet_size: int = 2) -> list[LieSeries]:
    return [LieSeries.generator(i, alphabet_size) for i in range(alphabet_size)]


def lyndon_basis(alphabet_size: int, degree: int) -> list[LieSeries]:
    from .words import lyndon_words
    return [LieSeries(alphabet_size, {w: Fraction(1)}) for w in lyndon_words(alphabet_size, degree)]
