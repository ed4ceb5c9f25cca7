"""Lyndon words and their standard bracketing."""
from __future__ import annotations

from functools import lru_cache

Word = tuple[int, ...]


def is_lyndon(w: Word) -> bool:
    n = len(w)
    if n == 0:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, n))


@lru_cache(maxsize=None)
def lyndon_words(alphabet_size: int, degree: int) -> tuple[Word, ...]:
    """All Lyndon words of exactly ``degree`` letters, lexicographically sorted (Duval)."""
    if alphabet_size < 1 or degree < 1:
        raise ValueError("alphabet_size and degree must be >= 1")
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == degree:
            out.append(tuple(w))
        m = len(w)
        while len(w) < degree:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet_size - 1:
            w.pop()
    return tuple(out)


def witt_number(alphabet_size: int, degree: int) -> int:
    """Dimension of the degree-d part of the free Lie algebra (necklace formula)."""
    total = 0
    for d in range(1, degree + 1):
        if degree % d == 0:
            total += _mobius(d) * alphabet_size ** (degree // d)
    return total // degree


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


@lru_cache(maxsize=None)
def standard_factorization(w: Word) -> tuple[Word, Word]:
    """Split ``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    if len(w) < 2:
        raise ValueError("letters have no factorization")
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise AssertionError("unreachable for Lyndon input")


@lru_cache(maxsize=None)
def tensor_expansion(w: Word) -> dict[Word, int]:
    """Expansion of the bracketed Lyndon word in the tensor algebra."""
    if len(w) == 1:
        return {w: 1}
    u, v = standard_factorization(w)
    pu, pv = tensor_expansion(u), tensor_expansion(v)
    out: dict[Word, int] = {}
    for a, ca in pu.items():
        for b, cb in pv.items():
            c = ca * cb
            out[a + b] = out.get(a + b, 0) + c
            out[b + a] = out.get(b + a, 0) - c
    return {k: c for k, c in out.items() if c}


def word_str(w: Word, letters: str = "xyw") -> str:
    return "".join(letters[i] for i in w)


def bracket_str(w: Word, letters: str = "xyw") -> str:
    if len(w) == 1:
        return letters[w[0]]
    u, v = standard_factorization(w)
    return f"[{bracket_str(u, letters)},{bracket_str(v, letters)}]"
