"""Finite-dimensional Lie algebras given by rational structure constants.

File format: ``{"dim": n, "name": str, "brackets": [[i, j, k, "p/q"], ...]}``
with 0-based basis indices, ``i < j``, meaning ``c^k_{ij} = p/q`` in
``[e_i, e_j] = sum_k c^k_{ij} e_k``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path


class AlgebraError(ValueError):
    pass


def parse_rational(s) -> Fraction:
    if isinstance(s, bool):
        raise AlgebraError(f"bad rational {s!r}")
    try:
        return Fraction(s)
    except (ValueError, TypeError, ZeroDivisionError):
        raise AlgebraError(f"bad rational {s!r}") from None


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class LieAlgebraSpec:
    dim: int
    structure_constants: tuple[tuple[int, int, int, Fraction], ...]
    name: str = ""

    def __post_init__(self):
        table = {}
        for i, j, k, c in self.structure_constants:
            if not (0 <= i < self.dim and 0 <= j < self.dim and 0 <= k < self.dim):
                raise AlgebraError(f"index out of range in ({i}, {j}, {k})")
            if c == 0:
                continue
            for key, val in (((i, j, k), c), ((j, i, k), -c)):
                if key in table and table[key] != val:
                    raise AlgebraError(f"antisymmetry violated at c^{k}_{{{i}{j}}}")
                table[key] = val
        object.__setattr__(self, "_table", table)
        bad = self.jacobi_violation()
        if bad is not None:
            raise AlgebraError(f"{self.name or 'algebra'}: Jacobi identity fails for basis {bad}")

    def c(self, i: int, j: int, k: int) -> Fraction:
        return self._table.get((i, j, k), Fraction(0))

    def bracket_vec(self, a, b) -> list:
        out = [0] * self.dim
        for (i, j, k), c in self._table.items():
            if a[i] and b[j]:
                out[k] = out[k] + c * a[i] * b[j]
        return out

    def jacobi_violation(self):
        n = self.dim
        basis = [[1 if t == s else 0 for t in range(n)] for s in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    a, b, c = basis[i], basis[j], basis[k]
                    t1 = self.bracket_vec(a, self.bracket_vec(b, c))
                    t2 = self.bracket_vec(b, self.bracket_vec(c, a))
                    t3 = self.bracket_vec(c, self.bracket_vec(a, b))
                    if any(x + y + z != 0 for x, y, z in zip(t1, t2, t3)):
                        return (i, j, k)
        return None

    def ad(self, v) -> list[list]:
        """Matrix of ``ad v``: entry ``[a][b]`` is the e_a-component of ``[v, e_b]``."""
        m = [[0] * self.dim for _ in range(self.dim)]
        for (i, j, k), c in self._table.items():
            if v[i]:
                m[k][j] = m[k][j] + c * v[i]
        return m

    def is_abelian(self) -> bool:
        return not self._table

    def to_json(self) -> dict:
        rows = sorted((i, j, k, format_rational(c)) for (i, j, k), c in self._table.items() if i < j)
        return {"dim": self.dim, "name": self.name, "brackets": [list(r) for r in rows]}

    @classmethod
    def from_json(cls, obj: dict) -> "LieAlgebraSpec":
        try:
            dim = int(obj["dim"])
            rows = obj.get("brackets", [])
            consts = []
            for row in rows:
                i, j, k, c = row
                i, j, k = int(i), int(j), int(k)
                if i >= j:
                    raise AlgebraError(f"bracket rows must have i < j, got ({i}, {j})")
                consts.append((i, j, k, parse_rational(c)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, AlgebraError):
                raise
            raise AlgebraError(f"malformed algebra JSON: {exc}") from None
        return cls(dim, tuple(consts), str(obj.get("name", "")))

    @classmethod
    def load(cls, path: str | Path) -> "LieAlgebraSpec":
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        if isinstance(obj, dict) and "name" not in obj:
            obj = {**obj, "name": Path(path).stem}
        return cls.from_json(obj)


def _mk(name: str, dim: int, rows) -> LieAlgebraSpec:
    return LieAlgebraSpec(dim, tuple((i, j, k, Fraction(c)) for i, j, k, c in rows), name)


BUILTIN = {
    "abelian2": lambda: _mk("abelian2", 2, []),
    "aff1": lambda: _mk("aff1", 2, [(0, 1, 1, 1)]),
    "heisenberg3": lambda: _mk("heisenberg3", 3, [(0, 1, 2, 1)]),
    # basis (h, e, f)
    "sl2": lambda: _mk("sl2", 3, [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)]),
    "so3": lambda: _mk("so3", 3, [(0, 1, 2, 1), (1, 2, 0, 1), (0, 2, 1, -1)]),
}


def get_algebra(name_or_path: str) -> LieAlgebraSpec:
    if name_or_path in BUILTIN:
        return BUILTIN[name_or_path]()
    path = Path(name_or_path)
    if path.exists():
        return LieAlgebraSpec.load(path)
    raise AlgebraError(f"unknown algebra {name_or_path!r}; built-ins: {', '.join(BUILTIN)}")
