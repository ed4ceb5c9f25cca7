"""Bidifferential graph operators and the truncated star product on the dual of a Lie algebra."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .graphs import GraphError, KGraph
from .lie.algebra import LieAlgebraSpec
from .lie.poly import CoordinatePolynomial

Poly = CoordinatePolynomial


@dataclass(frozen=True)
class LinearPoisson:
    """``alpha^{ij}(z) = scale * sum_k c^k_{ij} z_k``."""

    alg: LieAlgebraSpec
    scale: Fraction = Fraction(1, 2)

    @property
    def dim(self) -> int:
        return self.alg.dim

    def tensor(self) -> dict:
        """``(i, j) -> Poly`` for the non-zero entries."""
        out: dict = {}
        for (i, j, k), c in self.alg._table.items():
            p = Poly.variable(self.dim, k).scale(Fraction(c) * Fraction(self.scale))
            out[(i, j)] = out[(i, j)] + p if (i, j) in out else p
        return {key: p for key, p in out.items() if not p.is_zero()}


def coordinate(dim: int, i: int) -> Poly:
    return Poly.variable(dim, i)


def _derive(p: Poly, indices) -> Poly:
    for i in indices:
        if p.is_zero():
            break
        p = p.derivative(i)
    return p


def apply_B(g: KGraph, alpha: LinearPoisson, f: Poly, h: Poly) -> Poly:
    """``sum_I prod_v d_{I(in v)} alpha^{I(e_v1) I(e_v2)} * d_{I(in G1)} f * d_{I(in G2)} h``."""
    if g.n_ground != 2:
        raise GraphError("two ground vertices required")
    if g.problems():
        raise GraphError("graph is not admissible: " + "; ".join(g.problems()))
    if not g.is_poisson():
        raise GraphError("every aerial vertex needs exactly two edges")
    dim = alpha.dim
    n = g.n_aerial
    edges = g.edge_list()
    a = alpha.tensor()
    incoming = [[k for k, (_, t) in enumerate(edges) if t == v] for v in range(n + 2)]
    total = Poly.zero(dim)
    for I in itertools.product(range(dim), repeat=len(edges)):
        term = _derive(f, [I[k] for k in incoming[n]])
        if term.is_zero():
            continue
        term = term.mul(_derive(h, [I[k] for k in incoming[n + 1]]))
        for v in range(n):
            if term.is_zero():
                break
            e1, e2 = 2 * v, 2 * v + 1
            entry = a.get((I[e1], I[e2]))
            if entry is None:
                term = Poly.zero(dim)
                break
            term = term.mul(_derive(entry, [I[k] for k in incoming[v]]))
        total = total + term
    return total


# -- graph bookkeeping -----------------------------------------------------

def numbered_graphs(n_aerial: int, n_ground: int = 2) -> list[KGraph]:
    """Every admissible Poisson graph with ``n_aerial`` numbered vertices and ordered edges."""
    total = n_aerial + n_ground
    choices = [[(a, b) for a in range(total) for b in range(total) if a != b and v not in (a, b)]
               for v in range(n_aerial)]
    return [KGraph(n_aerial, n_ground, tuple(c)) for c in itertools.product(*choices)]


def orbit_representative(g: KGraph) -> KGraph:
    """Smallest serialization among relabelings and edge swaps of ``g``."""
    best, best_s = g, None
    n = g.n_aerial
    for perm in itertools.permutations(range(n)):
        base = g.relabel(perm)
        for mask in range(1 << n):
            h = base
            for v in range(n):
                if mask >> v & 1:
                    h = h.swap(v)
            s = h.dumps()
            if best_s is None or s < best_s:
                best, best_s = h, s
    return best


def multiplicity(g: KGraph) -> int:
    """Numbered graphs equivalent to ``g``: ``n! 2^n / |Aut g|``."""
    n = g.n_aerial
    return math.factorial(n) * 2 ** n // g.automorphisms()


def geometric_graphs(n_aerial: int) -> list[KGraph]:
    seen = {}
    for g in numbered_graphs(n_aerial):
        r = orbit_representative(g)
        seen[r.dumps()] = r
    return [seen[k] for k in sorted(seen)]


# -- star product ----------------------------------------------------------

@dataclass(frozen=True)
class StarResult:
    value: Poly  # float coefficients
    stderr: dict = field(default_factory=dict)
    terms: tuple = ()  # (graph json, multiplicity, weight, stderr)


def mc_weights(samples: int = 1_000_000, seed: int = 0, workers=None, cache=None) -> Callable:
    from .weights import weight_mc

    def source(g: KGraph):
        est = weight_mc(g, samples, seed, workers, cache)
        return est.value, est.stderr

    return source


def star(f: Poly, h: Poly, alpha: LinearPoisson, order: int = 2, weights: Callable | None = None) -> StarResult:
    """``f h + sum_{n<=order} 1/n! sum_Gamma mult(Gamma) w_Gamma B_Gamma(f, h)`` over geometric graphs."""
    weights = weights or mc_weights()
    value = f.mul(h).map_coeffs(float)
    var: dict = {}
    used = []
    for n in range(1, order + 1):
        for g in geometric_graphs(n):
            b = apply_B(g, alpha, f, h)
            if b.is_zero():
                continue
            w, se = weights(g)
            c = multiplicity(g) / math.factorial(n)
            value = value + b.map_coeffs(lambda q: float(q) * c * w)
            for e, q in b.terms.items():
                var[e] = var.get(e, 0.0) + (float(q) * c * se) ** 2
            used.append((g.dumps(), multiplicity(g), w, se))
    return StarResult(value, {e: math.sqrt(v) for e, v in var.items()}, tuple(used))


def commutator(alpha: LinearPoisson, i: int, j: int, order: int = 2, weights: Callable | None = None) -> StarResult:
    """``z_i * z_j - z_j * z_i``."""
    weights = weights or mc_weights()
    zi, zj = coordinate(alpha.dim, i), coordinate(alpha.dim, j)
    a = star(zi, zj, alpha, order, weights)
    b = star(zj, zi, alpha, order, weights)
    stderr = {e: math.hypot(a.stderr.get(e, 0.0), b.stderr.get(e, 0.0))
              for e in set(a.stderr) | set(b.stderr)}
    return StarResult(a.value - b.value, stderr, a.terms + b.terms)


def bracket_poly_linear(alg: LieAlgebraSpec, i: int, j: int) -> Poly:
    """``[e_i, e_j]`` as a linear function on the dual."""
    out = Poly.zero(alg.dim)
    for k in range(alg.dim):
        c = alg.c(i, j, k)
        if c:
            out = out + Poly.variable(alg.dim, k).scale(c)
    return out
