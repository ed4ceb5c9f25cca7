"""Kontsevich admissible graphs: Lie trees, wheels, symbols.

Vertex numbering: aerial vertices are ``0 .. n_aerial-1``, ground vertices
follow as ``n_aerial .. n_aerial+n_ground-1``. Grounds are numbered in
increasing position on the real axis. In JSON, aerial targets are 1-based
ints and grounds are ``"G1"``, ``"G2"``, ...

The edge pair ``(a, b)`` at a vertex reads as the bracket ``[A, B]`` of the
symbols sitting at the targets. For wheels each hub carries ``(spoke, next
hub)`` and the symbol is ``tr(ad S_1 ad S_2 ... ad S_k)``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .lie.algebra import LieAlgebraSpec
from .lie.evaluate import ad_matrix, eval_on_algebra
from .lie.poly import CoordinatePolynomial, matmul_poly, trace_poly
from .lie.series import LieSeries, bracket


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class KGraph:
    n_aerial: int
    n_ground: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.edges) != self.n_aerial:
            raise GraphError("one edge tuple per aerial vertex required")
        total = self.n_aerial + self.n_ground
        for v, targets in enumerate(self.edges):
            for t in targets:
                if not 0 <= t < total:
                    raise GraphError(f"vertex {v + 1}: target {t} out of range")

    # -- basic structure ---------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return self.n_aerial + self.n_ground

    def is_ground(self, v: int) -> bool:
        return v >= self.n_aerial

    def edge_list(self) -> list[tuple[int, int]]:
        return [(v, t) for v, targets in enumerate(self.edges) for t in targets]

    @property
    def n_edges(self) -> int:
        return sum(len(t) for t in self.edges)

    def is_poisson(self) -> bool:
        return all(len(t) == 2 for t in self.edges)

    def problems(self) -> list[str]:
        out = []
        for v, targets in enumerate(self.edges):
            if v in targets:
                out.append(f"vertex {v + 1} has a loop")
            if len(set(targets)) != len(targets):
                out.append(f"vertex {v + 1} has a double edge")
        return out

    def is_admissible(self) -> bool:
        return not self.problems()

    def in_degree(self, v: int) -> int:
        return sum(targets.count(v) for targets in self.edges)

    def expected_edges(self) -> int:
        """Dimension of the (gauge-fixed) configuration space."""
        return 2 * self.n_aerial + self.n_ground - 2

    def swap(self, v: int) -> "KGraph":
        """Reverse the edge order at aerial vertex ``v``."""
        edges = list(self.edges)
        edges[v] = tuple(reversed(edges[v]))
        return KGraph(self.n_aerial, self.n_ground, tuple(edges))

    def relabel(self, perm: tuple[int, ...]) -> "KGraph":
        """``perm[old] = new`` on aerial vertices; grounds stay fixed."""
        n = self.n_aerial
        full = list(perm) + list(range(n, self.n_vertices))
        edges = [None] * n
        for old, targets in enumerate(self.edges):
            edges[full[old]] = tuple(full[t] for t in targets)
        return KGraph(n, self.n_ground, tuple(edges))

    # -- serialization -----------------------------------------------------
    def _target_json(self, t: int):
        return f"G{t - self.n_aerial + 1}" if self.is_ground(t) else t + 1

    def to_json(self) -> dict:
        return {
            "n": self.n_aerial,
            "ground": self.n_ground,
            "edges": [[self._target_json(t) for t in targets] for targets in self.edges],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj: dict) -> "KGraph":
        try:
            n = int(obj["n"])
            m = int(obj.get("ground", 2))
            raw = obj["edges"]
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed graph JSON: {exc}") from None

        def parse(t):
            if isinstance(t, str):
                if not (t.startswith("G") and t[1:].isdigit()):
                    raise GraphError(f"bad target {t!r}")
                g = int(t[1:])
                if not 1 <= g <= m:
                    raise GraphError(f"bad ground {t!r}")
                return n + g - 1
            if isinstance(t, bool) or not isinstance(t, int) or not 1 <= t <= n:
                raise GraphError(f"bad aerial target {t!r}")
            return t - 1

        return cls(n, m, tuple(tuple(parse(t) for t in targets) for targets in raw))

    def canonical_key(self) -> str:
        """Relabeling-invariant serialization (edge order and sign are kept)."""
        best = None
        for perm in itertools.permutations(range(self.n_aerial)):
            s = self.relabel(perm).dumps()
            if best is None or s < best:
                best = s
        return best

    def automorphisms(self) -> int:
        """Count of (relabeling, edge-swap) pairs fixing the numbered graph."""
        count = 0
        n = self.n_aerial
        for perm in itertools.permutations(range(n)):
            g = self.relabel(perm)
            for mask in range(1 << n):
                h = g
                for v in range(n):
                    if mask >> v & 1:
                        h = h.swap(v)
                if h == self:
                    count += 1
        return count


def G(n_aerial: int, i: int) -> int:
    """Vertex id of ground ``i`` (1-based) in a graph with ``n_aerial`` aerial vertices."""
    return n_aerial + i - 1


def gamma1() -> KGraph:
    return KGraph(1, 2, ((1, 2),))


def ladder(n: int) -> KGraph:
    """Bernoulli graph with symbol ``ad(x)^n y``."""
    if n < 1:
        raise GraphError("ladder needs n >= 1")
    edges = [(G(n, 1), v + 1) for v in range(n - 1)] + [(G(n, 1), G(n, 2))]
    return KGraph(n, 2, tuple(edges))


def tripod() -> KGraph:
    """One aerial vertex with an edge to each of three grounds."""
    return KGraph(1, 3, ((1, 2, 3),))


# ---------------------------------------------------------------------------
# Lie trees


@dataclass(frozen=True)
class LieTree:
    """Binary bracket shape; leaves are ``'x'``/``'y'``, nodes are pairs."""

    shape: object

    @property
    def n_aerial(self) -> int:
        return _count_nodes(self.shape)

    def to_graph(self) -> KGraph:
        return tree_to_graph(self.shape)

    def __str__(self) -> str:
        return _shape_str(self.shape)


def _count_nodes(shape) -> int:
    if isinstance(shape, str):
        return 0
    return 1 + _count_nodes(shape[0]) + _count_nodes(shape[1])


def _shape_str(shape) -> str:
    if isinstance(shape, str):
        return shape
    return f"[{_shape_str(shape[0])},{_shape_str(shape[1])}]"


def _shape_key(shape):
    # leaves sort before nodes, smaller trees first
    if isinstance(shape, str):
        return (0, shape)
    return (1, _count_nodes(shape), _shape_key(shape[0]), _shape_key(shape[1]))


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple:
    """Canonical bracket shapes with ``n`` internal nodes, children unordered."""
    if n == 0:
        return ("x", "y")
    out = []
    for k in range(0, n):
        for a in _shapes(k):
            for b in _shapes(n - 1 - k):
                if _shape_key(a) > _shape_key(b):
                    continue
                if isinstance(a, str) and a == b:
                    continue  # double edge to one ground
                out.append((a, b))
    out = sorted(set(out), key=_shape_key)
    return tuple(out)


def enumerate_lie_trees(n_aerial: int) -> list[LieTree]:
    if n_aerial < 1:
        raise GraphError("n_aerial >= 1 required")
    return [LieTree(s) for s in _shapes(n_aerial)]


def tree_to_graph(shape) -> KGraph:
    """Root is vertex 1, children numbered in preorder."""
    n = _count_nodes(shape)
    edges: list = []

    def visit(node) -> int:
        if isinstance(node, str):
            return G(n, 1) if node == "x" else G(n, 2)
        me = len(edges)
        edges.append(None)
        a = visit(node[0])
        b = visit(node[1])
        edges[me] = (a, b)
        return me

    visit(shape)
    return KGraph(n, 2, tuple(edges))


def _generators() -> tuple[LieSeries, LieSeries]:
    return LieSeries.generator(0, 2), LieSeries.generator(1, 2)


def symbol(g: KGraph | LieTree, max_degree: int | None = None) -> LieSeries:
    """Bracket monomial of a Lie-type graph, in the Lyndon basis."""
    if isinstance(g, LieTree):
        g = g.to_graph()
    if g.n_ground != 2 or not g.is_poisson():
        raise GraphError("symbol needs a Poisson graph with two grounds")
    roots = [v for v in range(g.n_aerial) if g.in_degree(v) == 0]
    if len(roots) != 1 or any(g.in_degree(v) > 1 for v in range(g.n_aerial)):
        raise GraphError("not a Lie tree")
    x, y = _generators()
    deg = max_degree or g.n_aerial + 1

    def sym(v, depth=0):
        if depth > g.n_aerial:
            raise GraphError("cycle in Lie tree")
        if g.is_ground(v):
            return x if v == G(g.n_aerial, 1) else y
        a, b = g.edges[v]
        return bracket(sym(a, depth + 1), sym(b, depth + 1), deg)

    return sym(roots[0])


# ---------------------------------------------------------------------------
# Wheels


@dataclass(frozen=True)
class WheelGraph:
    """Cycle of hubs; spoke ``i`` is ``'x'``, ``'y'`` or a Lie-tree shape."""

    spokes: tuple

    @property
    def n_hubs(self) -> int:
        return len(self.spokes)

    @property
    def n_aerial(self) -> int:
        return self.n_hubs + sum(_count_nodes(s) for s in self.spokes)

    def __str__(self) -> str:
        return "tr(" + " ".join(f"ad{_shape_str(s)}" if isinstance(s, str)
                                 else f"ad{_shape_str(s)}" for s in self.spokes) + ")"

    def to_graph(self) -> KGraph:
        k = self.n_hubs
        n = self.n_aerial
        edges: list = [None] * k
        for i, spoke in enumerate(self.spokes):
            if isinstance(spoke, str):
                target = G(n, 1) if spoke == "x" else G(n, 2)
            else:
                target = _append_tree(spoke, edges, n)
            edges[i] = (target, (i + 1) % k)
        return KGraph(n, 2, tuple(edges))


def _append_tree(shape, edges: list, n: int) -> int:
    if isinstance(shape, str):
        return G(n, 1) if shape == "x" else G(n, 2)
    me = len(edges)
    edges.append(None)
    a = _append_tree(shape[0], edges, n)
    b = _append_tree(shape[1], edges, n)
    edges[me] = (a, b)
    return me


def _min_rotation(seq: tuple) -> tuple:
    keyed = [tuple(_shape_key(s) for s in seq[i:] + seq[:i]) for i in range(len(seq))]
    i = min(range(len(seq)), key=lambda j: keyed[j])
    return seq[i:] + seq[:i]


def enumerate_wheels(n_aerial_total: int, max_spoke_depth: int | None = None) -> list[WheelGraph]:
    """Simple wheels with the given aerial count, up to cyclic rotation.

    ``max_spoke_depth`` caps the aerial size of each tree spoke (0 = pure
    wheels with every spoke on a ground).
    """
    if n_aerial_total < 2:
        raise GraphError("a wheel needs at least two hubs")
    cap = n_aerial_total if max_spoke_depth is None else max_spoke_depth
    seen = {}
    for k in range(2, n_aerial_total + 1):
        rest = n_aerial_total - k
        for sizes in _compositions(rest, k):
            if any(s > cap for s in sizes):
                continue
            for spokes in itertools.product(*[_shapes(s) for s in sizes]):
                canon = _min_rotation(tuple(spokes))
                seen[canon] = WheelGraph(canon)
    return sorted(seen.values(), key=lambda w: (w.n_hubs, [_shape_key(s) for s in w.spokes]))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _spoke_series(spoke) -> LieSeries:
    x, y = _generators()
    if spoke == "x":
        return x
    if spoke == "y":
        return y
    return symbol(LieTree(spoke))


def wheel_symbol(w: WheelGraph, alg: LieAlgebraSpec) -> CoordinatePolynomial:
    """``tr(ad S_1 ... ad S_k)`` as a polynomial in the coordinates of x, y."""
    mats = [ad_matrix(eval_on_algebra(_spoke_series(s), alg), alg) for s in w.spokes]
    prod = mats[0]
    for m in mats[1:]:
        prod = matmul_poly(prod, m)
    return trace_poly(prod)


def rotate(w: WheelGraph, k: int = 1) -> WheelGraph:
    return WheelGraph(w.spokes[k:] + w.spokes[:k])


def is_ladder(g: KGraph) -> int:
    """Return n if ``g`` is a ladder up to relabeling/edge order (symbol ±ad(x)^n y), else 0."""
    if g.n_ground != 2 or not g.is_poisson():
        return 0
    try:
        s = symbol(g)
    except GraphError:
        return 0
    n = g.n_aerial
    word = (0,) * n + (1,)
    return n if set(s.coeffs) == {word} else 0


__all__ = [
    "GraphError", "KGraph", "LieTree", "WheelGraph", "G", "gamma1", "ladder", "tripod",
    "enumerate_lie_trees", "tree_to_graph", "symbol", "enumerate_wheels", "wheel_symbol",
    "rotate", "is_ladder", "Fraction",
]
