"""Kontsevich weights and their deformations over the eye."""
from __future__ import annotations

import itertools
import math

import numpy as np

from ..graphs import GraphError, KGraph
from .cache import WeightCache, cache_key, default_cache
from .charts import EyePoint
from .integrate import Layout, WeightEstimate, integrate

# Sign applied to the raw integral (rows in edge order, columns x_1, y_1, ...).
# With this choice the one-vertex graph on both grounds has weight +1/2.
ORIENTATION = 1


class NonIntegrable(ArithmeticError):
    pass


def canonical_form(g: KGraph) -> KGraph:
    """Relabeling of ``g`` with the smallest serialization.

    Relabeling permutes rows and columns in blocks of two when every vertex
    has two edges, so the weight is unchanged; other graphs are returned as is.
    """
    if not g.is_poisson():
        return g
    best, best_s = g, None
    for perm in itertools.permutations(range(g.n_aerial)):
        h = g.relabel(perm)
        s = h.dumps()
        if best_s is None or s < best_s:
            best, best_s = h, s
    return best


def _check(g: KGraph, n_ground: int | None = None) -> None:
    bad = g.problems()
    if bad:
        raise GraphError("graph is not admissible: " + "; ".join(bad))
    if g.n_ground < 2:
        raise GraphError("at least two ground vertices are required")
    if n_ground is not None and g.n_ground != n_ground:
        raise GraphError(f"expected {n_ground} ground vertices, got {g.n_ground}")
    if g.n_edges != g.expected_edges():
        raise GraphError(f"{g.n_edges} edges but the configuration space has dimension {g.expected_edges()}")


def layout_of(g: KGraph, pinned=(0j, 1 + 0j)) -> Layout:
    return Layout(g.n_aerial, g.n_ground, tuple(g.edge_list()), tuple(complex(p) for p in pinned))


def _estimate(g: KGraph, pinned, chart: str, samples: int, seed: int, workers, cache) -> WeightEstimate:
    if samples <= 0:
        raise ValueError("samples must be positive")
    g = canonical_form(g)
    cache = default_cache() if cache is None else cache
    key = cache_key(g.dumps(), chart, samples, seed)
    hit = cache.get(key) if cache else None
    if hit is not None:
        return hit
    if g.n_edges == 0:
        est = WeightEstimate(float(ORIENTATION), 0.0, samples, seed, float(ORIENTATION))
    else:
        est = integrate(layout_of(g, pinned), samples, seed, workers)
        if not math.isfinite(est.value) or not math.isfinite(est.stderr):
            raise NonIntegrable(f"integrand of {g.dumps()} at {chart} is not integrable in this chart")
        est = est.scaled(ORIENTATION)
    if cache:
        cache.put(key, est)
    return est


def weight_mc(g: KGraph, samples: int = 1_000_000, seed: int = 0, workers: int | None = None,
              cache: WeightCache | None | bool = None) -> WeightEstimate:
    """Weight of ``g`` with the first two grounds at 0 and 1 (later grounds free, ordered)."""
    _check(g)
    return _estimate(g, (0j, 1 + 0j), "corner_01", samples, seed, workers, cache)


def deformed_weight(g: KGraph, xi: EyePoint, samples: int = 1_000_000, seed: int = 0,
                    workers: int | None = None, cache: WeightCache | None | bool = None) -> WeightEstimate:
    """Weight of ``g`` with its two grounds replaced by the pinned pair representing ``xi``."""
    _check(g, n_ground=2)
    chart = "corner_01" if xi.is_corner_01() else xi.key()
    return _estimate(g, xi.positions(), chart, samples, seed, workers, cache)


def angle_gauge_residual(rng: np.random.Generator, count: int = 100) -> float:
    """Largest change of the angle under random maps ``z -> a z + b`` (a > 0)."""
    from .angle import angle
    p = rng.normal(size=count) + 1j * np.abs(rng.normal(size=count))
    q = rng.normal(size=count) + 1j * np.abs(rng.normal(size=count))
    a = np.exp(rng.normal(size=count))
    b = rng.normal(size=count)
    d = np.angle(np.exp(1j * (angle(a * p + b, a * q + b) - angle(p, q))))
    return float(np.max(np.abs(d)))
