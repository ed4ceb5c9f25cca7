"""The Campbell-Hausdorff series rebuilt from (deformed) tree weights."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import enumerate_lie_trees, is_ladder, symbol, tree_to_graph
from .lie.bch import bch_oracle
from .lie.series import LieSeries, generators, substitute
from .weights import EyePoint, WeightEstimate, bernoulli_lid, deformed_weight

MAX_ORDER = 4


@dataclass(frozen=True)
class MCParams:
    samples: int = 1_000_000
    seed: int = 0
    workers: int | None = None
    cache: object = None


@dataclass(frozen=True)
class DeformedBCH:
    xi: EyePoint
    order: int
    series: LieSeries
    stderr: dict = field(default_factory=dict)
    weights: tuple = ()  # (tree string, graph json, WeightEstimate)

    def coefficient(self, word) -> tuple[float, float]:
        w = tuple(word)
        return float(self.series[w]), float(self.stderr.get(w, 0.0))

    def records(self) -> list[dict]:
        from .lie.words import bracket_str
        out = []
        for w in sorted(set(self.series.coeffs) | set(self.stderr), key=lambda u: (len(u), u)):
            v, s = self.coefficient(w)
            out.append({"xi": self.xi.key(), "word": bracket_str(w), "degree": len(w), "value": v, "stderr": s})
        return out


def tree_terms(order: int):
    """``(tree, graph, symbol)`` for every tree contributing below ``order``."""
    out = []
    for n in range(1, order):
        for t in enumerate_lie_trees(n):
            s = symbol(t)
            if s.is_zero():
                continue
            out.append((t, tree_to_graph(t.shape), s))
    return out


def assemble(xi: EyePoint, order: int, mc: MCParams = MCParams()) -> DeformedBCH:
    """``x + y + sum_T w_T(xi) T(x, y)`` over Lie trees with fewer than ``order`` aerial vertices."""
    if not 1 <= order <= MAX_ORDER + 2:
        raise ValueError(f"order must lie in [1, {MAX_ORDER + 2}]")
    x, y = generators(2)
    coeffs: dict = {(0,): 1.0, (1,): 1.0}
    var: dict = {}
    used = []
    for t, g, s in tree_terms(order):
        est = deformed_weight(g, xi, mc.samples, mc.seed, mc.workers, mc.cache)
        used.append((str(t), g.dumps(), est))
        for w, c in s.coeffs.items():
            coeffs[w] = coeffs.get(w, 0.0) + float(c) * est.value
            var[w] = var.get(w, 0.0) + (float(c) * est.stderr) ** 2
    series = LieSeries(2, coeffs, order)
    return DeformedBCH(xi, order, series, {w: math.sqrt(v) for w, v in var.items()}, tuple(used))


def compare_with_oracle(z: DeformedBCH) -> list[dict]:
    """Per-word comparison with the exact series (meaningful at the corner)."""
    exact = bch_oracle(z.order)
    rows = []
    words = set(exact.coeffs) | set(z.series.coeffs) | set(z.stderr)
    for w in sorted(words, key=lambda u: (len(u), u)):
        v, s = z.coefficient(w)
        e = float(exact[w])
        rows.append({"word": w, "expected": e, "observed": v, "stderr": s, "error": v - e})
    return rows


# -- associativity ---------------------------------------------------------

def _order3_coefficients(xi: EyePoint, mc: MCParams):
    """``(a, b, c)`` and their stderrs in ``x + y + a[x,y] + b[x,[x,y]] + c[[x,y],y]``."""
    xy, xxy, xyy = (0, 1), (0, 0, 1), (0, 1, 1)
    if xi.chart == "iris":
        return (0.0, 0.0, 0.0), (0.0, 0.0, 0.0)
    if xi.is_corner_01():
        ex = bch_oracle(3)
        return tuple(float(ex[w]) for w in (xy, xxy, xyy)), (0.0, 0.0, 0.0)
    coeffs, errs = {}, {}
    for t, g, s in tree_terms(3):
        n = is_ladder(g)
        if xi.chart == "upper_lid" and n:
            # a relabeled or reversed ladder carries the sign of its symbol
            val, se = float(s[(0,) * n + (1,)]) * bernoulli_lid(n, float(xi.param)), 0.0
        else:
            est = deformed_weight(g, xi, mc.samples, mc.seed, mc.workers, mc.cache)
            val, se = est.value, est.stderr
        for w, c in s.coeffs.items():
            coeffs[w] = coeffs.get(w, 0.0) + float(c) * val
            errs[w] = errs.get(w, 0.0) + (float(c) * se) ** 2
    return (tuple(coeffs.get(w, 0.0) for w in (xy, xxy, xyy)),
            tuple(math.sqrt(errs.get(w, 0.0)) for w in (xy, xxy, xyy)))


@dataclass(frozen=True)
class AssociativityDefect:
    xi: EyePoint
    order: int
    defect: LieSeries  # three generators x, y, w
    stderr: dict
    inputs: tuple

    def max_abs(self) -> float:
        return max((abs(float(c)) for c in self.defect.coeffs.values()), default=0.0)


def _z_from(a, b, c, order: int, exact: bool = False) -> LieSeries:
    conv = (lambda v: Fraction(v)) if exact else float
    one = Fraction(1) if exact else 1.0
    d = {(0,): one, (1,): one, (0, 1): conv(a), (0, 0, 1): conv(b), (0, 1, 1): conv(c)}
    return LieSeries(2, d, 3).truncate(order)


def compose_defect(z: LieSeries, order: int) -> LieSeries:
    """``Z(Z(x,y),w) - Z(x,Z(y,w))`` for a two-letter series ``Z``, truncated."""
    x, y, w = generators(3)
    left = substitute(z, [substitute(z, [x, y], order), w], order)
    right = substitute(z, [x, substitute(z, [y, w], order)], order)
    return left - right


def associativity_defect(xi: EyePoint, order: int = 3, mc: MCParams = MCParams()) -> AssociativityDefect:
    """Truncated associativity defect of ``Z_xi``; ladder weights on the upper lid are exact."""
    if order > 3:
        raise ValueError("associativity defect is implemented through order 3")
    (a, b, c), errs = _order3_coefficients(xi, mc)
    z = _z_from(a, b, c, order)
    defect = compose_defect(z, order)
    # first-order propagation: each degree-3 coefficient is linear in b, c and quadratic in a
    h = 1e-6
    stderr: dict = {}
    for k, e in enumerate(errs):
        if e == 0:
            continue
        shifted = [a, b, c]
        shifted[k] += h
        d2 = compose_defect(_z_from(*shifted, order), order)
        for wd in set(d2.coeffs) | set(defect.coeffs):
            g = (float(d2[wd]) - float(defect[wd])) / h
            stderr[wd] = math.hypot(stderr.get(wd, 0.0), g * e)
    return AssociativityDefect(xi, order, defect, stderr, ((a, b, c), errs))


def lid_obstruction(theta: float) -> float:
    """``w_1(theta)^2 - 3 w_2(theta)`` from the exact lid weights."""
    return bernoulli_lid(1, theta) ** 2 - 3 * bernoulli_lid(2, theta)


def lid_obstruction_exact(t: Fraction) -> Fraction:
    from .weights.lid import bernoulli_lid_exact
    return bernoulli_lid_exact(1, t) ** 2 - 3 * bernoulli_lid_exact(2, t)


def lid_obstruction_mc(theta: float, mc: MCParams = MCParams()) -> tuple[float, float]:
    from .graphs import ladder
    xi = EyePoint("upper_lid", theta)
    w1 = deformed_weight(ladder(1), xi, mc.samples, mc.seed, mc.workers, mc.cache)
    w2 = deformed_weight(ladder(2), xi, mc.samples, mc.seed, mc.workers, mc.cache)
    val = w1.value ** 2 - 3 * w2.value
    se = math.hypot(2 * w1.value * w1.stderr, 3 * w2.stderr)
    return val, se


# -- paths -----------------------------------------------------------------

def _param(xi: EyePoint) -> float | None:
    if xi.param is None or xi.chart == "interior":
        return None
    return float(xi.param)


def path_trace(path: list[EyePoint], order: int, mc: MCParams = MCParams()) -> list[dict]:
    """Coefficients along ``path`` plus central-difference derivatives.

    Derivatives are taken with respect to the chart parameter when the whole
    path lies in one angular chart, otherwise with respect to the step index.
    """
    if not path:
        return []
    points = [assemble(xi, order, mc) for xi in path]
    same = len({p.chart for p in path}) == 1 and all(_param(p) is not None for p in path)
    s = [_param(p) if same else float(i) for i, p in enumerate(path)]
    words = sorted(set().union(*(set(p.series.coeffs) for p in points)), key=lambda u: (len(u), u))
    rows = []
    for i, (xi, z) in enumerate(zip(path, points)):
        lo, hi = max(i - 1, 0), min(i + 1, len(path) - 1)
        row = {"index": i, "xi": xi.key(), "coefficients": {}, "stderr": {}, "derivative": {}}
        for w in words:
            v, e = z.coefficient(w)
            row["coefficients"][w] = v
            row["stderr"][w] = e
            if hi > lo and s[hi] != s[lo]:
                row["derivative"][w] = (float(points[hi].series[w]) - float(points[lo].series[w])) / (s[hi] - s[lo])
            else:
                row["derivative"][w] = 0.0
        rows.append(row)
    return rows
