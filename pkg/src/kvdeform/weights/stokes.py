"""Boundary-face sums for graphs with one edge fewer than the configuration dimension.

For such a graph the edge form is closed of codimension one, so the signed sum
of its integrals over the codimension-one faces of the compactified
configuration space vanishes. Two families of faces carry weight:

* ``collision``: two aerial points joined by exactly one edge collide; the
  inner factor is the circle integral (equal to 1), the outer graph is the
  contraction.
* ``axis``: a set of aerial points together with a consecutive block of
  grounds collapses onto the real axis; the inner and outer factors are
  ordinary weights.

Each face sign is the product of the boundary orientation (read off from the
numerical Jacobian of an explicit collar chart) and the sign of the edge
permutation that puts inner edges first.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from ..graphs import KGraph
from .charts import EyePoint
from .integrate import WeightEstimate
from .lid import bernoulli_lid
from .weight import deformed_weight, weight_mc


class UnsupportedFace(NotImplementedError):
    pass


@dataclass(frozen=True)
class Face:
    kind: str
    aerial: tuple[int, ...]
    grounds: tuple[int, ...]
    inner: KGraph | None
    outer: KGraph | None
    sign: int = 0
    status: str = "active"
    # ambient edge indices in the order inner-then-outer
    edge_order: tuple[int, ...] = field(default=(), compare=False)

    def describe(self) -> str:
        what = f"{self.kind} aerial={[a + 1 for a in self.aerial]}"
        if self.kind == "axis":
            what += f" grounds={[f'G{g + 1}' for g in self.grounds]}"
        return what


@dataclass(frozen=True)
class StokesReport:
    residual: float
    stderr: float
    terms: tuple[tuple[Face, float, float], ...]  # face, contribution, stderr

    def to_json(self) -> dict:
        return {
            "residual": self.residual,
            "stderr": self.stderr,
            "faces": [
                {"face": f.describe(), "sign": f.sign, "status": f.status,
                 "inner": f.inner.to_json() if f.inner else None,
                 "outer": f.outer.to_json() if f.outer else None,
                 "contribution": c, "stderr": s}
                for f, c, s in self.terms
            ],
        }


def _perm_sign(seq) -> int:
    seq = list(seq)
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def _collision_face(g: KGraph, a: int, b: int) -> Face:
    edges = g.edge_list()
    inner = [i for i, (s, t) in enumerate(edges) if {s, t} == {a, b}]
    n, m = g.n_aerial, g.n_ground

    def new_id(v: int) -> int:
        if v == b:
            return a
        return v - 1 if v > b else v

    out_targets, order = [], []
    for v in range(n):
        if v == b:
            continue
        group = [v] if v != a else [a, b]
        targets = []
        for u in group:
            for i, (s, t) in enumerate(edges):
                if s == u and i not in inner:
                    targets.append(new_id(t))
                    order.append(i)
        out_targets.append(tuple(targets))
    outer = KGraph(n - 1, m, tuple(out_targets))
    status = "active" if outer.is_admissible() else "vanishes: " + "; ".join(outer.problems())
    return Face("collision", (a, b), (), None, outer, 0, status, tuple(inner + order))


def _axis_face(g: KGraph, A: tuple[int, ...], lo: int, hi: int) -> Face:
    edges = g.edge_list()
    n, m = g.n_aerial, g.n_ground
    block = tuple(range(lo, hi + 1))
    cluster = set(A) | {n + j for j in block}
    inner_idx = [i for i, (s, t) in enumerate(edges) if s in cluster and t in cluster]
    leaving = [i for i, (s, t) in enumerate(edges) if s in cluster and t not in cluster]
    if leaving:
        return Face("axis", A, block, None, None, 0, "vanishes: an edge leaves the cluster")
    rest = [v for v in range(n) if v not in A]
    l = len(block)
    # inner graph: A relabeled in order, block grounds renumbered from 0
    a_id = {v: k for k, v in enumerate(A)}
    inner = KGraph(len(A), l, tuple(
        tuple(a_id[t] if t < n else len(A) + (t - n - lo) for t in g.edges[v]) for v in A))
    r_id = {v: k for k, v in enumerate(rest)}
    n_out, m_out = len(rest), m - l + 1

    def out_target(t: int) -> int:
        if t < n:
            return n_out + lo if t in a_id else r_id[t]
        j = t - n
        if j < lo:
            return n_out + j
        if j <= hi:
            return n_out + lo
        return n_out + j - (l - 1)

    outer = KGraph(n_out, m_out, tuple(tuple(out_target(t) for t in g.edges[v]) for v in rest))
    order = [i for v in rest for i, (s, t) in enumerate(edges) if s == v]
    probs = inner.problems() + outer.problems()
    status = "active" if not probs else "vanishes: " + "; ".join(probs)
    if status == "active" and (l < 2 or m_out < 2):
        raise UnsupportedFace(f"axis face with aerial {[v + 1 for v in A]} and grounds "
                              f"{[f'G{j + 1}' for j in block]} needs a gauge with fewer than two grounds")
    return Face("axis", A, block, inner, outer, 0, status, tuple(inner_idx + order))


def _random_config(rng, n: int, m: int):
    z = rng.normal(size=n) + 1j * np.exp(rng.normal(scale=0.5, size=n))
    t = 1 + np.cumsum(np.exp(rng.normal(scale=0.5, size=max(m - 2, 0))))
    return z, t


def _pack(z, t) -> np.ndarray:
    return np.concatenate([np.column_stack([z.real, z.imag]).ravel(), t])


def _unpack(vec, n: int):
    z = vec[0:2 * n:2] + 1j * vec[1:2 * n:2]
    return z, vec[2 * n:]


def _chart(g: KGraph, face: Face):
    """Return ``(map, param_dim)``; ``map(rho, u, v)`` gives ambient free coordinates."""
    n, m = g.n_aerial, g.n_ground
    if face.kind == "collision":
        a, b = face.aerial

        def f(rho, u, v):
            zo, to = _unpack(v, n - 1)
            z = np.empty(n, dtype=complex)
            for w in range(n):
                if w == b:
                    continue
                z[w] = zo[w - 1 if w > b else w]
            z[b] = z[a] + rho * np.exp(1j * u[0])
            return _pack(z, to)

        return f, 1
    inner, outer = face.inner, face.outer
    A, block = face.aerial, face.grounds
    lo, l = block[0], len(block)
    rest = [w for w in range(n) if w not in A]

    def f(rho, u, v):
        zi, si = _unpack(u, inner.n_aerial)
        zo, so = _unpack(v, outer.n_aerial)
        gout = np.concatenate([[0.0, 1.0], so])
        c = gout[lo]
        s_all = np.concatenate([[0.0, 1.0], si])
        grounds = np.concatenate([gout[:lo], c + rho * s_all, gout[lo + 1:]])
        z = np.empty(n, dtype=complex)
        for k, w in enumerate(A):
            z[w] = c + rho * zi[k]
        for k, w in enumerate(rest):
            z[w] = zo[k]
        g0, g1 = grounds[0], grounds[1]
        return _pack((z - g0) / (g1 - g0), (grounds[2:] - g0) / (g1 - g0))

    return f, inner.expected_edges()


def _boundary_sign(g: KGraph, face: Face, rng) -> int:
    n, m = g.n_aerial, g.n_ground
    f, du = _chart(g, face)
    signs = set()
    for _ in range(3):
        if face.kind == "collision":
            u = rng.uniform(0, 2 * math.pi, size=1)
            zo, to = _random_config(rng, n - 1, m)
        else:
            zi, si = _random_config(rng, face.inner.n_aerial, face.inner.n_ground)
            u = _pack(zi, si)
            zo, to = _random_config(rng, face.outer.n_aerial, face.outer.n_ground)
        v = _pack(zo, to)
        rho = 1e-3
        params = np.concatenate([[rho], u, v])
        D = params.size

        def F(p):
            return f(p[0], p[1:1 + du], p[1 + du:])

        J = np.empty((D, D))
        for k in range(D):
            h = 1e-4 * rho if k == 0 else 1e-6
            e = np.zeros(D)
            e[k] = h
            J[:, k] = (F(params + e) - F(params - e)) / (2 * h)
        d = np.linalg.det(J)
        if d == 0 or not math.isfinite(d):
            raise UnsupportedFace(f"degenerate collar chart for {face.describe()}")
        signs.add(1 if d > 0 else -1)
    if len(signs) != 1:
        raise UnsupportedFace(f"inconsistent collar orientation for {face.describe()}")
    sigma = signs.pop()
    # outward normal is -d/drho; inner edges are moved to the front
    return -sigma * _perm_sign(face.edge_order)


def enumerate_faces(g: KGraph, seed: int = 0) -> list[Face]:
    """Faces of matching dimension, with signs; vanishing faces are kept with a status note."""
    n, m = g.n_aerial, g.n_ground
    if g.n_edges != g.expected_edges() - 1:
        raise ValueError(f"need {g.expected_edges() - 1} edges for a boundary identity, got {g.n_edges}")
    if g.problems():
        raise ValueError("graph is not admissible: " + "; ".join(g.problems()))
    edges = g.edge_list()
    rng = np.random.default_rng(seed)
    faces: list[Face] = []
    for k in range(2, n + 1):
        for A in itertools.combinations(range(n), k):
            inner = [i for i, (s, t) in enumerate(edges) if s in A and t in A]
            if len(inner) != 2 * k - 3:
                continue
            if k >= 3:
                faces.append(Face("collision", A, (), None, None, 0,
                                  "vanishes: interior cluster of three or more points"))
                continue
            faces.append(_collision_face(g, *A))
    for lo in range(m):
        for hi in range(lo, m):
            l = hi - lo + 1
            for k in range(0, n + 1):
                for A in itertools.combinations(range(n), k):
                    if 2 * k + l < 2 or (k == n and l == m):
                        continue
                    cluster = set(A) | {n + j for j in range(lo, hi + 1)}
                    inner = [i for i, (s, t) in enumerate(edges) if s in cluster and t in cluster]
                    if len(inner) != 2 * k + l - 2:
                        continue
                    faces.append(_axis_face(g, A, lo, hi))
    # clusters touching the axis away from every ground
    for k in range(1, n + 1):
        for A in itertools.combinations(range(n), k):
            own = [i for i, (s, t) in enumerate(edges) if s in A]
            if all(t in A for s, t in (edges[i] for i in own)) and len(own) == 2 * k - 2:
                raise UnsupportedFace(f"cluster {[v + 1 for v in A]} may land on the axis between grounds")
    out = []
    for face in faces:
        if face.status == "active":
            face = Face(face.kind, face.aerial, face.grounds, face.inner, face.outer,
                        _boundary_sign(g, face, rng), face.status, face.edge_order)
        out.append(face)
    return out


def stokes_residual(g: KGraph, samples: int = 1_000_000, seed: int = 0, workers=None, cache=None) -> StokesReport:
    """Signed sum of the face weights of ``g``; vanishes up to Monte-Carlo error."""
    terms = []
    total, var = 0.0, 0.0
    for face in enumerate_faces(g, seed):
        if face.status != "active":
            terms.append((face, 0.0, 0.0))
            continue
        w_in = weight_mc(face.inner, samples, seed, workers, cache) if face.inner is not None \
            else WeightEstimate(1.0, 0.0, samples, seed, 1.0)
        w_out = weight_mc(face.outer, samples, seed, workers, cache)
        c = face.sign * w_in.value * w_out.value
        s = math.hypot(w_in.stderr * w_out.value, w_out.stderr * w_in.value)
        terms.append((face, c, s))
        total += c
        var += s * s
    return StokesReport(total, math.sqrt(var), tuple(terms))


def lid_stencil(theta: float, dtheta: float) -> tuple[float, float]:
    """Difference stencil of width ``dtheta`` around ``theta``, shifted inward at the lid ends."""
    if theta - dtheta / 2 < 0:
        return theta, theta + dtheta
    if theta + dtheta / 2 > math.pi:
        return theta - dtheta, theta
    return theta - dtheta / 2, theta + dtheta / 2


def lid_ode_residual(g: KGraph, lower: KGraph | None, theta: float, dtheta: float = math.pi / 32,
                     samples: int = 1_000_000, seed: int = 0, workers=None, cache=None,
                     exact_lower=None, endpoint_boost: int = 4) -> tuple[float, float]:
    """Difference quotient of ``w_g`` along the upper lid plus ``w_lower/pi`` at the stencil centre.

    Both lid evaluations reuse the same random stream, so their noise largely
    cancels in the difference. At the lid ends the stencil is one-sided and
    one of its points is on the axis, where that cancellation is weaker;
    those evaluations use ``endpoint_boost`` times more samples.
    ``exact_lower`` is a callable of the angle. Returns ``(residual, stderr bound)``.
    """
    a, b = lid_stencil(theta, dtheta)
    mid = (a + b) / 2
    if mid != theta:
        samples *= endpoint_boost
    wa = deformed_weight(g, EyePoint("upper_lid", a), samples, seed, workers, cache)
    wb = deformed_weight(g, EyePoint("upper_lid", b), samples, seed, workers, cache)
    if exact_lower is None:
        wl = deformed_weight(lower, EyePoint("upper_lid", mid), samples, seed, workers, cache)
        low, low_se = wl.value, wl.stderr
    else:
        low, low_se = exact_lower(mid), 0.0
    slope = (wb.value - wa.value) / (b - a)
    # the difference of correlated estimates has no simple error; bound by the uncorrelated case
    se = math.hypot(wa.stderr, wb.stderr) / (b - a) + low_se / math.pi
    return slope + low / math.pi, se


def ladder_lid_ode_residual(n: int, theta: float, dtheta: float = math.pi / 32, samples: int = 1_000_000,
                            seed: int = 0, workers=None, cache=None, use_exact_lower: bool = True):
    from ..graphs import ladder
    lower = ladder(n - 1) if n > 1 else None
    if n == 1:
        exact = lambda th: 1.0  # noqa: E731
    else:
        exact = (lambda th: bernoulli_lid(n - 1, th)) if use_exact_lower else None
    return lid_ode_residual(ladder(n), lower, theta, dtheta, samples, seed, workers, cache, exact)
