"""Monte-Carlo evaluation of configuration-space integrals of edge-angle forms.

A *layout* fixes which points are pinned (the first two grounds, possibly
lifted into the upper half-plane for deformed weights), which are free aerial
points, and which are free ground points. The integrand is the determinant of
the edge-by-coordinate matrix of angle derivatives, rows in edge order and
columns ``(x_1, y_1, ..., x_n, y_n, t_3, ..., t_m)``, divided by ``(2 pi)^E``.

Sampling is sequential mixture importance sampling. Aerial point ``k`` is drawn
from an equal-weight mixture of radial components around every pinned point
and every earlier aerial point, each at two length scales; radii are
log-logistic so that both the collision singularities and the far tails are
matched. Free grounds are drawn beyond their left neighbour, or near the
projection of an aerial point. Component labels are assigned by independent
random permutations of a balanced list (stratified mixture sampling) and the
estimator divides by the full mixture density (balance heuristic), which keeps
it unbiased.
"""
from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .angle import gradients

CHUNK = 1 << 15
BATCHES = 16
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class WeightEstimate:
    value: float
    stderr: float
    samples: int
    seed: int
    median_of_means: float = float("nan")
    extra: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        out = asdict(self)
        out.pop("extra")
        out.update(sorted(self.extra.items()))
        return out

    def __neg__(self) -> "WeightEstimate":
        return WeightEstimate(-self.value, self.stderr, self.samples, self.seed, -self.median_of_means, self.extra)

    def scaled(self, s: float) -> "WeightEstimate":
        return WeightEstimate(s * self.value, abs(s) * self.stderr, self.samples, self.seed,
                              s * self.median_of_means, self.extra)


@dataclass(frozen=True)
class Layout:
    """Integration problem: ``n_aerial`` free points, grounds ``0, 1`` pinned at ``pinned``.

    Edge targets ``< n_aerial`` are aerial; ``n_aerial + j`` is ground ``j``.
    Grounds ``j >= 2`` are free real points ordered left to right after ground 1.
    """

    n_aerial: int
    n_grounds: int
    edges: tuple[tuple[int, int], ...]
    pinned: tuple[complex, complex] = (0j, 1 + 0j)

    @property
    def n_free_grounds(self) -> int:
        return self.n_grounds - 2

    @property
    def dim(self) -> int:
        return 2 * self.n_aerial + self.n_free_grounds

    def shape_hash(self) -> int:
        """Seed component depending on the graph only, so that pinned positions share random streams."""
        text = f"{self.n_aerial}|{self.n_grounds}|{self.edges}"
        return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "little")


class IntegrationError(ValueError):
    pass


def _log_logistic_pdf(L):
    a = np.abs(L)
    return -a - 2.0 * np.log1p(np.exp(-a))


def _sample_aerial(rng, centers, is_real, n):
    """Draw one aerial point per row from the mixture over ``centers`` (shape (N, C))."""
    N, C = centers.shape
    # local length scale of each centre: distance to its nearest neighbour centre or to the axis
    diff = np.abs(centers[:, :, None] - centers[:, None, :])
    diff[:, np.arange(C), np.arange(C)] = np.inf
    local = np.minimum(1.0, diff.min(axis=2))
    local = np.where(is_real[None, :], local, np.minimum(local, centers.imag))
    local = np.maximum(local, 1e-12)
    scales = np.concatenate([np.ones_like(local), local], axis=1)  # (N, 2C)
    ctr = np.concatenate([centers, centers], axis=1)
    real2 = np.concatenate([is_real, is_real])
    span = np.where(real2, math.pi, TWO_PI)
    K = 2 * C
    comp = rng.permutation(np.arange(N) % K)
    u = rng.random(N)
    L = np.log(u) - np.log1p(-u)
    alpha = rng.random(N) * span[comp]
    rows = np.arange(N)
    z = ctr[rows, comp] + scales[rows, comp] * np.exp(L) * np.exp(1j * alpha)
    # density of z under every component
    r = np.abs(z[:, None] - ctr)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        logq = _log_logistic_pdf(np.log(r / scales)) - 2.0 * np.log(r) - np.log(span)[None, :]
    logq = np.where(np.isnan(logq), -np.inf, logq)
    ok_real = (~real2[None, :]) | ((z.imag > 0)[:, None])
    logq = np.where(ok_real, logq, -np.inf)
    m = logq.max(axis=1, keepdims=True)
    with np.errstate(invalid="ignore"):
        logmix = m[:, 0] + np.log(np.exp(logq - m).mean(axis=1))
    return z, logmix


def _sample_ground(rng, left, aerial):
    """Draw a free ground point to the right of ``left``; mixture of a tail and projections."""
    N = left.shape[0]
    K = 1 + aerial.shape[1]
    comp = rng.permutation(np.arange(N) % K)
    u = rng.random(N)
    L = np.log(u) - np.log1p(-u)
    v = rng.random(N)
    cen = aerial.real
    wid = np.maximum(aerial.imag, 1e-12)
    rows = np.arange(N)
    tail = left + np.exp(L)
    k = np.clip(comp - 1, 0, max(aerial.shape[1] - 1, 0))
    if aerial.shape[1]:
        proj = cen[rows, k] + wid[rows, k] * np.tan(math.pi * (v - 0.5))
        t = np.where(comp == 0, tail, proj)
    else:
        t = tail
    dt = t - left
    with np.errstate(divide="ignore", invalid="ignore"):
        q_tail = np.where(dt > 0, np.exp(_log_logistic_pdf(np.log(np.where(dt > 0, dt, 1.0)))) / np.where(dt > 0, dt, 1.0), 0.0)
        q_proj = wid / (math.pi * ((t[:, None] - cen) ** 2 + wid ** 2))
    q = (q_tail + q_proj.sum(axis=1)) / K
    return t, np.log(q)


def sample_configurations(layout: Layout, N: int, rng):
    """Return ``(aerial (N,n), grounds (N,m-2), log density (N,), valid (N,))``."""
    n = layout.n_aerial
    p1, p2 = layout.pinned
    pts = np.zeros((N, n), dtype=complex)
    logq = np.zeros(N)
    fixed = np.array([p1, p2], dtype=complex)
    for k in range(n):
        centers = np.concatenate([np.broadcast_to(fixed, (N, 2)), pts[:, :k]], axis=1)
        is_real = np.array([p1.imag == 0, p2.imag == 0] + [False] * k)
        z, lq = _sample_aerial(rng, centers, is_real, N)
        pts[:, k] = z
        logq += lq
    grounds = np.zeros((N, layout.n_free_grounds))
    left = np.full(N, p2.real)
    for j in range(layout.n_free_grounds):
        t, lq = _sample_ground(rng, left, pts)
        grounds[:, j] = t
        logq += lq
        left = t
    valid = (pts.imag > 0).all(axis=1) if n else np.ones(N, dtype=bool)
    if layout.n_free_grounds:
        seq = np.concatenate([np.full((N, 1), p2.real), grounds], axis=1)
        valid &= (np.diff(seq, axis=1) > 0).all(axis=1)
    valid &= np.isfinite(logq)
    return pts, grounds, logq, valid


def integrand(layout: Layout, pts, grounds):
    """``det J / (2 pi)^E`` per configuration row."""
    n, E, D = layout.n_aerial, len(layout.edges), layout.dim
    if E != D:
        raise IntegrationError(f"{E} edges but {D} free coordinates")
    N = pts.shape[0]
    if E == 0:
        return np.ones(N)
    pos = [pts[:, k] for k in range(n)]
    pos += [np.full(N, layout.pinned[0]), np.full(N, layout.pinned[1])]
    pos += [grounds[:, j].astype(complex) for j in range(layout.n_free_grounds)]
    J = np.zeros((N, E, E))
    for row, (s, t) in enumerate(layout.edges):
        dxp, dyp, dxq, dyq = gradients(pos[s], pos[t])
        J[:, row, 2 * s] += dxp
        J[:, row, 2 * s + 1] += dyp
        if t < n:
            J[:, row, 2 * t] += dxq
            J[:, row, 2 * t + 1] += dyq
        elif t >= n + 2:
            J[:, row, 2 * n + (t - n - 2)] += dxq
    return np.linalg.det(J) / TWO_PI ** E


def _chunk_values(layout: Layout, seed: int, chunk: int, size: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence([seed, layout.shape_hash(), chunk]))
    pts, grounds, logq, valid = sample_configurations(layout, size, rng)
    out = np.zeros(size)
    if valid.any():
        f = integrand(layout, pts[valid], grounds[valid])
        out[valid] = f * np.exp(-logq[valid])
    return out


def _chunk_job(args):
    return _chunk_values(*args)


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("KVDEFORM_WORKERS", "1")))
    except ValueError:
        return 1


def integrate(layout: Layout, samples: int, seed: int, workers: int | None = None) -> WeightEstimate:
    """Estimate the raw integral. Results depend on ``(layout, samples, seed)`` only."""
    if samples <= 0:
        raise IntegrationError("samples must be positive")
    if len(layout.edges) != layout.dim:
        raise IntegrationError(f"{len(layout.edges)} edges but {layout.dim} free coordinates")
    sizes = [CHUNK] * (samples // CHUNK) + ([samples % CHUNK] if samples % CHUNK else [])
    jobs = [(layout, seed, i, s) for i, s in enumerate(sizes)]
    workers = workers or default_workers()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk_job, jobs))
    else:
        parts = [_chunk_job(j) for j in jobs]
    vals = np.concatenate(parts)
    return summarize(vals, seed)


def summarize(vals: np.ndarray, seed: int) -> WeightEstimate:
    n = vals.size
    mean = float(vals.mean())
    se_iid = float(vals.std(ddof=1) / math.sqrt(n)) if n > 1 else float("inf")
    if n >= 2 * BATCHES:
        means = np.array([b.mean() for b in np.array_split(vals, BATCHES)])
        se_batch = float(means.std(ddof=1) / math.sqrt(BATCHES))
        mom = float(np.median(means))
    else:
        se_batch, mom = 0.0, mean
    return WeightEstimate(mean, max(se_iid, se_batch), n, seed, mom,
                          {"stderr_iid": se_iid, "stderr_batch": se_batch})
