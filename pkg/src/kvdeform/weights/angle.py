"""The hyperbolic angle propagator and its gradients."""
from __future__ import annotations

import numpy as np


class CoincidentPoints(ValueError):
    pass


def angle(p, q):
    """Angle at ``p`` from the vertical geodesic to the geodesic towards ``q``.

    ``arg((q - p) / (q - conj(p)))``; vanishes identically when ``p`` is real.
    Works elementwise on arrays.
    """
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    if np.any(p == q):
        raise CoincidentPoints("angle undefined for coincident points")
    out = np.angle((q - p) / (q - np.conj(p)))
    return out if out.ndim else float(out)


def angle_geodesic(p: complex, q: complex) -> float:
    """Same angle from explicit geodesic geometry (used as a cross-check).

    The geodesic through ``p`` and ``q`` is a half circle centred on the real
    axis (or a vertical line). Its tangent direction at ``p`` is compared with
    the upward vertical, counter-clockwise positive as in ``angle``.
    """
    if p == q:
        raise CoincidentPoints("angle undefined for coincident points")
    if abs(p.real - q.real) < 1e-15:
        return 0.0 if q.imag > p.imag else float(np.pi)
    # centre c on the real axis with |p-c| = |q-c|
    c = (abs(q) ** 2 - abs(p) ** 2) / (2 * (q.real - p.real))
    radial = p - c
    tangent = 1j * radial if q.real < p.real else -1j * radial
    return float(np.angle(tangent / 1j))


def gradients(p, q):
    """Partial derivatives of ``angle(p, q)``: ``(d/dx_p, d/dy_p, d/dx_q, d/dy_q)``."""
    a = 1.0 / (q - p)
    b = 1.0 / (q - np.conj(p))
    return (b - a).imag, -a.real - b.real, (a - b).imag, (a - b).real
