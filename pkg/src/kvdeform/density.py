"""The density ``D(x,y) = j^{1/2}(x) j^{1/2}(y) / j^{1/2}(Z(x,y))`` exactly and from wheel weights."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .graphs import WheelGraph, enumerate_wheels, rotate, wheel_symbol
from .lie.algebra import LieAlgebraSpec
from .lie.bch import bch_oracle
from .lie.evaluate import coordinate_vector, eval_on_algebra
from .lie.poly import CoordinatePolynomial, exp_series
from .weights import EyePoint, deformed_weight

MAX_ORACLE_DEGREE = 6
MAX_WHEEL_DEGREE = 4


@dataclass(frozen=True)
class DensityExpansion:
    algebra: str
    max_total_degree: int
    terms: CoordinatePolynomial
    log_terms: CoordinatePolynomial
    source: str = "oracle"
    stderr: dict = field(default_factory=dict)  # monomial -> stderr of the log coefficient
    weights: tuple = ()

    def at(self, x, y=None):
        """Evaluate ``D`` at coordinate vectors ``x`` and ``y``."""
        point = list(x) + list(y if y is not None else [0] * len(x))
        return self.terms(point)


def density_oracle(alg: LieAlgebraSpec, degree: int, kind: str = "j") -> DensityExpansion:
    """Exact expansion through total ``degree``; ``kind='q'`` uses ``sinh(s/2)/(s/2)`` in place of j."""
    from .kv import log_j_matrix
    if not 0 <= degree <= MAX_ORACLE_DEGREE:
        raise ValueError(f"degree must lie in [0, {MAX_ORACLE_DEGREE}]")
    nv = 2 * alg.dim
    x = coordinate_vector(alg, 0)
    y = coordinate_vector(alg, 1)
    z = eval_on_algebra(bch_oracle(max(degree, 1)), alg, degree)
    log_d = CoordinatePolynomial.zero(nv, degree)
    if degree:
        log_d = (log_j_matrix(x, alg, degree, kind) + log_j_matrix(y, alg, degree, kind)
                 - log_j_matrix(z, alg, degree, kind)).scale(Fraction(1, 2)).truncate(degree)
    return DensityExpansion(alg.name, degree, exp_series(log_d, degree), log_d, "oracle")


def rotation_stabilizer(w: WheelGraph) -> int:
    """Number of cyclic rotations fixing the spoke sequence (the automorphism group order)."""
    return sum(1 for k in range(w.n_hubs) if rotate(w, k).spokes == w.spokes)


def wheel_terms(alg: LieAlgebraSpec, degree: int, max_spoke_depth: int | None = None):
    """``(wheel, symbol / |Aut|)`` for every wheel of total degree 2..``degree`` with non-zero symbol."""
    out = []
    for n in range(2, degree + 1):
        for w in enumerate_wheels(n, max_spoke_depth):
            sym = wheel_symbol(w, alg)
            if sym.is_zero():
                continue
            out.append((w, sym.scale(Fraction(1, rotation_stabilizer(w)))))
    return out


def density_from_wheels(alg: LieAlgebraSpec, xi: EyePoint, degree: int, mc=None,
                        max_spoke_depth: int | None = None) -> DensityExpansion:
    """``exp(sum_W w_W(xi) tr(W) / |Aut W|)`` with Monte-Carlo wheel weights."""
    from .deformed import MCParams
    mc = mc or MCParams()
    if not 0 <= degree <= MAX_WHEEL_DEGREE:
        raise ValueError(f"degree must lie in [0, {MAX_WHEEL_DEGREE}]")
    nv = 2 * alg.dim
    log_d = CoordinatePolynomial.zero(nv, degree)
    var: dict = {}
    used = []
    for w, sym in wheel_terms(alg, degree, max_spoke_depth):
        if xi.chart == "iris":
            continue  # every wheel weight vanishes on the iris
        est = deformed_weight(w.to_graph(), xi, mc.samples, mc.seed, mc.workers, mc.cache)
        used.append((str(w), w.to_graph().dumps(), est))
        log_d = log_d + sym.map_coeffs(lambda c: float(c) * est.value)
        for e, c in sym.terms.items():
            var[e] = var.get(e, 0.0) + (float(c) * est.stderr) ** 2
    stderr = {e: math.sqrt(v) for e, v in var.items()}
    return DensityExpansion(alg.name, degree, exp_series(log_d, degree), log_d,
                            f"wheels({xi.key()})", stderr, tuple(used))


def compare_log(oracle: DensityExpansion, wheels: DensityExpansion) -> list[dict]:
    """Per-monomial comparison of the log expansions."""
    monos = set(oracle.log_terms.terms) | set(wheels.log_terms.terms)
    rows = []
    for e in sorted(monos, key=lambda m: (sum(m), m)):
        exp_ = oracle.log_terms.terms.get(e, 0)
        obs = float(wheels.log_terms.terms.get(e, 0.0))
        se = wheels.stderr.get(e, 0.0)
        rows.append({"monomial": list(e), "degree": sum(e), "expected": exp_, "observed": obs,
                     "stderr": se, "error": obs - float(exp_)})
    return rows
