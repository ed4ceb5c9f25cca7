"""Release-gate checks, one row per criterion part."""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from .deformed import MCParams


@dataclass
class Row:
    id: str
    expected: str
    observed: str
    tolerance: str
    passed: bool
    seconds: float = 0.0

    def to_json(self) -> dict:
        return asdict(self)


def _within(value, stderr, expected, abs_cap=None, sigmas=3.0) -> bool:
    err = abs(value - expected)
    ok = err <= sigmas * stderr or err == 0.0
    if abs_cap is not None:
        ok = ok and err <= abs_cap
    return ok


def _fmt(v, se=None) -> str:
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return f"{v:.6g}" if se is None else f"{v:.6g} +/- {se:.2g}"


def criterion_1() -> list[Row]:
    from .lie.bch import bch_recursive, bch_tensor, single_y_coefficients
    t0 = time.time()
    agree = bch_tensor(6) == bch_recursive(6)
    rows = [Row("1.methods", "equal", "equal" if agree else "differ", "exact", agree)]
    b = single_y_coefficients(4)
    stated = [Fraction(1), Fraction(1, 2), Fraction(1, 12), Fraction(0), Fraction(1, 720)]
    for n, (got, want) in enumerate(zip(b, stated)):
        rows.append(Row(f"1.b{n}", _fmt(want), _fmt(got), "exact", got == want))
    dt = time.time() - t0
    for r in rows:
        r.seconds = dt / len(rows)
    return rows


def criterion_2(samples=1_000_000, seed=0, workers=None) -> list[Row]:
    from .graphs import gamma1, ladder, tripod
    from .weights import weight_mc
    rows = []
    for name, g, want in (("gamma1", gamma1(), 0.5), ("ladder2", ladder(2), 1 / 12), ("tripod", tripod(), 1 / 6)):
        t0 = time.time()
        est = weight_mc(g, samples, seed, workers)
        rows.append(Row(f"2.{name}", _fmt(want), _fmt(est.value, est.stderr), "3sigma & 5e-3",
                        _within(est.value, est.stderr, want, 5e-3), time.time() - t0))
    return rows


def stokes_combination(samples=1_000_000, seed=0, workers=None) -> tuple[float, float]:
    """``w(tripod) + w(ladder_2) - w(Gamma_1)^2`` from measured weights."""
    from .graphs import gamma1, ladder, tripod
    from .weights import weight_mc
    a = weight_mc(tripod(), samples, seed, workers)
    b = weight_mc(ladder(2), samples, seed, workers)
    c = weight_mc(gamma1(), samples, seed, workers)
    val = a.value + b.value - c.value ** 2
    se = math.sqrt(a.stderr ** 2 + b.stderr ** 2 + (2 * c.value * c.stderr) ** 2)
    return val, se


def criterion_3(samples=1_000_000, seed=0, workers=None) -> list[Row]:
    t0 = time.time()
    val, se = stokes_combination(samples, seed, workers)
    return [Row("3.stokes", "0", _fmt(val, se), "5e-3", abs(val) <= 5e-3, time.time() - t0)]


LID_THETAS = (0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi)


def criterion_4(samples=1_000_000, seed=0, workers=None) -> list[Row]:
    from .graphs import ladder
    from .weights import EyePoint, bernoulli_lid, deformed_weight, ladder_lid_ode_residual
    rows = []
    for n in (1, 2, 3):
        for th in LID_THETAS:
            t0 = time.time()
            est = deformed_weight(ladder(n), EyePoint("upper_lid", th), samples, seed, workers)
            want = bernoulli_lid(n, th)
            rows.append(Row(f"4.w{n}({th:.4f})", _fmt(want), _fmt(est.value, est.stderr), "3sigma",
                            _within(est.value, est.stderr, want), time.time() - t0))
    for n in (1, 2, 3):
        for th in LID_THETAS:
            t0 = time.time()
            res, _ = ladder_lid_ode_residual(n, th, math.pi / 32, samples, seed, workers)
            rows.append(Row(f"4.ode{n}({th:.4f})", "0", _fmt(res), "1e-2", abs(res) <= 1e-2, time.time() - t0))
    return rows


def criterion_5(samples=1_000_000, seed=0, workers=None) -> list[Row]:
    from .deformed import assemble, compare_with_oracle
    from .lie.words import bracket_str
    from .weights import EyePoint
    mc = MCParams(samples, seed, workers)
    rows = []
    t0 = time.time()
    corner = assemble(EyePoint.corner(), 4, mc)
    for r in compare_with_oracle(corner):
        if len(r["word"]) < 2:
            continue
        rows.append(Row(f"5.corner[{bracket_str(r['word'])}]", _fmt(r["expected"]),
                        _fmt(r["observed"], r["stderr"]), "3sigma & 5e-3",
                        _within(r["observed"], r["stderr"], r["expected"], 5e-3), 0.0))
    iris = assemble(EyePoint("iris", 0.0), 4, mc)
    for r in compare_with_oracle(iris):
        if len(r["word"]) < 2:
            continue
        rows.append(Row(f"5.iris[{bracket_str(r['word'])}]", "0", _fmt(r["observed"], r["stderr"]), "3sigma",
                        _within(r["observed"], r["stderr"], 0.0), 0.0))
    dt = time.time() - t0
    for r in rows:
        r.seconds = dt / len(rows)
    return rows


def criterion_6(samples=1_000_000, seed=0, workers=None) -> list[Row]:
    from .deformed import lid_obstruction_exact, lid_obstruction_mc
    from .weights.lid import bernoulli_lid_exact
    rows = []
    t0 = time.time()
    form_ok = all(lid_obstruction_exact(Fraction(k, 16)) == Fraction(1, 2) * Fraction(k, 16) * (1 - Fraction(k, 16))
                  for k in range(17))
    rows.append(Row("6.form", "t(1-t)/2", "t(1-t)/2" if form_ok else "other", "exact", form_ok))
    zeros = [Fraction(k, 16) for k in range(17) if lid_obstruction_exact(Fraction(k, 16)) == 0]
    rows.append(Row("6.zeros", "[0, 1]", str([str(z) for z in zeros]), "exact", zeros == [0, 1]))
    half = lid_obstruction_exact(Fraction(1, 2))
    rows.append(Row("6.half", "1/8", _fmt(half), "exact", half == Fraction(1, 8)))
    w1, w2 = bernoulli_lid_exact(1, Fraction(1, 2)), bernoulli_lid_exact(2, Fraction(1, 2))
    rows.append(Row("6.w1w2", "0, -1/24", f"{_fmt(w1)}, {_fmt(w2)}", "exact", (w1, w2) == (0, Fraction(-1, 24))))
    val, se = lid_obstruction_mc(math.pi / 2, MCParams(samples, seed, workers))
    rows.append(Row("6.mc", "1/8", _fmt(val, se), "3sigma", _within(val, se, 0.125)))
    dt = time.time() - t0
    for r in rows:
        r.seconds = dt / len(rows)
    return rows


def criterion_7() -> list[Row]:
    from .kv import density_transport_check, eq1_residual, solve_FG, verify_eqdiff, verify_trace
    from .lie import get_algebra
    from .lie.series import generators
    t0 = time.time()
    sol = solve_FG(4, "kv_original", True)
    x, y = generators(2)
    rows = [Row("7.eq1", "0", "0" if eq1_residual(sol).is_zero() else "nonzero", "exact", eq1_residual(sol).is_zero()),
            Row("7.F1G1", "y/4, -x/4", f"{sol.F.degree_part(1)}, {sol.G.degree_part(1)}", "exact",
                sol.F.degree_part(1) == y.scale(Fraction(1, 4)) and sol.G.degree_part(1) == x.scale(Fraction(-1, 4)))]
    ok = verify_eqdiff(sol).is_zero()
    rows.append(Row("7.eqdiff", "0", "0" if ok else "nonzero", "exact", ok))
    for name in ("aff1", "sl2"):
        alg = get_algebra(name)
        joint = solve_FG(4, "kv_original", True, alg)
        ok = verify_trace(joint, alg, 4).ok()
        rows.append(Row(f"7.trace[{name}]", "0", "0" if ok else "nonzero", "exact", ok))
        ok = density_transport_check(joint, alg, 3).ok()
        rows.append(Row(f"7.transport[{name}]", "0", "0" if ok else "nonzero", "exact", ok))
    dt = time.time() - t0
    for r in rows:
        r.seconds = dt / len(rows)
    return rows


def criterion_8() -> list[Row]:
    from .kv import j_series_check
    from .lie import get_algebra
    rows = []
    for name in ("sl2", "so3"):
        t0 = time.time()
        ok = j_series_check(get_algebra(name), 6).ok()
        rows.append(Row(f"8.j[{name}]", "0", "0" if ok else "nonzero", "exact", ok, time.time() - t0))
    return rows


def criterion_9(samples=2_000_000, seed=0, workers=None) -> list[Row]:
    from .density import compare_log, density_from_wheels, density_oracle
    from .lie import get_algebra
    from .weights import EyePoint
    alg = get_algebra("sl2")
    mc = MCParams(samples, seed, workers)
    rows = []
    t0 = time.time()
    oracle = density_oracle(alg, 3)
    wheels = density_from_wheels(alg, EyePoint.corner(), 3, mc)
    for r in compare_log(oracle, wheels):
        rows.append(Row(f"9.corner{r['monomial']}", _fmt(Fraction(r["expected"])), _fmt(r["observed"], r["stderr"]),
                        "3sigma & 1e-2", _within(r["observed"], r["stderr"], float(r["expected"]), 1e-2)))
    from .density import wheel_terms
    from .weights import deformed_weight
    for w, _ in wheel_terms(alg, 3):
        est = deformed_weight(w.to_graph(), EyePoint("iris", 0.0), samples, seed, workers)
        rows.append(Row(f"9.iris[{w}]", "0", _fmt(est.value, est.stderr), "3sigma",
                        _within(est.value, est.stderr, 0.0)))
    dt = time.time() - t0
    for r in rows:
        r.seconds = dt / len(rows)
    return rows


def criterion_10(samples=1_000_000, seed=0, workers=None) -> list[Row]:
    from .lie import get_algebra
    from .star import LinearPoisson, bracket_poly_linear, commutator, mc_weights
    alg = get_algebra("sl2")
    alpha = LinearPoisson(alg)
    src = mc_weights(samples, seed, workers)
    rows = []
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            t0 = time.time()
            got = commutator(alpha, i, j, 2, src)
            want = bracket_poly_linear(alg, i, j)
            monos = set(got.value.terms) | set(want.terms) | set(got.stderr)
            for e in sorted(monos):
                v = float(got.value.terms.get(e, 0.0))
                se = got.stderr.get(e, 0.0)
                ex = float(want.terms.get(e, 0))
                rows.append(Row(f"10.[e{i},e{j}]{list(e)}", _fmt(ex), _fmt(v, se), "3sigma",
                                _within(v, se, ex), time.time() - t0))
    return rows


FAST = ("1", "2", "3", "6", "7", "8")
FULL = tuple(str(k) for k in range(1, 11))
_RUNNERS = {"1": criterion_1, "2": criterion_2, "3": criterion_3, "4": criterion_4, "5": criterion_5,
            "6": criterion_6, "7": criterion_7, "8": criterion_8, "9": criterion_9, "10": criterion_10}
_EXACT = {"1", "7", "8"}


def run_suite(name: str = "fast", seed: int = 0, workers=None, samples: int | None = None) -> list[Row]:
    ids = FAST if name == "fast" else FULL
    rows: list[Row] = []
    for cid in ids:
        fn = _RUNNERS[cid]
        if cid in _EXACT:
            rows.extend(fn())
        elif samples is not None:
            rows.extend(fn(samples=samples, seed=seed, workers=workers))
        else:
            rows.extend(fn(seed=seed, workers=workers))
    return rows
