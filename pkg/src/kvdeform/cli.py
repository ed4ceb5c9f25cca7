"""``kvdeform`` command line."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3


class InputError(Exception):
    pass


class CheckFailed(Exception):
    pass


def build_id() -> str:
    here = Path(__file__).resolve().parent
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"], cwd=here,
                             capture_output=True, text=True, timeout=5)
        if out.returncode == 0 and out.stdout.strip():
            return f"{__version__}+{out.stdout.strip()}"
    except (OSError, subprocess.SubprocessError):
        pass
    return __version__


# -- value formatting ------------------------------------------------------

def rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _jsonable(v):
    if isinstance(v, Fraction):
        return rational(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def poly_terms(p, names) -> dict:
    """``{"x0*y1^2": "p/q"}`` for a CoordinatePolynomial (floats kept as floats)."""
    out = {}
    for e, c in sorted(p.terms.items(), key=lambda kv: (sum(kv[0]), kv[0])):
        mono = "*".join(f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(e) if k) or "1"
        out[mono] = rational(c) if isinstance(c, (Fraction, int)) else c
    return out


def coordinate_names(dim: int, letters: str = "xy") -> list[str]:
    return [f"{l}{a}" for l in letters for a in range(dim)]


def emit(report: dict, fmt: str, stream=None) -> None:
    stream = stream or sys.stdout
    report = _jsonable(report)
    if fmt == "json":
        stream.write(json.dumps(report, indent=2, sort_keys=False) + "\n")
        return
    rows = report.get("records", [])
    flat = [{k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in r.items()} for r in rows]
    keys: list = []
    for r in flat:
        for k in r:
            if k not in keys:
                keys.append(k)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in flat:
            w.writerow(r)
        stream.write(buf.getvalue())
        return
    meta = {k: v for k, v in report.items() if k != "records"}
    for k, v in meta.items():
        stream.write(f"# {k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}\n")
    if not flat:
        return
    widths = {k: max(len(str(k)), *(len(str(r.get(k, ""))) for r in flat)) for k in keys}
    stream.write("  ".join(str(k).ljust(widths[k]) for k in keys) + "\n")
    for r in flat:
        stream.write("  ".join(str(r.get(k, "")).ljust(widths[k]) for k in keys) + "\n")


# -- tolerances ------------------------------------------------------------

def parse_tol(text: str) -> tuple[float, bool]:
    """``"3sigma"`` -> (3, True); ``"1e-3"`` -> (0.001, False)."""
    t = text.strip().lower()
    try:
        if t.endswith("sigma"):
            return float(t[:-5] or 1), True
        return float(t), False
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance {text!r}; use a number or e.g. 3sigma") from None


def within(value: float, stderr: float, expected: float, tol: tuple[float, bool]) -> bool:
    k, sigma = tol
    bound = k * stderr if sigma else k
    return abs(value - expected) <= bound


def parse_number(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad number {text!r}") from None


# -- inputs ----------------------------------------------------------------

NAMED_GRAPHS = ("gamma1", "tripod", "ladder1", "ladder2", "ladder3", "ladder4")


def load_graph(text: str):
    from .graphs import GraphError, KGraph, gamma1, ladder, tripod
    if text == "gamma1":
        return gamma1()
    if text == "tripod":
        return tripod()
    if text.startswith("ladder") and text[6:].isdigit():
        return ladder(int(text[6:]))
    try:
        if text.lstrip().startswith("{"):
            obj = json.loads(text)
        else:
            obj = json.loads(Path(text).read_text())
        return KGraph.from_json(obj)
    except FileNotFoundError:
        raise InputError(f"graph file not found: {text}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed graph JSON: {exc}") from None
    except GraphError as exc:
        raise InputError(str(exc)) from None


def load_algebra(text: str):
    from .lie import AlgebraError, get_algebra
    try:
        return get_algebra(text)
    except FileNotFoundError:
        raise InputError(f"algebra file not found: {text}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed algebra JSON: {exc}") from None
    except AlgebraError as exc:
        raise InputError(str(exc)) from None


def load_xi(text: str):
    from .weights import ChartError, EyePoint
    try:
        return EyePoint.parse(text)
    except (ChartError, ValueError) as exc:
        raise InputError(str(exc)) from None


def _setup_cache(args) -> None:
    from .weights import WeightCache, set_default_cache
    if getattr(args, "cache_dir", None):
        set_default_cache(WeightCache(args.cache_dir))
    if getattr(args, "workers", None):
        os.environ["KVDEFORM_WORKERS"] = str(args.workers)


def _mc(args):
    from .deformed import MCParams
    return MCParams(args.samples, args.seed, args.workers)


def _header(args, command: str, numeric: bool = True) -> dict:
    out = {"command": command, "build": build_id()}
    if numeric:
        out.update({"seed": args.seed, "samples": args.samples})
    return out


# -- commands --------------------------------------------------------------

def cmd_graphs(args) -> dict:
    from .graphs import enumerate_lie_trees, enumerate_wheels, symbol
    from .lie.words import bracket_str
    rep = _header(args, "graphs enumerate", numeric=False)
    records = []
    if args.kind == "lie":
        for t in enumerate_lie_trees(args.n):
            s = symbol(t)
            records.append({"name": str(t), "graph": t.to_graph().to_json(),
                            "symbol": {bracket_str(w): rational(c) for w, c in s.coeffs.items()}})
    else:
        if args.n < 2:
            raise InputError("wheels need n >= 2")
        for w in enumerate_wheels(args.n, args.max_spoke_depth):
            records.append({"name": str(w), "graph": w.to_graph().to_json()})
    rep["count"] = len(records)
    rep["records"] = records
    return rep


def cmd_weight(args) -> dict:
    from .weights import deformed_weight, weight_mc
    g = load_graph(args.graph)
    rep = _header(args, "weight")
    if args.xi:
        xi = load_xi(args.xi)
        est = deformed_weight(g, xi, args.samples, args.seed, args.workers)
        rep["xi"] = xi.key()
    else:
        est = weight_mc(g, args.samples, args.seed, args.workers)
    rec = {"graph": g.to_json(), **est.to_json()}
    if args.expect is not None:
        rec["expected"] = args.expect
        rec["passed"] = within(est.value, est.stderr, args.expect, args.tol)
    rep["records"] = [rec]
    if args.check:
        rep["check"] = rec.get("passed", math.isfinite(est.value))
    return rep


def cmd_stokes(args) -> dict:
    from .weights import UnsupportedFace, stokes_residual
    g = load_graph(args.graph)
    try:
        r = stokes_residual(g, args.samples, args.seed, args.workers)
    except UnsupportedFace as exc:
        raise InputError(str(exc)) from None
    rep = _header(args, "weight stokes")
    rep["records"] = [{"kind": f.kind, "aerial": list(f.aerial), "grounds": list(f.grounds), "status": f.status,
                       "sign": f.sign, "contribution": c, "stderr": s} for f, c, s in r.terms]
    rep["residual"] = r.residual
    rep["stderr"] = r.stderr
    if args.check:
        rep["check"] = within(r.residual, r.stderr, 0.0, args.tol)
    return rep


def cmd_bch_assemble(args) -> dict:
    from .deformed import assemble, compare_with_oracle
    from .lie.words import bracket_str
    xi = load_xi(args.xi)
    z = assemble(xi, args.order, _mc(args))
    rep = _header(args, "bch assemble")
    rep["xi"] = xi.key()
    records = []
    compare = xi.is_corner_01() or xi.chart == "iris"
    for r in compare_with_oracle(z):
        expected = r["expected"] if xi.is_corner_01() else (0.0 if len(r["word"]) > 1 else 1.0)
        rec = {"word": bracket_str(r["word"]), "degree": len(r["word"]), "value": r["observed"],
               "stderr": r["stderr"]}
        if compare:
            rec["expected"] = expected
            rec["passed"] = within(r["observed"], r["stderr"], expected, args.tol) or r["observed"] == expected
        records.append(rec)
    rep["records"] = records
    rep["weights"] = [{"tree": t, "graph": json.loads(g), **e.to_json()} for t, g, e in z.weights]
    if args.check:
        rep["check"] = all(r.get("passed", True) for r in records)
    return rep


def parse_path(args) -> list:
    from .weights import EyePoint
    if args.path:
        return [load_xi(p) for p in args.path.split(";") if p.strip()]
    if args.lid is None:
        raise InputError("give --path or --lid")
    n = args.steps
    if n < 2:
        raise InputError("--steps must be at least 2")
    return [EyePoint(args.lid, math.pi * k / (n - 1)) for k in range(n)]


def cmd_bch_path(args) -> dict:
    from .deformed import path_trace
    from .lie.words import bracket_str
    path = parse_path(args)
    rows = path_trace(path, args.order, _mc(args))
    rep = _header(args, "bch path")
    records = []
    for r in rows:
        for w, v in r["coefficients"].items():
            records.append({"index": r["index"], "xi": r["xi"], "word": bracket_str(w), "value": v,
                            "stderr": r["stderr"][w], "derivative": r["derivative"][w]})
    rep["records"] = records
    return rep


def cmd_bch_assoc(args) -> dict:
    from .deformed import associativity_defect, lid_obstruction
    from .lie.words import bracket_str
    xi = load_xi(args.xi)
    d = associativity_defect(xi, 3, _mc(args))
    rep = _header(args, "bch assoc")
    rep["xi"] = xi.key()
    (a, b, c), errs = d.inputs
    rep["coefficients"] = {"[x,y]": a, "[x,[x,y]]": b, "[[x,y],y]": c}
    rep["coefficient_stderr"] = {"[x,y]": errs[0], "[x,[x,y]]": errs[1], "[[x,y],y]": errs[2]}
    if xi.chart == "upper_lid":
        rep["lid_obstruction"] = lid_obstruction(float(xi.param))
    rep["records"] = [{"word": bracket_str(w), "value": float(v), "stderr": d.stderr.get(w, 0.0)}
                      for w, v in sorted(d.defect.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))]
    rep["max_abs"] = d.max_abs()
    return rep


def _series_json(s) -> dict:
    from .lie.words import bracket_str
    return {bracket_str(w): rational(c) for w, c in sorted(s.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))}


def cmd_kv_solve(args) -> dict:
    from .kv import KVInfeasible, eq1_residual, solve_FG
    alg = load_algebra(args.algebra) if args.algebra else None
    try:
        sol = solve_FG(args.order, args.convention, args.symmetric, alg)
    except KVInfeasible as exc:
        raise InputError(f"infeasible at degree {exc.degree}: {exc}") from None
    res = eq1_residual(sol)
    rep = _header(args, "kv solve", numeric=False)
    rep.update({"order": sol.order, "convention": sol.convention, "symmetric": sol.symmetric,
                "algebra": sol.algebra, "free_parameters": sol.free_parameters,
                "F": _series_json(sol.F), "G": _series_json(sol.G),
                "kernel": [{"F": _series_json(f), "G": _series_json(g)} for f, g in sol.kernel]})
    words = sorted({w for w in res.coeffs} | {w for w in sol.F.coeffs}, key=lambda u: (len(u), u))
    from .lie.words import bracket_str, lyndon_words
    rep["records"] = [{"word": bracket_str(w), "degree": d, "residual": rational(res[w])}
                      for d in range(1, sol.order + 2) for w in lyndon_words(2, d)]
    del words
    if args.check:
        rep["check"] = res.is_zero()
    return rep


def cmd_kv_trace(args) -> dict:
    from .kv import KVInfeasible, solve_FG, verify_trace
    alg = load_algebra(args.algebra)
    try:
        sol = solve_FG(args.order, args.convention, args.symmetric, alg if args.joint else None)
    except KVInfeasible as exc:
        raise InputError(f"infeasible at degree {exc.degree}: {exc}") from None
    r = verify_trace(sol, alg, args.order)
    names = coordinate_names(alg.dim)
    rep = _header(args, "kv trace", numeric=False)
    rep.update({"algebra": alg.name, "order": args.order, "joint": args.joint,
                "lhs": poly_terms(r.lhs, names), "rhs": poly_terms(r.rhs, names),
                "residual": poly_terms(r.residual, names)})
    rep["records"] = [{"monomial": m, "residual": v} for m, v in poly_terms(r.residual, names).items()]
    if args.check:
        rep["check"] = r.ok()
    return rep


def cmd_kv_eqdiff(args) -> dict:
    from .kv import KVInfeasible, solve_FG, verify_eqdiff
    from .lie.words import bracket_str
    try:
        sol = solve_FG(args.order, args.convention, args.symmetric)
    except KVInfeasible as exc:
        raise InputError(f"infeasible at degree {exc.degree}: {exc}") from None
    res = verify_eqdiff(sol)
    rep = _header(args, "kv eqdiff", numeric=False)
    rep["convention"] = sol.convention
    rep["records"] = [{"word": bracket_str(w), "residual": poly_terms(p, ["t"])} for w, p in
                      sorted(res.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))]
    rep["zero"] = res.is_zero()
    if args.check:
        rep["check"] = res.is_zero()
    return rep


def cmd_kv_jcheck(args) -> dict:
    from .kv import j_series_check
    alg = load_algebra(args.algebra)
    r = j_series_check(alg, args.order)
    names = [f"x{a}" for a in range(alg.dim)] + ["t"]
    rep = _header(args, "kv jcheck", numeric=False)
    rep.update({"algebra": alg.name, "order": args.order, "lhs": poly_terms(r.lhs, names),
                "residual": poly_terms(r.residual, names), "zero": r.ok()})
    rep["records"] = [{"monomial": m, "value": v} for m, v in poly_terms(r.lhs, names).items()]
    if args.check:
        rep["check"] = r.ok()
    return rep


def cmd_kv_transport(args) -> dict:
    from .kv import KVInfeasible, density_transport_check, solve_FG
    alg = load_algebra(args.algebra)
    try:
        sol = solve_FG(max(args.order, 1), "kv_original", True, alg)
    except KVInfeasible as exc:
        raise InputError(f"infeasible at degree {exc.degree}: {exc}") from None
    r = density_transport_check(sol, alg, args.order)
    names = coordinate_names(alg.dim) + ["t"]
    rep = _header(args, "kv transport", numeric=False)
    rep.update({"algebra": alg.name, "order": args.order, "residual": poly_terms(r.residual, names),
                "zero": r.ok()})
    rep["records"] = [{"monomial": m, "value": v} for m, v in poly_terms(r.lhs, names).items()]
    if args.check:
        rep["check"] = r.ok()
    return rep


def cmd_kv_d(args) -> dict:
    from .kv import bernoulli_d
    from .lie.bch import single_y_coefficients
    b = single_y_coefficients(args.n + 1)
    rep = _header(args, "kv d", numeric=False)
    rep["records"] = [{"n": k, "b_n": rational(b[k]), "d_n": rational(bernoulli_d(k))} for k in range(args.n + 1)]
    return rep


def cmd_density(args) -> dict:
    from .density import compare_log, density_from_wheels, density_oracle
    alg = load_algebra(args.algebra)
    xi = load_xi(args.xi)
    if args.degree > 4:
        raise InputError("wheel expansion is implemented through degree 4")
    oracle = density_oracle(alg, args.degree)
    wheels = density_from_wheels(alg, xi, args.degree, _mc(args), args.max_spoke_depth)
    names = coordinate_names(alg.dim)
    rep = _header(args, "density compare")
    rep.update({"algebra": alg.name, "xi": xi.key(), "degree": args.degree})
    records = []
    for r in compare_log(oracle, wheels):
        mono = "*".join(f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(r["monomial"]) if k) or "1"
        expected = float(r["expected"]) if xi.is_corner_01() else 0.0
        rec = {"monomial": mono, "degree": r["degree"], "oracle": rational(r["expected"]),
               "wheels": r["observed"], "stderr": r["stderr"]}
        if xi.is_corner_01() or xi.chart == "iris":
            rec["passed"] = within(r["observed"], r["stderr"], expected, args.tol) or r["observed"] == expected
        records.append(rec)
    rep["records"] = records
    rep["weights"] = [{"wheel": n, "graph": json.loads(g), **e.to_json()} for n, g, e in wheels.weights]
    if args.check:
        rep["check"] = all(r.get("passed", True) for r in records)
    return rep


def cmd_star(args) -> dict:
    from .star import LinearPoisson, bracket_poly_linear, commutator, mc_weights
    alg = load_algebra(args.algebra)
    alpha = LinearPoisson(alg, parse_fraction(args.scale))
    src = mc_weights(args.samples, args.seed, args.workers)
    names = [f"z{a}" for a in range(alg.dim)]
    rep = _header(args, "star commutator")
    rep.update({"algebra": alg.name, "order": args.order, "scale": rational(alpha.scale)})
    records = []
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            got = commutator(alpha, i, j, args.order, src)
            want = bracket_poly_linear(alg, i, j).scale(alpha.scale * 2)
            for e in sorted(set(got.value.terms) | set(want.terms) | set(got.stderr)):
                mono = "*".join(f"{names[a]}^{k}" if k > 1 else names[a] for a, k in enumerate(e) if k) or "1"
                v = float(got.value.terms.get(e, 0.0))
                se = got.stderr.get(e, 0.0)
                ex = Fraction(want.terms.get(e, 0))
                records.append({"pair": f"[z{i},z{j}]", "monomial": mono, "value": v, "stderr": se,
                                "expected": rational(ex),
                                "passed": within(v, se, float(ex), args.tol) or v == float(ex)})
    rep["records"] = records
    if args.check:
        rep["check"] = all(r["passed"] for r in records)
    return rep


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad rational {text!r}") from None


def cmd_verify(args) -> dict:
    from .verify import run_suite
    rows = run_suite(args.suite, args.seed, args.workers, args.samples)
    rep = {"command": f"verify {args.suite}", "build": build_id(), "seed": args.seed,
           "samples": args.samples if args.samples is not None else "per criterion",
           "records": [r.to_json() for r in rows],
           "passed": sum(r.passed for r in rows), "failed": sum(not r.passed for r in rows)}
    rep["check"] = all(r.passed for r in rows)
    return rep


# -- parser ----------------------------------------------------------------

def _common(p, samples: int | None = 1_000_000, seed: bool = True):
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    p.add_argument("--check", action="store_true", help="exit 1 when a check fails")
    p.add_argument("--tol", type=parse_tol, default=(3.0, True), help="absolute number or e.g. 3sigma")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--cache-dir", default=os.environ.get("KVDEFORM_CACHE"))
    if seed:
        p.add_argument("--seed", type=int, default=0)
    if samples is not None:
        p.add_argument("--samples", type=int, default=samples)


def _kv_flags(p):
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--convention", default="kv_original", choices=("kv_original", "kv-original",
                                                                   "paper_transcribed", "paper-transcribed"))
    sym = p.add_mutually_exclusive_group()
    sym.add_argument("--symmetric", dest="symmetric", action="store_true", default=True)
    sym.add_argument("--no-symmetric", dest="symmetric", action="store_false")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kvdeform", description="Campbell-Hausdorff series, deformed graph "
                                     "weights and Kashiwara-Vergne checks.")
    parser.add_argument("--version", action="version", version=f"kvdeform {build_id()}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graphs", help="graph enumeration")
    gs = g.add_subparsers(dest="action", required=True)
    ge = gs.add_parser("enumerate")
    ge.add_argument("--kind", choices=("lie", "wheel"), default="lie")
    ge.add_argument("--n", type=int, required=True)
    ge.add_argument("--max-spoke-depth", type=int, default=None)
    _common(ge, samples=None, seed=False)
    ge.set_defaults(func=cmd_graphs)

    w = sub.add_parser("weight", help="Monte-Carlo graph weight")
    w.add_argument("--graph", required=True, help=f"JSON file, inline JSON, or one of {', '.join(NAMED_GRAPHS)}")
    w.add_argument("--xi", default=None, help="eye point, e.g. corner, iris:0, upper_lid:0.785")
    w.add_argument("--expect", type=parse_number, default=None)
    w.add_argument("--stokes", action="store_true", help="report the boundary-face sum instead")
    _common(w)
    w.set_defaults(func=lambda a: cmd_stokes(a) if a.stokes else cmd_weight(a))

    b = sub.add_parser("bch", help="deformed Campbell-Hausdorff series")
    bs = b.add_subparsers(dest="action", required=True)
    ba = bs.add_parser("assemble")
    ba.add_argument("--xi", default="corner")
    ba.add_argument("--order", type=int, default=4)
    _common(ba)
    ba.set_defaults(func=cmd_bch_assemble)
    bp = bs.add_parser("path")
    bp.add_argument("--path", default=None, help="';'-separated eye points")
    bp.add_argument("--lid", choices=("upper_lid", "lower_lid"), default=None)
    bp.add_argument("--steps", type=int, default=5)
    bp.add_argument("--order", type=int, default=3)
    _common(bp)
    bp.set_defaults(func=cmd_bch_path)
    bo = bs.add_parser("assoc")
    bo.add_argument("--xi", default="upper_lid:1.5707963267948966")
    _common(bo)
    bo.set_defaults(func=cmd_bch_assoc)

    k = sub.add_parser("kv", help="Kashiwara-Vergne equations")
    ks = k.add_subparsers(dest="action", required=True)
    k1 = ks.add_parser("solve")
    _kv_flags(k1)
    k1.add_argument("--algebra", default=None, help="also impose the trace condition on this algebra")
    _common(k1, samples=None, seed=False)
    k1.set_defaults(func=cmd_kv_solve)
    k2 = ks.add_parser("trace")
    _kv_flags(k2)
    k2.add_argument("--algebra", required=True)
    k2.add_argument("--no-joint", dest="joint", action="store_false", default=True,
                    help="check the solution of the first equation alone")
    _common(k2, samples=None, seed=False)
    k2.set_defaults(func=cmd_kv_trace)
    k3 = ks.add_parser("eqdiff")
    _kv_flags(k3)
    _common(k3, samples=None, seed=False)
    k3.set_defaults(func=cmd_kv_eqdiff)
    k4 = ks.add_parser("jcheck")
    k4.add_argument("--algebra", required=True)
    k4.add_argument("--order", type=int, default=6)
    _common(k4, samples=None, seed=False)
    k4.set_defaults(func=cmd_kv_jcheck)
    k5 = ks.add_parser("transport")
    k5.add_argument("--algebra", required=True)
    k5.add_argument("--order", type=int, default=3)
    _common(k5, samples=None, seed=False)
    k5.set_defaults(func=cmd_kv_transport)
    k6 = ks.add_parser("d")
    k6.add_argument("--n", type=int, default=4)
    _common(k6, samples=None, seed=False)
    k6.set_defaults(func=cmd_kv_d)

    d = sub.add_parser("density", help="density function")
    ds = d.add_subparsers(dest="action", required=True)
    dc = ds.add_parser("compare")
    dc.add_argument("--algebra", required=True)
    dc.add_argument("--degree", type=int, default=3)
    dc.add_argument("--xi", default="corner")
    dc.add_argument("--max-spoke-depth", type=int, default=None)
    _common(dc, samples=2_000_000)
    dc.set_defaults(func=cmd_density)

    s = sub.add_parser("star", help="star product")
    ss = s.add_subparsers(dest="action", required=True)
    sc = ss.add_parser("commutator")
    sc.add_argument("--algebra", required=True)
    sc.add_argument("--order", type=int, default=2)
    sc.add_argument("--scale", default="1/2")
    _common(sc)
    sc.set_defaults(func=cmd_star)

    v = sub.add_parser("verify", help="acceptance suite")
    v.add_argument("suite", choices=("fast", "full"))
    _common(v, samples=None)
    v.add_argument("--samples", type=int, default=None, help="override per-criterion sample counts")
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    for name in ("samples", "order", "degree", "n", "steps"):
        v = getattr(args, name, None)
        if isinstance(v, int) and v < 0 or (name == "samples" and v is not None and v <= 0):
            print(f"kvdeform: --{name} must be positive", file=sys.stderr)
            return EXIT_USAGE
    try:
        _setup_cache(args)
        report = args.func(args)
    except InputError as exc:
        print(f"kvdeform: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"kvdeform: {exc}", file=sys.stderr)
        return EXIT_INPUT
    emit(report, args.format)
    if args.check and not report.get("check", True):
        return EXIT_CHECK
    if args.command == "verify" and not report.get("check", True):
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
