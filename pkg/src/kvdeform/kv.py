"""Kashiwara-Vergne equations: exact order-by-order solutions and identity checks.

Conventions for the first equation:

* ``kv_original``: ``x + y - log(e^y e^x) = (1 - e^{-ad x}) F + (e^{ad y} - 1) G``
* ``paper_transcribed``: ``x + y - log(e^x e^y) = (e^{ad x} - 1) F + (1 - e^{ad y}) G``

Only the first is compatible with the flow ``d/dt Z_t = [x, F_t].d_x Z_t + [y, G_t].d_y Z_t``
for ``Z = log(e^x e^y)`` and with the symmetric leading terms ``F = y/4 + ...``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .lie.algebra import LieAlgebraSpec
from .lie.bch import bch_oracle, single_y_coefficients
from .lie.evaluate import ad_matrix, bracket_poly, eval_on_algebra
from .lie.functions import log_j_coefficients, log_q_coefficients, todd_coefficients
from .lie.matrix import identity, log_unipotent, power_series, trace_powers
from .lie.poly import CoordinatePolynomial, trace_poly
from .lie.series import LieSeries, bracket, directional_derivative, generators, substitute
from .lie.words import lyndon_words

CONVENTIONS = ("kv_original", "paper_transcribed")
MAX_ORDER = 6


class KVInfeasible(ValueError):
    def __init__(self, degree: int, message: str):
        super().__init__(message)
        self.degree = degree


def normalize_convention(name: str) -> str:
    n = name.replace("-", "_")
    if n not in CONVENTIONS:
        raise ValueError(f"unknown convention {name!r}; expected one of {', '.join(CONVENTIONS)}")
    return n


@dataclass(frozen=True)
class KVSolution:
    order: int
    F: LieSeries
    G: LieSeries
    convention: str = "kv_original"
    symmetric: bool = True
    kernel: tuple = ()  # pairs (F, G) spanning the homogeneous solutions
    algebra: str | None = None
    unknowns: tuple = field(default=(), compare=False)

    @property
    def free_parameters(self) -> str:
        where = f" (trace condition on {self.algebra})" if self.algebra else ""
        return f"affine space of dimension {len(self.kernel)} over the rationals{where}"

    def shifted(self, coeffs) -> "KVSolution":
        """Particular solution plus ``sum coeffs[i] * kernel[i]``."""
        F, G = self.F, self.G
        for c, (kf, kg) in zip(coeffs, self.kernel):
            F = F + kf.scale(Fraction(c))
            G = G + kg.scale(Fraction(c))
        return KVSolution(self.order, F, G, self.convention, self.symmetric, self.kernel, self.algebra, self.unknowns)

    def to_json(self) -> dict:
        from .lie.words import bracket_str

        def ser(s: LieSeries) -> dict:
            return {bracket_str(w): f"{Fraction(c).numerator}/{Fraction(c).denominator}"
                    for w, c in sorted(s.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))}

        return {"order": self.order, "convention": self.convention, "symmetric": self.symmetric,
                "algebra": self.algebra, "F": ser(self.F), "G": ser(self.G),
                "kernel_dimension": len(self.kernel)}


# -- the first equation ----------------------------------------------------

def _ad_series(gen: LieSeries, s: LieSeries, coeffs, max_degree: int) -> LieSeries:
    """``sum_{j>=1} coeffs(j) ad(gen)^j s``."""
    out = LieSeries.zero(s.alphabet_size, max_degree)
    term = s
    for j in range(1, max_degree + 1):
        term = bracket(gen, term, max_degree)
        if term.is_zero():
            break
        out = out + term.scale(coeffs(j))
    return out


def eq1_lhs(order: int, convention: str) -> LieSeries:
    x, y = generators(2)
    z = bch_oracle(order + 1)
    if convention == "kv_original":
        z = substitute(z, [y, x], order + 1)
    return (x + y - z).truncate(order + 1)


def eq1_rhs(F: LieSeries, G: LieSeries, order: int, convention: str) -> LieSeries:
    x, y = generators(2)
    d = order + 1
    if convention == "kv_original":
        a = _ad_series(x, F, lambda j: Fraction((-1) ** (j + 1), math.factorial(j)), d)
        b = _ad_series(y, G, lambda j: Fraction(1, math.factorial(j)), d)
    else:
        a = _ad_series(x, F, lambda j: Fraction(1, math.factorial(j)), d)
        b = _ad_series(y, G, lambda j: Fraction(-1, math.factorial(j)), d)
    return a + b


def eq1_residual(sol: KVSolution) -> LieSeries:
    return eq1_lhs(sol.order, sol.convention) - eq1_rhs(sol.F, sol.G, sol.order, sol.convention)


def swap_negate(s: LieSeries, max_degree: int) -> LieSeries:
    """``s(x, y) -> s(-y, -x)``; an involution."""
    x, y = generators(2)
    return substitute(s, [-y, -x], max_degree)


# -- trace condition -------------------------------------------------------

def trace_term(F: LieSeries, G: LieSeries, alg: LieAlgebraSpec, order: int) -> CoordinatePolynomial:
    """``tr(ad x . dF/dx + ad y . dG/dy)`` as a polynomial in the coordinates of x, y."""
    dim = alg.dim
    nv = 2 * dim
    out = CoordinatePolynomial.zero(nv, order)
    for letter, S in ((0, F), (1, G)):
        if S.is_zero():
            continue
        vec = eval_on_algebra(S, alg, order)
        gen = [CoordinatePolynomial.variable(nv, letter * dim + a) for a in range(dim)]
        ad = ad_matrix(gen, alg)
        for a in range(dim):
            for b in range(dim):
                if ad[a][b].terms:
                    out = out + ad[a][b].mul(vec[b].derivative(letter * dim + a), order)
    return out


def trace_rhs(alg: LieAlgebraSpec, order: int) -> CoordinatePolynomial:
    """``T(x,y) = 1/2 tr(g(ad x) + g(ad y) - g(ad Z) - 1)`` with ``g(s) = s/(e^s - 1)``."""
    dim = alg.dim
    nv = 2 * dim
    todd = todd_coefficients(order)
    x = [CoordinatePolynomial.variable(nv, a) for a in range(dim)]
    y = [CoordinatePolynomial.variable(nv, dim + a) for a in range(dim)]
    z = eval_on_algebra(bch_oracle(order), alg, order)
    out = CoordinatePolynomial.zero(nv, order)
    for vec, sign in ((x, 1), (y, 1), (z, -1)):
        tp = trace_powers(ad_matrix(vec, alg), order, order)
        for k in range(1, order + 1):
            out = out + tp[k].scale(Fraction(sign) * todd[k] / 2)
    return out.truncate(order)


@dataclass(frozen=True)
class TraceReport:
    algebra: LieAlgebraSpec
    order: int
    lhs: CoordinatePolynomial
    rhs: CoordinatePolynomial
    residual: CoordinatePolynomial

    def ok(self) -> bool:
        return self.residual.is_zero()


def verify_trace(sol: KVSolution, alg: LieAlgebraSpec, order: int | None = None) -> TraceReport:
    order = sol.order if order is None else order
    lhs = trace_term(sol.F.truncate(order), sol.G.truncate(order), alg, order)
    rhs = trace_rhs(alg, order)
    return TraceReport(alg, order, lhs, rhs, (lhs - rhs).truncate(order))


# -- solver ----------------------------------------------------------------

def _unknowns(order: int) -> list[tuple[int, tuple]]:
    words = [w for d in range(1, order + 1) for w in lyndon_words(2, d)]
    return [(0, w) for w in words] + [(1, w) for w in words]


def _basis(u) -> LieSeries:
    return LieSeries(2, {u[1]: Fraction(1)}, len(u[1]))


def _build_system(order: int, convention: str, symmetric: bool, alg: LieAlgebraSpec | None):
    unknowns = _unknowns(order)
    idx = {u: i for i, u in enumerate(unknowns)}
    n = len(unknowns)
    rows: list[tuple[int, dict, Fraction]] = []  # (degree, coefficients, rhs)
    zero = LieSeries.zero(2, order + 1)
    images = []
    for side, w in unknowns:
        e = _basis((side, w))
        images.append(eq1_rhs(e, zero, order, convention) if side == 0 else eq1_rhs(zero, e, order, convention))
    lhs = eq1_lhs(order, convention)
    for d in range(2, order + 2):
        for w in lyndon_words(2, d):
            coeffs = {i: Fraction(img[w]) for i, img in enumerate(images) if img[w] != 0}
            rows.append((d, coeffs, Fraction(lhs[w])))
    if symmetric:
        # G = F(-y, -x), one row per Lyndon word of G
        for d in range(1, order + 1):
            for v in lyndon_words(2, d):
                coeffs = {idx[(1, v)]: Fraction(1)}
                for side, w in unknowns:
                    if side == 0 and len(w) == d:
                        c = swap_negate(_basis((0, w)), order)[v]
                        if c:
                            coeffs[idx[(0, w)]] = coeffs.get(idx[(0, w)], 0) - Fraction(c)
                rows.append((d, coeffs, Fraction(0)))
    if alg is not None:
        zero2 = LieSeries.zero(2, order)
        polys = []
        for side, w in unknowns:
            e = _basis((side, w))
            polys.append(trace_term(e, zero2, alg, order) if side == 0 else trace_term(zero2, e, alg, order))
        rhs = trace_rhs(alg, order)
        monos = set(rhs.terms)
        for p in polys:
            monos |= set(p.terms)
        for mono in sorted(monos, key=lambda m: (sum(m), m)):
            coeffs = {i: Fraction(p.terms[mono]) for i, p in enumerate(polys) if mono in p.terms}
            rows.append((sum(mono), coeffs, Fraction(rhs.terms.get(mono, 0))))
    return unknowns, rows, n


def _to_matrix(rows, n):
    A = sympy.zeros(len(rows), n + 1)
    for r, (_, coeffs, b) in enumerate(rows):
        for i, c in coeffs.items():
            A[r, i] = sympy.Rational(c.numerator, c.denominator)
        A[r, n] = sympy.Rational(b.numerator, b.denominator)
    return A


def _consistent(rows, n) -> bool:
    if not rows:
        return True
    A = _to_matrix(rows, n)
    return A[:, :n].rank() == A.rank()


def solve_FG(order: int, convention: str = "kv_original", symmetric: bool = True,
             algebra: LieAlgebraSpec | None = None) -> KVSolution:
    """Exact solution of the first equation through ``order`` (plus the trace condition on ``algebra``).

    ``F`` and ``G`` get degrees ``1..order``; the first equation then holds
    through degree ``order + 1``. Free variables of the reduced system are set
    to zero and the homogeneous solutions are returned as ``kernel``.
    """
    convention = normalize_convention(convention)
    if not 1 <= order <= MAX_ORDER:
        raise ValueError(f"order must lie in [1, {MAX_ORDER}]")
    unknowns, rows, n = _build_system(order, convention, symmetric, algebra)
    rows.sort(key=lambda r: r[0])
    aug = _to_matrix(rows, n)
    R, pivots = aug.rref()
    if n in pivots:
        for d in sorted({r[0] for r in rows}):
            if not _consistent([r for r in rows if r[0] <= d], n):
                raise KVInfeasible(d, f"no solution under {convention}"
                                      f"{' with symmetry' if symmetric else ''}: equations of degree {d} are inconsistent")
        raise KVInfeasible(order + 1, "inconsistent system")
    sol = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        v = R[r, n]
        sol[p] = Fraction(int(v.p), int(v.q))
    kernel = []
    for vec in aug[:, :n].nullspace():
        kf, kg = {}, {}
        for i, c in enumerate(vec):
            if c != 0:
                side, w = unknowns[i]
                (kf if side == 0 else kg)[w] = Fraction(int(c.p), int(c.q))
        kernel.append((LieSeries(2, kf, order), LieSeries(2, kg, order)))
    F = LieSeries(2, {w: c for (side, w), c in zip(unknowns, sol) if side == 0}, order)
    G = LieSeries(2, {w: c for (side, w), c in zip(unknowns, sol) if side == 1}, order)
    out = KVSolution(order, F, G, convention, symmetric, tuple(kernel),
                     algebra.name if algebra is not None else None, tuple(unknowns))
    if not eq1_residual(out).is_zero():
        raise AssertionError("solver produced a non-solution")
    return out


# -- the flow equation -----------------------------------------------------

def _t_series(s: LieSeries, shift: int, max_degree: int) -> LieSeries:
    """Attach ``t^(deg + shift)`` to every coefficient (as a one-variable polynomial)."""
    return LieSeries(s.alphabet_size, {
        w: CoordinatePolynomial(1, {(len(w) + shift,): Fraction(c)}) for w, c in s.coeffs.items()
        if len(w) <= max_degree}, max_degree)


def verify_eqdiff(sol: KVSolution, order: int | None = None) -> LieSeries:
    """``d/dt Z_t - [x,F_t].d_x Z_t - [y,G_t].d_y Z_t`` with ``Z_t = Z(tx,ty)/t``.

    Coefficients are polynomials in ``t``; the result vanishes identically when
    the first equation holds in the ``kv_original`` convention.
    """
    d = (sol.order + 1) if order is None else order
    x, y = generators(2)
    zt = _t_series(bch_oracle(d), -1, d)
    ft = _t_series(sol.F, -1, d)
    gt = _t_series(sol.G, -1, d)
    one = CoordinatePolynomial.constant(1, Fraction(1))
    xt = LieSeries(2, {(0,): one}, 1)
    yt = LieSeries(2, {(1,): one}, 1)
    lhs = zt.map_coeffs(lambda p: p.derivative(0))
    rhs = directional_derivative(zt, 0, bracket(xt, ft, d), d) + directional_derivative(zt, 1, bracket(yt, gt, d), d)
    return (lhs - rhs).truncate(d)


def bernoulli_d(n: int) -> Fraction:
    """``d_n = (n+1) b_{n+1} - b_n / 4`` from the single-y coefficients ``b_n``."""
    if n < 0:
        raise ValueError("n >= 0 required")
    b = single_y_coefficients(n + 1)
    return (n + 1) * b[n + 1] - b[n] / 4


# -- j-function identities ---------------------------------------------------

def log_j_matrix(vec: list[CoordinatePolynomial], alg: LieAlgebraSpec, max_degree: int,
                 kind: str = "j") -> CoordinatePolynomial:
    """``tr log(f(ad v))`` through ``max_degree``, ``f(s) = (1-e^-s)/s`` (j) or ``sinh(s/2)/(s/2)`` (q)."""
    ad = ad_matrix(vec, alg)
    if kind == "j":
        coeffs = [Fraction((-1) ** k, math.factorial(k + 1)) for k in range(max_degree + 1)]
    elif kind == "q":
        coeffs = [Fraction(1, 4 ** (k // 2) * math.factorial(k + 1)) if k % 2 == 0 else Fraction(0)
                  for k in range(max_degree + 1)]
    else:
        raise ValueError("kind must be 'j' or 'q'")
    m = power_series(ad, coeffs, max_degree)
    return trace_poly(log_unipotent(m, max_degree)).truncate(max_degree)


def log_j_scalar(vec, alg: LieAlgebraSpec, max_degree: int, kind: str = "j") -> CoordinatePolynomial:
    """Same as ``log_j_matrix`` through ``sum_k c_k tr(ad v)^k`` (functional calculus)."""
    c = (log_j_coefficients if kind == "j" else log_q_coefficients)(max_degree)
    tp = trace_powers(ad_matrix(vec, alg), max_degree, max_degree)
    out = CoordinatePolynomial.zero(vec[0].nvars, max_degree)
    for k in range(1, max_degree + 1):
        if c[k]:
            out = out + tp[k].scale(c[k])
    return out


@dataclass(frozen=True)
class SeriesCheck:
    lhs: CoordinatePolynomial
    rhs: CoordinatePolynomial
    residual: CoordinatePolynomial

    def ok(self) -> bool:
        return self.residual.is_zero()


def j_series_check(alg: LieAlgebraSpec, order: int = 6) -> SeriesCheck:
    """``j^{-1/2}(tx) d/dt j^{1/2}(tx)`` against ``1/2 tr(ad x/(e^{t ad x} - 1) - 1/t)`` through ``t^order``.

    Polynomials in ``(x_1..x_dim, t)``. The left side differentiates the matrix
    logarithm of ``(1 - e^{-t ad x})/(t ad x)``; the right side uses Bernoulli numbers.
    """
    if order > 8:
        raise ValueError("order <= 8")
    dim = alg.dim
    nv = dim + 1
    deg = order + 1
    x = [CoordinatePolynomial.variable(nv, a) for a in range(dim)]
    t = CoordinatePolynomial.variable(nv, dim)
    tx = [p.mul(t) for p in x]
    # total degree of t^k x^k is 2k
    logj = log_j_matrix(tx, alg, 2 * deg)
    lhs = logj.derivative(dim).scale(Fraction(1, 2))
    lhs = CoordinatePolynomial(nv, {e: c for e, c in lhs.terms.items() if e[dim] <= order})
    todd = todd_coefficients(deg)
    tp = trace_powers(ad_matrix(x, alg), deg, deg)
    rhs = CoordinatePolynomial.zero(nv)
    for k in range(1, deg + 1):
        tk = CoordinatePolynomial(nv, {tuple([0] * dim + [k - 1]): Fraction(1)})
        rhs = rhs + tp[k].mul(tk).scale(todd[k] / 2)
    rhs = CoordinatePolynomial(nv, {e: c for e, c in rhs.terms.items() if e[dim] <= order})
    return SeriesCheck(lhs, rhs, lhs - rhs)


# -- density transport -----------------------------------------------------

def _scale_t(p: CoordinatePolynomial, shift: int) -> CoordinatePolynomial:
    """Append a variable ``t`` and multiply each homogeneous part of degree d by ``t^(d+shift)``."""
    return CoordinatePolynomial(p.nvars + 1, {e + (sum(e) + shift,): c for e, c in p.terms.items()})


def _coord_truncate(p: CoordinatePolynomial, order: int) -> CoordinatePolynomial:
    return CoordinatePolynomial(p.nvars, {e: c for e, c in p.terms.items() if sum(e[:-1]) <= order})


def density_transport_check(sol: KVSolution, alg: LieAlgebraSpec, order: int = 3) -> SeriesCheck:
    """``d/dt D_t`` against ``tr(ad x dF_t/dx + ad y dG_t/dy) D_t + [x,F_t].d_x D_t + [y,G_t].d_y D_t``."""
    from .density import density_oracle
    dim = alg.dim
    nv = 2 * dim
    D = density_oracle(alg, order).terms
    Dt = _scale_t(D, 0)
    lhs = Dt.derivative(nv)
    tr = _scale_t(trace_term(sol.F.truncate(order), sol.G.truncate(order), alg, order), -1)
    rhs = _coord_truncate(tr.mul(Dt), order)
    gens = [[CoordinatePolynomial.variable(nv, letter * dim + a) for a in range(dim)] for letter in (0, 1)]
    for letter, S in ((0, sol.F), (1, sol.G)):
        vec = eval_on_algebra(S.truncate(order), alg, order)
        field_ = bracket_poly(alg, gens[letter], vec, order + 1)
        for a in range(dim):
            comp = _scale_t(field_[a], -2)
            rhs = rhs + _coord_truncate(comp.mul(Dt.derivative(letter * dim + a)), order)
    lhs = _coord_truncate(lhs, order)
    return SeriesCheck(lhs, rhs, lhs - rhs)
