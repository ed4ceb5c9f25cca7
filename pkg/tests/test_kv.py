import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from kvdeform.kv import (KVInfeasible, bernoulli_d, density_transport_check, eq1_residual, j_series_check,
                         log_j_matrix, log_j_scalar, normalize_convention, solve_FG, swap_negate, verify_eqdiff,
                         verify_trace)
from kvdeform.lie import get_algebra
from kvdeform.lie.evaluate import coordinate_vector
from kvdeform.lie.series import LieSeries, bracket, generators
from kvdeform.lie.words import standard_factorization

from matrix_oracle import evaluate, mexp, mlog, random_nilpotent

ALGEBRAS = ["abelian2", "aff1", "heisenberg3", "sl2", "so3"]


@pytest.fixture(scope="module")
def sol3():
    return solve_FG(3)


@pytest.fixture(scope="module")
def joint():
    return {name: solve_FG(4, algebra=get_algebra(name)) for name in ("aff1", "sl2")}


def first_equation_on_matrices(F, G, X, Y):
    """``x + y - log(e^y e^x) - (1 - e^{-ad x}) F - (e^{ad y} - 1) G`` on nilpotent matrices."""
    n = X.shape[0]
    f, g = evaluate(F, [X, Y]), evaluate(G, [X, Y])
    lhs = X + Y - mlog(mexp(Y) * mexp(X))
    a, b = sympy.zeros(n, n), sympy.zeros(n, n)
    tf, tg = f, g
    for j in range(1, n + 1):
        tf = X * tf - tf * X
        tg = Y * tg - tg * Y
        a += tf * sympy.Rational((-1) ** (j + 1), sympy.factorial(j))
        b += tg / sympy.factorial(j)
    return lhs - a - b


# -- first equation ----------------------------------------------------------

def test_lowest_order_solution():
    s = solve_FG(1)
    x, y = generators(2)
    assert s.F == y.scale(Fraction(1, 4)) and s.G == x.scale(Fraction(-1, 4))
    assert s.kernel == ((-x, y),)


def test_order3_solution_values(sol3):
    x, y = generators(2)
    xy = bracket(x, y, 3)
    xxy, xyy = bracket(x, xy, 3), bracket(xy, y, 3)
    c = Fraction
    assert sol3.F == y.scale(c(1, 4)) + xy.scale(c(1, 24)) + xxy.scale(c(-1, 48)) + xyy.scale(c(1, 48))
    assert sol3.G == x.scale(c(-1, 4)) + xy.scale(c(-1, 24)) + xxy.scale(c(-1, 48)) + xyy.scale(c(1, 48))


@pytest.mark.parametrize("seed", [0, 1])
def test_order3_solution_on_nilpotent_matrices(sol3, seed):
    # 5x5 strictly upper triangular: words of length 5 vanish, so degree 4 must be exact
    rng = random.Random(seed)
    X, Y = random_nilpotent(rng, 5), random_nilpotent(rng, 5)
    assert first_equation_on_matrices(sol3.F, sol3.G, X, Y) == sympy.zeros(5, 5)


def test_order3_kernel_is_x_y_scaling(sol3):
    x, y = generators(2)
    # F = -x, G = y is homogeneous: (1 - e^{-ad x})(-x) = 0 and (e^{ad y} - 1) y = 0
    assert sol3.kernel == ((-x, y),)


@settings(max_examples=10)
@given(st.fractions(-3, 3, max_denominator=7))
def test_every_element_of_solution_space_solves(sol3, c):
    s = sol3.shifted([c])
    assert eq1_residual(s).is_zero()
    assert verify_eqdiff(s).is_zero()
    rng = random.Random(7)
    X, Y = random_nilpotent(rng, 5), random_nilpotent(rng, 5)
    assert first_equation_on_matrices(s.F, s.G, X, Y) == sympy.zeros(5, 5)


def test_symmetric_solution_satisfies_symmetry(sol3):
    assert sol3.G == swap_negate(sol3.F, 3)


@given(st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_swap_negate_is_involution(vals):
    words = [(0,), (1,), (0, 1), (0, 0, 1), (0, 1, 1)]
    s = LieSeries(2, {w: Fraction(v) for w, v in zip(words, vals)}, 3)
    assert swap_negate(swap_negate(s, 3), 3) == s


def test_transcribed_convention_is_infeasible_with_symmetry():
    with pytest.raises(KVInfeasible) as info:
        solve_FG(3, "paper_transcribed", symmetric=True)
    assert info.value.degree == 2


def test_transcribed_convention_violates_flow_equation():
    s = solve_FG(2, "paper-transcribed", symmetric=False)
    assert eq1_residual(s).is_zero()
    assert not verify_eqdiff(s).is_zero()


def test_convention_names():
    assert normalize_convention("kv-original") == "kv_original"
    with pytest.raises(ValueError):
        normalize_convention("other")
    with pytest.raises(ValueError):
        solve_FG(7)


@pytest.mark.parametrize("order", [1, 2, 3, 4])
def test_flow_equation_holds(order):
    assert verify_eqdiff(solve_FG(order)).is_zero()


# -- Bernoulli combinations --------------------------------------------------

def test_bernoulli_d_from_sympy():
    def b(n):
        B = sympy.bernoulli(n) if n != 1 else -sympy.Rational(1, 2)
        return (-1) ** n * B / sympy.factorial(n)
    for n in range(6):
        expected = (n + 1) * b(n + 1) - b(n) / 4
        assert bernoulli_d(n) == Fraction(str(expected))
    assert [bernoulli_d(n) for n in range(5)] == [Fraction(1, 4), Fraction(1, 24), Fraction(-1, 48),
                                                  Fraction(-1, 180), Fraction(1, 2880)]
    with pytest.raises(ValueError):
        bernoulli_d(-1)


# -- trace condition -----------------------------------------------------------

SL2 = [np.array([[1, 0], [0, -1]], float), np.array([[0, 1], [0, 0]], float), np.array([[0, 0], [1, 0]], float)]


def _sl2_coords(m):
    return np.array([m[0, 0], m[0, 1], m[1, 0]])


def _sl2_mat(v):
    return sum(c * b for c, b in zip(v, SL2))


def _ad(v):
    m = _sl2_mat(v)
    return np.column_stack([_sl2_coords(m @ b - b @ m) for b in SL2])


def _eval_numeric(series, x, y):
    mats = [_sl2_mat(x), _sl2_mat(y)]
    memo = {}

    def ev(w):
        if w not in memo:
            if len(w) == 1:
                memo[w] = mats[w[0]]
            else:
                u, v = standard_factorization(w)
                a, b = ev(u), ev(v)
                memo[w] = a @ b - b @ a
        return memo[w]
    return _sl2_coords(sum(float(c) * ev(w) for w, c in series.coeffs.items()))


def _series(f, a, terms=30):
    out, power = np.zeros_like(a), np.eye(len(a))
    for k, c in enumerate(f[:terms]):
        out = out + c * power
        power = power @ a
    return out


def _mlog(m, terms=30):
    q = m - np.eye(len(m))
    out, power = np.zeros_like(m), np.eye(len(m))
    for k in range(1, terms):
        power = power @ q
        out = out + (-1) ** (k + 1) * power / k
    return out


def _mexp(m, terms=30):
    out, term = np.eye(len(m)), np.eye(len(m))
    for k in range(1, terms):
        term = term @ m / k
        out = out + term
    return out


TODD = [float(sympy.bernoulli(k) if k != 1 else -sympy.Rational(1, 2)) / float(sympy.factorial(k)) for k in range(30)]


def numeric_trace_defect(F, G, x, y, h=1e-6):
    """``tr(ad x dF/dx + ad y dG/dy) - 1/2 tr(g(ad x) + g(ad y) - g(ad Z) - 1)`` with ``g(s) = s/(e^s - 1)``."""
    def jac(series, slot):
        cols = []
        for a in range(3):
            e = np.zeros(3)
            e[a] = h
            if slot == 0:
                cols.append((_eval_numeric(series, x + e, y) - _eval_numeric(series, x - e, y)) / (2 * h))
            else:
                cols.append((_eval_numeric(series, x, y + e) - _eval_numeric(series, x, y - e)) / (2 * h))
        return np.column_stack(cols)

    lhs = np.trace(_ad(x) @ jac(F, 0)) + np.trace(_ad(y) @ jac(G, 1))
    z = _sl2_coords(_mlog(_mexp(_sl2_mat(x)) @ _mexp(_sl2_mat(y))))
    g = lambda v: np.trace(_series(TODD, _ad(v)) - np.eye(3))
    rhs = 0.5 * (g(x) + g(y) - g(z))
    return lhs - rhs


def test_trace_condition_numerically_on_sl2(joint):
    s = joint["sl2"]
    rng = np.random.default_rng(0)
    eps = 0.05
    for _ in range(4):
        x, y = eps * rng.standard_normal(3), eps * rng.standard_normal(3)
        assert abs(numeric_trace_defect(s.F, s.G, x, y)) < 1e-5
    # the numeric check has teeth: keeping only the linear parts breaks it
    broken = type(s)(4, s.F.truncate(1), s.G.truncate(1), s.convention, s.symmetric)
    x, y = eps * rng.standard_normal(3), eps * rng.standard_normal(3)
    assert abs(numeric_trace_defect(broken.F, broken.G, x, y)) > 1e-5


@pytest.mark.parametrize("name", ALGEBRAS)
def test_joint_system_solvable_at_order_4(name):
    alg = get_algebra(name)
    s = solve_FG(4, algebra=alg)
    assert eq1_residual(s).is_zero()
    assert verify_trace(s, alg).ok()
    assert s.algebra == name


def test_kernel_shift_breaks_trace_on_aff1():
    # the trace condition pins the scaling field on a non-unimodular algebra
    alg = get_algebra("aff1")
    s = solve_FG(3, algebra=alg)
    assert s.kernel == ()
    x, y = generators(2)
    moved = type(s)(3, s.F - x, s.G + y, s.convention, s.symmetric)
    assert eq1_residual(moved).is_zero()
    assert not verify_trace(moved, alg).ok()


def test_kernel_shift_invisible_on_sl2():
    alg = get_algebra("sl2")
    s = solve_FG(3, algebra=alg)
    x, y = generators(2)
    moved = type(s)(3, s.F - x, s.G + y, s.convention, s.symmetric)
    assert verify_trace(moved, alg).ok()


# -- j-function identities -------------------------------------------------------

@pytest.mark.parametrize("name", ALGEBRAS)
def test_j_series_identity(name):
    assert j_series_check(get_algebra(name), 6).ok()


@pytest.mark.parametrize("name", ["sl2", "aff1"])
@pytest.mark.parametrize("kind", ["j", "q"])
def test_log_j_matrix_matches_functional_calculus(name, kind):
    alg = get_algebra(name)
    v = coordinate_vector(alg, 0, alphabet_size=1)
    assert log_j_matrix(v, alg, 6, kind) == log_j_scalar(v, alg, 6, kind)


def test_log_j_kind_validated():
    alg = get_algebra("sl2")
    with pytest.raises(ValueError):
        log_j_matrix(coordinate_vector(alg, 0, alphabet_size=1), alg, 3, "z")


# -- density transport -------------------------------------------------------------

@pytest.mark.parametrize("name", ["aff1", "sl2"])
def test_density_transport(joint, name):
    assert density_transport_check(joint[name], get_algebra(name), 3).ok()


def test_density_transport_fails_for_shifted_solution_on_aff1(joint):
    alg = get_algebra("aff1")
    s = joint["aff1"]
    x, y = generators(2)
    moved = type(s)(s.order, s.F - x, s.G + y, s.convention, s.symmetric)
    assert not density_transport_check(moved, alg, 3).ok()


def test_solution_json(sol3):
    d = sol3.to_json()
    assert d["F"]["y"] == "1/4" and d["G"]["x"] == "-1/4"
    assert d["kernel_dimension"] == 1
