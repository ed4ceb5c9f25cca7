import math
from fractions import Fraction

import numpy as np
import pytest

from kvdeform.deformed import MCParams
from kvdeform.density import (compare_log, density_from_wheels, density_oracle, rotation_stabilizer,
                              wheel_terms)
from kvdeform.graphs import WheelGraph, enumerate_wheels
from kvdeform.lie import get_algebra
from kvdeform.lie.evaluate import ad_matrix, coordinate_vector
from kvdeform.lie.matrix import trace_poly
from kvdeform.weights import EyePoint


def _ad_numeric(alg, v):
    n = alg.dim
    m = np.zeros((n, n))
    for i in range(n):
        for b in range(n):
            for a in range(n):
                m[a, b] += v[i] * float(alg.c(i, b, a))
    return m


def _j(alg, v, terms=40):
    # det of (1 - e^{-A})/A = sum_k (-A)^k/(k+1)!
    a = _ad_numeric(alg, v)
    out, power = np.zeros_like(a), np.eye(len(a))
    for k in range(terms):
        out = out + power / math.factorial(k + 1)
        power = power @ (-a)
    return np.linalg.det(out)


def _bch_numeric(alg, x, y, terms=40):
    # read Z off ad Z = log(e^{ad x} e^{ad y}); valid on centreless algebras
    def expm(a):
        out, t = np.eye(len(a)), np.eye(len(a))
        for k in range(1, terms):
            t = t @ a / k
            out = out + t
        return out

    def logm(m):
        q = m - np.eye(len(m))
        out, p = np.zeros_like(m), np.eye(len(m))
        for k in range(1, terms):
            p = p @ q
            out = out + (-1) ** (k + 1) * p / k
        return out

    ad_z = logm(expm(_ad_numeric(alg, x)) @ expm(_ad_numeric(alg, y)))
    basis = np.array([_ad_numeric(alg, np.eye(alg.dim)[i]).ravel() for i in range(alg.dim)]).T
    z, *_ = np.linalg.lstsq(basis, ad_z.ravel(), rcond=None)
    return z


@pytest.mark.parametrize("name", ["sl2", "so3"])
def test_oracle_matches_closed_form(name):
    alg = get_algebra(name)
    d = density_oracle(alg, 6)
    rng = np.random.default_rng(1)
    eps = 0.1
    for _ in range(3):
        x, y = eps * rng.standard_normal(alg.dim), eps * rng.standard_normal(alg.dim)
        z = _bch_numeric(alg, x, y)
        exact = math.sqrt(_j(alg, x) * _j(alg, y) / _j(alg, z))
        approx = d.at([Fraction(v) for v in x], [Fraction(v) for v in y])
        assert abs(float(approx) - exact) < 1e-6


def test_oracle_constant_term_and_vanishing_y():
    alg = get_algebra("aff1")
    d = density_oracle(alg, 5)
    assert d.terms.terms.get((0,) * 4) == 1
    assert d.at([Fraction(1, 3), Fraction(-2, 5)], [0, 0]) == 1


def test_sl2_degree_two_log():
    # log D = -(1/24) tr(ad x ad y) + higher
    alg = get_algebra("sl2")
    log_d = density_oracle(alg, 2).log_terms
    x, y = coordinate_vector(alg, 0), coordinate_vector(alg, 1)
    ax, ay = ad_matrix(x, alg), ad_matrix(y, alg)
    n = alg.dim
    prod = [[sum((ax[a][k].mul(ay[k][b]) for k in range(n)), type(ax[0][0]).zero(2 * n)) for b in range(n)]
            for a in range(n)]
    assert log_d == trace_poly(prod).scale(Fraction(-1, 24))


@pytest.mark.parametrize("name", ["sl2", "so3", "aff1"])
def test_j_and_q_give_same_density(name):
    alg = get_algebra(name)
    assert density_oracle(alg, 5, "j").terms == density_oracle(alg, 5, "q").terms


@pytest.mark.parametrize("name", ["abelian2", "heisenberg3"])
def test_nilpotent_density_is_one(name):
    d = density_oracle(get_algebra(name), 6)
    assert d.log_terms.is_zero()


def test_degree_bounds():
    with pytest.raises(ValueError):
        density_oracle(get_algebra("sl2"), 7)
    with pytest.raises(ValueError):
        density_from_wheels(get_algebra("sl2"), EyePoint.corner(), 5)


def test_rotation_stabilizer():
    assert rotation_stabilizer(WheelGraph(("x", "x"))) == 2
    assert rotation_stabilizer(WheelGraph(("x", "y"))) == 1
    assert rotation_stabilizer(WheelGraph(("x", "y", "x", "y"))) == 2


def test_wheel_terms_skip_zero_symbols():
    alg = get_algebra("sl2")
    kept = [str(w) for w, _ in wheel_terms(alg, 3)]
    assert len(kept) < len(enumerate_wheels(2)) + len(enumerate_wheels(3))
    assert wheel_terms(get_algebra("abelian2"), 4) == []


def test_iris_density_is_one():
    d = density_from_wheels(get_algebra("sl2"), EyePoint("iris", 0.4), 3)
    assert d.log_terms.is_zero() and d.weights == ()


def test_wheels_reproduce_degree_two_density():
    alg = get_algebra("sl2")
    wheels = density_from_wheels(alg, EyePoint.corner(), 2, MCParams(samples=200_000, cache=False))
    rows = compare_log(density_oracle(alg, 2), wheels)
    assert rows
    for r in rows:
        assert r["degree"] == 2
        assert abs(r["error"]) < 4 * r["stderr"] + 1e-9
