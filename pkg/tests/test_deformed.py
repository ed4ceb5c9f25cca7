import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kvdeform.deformed import (MCParams, _z_from, assemble, associativity_defect, compare_with_oracle,
                               compose_defect, lid_obstruction, lid_obstruction_exact, lid_obstruction_mc,
                               path_trace, tree_terms)
from kvdeform.lie.bch import bch_oracle
from kvdeform.weights import EyePoint

SMALL = MCParams(samples=100_000, seed=0, cache=False)


def test_tree_terms_skip_zero_symbols():
    assert [len(tree_terms(k)) for k in (1, 2, 3, 4)] == [0, 1, 3, 7]


def test_iris_series_is_x_plus_y():
    z = assemble(EyePoint("iris", 0.2), 3, SMALL)
    for w, c in z.series.coeffs.items():
        if len(w) == 1:
            assert c == 1.0
        else:
            assert abs(c) < 4 * z.stderr[w] + 1e-3


def test_corner_series_recovers_bch_at_order_3():
    z = assemble(EyePoint.corner(), 3, SMALL)
    for row in compare_with_oracle(z):
        assert abs(row["error"]) <= 4 * row["stderr"] + 1e-12


def test_exact_series_is_associative():
    z = bch_oracle(3)
    assert compose_defect(z, 3).is_zero()
    assert compose_defect(bch_oracle(4), 4).is_zero()


@given(st.fractions(-2, 2, max_denominator=12))
def test_nonzero_bracket_coefficient_breaks_associativity_unless_balanced(a):
    # x + y + a[x,y] with the degree-3 part of BCH rescaled by (2a)^2 stays associative
    b = c = Fraction(1, 12) * (2 * a) ** 2
    assert compose_defect(_z_from(a, b, c, 3, exact=True), 3).is_zero()


def test_unbalanced_coefficients_are_not_associative():
    assert not compose_defect(_z_from(Fraction(1, 2), Fraction(0), Fraction(0), 3, exact=True), 3).is_zero()


def test_associativity_defect_at_analytic_points():
    assert associativity_defect(EyePoint.corner()).max_abs() < 1e-15
    assert associativity_defect(EyePoint("iris", 1.0)).max_abs() == 0
    with pytest.raises(ValueError):
        associativity_defect(EyePoint.corner(), order=4)


def test_lid_obstruction_polynomial():
    # w1^2 - 3 w2 = t(1 - t)/2 with t = theta/pi
    for t in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)):
        assert lid_obstruction_exact(t) == t * (1 - t) / 2
    assert lid_obstruction(math.pi / 2) == pytest.approx(1 / 8)


def test_lid_obstruction_monte_carlo():
    val, se = lid_obstruction_mc(math.pi / 2, MCParams(samples=200_000, cache=False))
    assert abs(val - 1 / 8) < 4 * se


def test_path_trace_along_upper_lid():
    # the [x,y] coefficient is 1/2 - theta/pi on the lid
    path = [EyePoint("upper_lid", s) for s in (1.0, 1.2, 1.4)]
    rows = path_trace(path, 2, SMALL)
    assert [r["index"] for r in rows] == [0, 1, 2]
    for r, th in zip(rows, (1.0, 1.2, 1.4)):
        assert abs(r["coefficients"][(0, 1)] - (0.5 - th / math.pi)) < 4 * r["stderr"][(0, 1)]
        assert r["derivative"][(0, 1)] == pytest.approx(-1 / math.pi, abs=0.01)
    assert path_trace([], 2) == []


def test_assemble_order_bounds():
    with pytest.raises(ValueError):
        assemble(EyePoint.corner(), 0)
