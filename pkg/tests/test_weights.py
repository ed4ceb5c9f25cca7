import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from kvdeform.graphs import GraphError, KGraph, gamma1, ladder, tripod
from kvdeform.weights import (CHARTS, IRIS_EPSILON, ChartError, CoincidentPoints, EyePoint, WeightCache, angle,
                              angle_geodesic, bernoulli_lid, bernoulli_lid_exact, bernoulli_polynomial,
                              canonical_form, deformed_weight, enumerate_faces, gradients, integrate, layout_of,
                              lid_polynomial, stokes_residual, weight_mc)
from kvdeform.weights.integrate import Layout, summarize
from kvdeform.weights.weight import angle_gauge_residual

upper = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False).filter(lambda z: z.imag > 0.05)


# -- angle propagator --------------------------------------------------------

@given(upper, upper)
def test_angle_matches_geodesic_construction(p, q):
    assume(abs(p - q) > 1e-3 and abs(p.real - q.real) > 1e-6)
    d = angle(p, q) - angle_geodesic(p, q)
    assert abs(math.remainder(d, 2 * math.pi)) < 1e-7


@given(st.floats(-5, 5), upper)
def test_angle_vanishes_from_real_points(x, q):
    assert abs(angle(complex(x, 0), q)) < 1e-12


@given(upper, upper)
def test_gradients_match_finite_differences(p, q):
    assume(abs(p - q) > 0.1)
    h = 1e-6
    got = gradients(p, q)
    fd = []
    for dp, dq in ((h, 0), (1j * h, 0), (0, h), (0, 1j * h)):
        a = angle(p + dp, q + dq)
        b = angle(p - dp, q - dq)
        fd.append(math.remainder(a - b, 2 * math.pi) / (2 * h))
    assert np.allclose(got, fd, atol=1e-5 * (1 + max(abs(v) for v in fd)))


def test_angle_coincident_points():
    with pytest.raises(CoincidentPoints):
        angle(1j, 1j)


def test_angle_gauge_invariance():
    assert angle_gauge_residual(np.random.default_rng(0), 500) < 1e-9


def test_vertical_geodesic_angles():
    assert angle(1j, 2j) == pytest.approx(0.0, abs=1e-12)
    assert abs(angle(2j, 1j)) == pytest.approx(math.pi)


# -- lid polynomials -------------------------------------------------------

def bernoulli_by_recurrence(n: int) -> list[Fraction]:
    """b_0 = 1, b_n' = n b_{n-1}, integral over [0, 1] of b_n is 0."""
    b = [Fraction(1)]
    for k in range(1, n + 1):
        c = [Fraction(0)] + [k * b[j] / (j + 1) for j in range(len(b))]
        c[0] = -sum(c[j] / (j + 1) for j in range(1, len(c)))
        b = c
    return b


@pytest.mark.parametrize("n", range(0, 7))
def test_bernoulli_polynomials(n):
    assert list(bernoulli_polynomial(n)) == bernoulli_by_recurrence(n)


@pytest.mark.parametrize("n", range(1, 6))
def test_lid_weights_solve_lid_ode(n):
    # in t = theta/pi: d/dt w_n(t) = -w_{n-1}(t)
    w, lower = lid_polynomial(n), lid_polynomial(n - 1)
    deriv = [k * w[k] for k in range(1, len(w))]
    assert deriv == [-c for c in lower]


def test_lid_endpoint_values():
    assert bernoulli_lid_exact(1, Fraction(0)) == Fraction(1, 2)
    assert bernoulli_lid_exact(2, Fraction(0)) == Fraction(1, 12)
    assert bernoulli_lid_exact(3, Fraction(1, 2)) == 0
    assert bernoulli_lid(1, math.pi) == pytest.approx(-0.5)
    with pytest.raises(ValueError):
        bernoulli_lid(1, 4.0)


# -- charts ----------------------------------------------------------------

@pytest.mark.parametrize("text,chart", [("corner", "corner_01"), ("corner_10", "corner_10"), ("iris", "iris"),
                                        ("upper_lid:0.5", "upper_lid"), ("lower_lid:1", "lower_lid"),
                                        ("interior:0.5,1.2", "interior"), ("iris:1.0", "iris")])
def test_eye_point_parse(text, chart):
    xi = EyePoint.parse(text)
    assert xi.chart == chart
    assert EyePoint.parse(xi.key()) == xi or chart == "corner_01"


@pytest.mark.parametrize("text", ["nowhere", "upper_lid:4", "interior:1,-1", "iris:7", "upper_lid:abc"])
def test_eye_point_errors(text):
    with pytest.raises(ChartError):
        EyePoint.parse(text)


def test_chart_positions():
    assert EyePoint.corner().positions() == (0j, 1 + 0j)
    p, q = EyePoint("upper_lid", math.pi / 2).positions()
    assert p == 0 and abs(q - 1j) < 1e-15
    p, q = EyePoint("iris", 0.0).positions()
    assert abs(q - p) == pytest.approx(IRIS_EPSILON)
    assert EyePoint("upper_lid", 0.0).is_corner_01()
    assert set(CHARTS) >= {"interior", "upper_lid", "lower_lid", "iris", "corner_01", "corner_10"}


# -- Monte-Carlo weights ---------------------------------------------------

def test_gamma1_weight():
    est = weight_mc(gamma1(), 200_000, seed=3, cache=False)
    assert abs(est.value - 0.5) < 3 * est.stderr + 1e-12
    assert est.samples == 200_000 and est.seed == 3


def test_two_vertex_weights_small_sample():
    for g, want in ((ladder(2), 1 / 12), (tripod(), 1 / 6)):
        est = weight_mc(g, 200_000, seed=1, cache=False)
        assert abs(est.value - want) < 4 * est.stderr


def test_pure_wheel_weights_vanish_on_repeated_ground():
    # both hubs on ground 1: the symmetric configuration integrates to zero exactly
    g = KGraph(2, 2, ((2, 1), (2, 0)))
    est = weight_mc(g, 100_000, seed=0, cache=False)
    assert abs(est.value) < 1e-9


def test_estimator_unbiased_across_seeds():
    values = np.array([weight_mc(gamma1(), 1 << 15, seed=s, cache=False).value for s in range(12)])
    assert abs(values.mean() - 0.5) < 3 * values.std(ddof=1) / math.sqrt(len(values))


def test_deterministic_and_worker_independent():
    a = weight_mc(ladder(2), 100_000, seed=5, workers=1, cache=False)
    b = weight_mc(ladder(2), 100_000, seed=5, workers=2, cache=False)
    c = weight_mc(ladder(2), 100_000, seed=6, workers=1, cache=False)
    assert a == b
    assert a.value != c.value


def test_relabeled_graph_same_estimate():
    g = ladder(2)
    h = g.relabel((1, 0))
    assert canonical_form(h) == canonical_form(g)
    assert weight_mc(h, 50_000, cache=False) == weight_mc(g, 50_000, cache=False)


def test_edge_swap_flips_sign():
    a = weight_mc(gamma1(), 50_000, seed=2, cache=False)
    b = weight_mc(gamma1().swap(0), 50_000, seed=2, cache=False)
    assert b.value == pytest.approx(-a.value, rel=0.05)


def test_bad_graphs_rejected():
    with pytest.raises(GraphError):
        weight_mc(KGraph(1, 2, ((1, 1),)), 1000)
    with pytest.raises(GraphError):
        weight_mc(KGraph(1, 3, ((1, 2),)), 1000)


def test_integrate_rejects_wrong_dimension():
    from kvdeform.weights import IntegrationError
    with pytest.raises(IntegrationError):
        integrate(Layout(1, 2, ((0, 1),)), 1000, 0)


def test_summary_statistics():
    vals = np.arange(64, dtype=float)
    est = summarize(vals, 0)
    assert est.value == pytest.approx(31.5)
    assert est.stderr >= est.extra["stderr_iid"]


def test_cache_roundtrip(tmp_path):
    cache = WeightCache(tmp_path)
    a = weight_mc(gamma1(), 40_000, seed=9, cache=cache)
    assert cache.misses == 1
    fresh = WeightCache(tmp_path)
    b = weight_mc(gamma1(), 40_000, seed=9, cache=fresh)
    assert fresh.hits == 1 and b.value == a.value and b.stderr == a.stderr


def test_deformed_corner_shares_cache_with_plain_weight(tmp_path):
    cache = WeightCache(tmp_path)
    a = weight_mc(ladder(2), 40_000, cache=cache)
    b = deformed_weight(ladder(2), EyePoint.corner(), 40_000, cache=cache)
    assert a == b and cache.hits == 1


def test_deformed_weight_iris_small():
    est = deformed_weight(gamma1(), EyePoint("iris", 0.3), 100_000, cache=False)
    assert abs(est.value) < 3 * est.stderr + 1e-3


def test_deformed_weight_needs_two_grounds():
    with pytest.raises(GraphError):
        deformed_weight(tripod(), EyePoint.corner(), 1000)


def test_layout_pins_grounds():
    lay = layout_of(ladder(1), (1j, 2j))
    assert lay.pinned == (1j, 2j) and lay.dim == 2
    assert lay.shape_hash() == layout_of(ladder(1)).shape_hash()


# -- boundary identities ---------------------------------------------------

def test_faces_of_three_ground_graph():
    g = KGraph(2, 3, ((2, 1), (3, 4)))
    faces = [f for f in enumerate_faces(g) if f.status == "active"]
    outers = sorted((f.kind, f.outer.n_aerial, f.inner.n_aerial if f.inner else 0, f.sign) for f in faces)
    assert outers == [("axis", 1, 1, -1), ("axis", 2, 0, 1), ("collision", 1, 0, 1)]


def test_exact_cancellation_graph():
    r = stokes_residual(KGraph(1, 3, ((1, 2),)), 50_000, cache=False)
    assert r.residual == 0.0
    assert len([t for t in r.terms if t[0].status == "active"]) == 2


def test_stokes_needs_right_edge_count():
    with pytest.raises(ValueError):
        enumerate_faces(gamma1())
