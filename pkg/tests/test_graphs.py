import json
import math

import pytest
from hypothesis import given, strategies as st

from kvdeform.graphs import (G, GraphError, KGraph, LieTree, WheelGraph, enumerate_lie_trees, enumerate_wheels,
                             gamma1, is_ladder, ladder, rotate, symbol, tree_to_graph, tripod, wheel_symbol)
from kvdeform.lie import get_algebra
from kvdeform.lie.series import bracket, generators


def necklaces(k: int, colours: int = 2) -> int:
    """Burnside count of binary necklaces of length k."""
    total = sum(colours ** math.gcd(i, k) for i in range(k))
    return total // k


def test_lie_tree_counts():
    assert [len(enumerate_lie_trees(n)) for n in (1, 2, 3)] == [1, 2, 5]


def test_degree_three_tree_with_zero_symbol():
    zero = [t for t in enumerate_lie_trees(3) if symbol(t).is_zero()]
    assert [str(t) for t in zero] == ["[[x,y],[x,y]]"]


def test_tree_symbols_span_free_lie_degree():
    # nonzero n-vertex tree symbols span the degree-(n+1) Lyndon space for n = 1, 2
    for n, dim in ((1, 1), (2, 2)):
        words = set()
        for t in enumerate_lie_trees(n):
            words |= set(symbol(t).coeffs)
        assert len(words) == dim


def test_wheel_counts():
    assert [len(enumerate_wheels(n)) for n in (2, 3, 4, 5)] == [3, 6, 15, 38]


@pytest.mark.parametrize("k", range(2, 7))
def test_pure_wheels_are_binary_necklaces(k):
    assert len(enumerate_wheels(k, max_spoke_depth=0)) == necklaces(k)


def test_gamma1_and_ladders():
    x, y = generators(2)
    assert symbol(gamma1()) == bracket(x, y, 2)
    for n in range(1, 5):
        g = ladder(n)
        assert g.is_admissible() and g.n_edges == g.expected_edges()
        expected = y
        for _ in range(n):
            expected = bracket(x, expected, n + 1)
        assert symbol(g) == expected
        assert is_ladder(g) == n


def test_is_ladder_rejects_other_trees():
    t = [t for t in enumerate_lie_trees(2) if str(t) == "[y,[x,y]]"][0]
    assert is_ladder(t.to_graph()) == 0
    assert is_ladder(tripod()) == 0


def test_admissibility_problems():
    assert KGraph(1, 2, ((0, 1),)).problems() == ["vertex 1 has a loop"]
    assert KGraph(1, 2, ((1, 1),)).problems() == ["vertex 1 has a double edge"]
    with pytest.raises(GraphError):
        KGraph(1, 2, ((1, 5),))
    with pytest.raises(GraphError):
        KGraph(2, 2, ((2, 3),))


def test_json_format():
    g = ladder(2)
    assert g.to_json() == {"n": 2, "ground": 2, "edges": [["G1", 2], ["G1", "G2"]]}
    assert KGraph.from_json(json.loads(g.dumps())) == g


@pytest.mark.parametrize("bad", [{"edges": []}, {"n": 1, "edges": [["G3", "G1"]]},
                                 {"n": 1, "edges": [["G1", 2]]}, {"n": 1, "edges": [["Gx", "G1"]]},
                                 {"n": 1, "edges": [[True, "G1"]]}])
def test_json_errors(bad):
    with pytest.raises(GraphError):
        KGraph.from_json(bad)


def random_poisson_graph(n: int, seed: int) -> KGraph:
    import random
    rng = random.Random(seed)
    edges = []
    for v in range(n):
        choices = [t for t in range(n + 2) if t != v]
        edges.append(tuple(rng.sample(choices, 2)))
    return KGraph(n, 2, tuple(edges))


@given(st.integers(1, 4), st.integers(0, 10_000))
def test_json_roundtrip(n, seed):
    g = random_poisson_graph(n, seed)
    assert KGraph.from_json(json.loads(g.dumps())) == g


@given(st.integers(1, 4), st.integers(0, 10_000), st.data())
def test_canonical_key_invariant_under_relabeling(n, seed, data):
    g = random_poisson_graph(n, seed)
    perm = data.draw(st.permutations(range(n)))
    assert g.relabel(tuple(perm)).canonical_key() == g.canonical_key()


@given(st.integers(1, 3), st.integers(0, 10_000))
def test_swap_is_involution(n, seed):
    g = random_poisson_graph(n, seed)
    for v in range(n):
        assert g.swap(v).swap(v) == g


def test_automorphism_counts():
    assert gamma1().automorphisms() == 1
    # 2-cycle with one edge to each ground: exchanging the hubs needs the grounds fixed
    assert KGraph(2, 2, ((2, 1), (3, 0))).automorphisms() == 1
    # both hubs on ground 1: the exchange is an automorphism
    assert KGraph(2, 2, ((2, 1), (2, 0))).automorphisms() == 2


def test_wheel_graph_structure():
    w = WheelGraph(("x", "y"))
    g = w.to_graph()
    assert g.edges == ((G(2, 1), 1), (G(2, 2), 0))
    assert g.is_admissible() and g.n_edges == g.expected_edges()
    with pytest.raises(GraphError):
        symbol(g)


def test_wheel_symbol_is_trace():
    alg = get_algebra("sl2")
    p = wheel_symbol(WheelGraph(("x", "y")), alg)
    # Killing form of sl2 in basis (h, e, f): 8 h h' + 4 (e f' + f e')
    assert p([1, 0, 0, 1, 0, 0]) == 8
    assert p([0, 1, 0, 0, 0, 1]) == 4
    assert p([0, 1, 0, 0, 1, 0]) == 0


def test_wheel_symbol_rotation_invariant():
    alg = get_algebra("so3")
    for w in enumerate_wheels(4):
        for k in range(w.n_hubs):
            assert wheel_symbol(rotate(w, k), alg) == wheel_symbol(w, alg)


def test_abelian_wheels_vanish():
    alg = get_algebra("abelian2")
    assert all(wheel_symbol(w, alg).is_zero() for w in enumerate_wheels(3))


def test_wheel_aerial_counts():
    for n in (2, 3, 4):
        for w in enumerate_wheels(n):
            g = w.to_graph()
            assert g.n_aerial == n and g.is_admissible()


def test_tree_to_graph_preorder():
    g = tree_to_graph(("x", ("x", "y")))
    assert g.edges == ((G(2, 1), 1), (G(2, 1), G(2, 2)))
    assert str(LieTree(("x", ("x", "y")))) == "[x,[x,y]]"
