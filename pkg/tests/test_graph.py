import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmra.graph import (
    CylinderFunction, DirectedGraph, Edge, OrthoWeightBank, TwoSidedCylinder, WeightSystem,
    check_bank_inner_products, check_dilation_isometry, example_bank_g1, example_graph_g1,
    fourier_bank, graph_alpha, graph_D, graph_D_inv, graph_frame, graph_frame_elements,
    graph_fresh_words, graph_inner_L, graph_L, graph_Lk, graph_Lk_iterated, intertwine_check,
    loop_graph, make_filter, measure_mu, projection_p, random_cylinder, random_two_sided,
    resolution_of_identity, weight_consistency, word_cylinder, x_inner,
)

G1 = example_graph_g1()
BANK = example_bank_g1(G1)
W = BANK.filter_weights()
M = make_filter(W)


def brute_paths(g, d):
    """Oracle: filter all edge tuples by composability."""
    ids = [e.id for e in g.edges]
    return {p for p in itertools.product(ids, repeat=d)
            if all(g.s(p[i]) == g.r(p[i + 1]) for i in range(d - 1))}


def L_oracle(f, c):
    """Average over every edge whose source is the range of ``c_0``."""
    es = [e.id for e in f.graph.edges if e.src == f.graph.r(c[0])]
    return sum(f((e,) + tuple(c)) for e in es) / len(es)


def test_g1_paths_short():
    assert set(G1.paths(1)) == {("a",), ("b",), ("c",)}
    two = set(G1.paths(2))
    assert two == {("a", "a"), ("a", "c"), ("b", "a"), ("b", "c"), ("c", "b")}
    assert ("c", "a") not in two  # s(c) = v but r(a) = u


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_paths_match_brute_force(d):
    assert set(G1.paths(d)) == brute_paths(G1, d)
    assert len(G1.paths(d)) == len(set(G1.paths(d)))


def test_g1_path_counts():
    # Fibonacci-like growth from the adjacency matrix
    A = np.array([[1, 1], [1, 0]])
    for d in range(1, 7):
        assert len(G1.paths(d)) == int(np.sum(np.linalg.matrix_power(A, d - 1) @ [2, 1]))
    assert len(G1.paths(3)) == 8


@pytest.mark.parametrize("N, d", [(2, 3), (3, 2), (4, 2)])
def test_loop_graph_free_monoid(N, d):
    assert len(loop_graph(N).paths(d)) == N**d


def test_graph_rejects_sources_and_sinks():
    with pytest.raises(ValueError, match="source"):
        DirectedGraph(("u", "v"), (Edge("a", "u", "u"), Edge("b", "v", "u")))
    with pytest.raises(ValueError, match="emits no edge"):
        DirectedGraph(("u", "v"), (Edge("a", "u", "u"), Edge("b", "u", "v")))


def test_graph_json_diagnostics():
    with pytest.raises(ValueError, match="edges\\[1\\].rng"):
        DirectedGraph.from_json({"vertices": ["u"], "edges": [{"id": "a", "src": "u", "rng": "u"},
                                                             {"id": "b", "src": "u"}]})
    with pytest.raises(ValueError, match="vertices"):
        DirectedGraph.from_json({"edges": []})
    assert DirectedGraph.from_json(G1.to_json()) == G1


def test_cylinder_rejects_incomplete_values():
    with pytest.raises(ValueError):
        CylinderFunction(G1, 1, {("a",): 1})
    with pytest.raises(ValueError):
        CylinderFunction(G1, 0, {})


def test_alpha_examples():
    f = graph_alpha(CylinderFunction.indicator(G1, ("a",)))
    assert f.depth == 2
    for p in G1.paths(2):
        assert f(p) == (1 if p[1] == "a" else 0)
    one = CylinderFunction.constant(G1)
    assert graph_alpha(one).distance(one) == 0


def test_L_examples():
    f = graph_L(CylinderFunction.indicator(G1, ("a",)))
    expect = CylinderFunction.of_range_vertex(G1, lambda v: 0.5 if v == "u" else 0.0)
    assert f.distance(expect) == 0
    one = CylinderFunction.constant(G1)
    assert graph_L(one).distance(one) == 0


def test_L_matches_oracle(rng):
    for d in (1, 2, 3):
        f = random_cylinder(G1, d, rng)
        Lf = graph_L(f)
        for c in G1.paths(max(d - 1, 1)):
            assert abs(Lf(c) - L_oracle(f, c)) <= 1e-14


def test_loop_graph_L_matches_circle_rule():
    # on one vertex with N loops, L(chi_Z(e_j nu)) = chi_Z(nu) / N
    g = loop_graph(3)
    f = CylinderFunction.indicator(g, ("e1", "e2"))
    expect = CylinderFunction.indicator(g, ("e2",)) * (1 / 3)
    assert graph_L(f).distance(expect) <= 1e-15


def test_Lk_examples(rng):
    f = CylinderFunction.indicator(G1, ("a", "a"))
    assert graph_Lk(f, 2).distance(graph_Lk_iterated(f, 2)) <= 1e-12
    g = random_cylinder(G1, 3, rng)
    assert graph_Lk(g, 1).distance(graph_L(g)) == 0
    one = CylinderFunction.constant(G1)
    for k in range(1, 6):
        assert graph_Lk(one, k).distance(one) <= 1e-15
    with pytest.raises(ValueError):
        graph_Lk(one, 0)


def test_make_filter_examples():
    assert all(M(p) == 1 for p in G1.paths(1))
    assert graph_inner_L(M, M).distance(CylinderFunction.constant(G1)) <= 1e-15
    with pytest.raises(ValueError):
        make_filter(WeightSystem(G1, {"a": math.sqrt(2), "b": 0, "c": 1}))


def test_weight_consistency_examples():
    assert weight_consistency(W, 0).passed
    assert weight_consistency(W, 3).passed
    bad = WeightSystem(G1, {"a": 1.1, "b": 1, "c": 1})
    r = weight_consistency(bad, 2)
    assert not r.passed and "'u'" in r.witness


def test_measure_examples():
    one = TwoSidedCylinder.constant(G1)
    for k in range(6):
        for c in G1.paths(1):
            assert abs(measure_mu(W, c, k, one) - 1) <= 1e-12
    f = TwoSidedCylinder.from_function(G1, 1, 1, lambda win: 1.0 if win[0] == "a" else 0.0)
    assert measure_mu(W, ("a",), 1, f) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        measure_mu(W, ("a",), 0, f)


def test_measure_consistent_across_levels(rng):
    x = random_two_sided(G1, 2, 1, rng)
    for c in G1.paths(1):
        for k in (2, 3, 4):
            assert abs(measure_mu(W, c, k, x) - measure_mu(W, c, k + 1, x.promote(k + 1, 1))) <= 1e-12


def test_x_inner_examples(rng):
    one = TwoSidedCylinder.constant(G1)
    assert x_inner(one, one, W).distance(CylinderFunction.constant(G1)) <= 1e-15
    f, g = random_cylinder(G1, 2, rng), random_cylinder(G1, 2, rng)
    assert x_inner(f.as_two_sided(), g.as_two_sided(), W).distance(f.conj() * g) <= 1e-15
    x = TwoSidedCylinder.from_function(G1, 1, 1, lambda win: 1.0 if win[0] == "a" else 0.0)
    expect = CylinderFunction.of_range_vertex(G1, lambda v: 0.5 if v == "u" else 0.0)
    assert x_inner(x, x, W).distance(expect) <= 1e-15


def test_dilation_examples(rng):
    one = TwoSidedCylinder.constant(G1)
    assert graph_D(one, M).distance(M.as_two_sided()) == 0
    x = random_two_sided(G1, 1, 2, rng)
    assert graph_D(graph_D_inv(x, M), M).distance(x) <= 1e-15
    assert graph_D_inv(graph_D(x, M), M).distance(x) <= 1e-15
    y = random_two_sided(G1, 2, 1, rng)
    assert check_dilation_isometry(x, y, W).passed


def test_bank_validation():
    BANK.validate()
    bad = OrthoWeightBank(G1, ({"a": 1, "b": 1, "c": 1}, {"a": 1, "b": 1, "c": 0}))
    with pytest.raises(ValueError):
        bad.validate()
    assert OrthoWeightBank.from_json(G1, BANK.to_json()).weights == BANK.weights
    with pytest.raises(ValueError, match="w1"):
        OrthoWeightBank.from_json(G1, {"w2": {}})


def test_projection_examples():
    assert projection_p(G1, 1).distance(CylinderFunction.constant(G1)) == 0
    expect = CylinderFunction.of_range_vertex(G1, lambda v: 1.0 if v == "u" else 0.0)
    assert projection_p(G1, 2).distance(expect) == 0
    m2 = BANK.filters()[1]
    assert graph_inner_L(m2, m2).distance(projection_p(G1, 2)) <= 1e-12
    assert check_bank_inner_products(BANK).passed


@pytest.mark.parametrize("depth", [1, 2, 3, 4])
def test_resolution_of_identity(depth):
    assert resolution_of_identity(BANK, depth).passed


def test_resolution_of_identity_breaks_without_w2():
    half = OrthoWeightBank(G1, (BANK.weights[0], {"a": 0, "b": 0, "c": 0}))
    r = resolution_of_identity(half, 2)
    assert not r.passed and r.witness


def test_loop_graph_fourier_bank():
    g = loop_graph(2)
    bank = fourier_bank(g)
    bank.validate()
    assert resolution_of_identity(bank, 3).passed
    assert len(graph_frame_elements(bank, 3)) == 2**3
    assert all(c.passed for c in graph_frame(bank, 3))


def test_intertwining():
    for k in range(3):
        assert intertwine_check(W, k).passed
    broken = dict(W.w, a=-1)
    r = intertwine_check(W, 1, v_weights=broken)
    assert not r.passed and "window" in r.witness


def test_graph_fresh_words():
    assert graph_fresh_words(2, 2) == [(), (2,), (2, 1), (2, 2)]
    assert graph_fresh_words(1, 4) == [()]


def test_word_cylinder_matches_product():
    m1, m2 = BANK.filters()
    direct = m2 * graph_alpha(m1)
    assert word_cylinder((2, 1), BANK).distance(direct) == 0


@pytest.mark.parametrize("K", [0, 1, 2])
def test_graph_frame_g1(K):
    checks = graph_frame(BANK, K)
    assert all(c.passed for c in checks)


@given(st.integers(0, 2**31 - 1), st.integers(1, 3), st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_transfer_identity(seed, df, dg):
    rng = np.random.default_rng(seed)
    f, g = random_cylinder(G1, df, rng), random_cylinder(G1, dg, rng)
    assert graph_L(f * graph_alpha(g)).distance(graph_L(f) * g) <= 1e-12


@given(st.integers(0, 2**31 - 1), st.integers(1, 5), st.integers(1, 6))
@settings(max_examples=30, deadline=None)
def test_Lk_closed_form(seed, k, d):
    rng = np.random.default_rng(seed)
    f = random_cylinder(G1, d, rng)
    assert graph_Lk(f, k).distance(graph_Lk_iterated(f, k)) <= 1e-12


@given(st.integers(0, 2**31 - 1), st.integers(1, 3))
@settings(max_examples=20, deadline=None)
def test_promotion_invariance(seed, d):
    rng = np.random.default_rng(seed)
    f = random_cylinder(G1, d, rng)
    assert graph_L(f.promote(d + 2)).distance(graph_L(f)) <= 1e-12
    x, y = random_two_sided(G1, 1, d, rng), random_two_sided(G1, 1, 1, rng)
    assert x_inner(x.promote(2, d + 1), y, W).distance(x_inner(x, y, W)) <= 1e-12


@given(st.integers(0, 2**31 - 1))
@settings(max_examples=15, deadline=None)
def test_dilation_isometry_random(seed):
    rng = np.random.default_rng(seed)
    x, y = random_two_sided(G1, 2, 1, rng), random_two_sided(G1, 0, 2, rng)
    assert check_dilation_isometry(x, y, W).passed
