import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbansim.coloring import (
    Coloring,
    SimpleGraph,
    exact_chromatic_number,
    greedy_color_by_degree,
    is_clique,
    max_clique_generic,
    max_clique_necc,
    maximal_cliques,
    validate_coloring,
)
from sbansim.confusability import build_inecc_graph, build_necc_graph, step_mask_matrix
from sbansim.core import from_string
from sbansim.generators import (
    figure_example,
    identity_network,
    random_network,
    random_schedule,
    swap_network,
)

from .oracles import brute_chromatic, brute_clique, swap2

TRIANGLE = SimpleGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
PATH = SimpleGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])

graphs = st.integers(1, 7).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1]), max_size=18),
    )
)


def test_validate_coloring_examples():
    assert validate_coloring(TRIANGLE, [0, 1, 2])
    assert not validate_coloring(TRIANGLE, [0, 1, 1])
    with pytest.raises(ValueError):
        validate_coloring(TRIANGLE, [0, 1])
    with pytest.raises(ValueError):
        validate_coloring(TRIANGLE, [0, None, 1])


def test_greedy_examples():
    assert greedy_color_by_degree(TRIANGLE).count == 3
    col = greedy_color_by_degree(PATH)
    assert col.count == 2 and validate_coloring(PATH, col)
    F, W = figure_example()
    q = build_inecc_graph(F, W)
    assert greedy_color_by_degree(q).count == 3


def test_exact_examples():
    assert exact_chromatic_number(SimpleGraph.from_edges(5, [])).value == 1
    assert exact_chromatic_number(SimpleGraph.from_edges(0, [])).value == 0
    F, W = swap_network(4)
    res = exact_chromatic_number(build_necc_graph(F, W))
    assert res.exact and res.value == 4
    F, W = figure_example()
    assert exact_chromatic_number(build_necc_graph(F, W)).value == 2


def test_budget_exhaustion_gives_bounds():
    F, W = swap_network(6)
    g = build_necc_graph(F, W)
    res = exact_chromatic_number(g, budget=1)
    assert res.lower <= res.upper
    assert validate_coloring(g, res.coloring) and res.coloring.count == res.upper
    assert res.exact == (res.lower == res.upper)
    with pytest.raises(ValueError):
        exact_chromatic_number(g, budget=0)


def test_clique_examples():
    assert max_clique_necc(identity_network(3), random_schedule(3, 0))[0] == 1
    F, W = swap2()
    assert max_clique_necc(F, W)[0] == 2
    F, W = swap_network(4)
    size, witness = max_clique_necc(F, W)
    assert size == 4
    # configurations whose second half is zero pairwise collide at step n/2
    assert sorted(witness) == [x for x in range(16) if x >> 2 == 0]
    assert is_clique(build_necc_graph(F, W), witness)


def test_coloring_json_and_bits():
    c = Coloring.from_colors([5, 5, 2, 7])
    assert c.colors == [0, 0, 1, 2] and c.count == 3 and c.bits() == 2
    assert Coloring.from_json(c.to_json()) == c


@settings(max_examples=80, deadline=None)
@given(graphs)
def test_exact_matches_brute_force(g):
    n, edges = g
    graph = SimpleGraph.from_edges(n, edges)
    res = exact_chromatic_number(graph)
    assert res.exact and res.value == brute_chromatic(n, graph.edges)
    assert validate_coloring(graph, res.coloring) and res.coloring.count == res.value
    assert len(res.clique) <= brute_clique(n, graph.edges) <= res.value
    assert is_clique(graph, res.clique)


@settings(max_examples=80, deadline=None)
@given(graphs)
def test_generic_clique_matches_brute_force(g):
    n, edges = g
    graph = SimpleGraph.from_edges(n, edges)
    size, nodes = max_clique_generic(graph)
    assert size == brute_clique(n, graph.edges) and is_clique(graph, nodes)


@settings(max_examples=40, deadline=None)
@given(graphs)
def test_maximal_cliques_are_maximal(g):
    n, edges = g
    graph = SimpleGraph.from_edges(n, edges)
    found = [frozenset(c) for c in maximal_cliques(graph)]
    assert len(found) == len(set(found))
    for c in found:
        assert is_clique(graph, sorted(c))
        assert not any(is_clique(graph, sorted(c | {v})) for v in range(n) if v not in c)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32))
def test_necc_clique_agrees_with_generic(n, seed):
    F, W = random_network(n, seed), random_schedule(n, seed)
    size, nodes = max_clique_necc(F, W)
    g = build_necc_graph(F, W)
    assert size == max_clique_generic(g)[0]
    assert is_clique(g, nodes)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32))
def test_greedy_inecc_bound(n, seed):
    F, W = random_network(n, seed), random_schedule(n, seed)
    q = build_inecc_graph(F, W)
    col = greedy_color_by_degree(q)
    assert validate_coloring(q, col)
    assert col.count <= 2 ** (2 * n / 3 + 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32))
def test_maximal_cliques_share_a_step(n, seed):
    F, W = random_network(n, seed), random_schedule(n, seed)
    g = build_necc_graph(F, W)
    S = step_mask_matrix(F, W)
    for c in maximal_cliques(g):
        if len(c) < 2:
            continue
        common = -1
        for u, v in itertools.combinations(c, 2):
            common &= int(S[u, v])
        assert common != 0


def test_chromatic_at_least_clique_on_figure():
    F, W = figure_example()
    q = build_inecc_graph(F, W)
    res = exact_chromatic_number(q)
    assert res.value == 3 and len(res.clique) == 3
    assert q.index_of(from_string("1111")) not in res.clique
