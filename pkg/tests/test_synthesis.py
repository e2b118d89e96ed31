import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sbansim.coloring import Coloring, InvalidColoring, exact_chromatic_number, validate_coloring
from sbansim.confusability import build_necc_graph
from sbansim.core import BooleanNetwork, Embedding, NetworkError, UpdateSchedule, check_simulation
from sbansim.generators import figure_example, identity_network, random_sban, swap_network
from sbansim.synthesis import (
    SynthesisResult,
    bits_for,
    conjecture_bound,
    extract_coloring,
    kappa,
    synthesize,
    theorem_bound,
    verify_bundle,
)

from .oracles import swap2


def test_bits_for():
    assert [bits_for(c) for c in (1, 2, 3, 4, 5, 8, 9)] == [0, 1, 2, 2, 3, 3, 4]
    with pytest.raises(ValueError):
        bits_for(0)


def test_identity_needs_no_memory():
    F = identity_network(3)
    W = UpdateSchedule.sequential(3)
    res = synthesize(F, W, Coloring.from_colors([0] * 8), build_necc_graph(F, W))
    assert res.k == 0 and res.Wp == W and res.Fp == F
    assert verify_bundle(res, F, W)[:2] == (True, True)


def test_swap2_one_added_automaton():
    F, W = swap2()
    col = Coloring.from_colors([0, 1, 0, 1])
    res = synthesize(F, W, col, build_necc_graph(F, W))
    assert res.k == 1 and res.Fp.n == 3
    assert res.Wp.blocks == ((2,), (0,), (1,))
    assert res.h == Embedding.identity(2, 3)
    ext, ok, check = verify_bundle(res, F, W)
    assert ext and ok and check.counterexample is None
    # the added automaton holds the color after the step
    assert extract_coloring(res.Fp, res.Wp, res.h, F, W).colors == [0, 1, 0, 1]


def test_invalid_coloring_rejected():
    F, W = swap2()
    with pytest.raises(InvalidColoring):
        synthesize(F, W, Coloring.from_colors([0, 0, 1, 1]), build_necc_graph(F, W))
    # without the graph the clash is still caught while building the lookup
    with pytest.raises(InvalidColoring):
        synthesize(F, W, Coloring.from_colors([0, 0, 1, 1]))
    with pytest.raises(InvalidColoring):
        synthesize(F, W, Coloring.from_colors([0, 1, 0]))


def test_tampered_bundle_fails_verification():
    F, W = swap2()
    res = synthesize(F, W, Coloring.from_colors([0, 1, 0, 1]))
    table = res.Fp.table.copy()
    table[0] ^= 1
    bad = SynthesisResult(type(res.Fp)(3, table), res.Wp, res.h, res.k, res.coloring)
    ext, ok, check = verify_bundle(bad, F, W)
    assert ext and not ok and check.counterexample is not None
    with pytest.raises(NetworkError):
        extract_coloring(bad.Fp, bad.Wp, bad.h, F, W)


def test_json_round_trip():
    F, W = figure_example()
    res = kappa(F, W).witness
    back = SynthesisResult.from_json(res.to_json())
    assert back.Fp == res.Fp and back.Wp == res.Wp and back.h == res.h and back.k == res.k


def test_kappa_examples():
    assert kappa(identity_network(4), UpdateSchedule.sequential(4)).value == 0
    F, W = figure_example()
    r = kappa(F, W)
    assert r.value == 1 and r.verified
    F, W = swap_network(4)
    r = kappa(F, W)
    assert r.value == 2 and r.clique_size == 4 and r.verified


def test_parallel_schedule_needs_no_memory():
    F, W = random_sban(4, 11)
    assert kappa(F, UpdateSchedule.parallel(4)).value == 0


def test_bounds():
    assert conjecture_bound(7) == 3
    assert theorem_bound(6) == 6


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32))
def test_round_trip_on_random_instances(n, seed):
    F, W = random_sban(n, seed)
    g = build_necc_graph(F, W)
    chi = exact_chromatic_number(g)
    res = synthesize(F, W, chi.coloring, g)
    assert res.k == bits_for(chi.value)
    ext, ok, _ = verify_bundle(res, F, W)
    assert ext and ok
    assert check_simulation(res.Fp, res.Wp, res.h, F, UpdateSchedule.parallel(n))
    assert validate_coloring(g, extract_coloring(res.Fp, res.Wp, res.h, F, W))


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32))
def test_any_valid_coloring_synthesizes(n, seed):
    # the all-distinct coloring is always valid
    F, W = random_sban(n, seed)
    res = synthesize(F, W, Coloring.from_colors(list(range(F.size))))
    assert res.k == n
    assert verify_bundle(res, F, W)[1]


def test_single_color_still_rewires_blocks():
    # empty NECC graph, yet running F itself under W does not give F
    F = BooleanNetwork(2, [0, 0, 1, 2])
    W = UpdateSchedule.sequential(2)
    assert build_necc_graph(F, W).num_edges == 0
    assert not check_simulation(F, W, Embedding.identity(2), F, UpdateSchedule.parallel(2))
    res = synthesize(F, W, Coloring.from_colors([0] * 4))
    assert res.k == 0 and res.Fp != F
    assert verify_bundle(res, F, W)[:2] == (True, True)
