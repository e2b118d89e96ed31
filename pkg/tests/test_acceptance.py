"""Acceptance criteria, one test each.  Every test appends a PASS/FAIL line to
the terminal summary, including when an assertion fails."""

import itertools
import time
from contextlib import contextmanager

import numpy as np
import pytest

from sbansim.coloring import (
    exact_chromatic_number,
    greedy_color_by_degree,
    is_clique,
    max_clique_generic,
    max_clique_necc,
    maximal_cliques,
    validate_coloring,
)
from sbansim.confusability import (
    build_inecc_graph,
    build_necc_graph,
    sequentialize,
    step_mask_matrix,
)
from sbansim.core import UpdateSchedule, check_simulation, to_string
from sbansim.generators import figure_example, random_bijective, swap_network
from sbansim.search import search_worst_kappa
from sbansim.synthesis import bits_for, extract_coloring, kappa, synthesize

from .conftest import ACCEPTANCE_LINES
from .oracles import naive_step_matrix, sample_sbans

pytestmark = pytest.mark.acceptance


@contextmanager
def criterion(num: int, name: str, limit: float):
    notes: list[str] = []
    t0 = time.perf_counter()
    ok = False
    try:
        yield notes
        ok = True
    finally:
        dt = time.perf_counter() - t0
        if ok and dt > limit:
            notes.append(f"runtime {dt:.2f}s over {limit:g}s")
            ok = False
        status = "PASS" if ok else "FAIL"
        detail = "; ".join(notes)
        ACCEPTANCE_LINES.append(f"[{status}] {num}. {name} ({dt:.2f}s / {limit:g}s) {detail}".rstrip())
    if dt > limit:
        pytest.fail(f"criterion {num} took {dt:.2f}s, limit {limit:g}s")


def _pair_labels(edges, n):
    return {frozenset((to_string(u, n), to_string(v, n))) for u, v in edges}


def test_1_figure_example():
    with criterion(1, "four-automaton example", 1.0) as notes:
        F, W = figure_example()
        necc = build_necc_graph(F, W)
        inecc = build_inecc_graph(F, W, necc=necc)
        chi = exact_chromatic_number(necc)
        chi_q = exact_chromatic_number(inecc)
        k = kappa(F, W, graph=necc)
        notes.append(f"chi(NECC)={chi.value} chi(INECC)={chi_q.value} kappa={k.value}")
        assert chi.exact and chi.value == 2
        assert chi_q.exact and chi_q.value == 3
        assert k.value == 1 and k.verified
        triangle = {frozenset(p) for p in itertools.combinations(["0100", "0101", "0000"], 2)}
        assert _pair_labels(inecc.image_edge_set(), 4) == triangle
        assert sorted(inecc.label(v) for v in range(inecc.num_nodes)) == ["0000", "0100", "0101", "1111"]
        assert not inecc.adjacency[inecc.index_of(15)]
        expected = {frozenset(p) for p in [("1000", "0100"), ("0100", "0000"), ("0000", "1100")]}
        got = _pair_labels(necc.edge_set(), 4)
        notes.append("NECC edges " + " ".join(sorted("-".join(sorted(e)) for e in got)))
        assert got == expected, f"NECC edge labels {sorted(map(sorted, got))} differ from {sorted(map(sorted, expected))}"


def test_2_swap_lower_bound_family():
    with criterion(2, "swap network lower bound", 60.0) as notes:
        for n in (2, 4, 6):
            F, W = swap_network(n)
            omega, clique = max_clique_necc(F, W)
            g = build_necc_graph(F, W)
            assert omega == 2 ** (n // 2) and is_clique(g, clique), f"omega={omega} at n={n}"
            res = kappa(F, W, graph=g)
            if n <= 4:
                assert res.exact and res.chromatic.value == 2 ** (n // 2) and res.value == n // 2
                notes.append(f"n={n} omega={omega} chi={res.chromatic.value} kappa={res.value}")
            else:
                hi = res.upper if res.exact else bits_for(greedy_color_by_degree(g).count)
                assert res.lower == 3 and res.upper <= hi
                if res.chromatic.exact:
                    assert (res.lower, res.upper) == (3, 3)
                notes.append(f"n={n} omega={omega} kappa in [{res.lower},{res.upper}] exact={res.exact}")
            assert res.verified


def test_3_synthesis_round_trip():
    with criterion(3, "synthesis/extraction round trip", 120.0) as notes:
        passed = 0
        for n, seed, F, W in sample_sbans(100, range(1, 6), seed0=3000):
            g = build_necc_graph(F, W)
            chi = exact_chromatic_number(g)
            assert chi.exact
            res = synthesize(F, W, chi.coloring, g)
            assert res.k == bits_for(chi.value)
            ok = check_simulation(res.Fp, res.Wp, res.h, F, UpdateSchedule.parallel(n))
            col = extract_coloring(res.Fp, res.Wp, res.h, F, W)
            passed += ok and validate_coloring(g, col)
        notes.append(f"{passed}/100")
        assert passed == 100


def test_4_clique_bound():
    with criterion(4, "clique bound and clique solvers agree", 120.0) as notes:
        violations = mismatches = compared = 0
        for n, seed, F, W in sample_sbans(200, range(1, 9), seed0=4000):
            omega, _ = max_clique_necc(F, W)
            violations += omega > 2 ** (n // 2)
            if n <= 6:
                compared += 1
                mismatches += omega != max_clique_generic(build_necc_graph(F, W))[0]
        notes.append(f"violations={violations} mismatches={mismatches}/{compared}")
        assert violations == 0 and mismatches == 0


def _property_violations(F, W) -> dict[str, int]:
    S = step_mask_matrix(F, W)
    out = {"interval": 0, "triple": 0, "iff": 0, "clique": 0}
    # nonzero masks must be one run of consecutive bits
    nz = S[S != 0]
    out["interval"] = int(np.count_nonzero((nz + (nz & -nz)) & nz))
    cc = S != 0
    for x in range(F.size):
        common = S[x][:, None] & S[x][None, :]
        out["triple"] += int(np.count_nonzero(common & ~S))
        both = cc[x][:, None] & cc[x][None, :]
        out["iff"] += int(np.count_nonzero(both & ((common != 0) != cc)))
    g = build_necc_graph(F, W)
    for c in maximal_cliques(g):
        if len(c) > 1:
            shared = -1
            for u, v in itertools.combinations(c, 2):
                shared &= int(S[u, v])
            out["clique"] += shared == 0
    return out


def test_5_confusability_properties():
    with criterion(5, "confusability interval and clique properties", 120.0) as notes:
        total = {"interval": 0, "triple": 0, "iff": 0, "clique": 0}
        checked = 0
        small = [(F, W) for _, _, F, W in sample_sbans(200, range(1, 5), seed0=5000)]
        small += [swap_network(2), swap_network(4), figure_example()]
        for F, W in small:
            assert np.array_equal(step_mask_matrix(F, W), naive_step_matrix(F, W))
        large = [(F, W) for _, _, F, W in sample_sbans(100, (5, 6), seed0=5500)]
        for F, W in small + large:
            for key, v in _property_violations(F, W).items():
                total[key] += v
            checked += 1
        notes.append(f"{checked} instances, violations {total}")
        assert not any(total.values())


def test_6_bijective_class():
    with criterion(6, "bijective degree and kappa bounds", 180.0) as notes:
        deg_viol = kappa_viol = exact = 0
        worst = {}
        for n in (4, 6, 8):
            W = UpdateSchedule.sequential(n)
            bound = 2 ** (n // 2 + 1) - 2
            for t in range(50):
                F = random_bijective(n, 6000 + 100 * n + t)
                g = build_necc_graph(F, W)
                deg_viol += int(np.count_nonzero(g.degrees() > bound))
                if n <= 6:
                    res = kappa(F, W, graph=g, witness=False)
                    if res.exact:
                        exact += 1
                        kappa_viol += res.value > n // 2 + 1
                        worst[n] = max(worst.get(n, 0), res.value)
        notes.append(f"degree violations={deg_viol} kappa violations={kappa_viol} exact={exact}/100 worst={worst}")
        assert deg_viol == 0 and kappa_viol == 0


def test_7_monotonicity_and_quotient():
    with criterion(7, "sequentialization and quotient monotonicity", 120.0) as notes:
        sub_viol = quo_viol = 0
        for n, seed, F, W in sample_sbans(100, range(1, 6), seed0=7000):
            g = build_necc_graph(F, W)
            sub_viol += not g.edge_set() <= build_necc_graph(F, sequentialize(W)).edge_set()
            chi = exact_chromatic_number(g)
            chi_q = exact_chromatic_number(build_inecc_graph(F, W, necc=g))
            assert chi.exact and chi_q.exact
            quo_viol += chi_q.value < chi.value
        notes.append(f"subset violations={sub_viol} quotient violations={quo_viol}")
        assert sub_viol == 0 and quo_viol == 0


def test_8_exhaustive_sweep_n2():
    with criterion(8, "exhaustive worst case at n=2", 30.0) as notes:
        rep = search_worst_kappa(2, "exhaustive", budget=0, threads=1)
        notes.append(
            f"{rep.instances} instances worst kappa={rep.worst_kappa} status={rep.conjecture_status}"
        )
        assert rep.complete and rep.instances == 256 * 3
        assert rep.worst_exact and rep.worst_kappa == 1 == 2 // 2
        assert rep.conjecture_status == "respected"
