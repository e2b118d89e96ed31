"""Simulators with added automata, built from and read back into NECC colorings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coloring import (
    DEFAULT_BUDGET,
    ChromaticResult,
    Coloring,
    InvalidColoring,
    exact_chromatic_number,
    max_clique_necc,
    validate_coloring,
)
from .confusability import DEFAULT_MAX_N, ConfusabilityGraph, build_necc_graph
from .core import (
    BooleanNetwork,
    Embedding,
    NetworkError,
    SimulationCheck,
    UpdateSchedule,
    partial_parallel_all,
    scheduled_all,
    simulation_report,
    validate_schedule_extension,
)

VERIFY_MAX_M = 20


def bits_for(colors: int) -> int:
    """``ceil(log2(colors))``, with one color needing no bits."""
    if colors < 1:
        raise ValueError("need at least one color")
    return (colors - 1).bit_length()


@dataclass
class SynthesisResult:
    Fp: BooleanNetwork
    Wp: UpdateSchedule
    h: Embedding
    k: int
    coloring: Coloring

    def to_json(self) -> dict:
        return {
            "Fp": self.Fp.to_json(),
            "Wp": self.Wp.to_json(),
            "h": self.h.to_json(),
            "k": self.k,
            "coloring": self.coloring.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> SynthesisResult:
        for key in ("Fp", "Wp", "h", "k", "coloring"):
            if key not in obj:
                raise NetworkError(f"synthesis bundle is missing field {key!r}")
        Fp = BooleanNetwork.from_json(obj["Fp"])
        Wp = UpdateSchedule.from_json(obj["Wp"], Fp.n)
        if not isinstance(obj["h"], list):
            raise NetworkError("bundle field 'h' must be a list of indices")
        h = Embedding(len(obj["h"]), Fp.n, tuple(obj["h"]))
        return cls(Fp, Wp, h, int(obj["k"]), Coloring.from_json(obj["coloring"]))


def _added_schedule(W: UpdateSchedule, k: int) -> UpdateSchedule:
    n = W.n
    return UpdateSchedule([[n + t] for t in range(k)] + [list(b) for b in W.blocks], n + k)


def synthesize(
    F: BooleanNetwork,
    W: UpdateSchedule,
    coloring: Coloring,
    graph: ConfusabilityGraph | None = None,
) -> SynthesisResult:
    """Build an ``(n+k)``-automaton simulator of ``(F, [V])`` scheduled after ``W``.

    The ``k = ceil(log2(count))`` added automata are updated first, one at a
    time, and store the color of the current configuration.  Block ``W_j`` then
    reads the unique image of any configuration with that color whose partial
    update ``F_{W_{<j}}`` equals the current original part; when no such
    configuration exists the block is set to zero.
    """
    n = F.n
    if W.n != n:
        raise NetworkError(f"schedule covers {W.n} automata, network has {n}")
    if len(coloring.colors) != F.size:
        raise InvalidColoring(f"coloring has {len(coloring.colors)} entries, expected {F.size}")
    if graph is not None and not validate_coloring(graph, coloring):
        raise InvalidColoring("two NECC-adjacent configurations share a color")
    k = bits_for(max(coloring.count, 1))
    m = n + k
    color = np.asarray(coloring.colors, dtype=np.int64)
    if color.size and (color.min() < 0 or color.max() >= 1 << k):
        raise InvalidColoring(f"color ids do not fit in {k} bits")

    zs = np.arange(1 << m, dtype=np.int64)
    x = zs & ((1 << n) - 1)
    out = color[x] << n
    for j, block in enumerate(W.blocks):
        keys = partial_parallel_all(F, W, j) | (color << n)
        lookup = np.full(1 << m, -1, dtype=np.int64)
        # several configurations may share a key; a valid coloring forces equal images
        lookup[keys] = F.table
        clash = lookup[keys] != F.table
        if np.any(clash):
            x1 = int(np.flatnonzero(clash)[0])
            raise InvalidColoring(
                f"configurations with key {int(keys[x1])} at step {j} have different images "
                "but share a color"
            )
        bm = 0
        for i in block:
            bm |= 1 << i
        hit = lookup[zs]
        out |= np.where(hit >= 0, hit & bm, 0)
    Fp = BooleanNetwork(m, out)
    return SynthesisResult(Fp, _added_schedule(W, k), Embedding.identity(n, m), k, coloring)


def verify_bundle(
    result: SynthesisResult, F: BooleanNetwork, W: UpdateSchedule | None = None
) -> tuple[bool, bool, SimulationCheck]:
    """``(extension_ok, simulation_ok, check)`` for a bundle against ``(F, [V])``.

    ``W`` is the constraining schedule the bundle must extend; without it only
    the simulation is checked.
    """
    if result.Fp.n > VERIFY_MAX_M:
        raise NetworkError(f"bundle with {result.Fp.n} automata is too large to verify exhaustively")
    ext = True if W is None else validate_schedule_extension(W, result.Wp, result.h)
    check = simulation_report(result.Fp, result.Wp, result.h, F, UpdateSchedule.parallel(F.n))
    return ext, check.ok, check


def extract_coloring(
    Fp: BooleanNetwork,
    Wp: UpdateSchedule,
    h: Embedding,
    F: BooleanNetwork,
    W: UpdateSchedule,
    check: bool = True,
) -> Coloring:
    """Coloring of the NECC graph read off a simulator of ``(F, [V])``.

    Each configuration is lifted with zeros on the added automata; its color is
    the added-automata part of the scheduled image ``Fp^{Wp}`` of the lift.
    """
    if check:
        if not validate_schedule_extension(W, Wp, h):
            raise NetworkError("the simulator schedule does not extend W through h")
        if not simulation_report(Fp, Wp, h, F, UpdateSchedule.parallel(F.n)).ok:
            raise NetworkError("the network does not simulate (F, [V]) through h")
    lifts = np.array([h.lift(x) for x in range(F.size)], dtype=np.int64)
    extra = ((1 << Fp.n) - 1) & ~h.image_mask()
    raw = scheduled_all(Fp, Wp, lifts) & extra
    return Coloring.from_colors(raw.tolist())


@dataclass
class KappaResult:
    """``κ(F, W)`` or certified bounds on it, with a verified witness for the upper end."""

    lower: int
    upper: int
    exact: bool
    chromatic: ChromaticResult
    clique_size: int
    witness: SynthesisResult | None = None
    verified: bool | None = None

    @property
    def value(self) -> int | None:
        return self.upper if self.exact else None

    def to_json(self, include_witness: bool = True) -> dict:
        out = {
            "kappa": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "chi_lower": self.chromatic.lower,
            "chi_upper": self.chromatic.upper,
            "omega": self.clique_size,
            "verified": self.verified,
        }
        if include_witness and self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


def kappa(
    F: BooleanNetwork,
    W: UpdateSchedule,
    budget: int = DEFAULT_BUDGET,
    max_n: int = DEFAULT_MAX_N,
    witness: bool = True,
    verify: bool = True,
    graph: ConfusabilityGraph | None = None,
) -> KappaResult:
    """Number of added automata needed to simulate ``(F, [V])`` under ``W``.

    Equals ``ceil(log2 χ)`` of the NECC graph.  The clique found by
    :func:`max_clique_necc` seeds the chromatic search.
    """
    graph = build_necc_graph(F, W, max_n) if graph is None else graph
    omega, clique = max_clique_necc(F, W)
    chi = exact_chromatic_number(graph, budget, clique=clique)
    lo = bits_for(max(chi.lower, omega))
    hi = bits_for(chi.upper)
    res = KappaResult(lo, hi, lo == hi, chi, omega)
    if witness:
        res.witness = synthesize(F, W, chi.coloring, graph)
        if verify and res.witness.Fp.n <= VERIFY_MAX_M:
            ext, ok, _ = verify_bundle(res.witness, F, W)
            res.verified = ext and ok
    return res


def kappa_upper_bound_from(coloring: Coloring) -> int:
    return bits_for(coloring.count)


def theorem_bound(n: int) -> float:
    """Worst-case upper bound ``2n/3 + 2`` on added automata."""
    return 2 * n / 3 + 2


def conjecture_bound(n: int) -> int:
    return n // 2
