"""Colorings, chromatic numbers and clique numbers of confusability graphs.

Every function here works on any object exposing ``num_nodes`` and
``adjacency`` (sorted neighbor lists), so the NECC graph, its image quotient
and :class:`SimpleGraph` are interchangeable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterator, Protocol, Sequence

import numpy as np

from .confusability import ResourceLimitError, adjacency_lists, necc_step_keys
from .core import BooleanNetwork, UpdateSchedule

DEFAULT_BUDGET = int(os.environ.get("SBANSIM_BUDGET", 10**7))
GENERIC_CLIQUE_CAP = 1 << 12


class Graph(Protocol):
    @property
    def num_nodes(self) -> int: ...

    @property
    def adjacency(self) -> list[list[int]]: ...


class InvalidColoring(ValueError):
    """A coloring gives two adjacent nodes the same color."""


@dataclass
class SimpleGraph:
    num_nodes: int
    edges: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            e = np.unique(np.sort(e, axis=1), axis=0)
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loops are not allowed")
        self.edges = e
        self.adjacency = adjacency_lists(self.num_nodes, self.edges)

    @classmethod
    def from_edges(cls, num_nodes: int, edges: Sequence[tuple[int, int]]) -> SimpleGraph:
        return cls(num_nodes, np.array(list(edges), dtype=np.int64))

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])


@dataclass
class Coloring:
    """Dense coloring: ``colors[v]`` in ``0..count-1``, every id used."""

    colors: list[int]
    count: int

    @classmethod
    def from_colors(cls, colors: Sequence[int]) -> Coloring:
        """Relabel arbitrary color keys to dense ids in order of first appearance."""
        ids: dict = {}
        dense = [ids.setdefault(c, len(ids)) for c in colors]
        return cls(dense, len(ids))

    def bits(self) -> int:
        """Number of bits needed to write a color id."""
        return (self.count - 1).bit_length() if self.count > 1 else 0

    def encode(self, v: int) -> int:
        """Color of ``v`` as a ``bits()``-bit word (high bits zero-padded)."""
        return self.colors[v]

    def to_json(self) -> dict:
        return {"colors": list(self.colors), "count": self.count}

    @classmethod
    def from_json(cls, obj: dict) -> Coloring:
        if not isinstance(obj, dict) or "colors" not in obj:
            raise ValueError("coloring JSON is missing field 'colors'")
        colors = obj["colors"]
        if not isinstance(colors, list) or not all(isinstance(c, int) and c >= 0 for c in colors):
            raise ValueError("coloring field 'colors' must be a list of non-negative integers")
        count = obj.get("count", len(set(colors)))
        if sorted(set(colors)) != list(range(count)):
            raise ValueError("coloring ids must be exactly 0..count-1")
        return cls(list(colors), count)


@dataclass
class ChromaticResult:
    lower: int
    upper: int
    exact: bool
    coloring: Coloring
    clique: list[int]
    budget_used: int = 0

    @property
    def value(self) -> int | None:
        return self.upper if self.exact else None

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "coloring": self.coloring.to_json(),
            "clique": list(self.clique),
            "budget_used": self.budget_used,
        }


def validate_coloring(graph: Graph, coloring: Coloring | Sequence[int]) -> bool:
    colors = coloring.colors if isinstance(coloring, Coloring) else list(coloring)
    if len(colors) != graph.num_nodes or any(c is None or c < 0 for c in colors):
        raise ValueError("coloring must assign a color to every node")
    for u, nbrs in enumerate(graph.adjacency):
        cu = colors[u]
        for v in nbrs:
            if v > u and colors[v] == cu:
                return False
    return True


def is_clique(graph: Graph, nodes: Sequence[int]) -> bool:
    nodes = list(nodes)
    adj = graph.adjacency
    for a in range(len(nodes)):
        nbrs = set(adj[nodes[a]])
        for b in range(a + 1, len(nodes)):
            if nodes[b] not in nbrs:
                return False
    return True


def greedy_color_by_degree(graph: Graph) -> Coloring:
    """Greedy coloring in order of decreasing degree, ties by ascending node id.

    Each node takes the smallest color not already used by a colored neighbor.
    """
    adj = graph.adjacency
    order = sorted(range(graph.num_nodes), key=lambda v: (-len(adj[v]), v))
    colors = [-1] * graph.num_nodes
    count = 0
    for v in order:
        taken = {colors[w] for w in adj[v] if colors[w] >= 0}
        c = 0
        while c in taken:
            c += 1
        colors[v] = c
        count = max(count, c + 1)
    return Coloring(colors, count)


def dsatur_color(graph: Graph, nodes: Sequence[int] | None = None) -> Coloring:
    """Brélaz's DSATUR heuristic (no backtracking)."""
    adj = graph.adjacency
    nodes = range(graph.num_nodes) if nodes is None else nodes
    colors = [-1] * graph.num_nodes
    forb = [0] * graph.num_nodes
    remaining = set(nodes)
    for v in range(graph.num_nodes):
        if v not in remaining:
            colors[v] = 0
    while remaining:
        v = max(remaining, key=lambda u: (bin(forb[u]).count("1"), len(adj[u]), -u))
        c = 0
        while forb[v] >> c & 1:
            c += 1
        colors[v] = c
        remaining.discard(v)
        for w in adj[v]:
            forb[w] |= 1 << c
    return Coloring.from_colors(colors) if graph.num_nodes else Coloring([], 0)


# -- cliques -----------------------------------------------------------------


def _bitsets(graph: Graph) -> list[int]:
    out = []
    for nbrs in graph.adjacency:
        m = 0
        for w in nbrs:
            m |= 1 << w
        out.append(m)
    return out


def _bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


class _BudgetExceeded(Exception):
    pass


def _bron_kerbosch_max(nbr: list[int], candidates: int, budget: int | None) -> tuple[list[int], int]:
    best: list[int] = []
    calls = 0

    def expand(r: list[int], p: int, x: int) -> None:
        nonlocal best, calls
        calls += 1
        if budget is not None and calls > budget:
            raise _BudgetExceeded
        if not p and not x:
            if len(r) > len(best):
                best = list(r)
            return
        if len(r) + bin(p).count("1") <= len(best):
            return
        pivot = max(_bits(p | x), key=lambda u: bin(p & nbr[u]).count("1"))
        for v in list(_bits(p & ~nbr[pivot])):
            r.append(v)
            expand(r, p & nbr[v], x & nbr[v])
            r.pop()
            p &= ~(1 << v)
            x |= 1 << v

    expand([], candidates, 0)
    return best, calls


def max_clique_generic(
    graph: Graph, cap: int = GENERIC_CLIQUE_CAP, budget: int | None = None
) -> tuple[int, list[int]]:
    """Exact clique number by Bron–Kerbosch with Tomita pivoting.

    Raises :class:`ResourceLimitError` above ``cap`` nodes or when ``budget``
    recursive calls are exhausted.
    """
    if graph.num_nodes > cap:
        raise ResourceLimitError(f"{graph.num_nodes} nodes exceed the generic clique cap {cap}")
    if graph.num_nodes == 0:
        return 0, []
    nbr = _bitsets(graph)
    try:
        best, _ = _bron_kerbosch_max(nbr, (1 << graph.num_nodes) - 1, budget)
    except _BudgetExceeded:
        raise ResourceLimitError("clique search budget exhausted") from None
    best.sort()
    return len(best), best


def maximal_cliques(graph: Graph) -> Iterator[list[int]]:
    """Every maximal clique (Bron–Kerbosch with pivoting), each sorted."""
    nbr = _bitsets(graph)
    stack = [([], (1 << graph.num_nodes) - 1, 0)]
    while stack:
        r, p, x = stack.pop()
        if not p and not x:
            yield sorted(r)
            continue
        if not p:
            continue
        pivot = max(_bits(p | x), key=lambda u: bin(p & nbr[u]).count("1"))
        for v in list(_bits(p & ~nbr[pivot])):
            stack.append((r + [v], p & nbr[v], x & nbr[v]))
            p &= ~(1 << v)
            x |= 1 << v


def max_clique_necc(F: BooleanNetwork, W: UpdateSchedule) -> tuple[int, list[int]]:
    """Clique number of the NECC graph of ``(F, W)`` without a generic search.

    A maximum clique is confusable at one common step, i.e. it sits inside one
    bucket of equal ``F_{W_{<i}}`` values; inside a bucket a largest clique
    takes one configuration per distinct image.
    """
    best_size, best = 1, [0]
    for _, keys in necc_step_keys(F, W):
        pairs = np.unique(np.stack((keys, F.table), axis=1), axis=0)
        ks, counts = np.unique(pairs[:, 0], return_counts=True)
        top = int(counts.max())
        if top > best_size:
            key = int(ks[int(np.argmax(counts))])
            members = np.flatnonzero(keys == key)
            _, first = np.unique(F.table[members], return_index=True)
            best_size, best = top, sorted(int(v) for v in members[first])
    return best_size, best


# -- exact chromatic number ---------------------------------------------------


def _components(graph: Graph) -> list[list[int]]:
    adj = graph.adjacency
    seen = [False] * graph.num_nodes
    comps = []
    for s in range(graph.num_nodes):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [s], [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


@dataclass
class _Budget:
    limit: int
    used: int = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise _BudgetExceeded


def _k_colorable(
    adj: list[list[int]], nodes: list[int], k: int, clique: list[int], budget: _Budget
) -> list[int] | None:
    """DSATUR branch and bound: a ``k``-coloring of ``nodes`` or ``None``.

    Clique vertices are precolored ``0..len(clique)-1`` to break symmetry.
    """
    colors = {v: -1 for v in nodes}
    counts = {v: [0] * k for v in nodes}
    sat = dict.fromkeys(nodes, 0)
    uncolored = set(nodes)

    def assign(v: int, c: int) -> None:
        colors[v] = c
        uncolored.discard(v)
        for w in adj[v]:
            cw = counts[w]
            cw[c] += 1
            if cw[c] == 1:
                sat[w] += 1

    def unassign(v: int, c: int) -> None:
        colors[v] = -1
        uncolored.add(v)
        for w in adj[v]:
            cw = counts[w]
            cw[c] -= 1
            if cw[c] == 0:
                sat[w] -= 1

    for c, v in enumerate(clique):
        assign(v, c)
    used = len(clique)

    def search(used: int) -> bool:
        if not uncolored:
            return True
        v = max(uncolored, key=lambda u: (sat[u], len(adj[u]), -u))
        if sat[v] >= k:
            return False
        cv = counts[v]
        for c in range(min(k, used + 1)):
            if cv[c]:
                continue
            budget.spend()
            assign(v, c)
            if search(max(used, c + 1)):
                return True
            unassign(v, c)
        return False

    if not search(used):
        return None
    return [colors[v] for v in nodes]


def _component_clique(graph: Graph, comp: list[int], hint: list[int], budget: _Budget) -> list[int]:
    inside = set(comp)
    if hint and all(v in inside for v in hint):
        best = list(hint)
    else:
        best = [comp[0]]
    if len(comp) > GENERIC_CLIQUE_CAP or len(best) == len(comp):
        return best
    local = {v: i for i, v in enumerate(comp)}
    nbr = []
    for v in comp:
        m = 0
        for w in graph.adjacency[v]:
            m |= 1 << local[w]
        nbr.append(m)
    remaining = max(budget.limit - budget.used, 1)
    try:
        found, calls = _bron_kerbosch_max(nbr, (1 << len(comp)) - 1, remaining)
        budget.used += calls
    except _BudgetExceeded:
        budget.used = budget.limit
        return best
    if len(found) > len(best):
        best = sorted(comp[i] for i in found)
    return best


def exact_chromatic_number(
    graph: Graph,
    budget: int = DEFAULT_BUDGET,
    clique: Sequence[int] | None = None,
) -> ChromaticResult:
    """Chromatic number by iterative deepening on ``k`` from the clique bound.

    Components are solved independently.  ``budget`` caps branch-node
    expansions; when it runs out the result degrades to certified bounds
    (clique below, best heuristic coloring above) with ``exact=False``.
    ``clique`` may seed the lower bound with a known clique.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    n = graph.num_nodes
    if n == 0:
        return ChromaticResult(0, 0, True, Coloring([], 0), [], 0)
    adj = graph.adjacency
    state = _Budget(budget)
    colors = [0] * n
    hint = list(clique or [])
    lower, upper, best_clique = 1, 1, [0]
    comps = sorted((c for c in _components(graph) if len(c) > 1), key=len, reverse=True)
    for comp in comps:
        sub = _Subgraph(graph, comp)
        heur = min(greedy_color_by_degree(sub), dsatur_color(sub), key=lambda c: c.count)
        local_cols, comp_hi = heur.colors, heur.count
        if comp_hi > lower and state.used < state.limit:
            cq = _component_clique(graph, comp, hint, state)
        else:
            cq = [comp[0], adj[comp[0]][0]]
        comp_lo = len(cq)
        if comp_lo > lower:
            lower, best_clique = comp_lo, cq
        # only a component that might raise the global bound needs an optimality proof
        k = max(comp_lo, lower)
        while k < comp_hi and state.used < state.limit:
            try:
                found = _k_colorable(adj, comp, k, cq, state)
            except _BudgetExceeded:
                break
            if found is not None:
                local_cols, comp_hi = found, k
                break
            k += 1
            comp_lo = k
        lower = max(lower, comp_lo)
        upper = max(upper, comp_hi)
        for v, c in zip(comp, local_cols):
            colors[v] = c
    coloring = Coloring.from_colors(colors)
    upper = coloring.count
    return ChromaticResult(lower, upper, lower == upper, coloring, sorted(best_clique), state.used)


@dataclass
class _Subgraph:
    """Induced subgraph view with local node ids."""

    parent: Graph
    nodes: list[int]
    adjacency: list[list[int]] = field(init=False)

    def __post_init__(self):
        local = {v: i for i, v in enumerate(self.nodes)}
        self.adjacency = [[local[w] for w in self.parent.adjacency[v]] for v in self.nodes]

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)
