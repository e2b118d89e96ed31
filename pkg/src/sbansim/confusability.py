"""Confusable pairs and the graphs built on them.

Two configurations are *confusable* when some partial parallel update
``F_{W_{<i}}`` maps them to the same word, and *non-equivalent* when their
images under ``F`` differ.  The NECC graph joins configurations that are both.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .core import BooleanNetwork, NetworkError, UpdateSchedule, partial_parallel_all, to_string

DEFAULT_MAX_N = 14


class ResourceLimitError(RuntimeError):
    """Requested instance exceeds a configured size cap."""


@dataclass(frozen=True)
class StepInterval:
    """Contiguous range ``a..b`` of confusable steps, or the empty interval."""

    a: int | None = None
    b: int | None = None

    @property
    def empty(self) -> bool:
        return self.a is None

    def __contains__(self, i: int) -> bool:
        return not self.empty and self.a <= i <= self.b

    def steps(self) -> list[int]:
        return [] if self.empty else list(range(self.a, self.b + 1))

    def intersect(self, other: StepInterval) -> StepInterval:
        if self.empty or other.empty:
            return StepInterval()
        a, b = max(self.a, other.a), min(self.b, other.b)
        return StepInterval(a, b) if a <= b else StepInterval()

    def __str__(self) -> str:
        return "∅" if self.empty else f"⟦{self.a},{self.b}⟧"


def _check_pair(F: BooleanNetwork, *xs: int) -> None:
    for x in xs:
        if not 0 <= x < F.size:
            raise NetworkError(f"configuration {x} is not a {F.n}-bit word")


def confusable_steps(F: BooleanNetwork, W: UpdateSchedule, x: int, y: int) -> list[int]:
    """Every step ``i`` in ``0..p`` with ``F_{W_{<i}}(x) == F_{W_{<i}}(y)``."""
    _check_pair(F, x, y)
    fx, fy = int(F.table[x]), int(F.table[y])
    out = []
    for i in range(W.p + 1):
        m = W.prefix_mask(i)
        if (fx & m) | (x & ~m) == (fy & m) | (y & ~m):
            out.append(i)
    return out


def cc_steps(F: BooleanNetwork, W: UpdateSchedule, x: int, y: int) -> StepInterval:
    # Steps range over 0..p inclusive.  Confusable steps always form an interval,
    # so min and max describe the whole set.
    steps = confusable_steps(F, W, x, y)
    if not steps:
        return StepInterval()
    return StepInterval(steps[0], steps[-1])


def is_nec(F: BooleanNetwork, x: int, y: int) -> bool:
    _check_pair(F, x, y)
    return int(F.table[x]) != int(F.table[y])


def is_necc(F: BooleanNetwork, W: UpdateSchedule, x: int, y: int) -> bool:
    return is_nec(F, x, y) and bool(confusable_steps(F, W, x, y))


def _check_cap(n: int, max_n: int) -> None:
    if n > max_n:
        raise ResourceLimitError(f"n={n} exceeds the graph-size cap of {max_n}")


@dataclass
class ConfusabilityGraph:
    """NECC graph on all ``2**n`` configurations of an SBAN.

    ``edges`` is an ``(E, 2)`` array of sorted unique pairs ``u < v``.
    Step annotations are computed on demand unless ``annotate=True`` was
    passed to :func:`build_necc_graph`.
    """

    F: BooleanNetwork
    W: UpdateSchedule
    edges: np.ndarray
    intervals: dict[tuple[int, int], StepInterval] | None = None
    _adj: list[list[int]] | None = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.F.n

    @property
    def p(self) -> int:
        return self.W.p

    @property
    def num_nodes(self) -> int:
        return self.F.size

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def adjacency(self) -> list[list[int]]:
        if self._adj is None:
            self._adj = adjacency_lists(self.num_nodes, self.edges)
        return self._adj

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.num_nodes, dtype=np.int64)
        if self.num_edges:
            np.add.at(deg, self.edges[:, 0], 1)
            np.add.at(deg, self.edges[:, 1], 1)
        return deg

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(u), int(v)) for u, v in self.edges}

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def interval(self, u: int, v: int) -> StepInterval:
        u, v = min(u, v), max(u, v)
        if self.intervals is not None and (u, v) in self.intervals:
            return self.intervals[(u, v)]
        return cc_steps(self.F, self.W, u, v)

    def label(self, x: int) -> str:
        return to_string(x, self.n)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": self.edges.tolist()}

    def to_dot(self, annotate: bool = False, colors: list[int] | None = None) -> str:
        return to_dot(
            [self.label(x) for x in range(self.num_nodes)],
            self.edges,
            name="necc",
            edge_labels=(
                {(int(u), int(v)): str(self.interval(int(u), int(v))) for u, v in self.edges}
                if annotate
                else None
            ),
            colors=colors,
        )


@dataclass
class ImageQuotientGraph:
    """NECC graph with configurations of equal image merged (the INECC graph).

    Vertex ``k`` stands for the image ``images[k]``; ``classes[k]`` lists its
    preimages.
    """

    n: int
    images: list[int]
    classes: list[list[int]]
    edges: np.ndarray
    _adj: list[list[int]] | None = field(default=None, repr=False, compare=False)

    @property
    def num_nodes(self) -> int:
        return len(self.images)

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def adjacency(self) -> list[list[int]]:
        if self._adj is None:
            self._adj = adjacency_lists(self.num_nodes, self.edges)
        return self._adj

    def index_of(self, image: int) -> int:
        return self.images.index(image)

    def image_edge_set(self) -> set[tuple[int, int]]:
        """Edges as pairs of image words ``(y, y')`` with ``y < y'``."""
        out = set()
        for u, v in self.edges:
            a, b = self.images[u], self.images[v]
            out.add((min(a, b), max(a, b)))
        return out

    def label(self, k: int) -> str:
        return to_string(self.images[k], self.n)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "images": list(self.images),
            "classes": [list(c) for c in self.classes],
            "edges": self.edges.tolist(),
        }

    def to_dot(self, colors: list[int] | None = None) -> str:
        return to_dot(
            [self.label(k) for k in range(self.num_nodes)], self.edges, name="inecc", colors=colors
        )


def adjacency_lists(num_nodes: int, edges: np.ndarray) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(num_nodes)]
    for u, v in edges.tolist():
        adj[u].append(v)
        adj[v].append(u)
    for a in adj:
        a.sort()
    return adj


def _dedupe_pairs(pairs: list[np.ndarray]) -> np.ndarray:
    if not pairs:
        return np.zeros((0, 2), dtype=np.int64)
    allp = np.concatenate(pairs)
    if allp.size == 0:
        return np.zeros((0, 2), dtype=np.int64)
    return np.unique(allp, axis=0)


def _bucket_pairs(keys: np.ndarray, images: np.ndarray) -> np.ndarray:
    """Pairs ``u < v`` sharing a key but not an image."""
    order = np.lexsort((np.arange(keys.size), keys))
    sk = keys[order]
    cuts = np.flatnonzero(np.diff(sk)) + 1
    starts = np.concatenate(([0], cuts))
    ends = np.concatenate((cuts, [sk.size]))
    chunks = []
    for s, e in zip(starts.tolist(), ends.tolist()):
        if e - s < 2:
            continue
        members = order[s:e]
        imgs = images[members]
        if np.all(imgs == imgs[0]):
            continue
        iu, iv = np.triu_indices(members.size, k=1)
        keep = imgs[iu] != imgs[iv]
        u, v = members[iu[keep]], members[iv[keep]]
        chunks.append(np.stack((np.minimum(u, v), np.maximum(u, v)), axis=1))
    if not chunks:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(chunks)


def necc_step_keys(F: BooleanNetwork, W: UpdateSchedule) -> Iterator[tuple[int, np.ndarray]]:
    """``(i, F_{W_{<i}} on all configurations)`` for the steps that can carry edges.

    Step 0 only identifies a configuration with itself and step ``p`` only
    identifies equivalent configurations, so neither yields an NECC pair.
    """
    for i in range(1, W.p):
        yield i, partial_parallel_all(F, W, i)


def build_necc_graph(
    F: BooleanNetwork,
    W: UpdateSchedule,
    max_n: int = DEFAULT_MAX_N,
    annotate: bool = False,
) -> ConfusabilityGraph:
    _check_cap(F.n, max_n)
    if W.n != F.n:
        raise NetworkError(f"schedule covers {W.n} automata, network has {F.n}")
    pairs = [_bucket_pairs(keys, F.table) for _, keys in necc_step_keys(F, W)]
    edges = _dedupe_pairs(pairs)
    g = ConfusabilityGraph(F, W, edges)
    if annotate:
        g.intervals = {(int(u), int(v)): cc_steps(F, W, int(u), int(v)) for u, v in edges}
    return g


def build_inecc_graph(
    F: BooleanNetwork,
    W: UpdateSchedule,
    max_n: int = DEFAULT_MAX_N,
    necc: ConfusabilityGraph | None = None,
) -> ImageQuotientGraph:
    necc = build_necc_graph(F, W, max_n) if necc is None else necc
    images, inverse = np.unique(F.table, return_inverse=True)
    classes: list[list[int]] = [[] for _ in range(images.size)]
    for x, k in enumerate(inverse.tolist()):
        classes[k].append(x)
    if necc.num_edges:
        q = inverse[necc.edges]
        q = np.stack((q.min(axis=1), q.max(axis=1)), axis=1)
        edges = np.unique(q, axis=0)
    else:
        edges = np.zeros((0, 2), dtype=np.int64)
    return ImageQuotientGraph(F.n, images.tolist(), classes, edges)


def sequentialize(W: UpdateSchedule) -> UpdateSchedule:
    # Singletons within a block go in ascending index order.
    return UpdateSchedule([[i] for b in W.blocks for i in b], W.n)


def step_mask_matrix(F: BooleanNetwork, W: UpdateSchedule) -> np.ndarray:
    """``S[x, y]`` = bitmask of the confusable steps (bit ``i`` for step ``i``).

    Dense ``2**n x 2**n`` matrix; intended for exhaustive checks at small ``n``.
    """
    if W.p + 1 > 62:
        raise ResourceLimitError("too many steps for a 64-bit step mask")
    S = np.zeros((F.size, F.size), dtype=np.int64)
    for i in range(W.p + 1):
        keys = partial_parallel_all(F, W, i)
        S |= (keys[:, None] == keys[None, :]).astype(np.int64) << i
    return S


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


_PALETTE = [
    "white", "gray", "black", "lightblue", "salmon", "palegreen", "gold", "plum",
    "orange", "cyan", "pink", "khaki", "tan", "orchid", "wheat", "lightgray",
]


def to_dot(
    labels: list[str],
    edges: np.ndarray,
    name: str = "g",
    edge_labels: dict[tuple[int, int], str] | None = None,
    colors: list[int] | None = None,
) -> str:
    lines = [f"graph {name} {{", "  node [shape=box];"]
    for k, lab in enumerate(labels):
        attrs = [f"label={_dot_quote(lab)}"]
        if colors is not None:
            c = colors[k]
            attrs.append(f'style=filled fillcolor="{_PALETTE[c % len(_PALETTE)]}"')
            if _PALETTE[c % len(_PALETTE)] == "black":
                attrs.append("fontcolor=white")
        lines.append(f"  n{k} [{' '.join(attrs)}];")
    for u, v in edges.tolist():
        extra = ""
        if edge_labels is not None and (u, v) in edge_labels:
            extra = f" [label={_dot_quote(edge_labels[(u, v)])}]"
        lines.append(f"  n{u} -- n{v}{extra};")
    lines.append("}")
    return "\n".join(lines) + "\n"
