"""Reference evaluators written straight from the definitions, sharing no code
with the vectorized paths they check."""

import itertools

import numpy as np

from sbansim.core import BooleanNetwork, UpdateSchedule, decode, encode
from sbansim.generators import random_sban

# -- independent oracles: list-of-bits evaluation, no masks, no numpy ----------


def naive_block_update(F: BooleanNetwork, x: int, block) -> int:
    bits = decode(x, F.n)
    new = [F.local(i, x) if i in set(block) else bits[i] for i in range(F.n)]
    return encode(new)


def naive_partial(F: BooleanNetwork, W: UpdateSchedule, j: int, x: int) -> int:
    updated = [i for b in W.blocks[:j] for i in b]
    return naive_block_update(F, x, updated)


def naive_prefix(F: BooleanNetwork, W: UpdateSchedule, j: int, x: int) -> int:
    for b in W.blocks[:j]:
        x = naive_block_update(F, x, b)
    return x


def naive_steps(F, W, x, y) -> list[int]:
    return [i for i in range(W.p + 1) if naive_partial(F, W, i, x) == naive_partial(F, W, i, y)]


def naive_necc_edges(F, W) -> set[tuple[int, int]]:
    """Pair scan straight from the definition: distinct images, some common step."""
    out = set()
    for x, y in itertools.combinations(range(F.size), 2):
        if F(x) != F(y) and naive_steps(F, W, x, y):
            out.add((x, y))
    return out


def swap2() -> tuple[BooleanNetwork, UpdateSchedule]:
    return BooleanNetwork(2, [0, 2, 1, 3]), UpdateSchedule([[0], [1]])


def sample_sbans(count: int, sizes, seed0: int = 0, bijective: bool = False):
    sizes = list(sizes)
    for t in range(count):
        n = sizes[t % len(sizes)]
        F, W = random_sban(n, seed0 + t, bijective=bijective)
        yield n, seed0 + t, F, W


def brute_chromatic(num_nodes: int, edges) -> int:
    """Smallest k admitting a proper k-coloring, by trying every assignment."""
    edges = [tuple(e) for e in edges]
    if num_nodes == 0:
        return 0
    for k in range(1, num_nodes + 1):
        for cols in itertools.product(range(k), repeat=num_nodes):
            if all(cols[u] != cols[v] for u, v in edges):
                return k
    return num_nodes


def brute_clique(num_nodes: int, edges) -> int:
    es = {tuple(sorted(e)) for e in edges}
    best = 1 if num_nodes else 0
    for size in range(2, num_nodes + 1):
        if any(
            all((a, b) in es for a, b in itertools.combinations(c, 2))
            for c in itertools.combinations(range(num_nodes), size)
        ):
            best = size
        else:
            break
    return best


def naive_step_matrix(F, W):
    """``S[x, y]`` has bit ``i`` set when ``x`` and ``y`` agree after partially updating ``i`` blocks."""

    P = np.array([[naive_partial(F, W, i, x) for x in range(F.size)] for i in range(W.p + 1)])
    S = np.zeros((F.size, F.size), dtype=np.int64)
    for i in range(W.p + 1):
        S |= (P[i][:, None] == P[i][None, :]).astype(np.int64) << i
    return S
