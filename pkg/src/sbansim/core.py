"""Boolean automata networks, block-sequential schedules and their update semantics.

Configurations are plain integers: automaton ``i`` is bit ``i`` (automaton 0 is
the least-significant bit).  String renderings print ``x_0`` first, so the word
``2`` over four automata is written ``0100``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class NetworkError(ValueError):
    """Malformed network, schedule, embedding or configuration."""


def encode(bits: Sequence[int | bool]) -> int:
    """Pack ``bits`` (``bits[i]`` is the state of automaton ``i``) into a word."""
    word = 0
    for i, b in enumerate(bits):
        if b not in (0, 1, True, False):
            raise NetworkError(f"bit {i} is not Boolean: {b!r}")
        if b:
            word |= 1 << i
    return word


def decode(word: int, n: int) -> list[int]:
    if word < 0 or word >> n:
        raise NetworkError(f"word {word} does not fit in {n} bits")
    return [(word >> i) & 1 for i in range(n)]


def to_string(word: int, n: int) -> str:
    """Render ``word`` as ``x_0 x_1 ... x_{n-1}`` without separators."""
    return "".join(str(b) for b in decode(word, n))


def from_string(s: str) -> int:
    s = s.strip()
    if not s or set(s) - {"0", "1"}:
        raise NetworkError(f"not a binary configuration string: {s!r}")
    return encode([int(c) for c in s])


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class BooleanNetwork:
    """Global map ``F`` of ``n`` automata stored as a full truth table.

    ``table[x]`` is the word of ``F(x)``; local function ``f_i`` is bit ``i`` of
    the entries.  Instances are immutable.
    """

    __slots__ = ("n", "table")

    def __init__(self, n: int, table: Sequence[int] | np.ndarray):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise NetworkError(f"n must be a non-negative integer, got {n!r}")
        n = int(n)
        if n > 30:
            raise NetworkError(f"n={n} is too large for an explicit truth table")
        arr = np.array(table, dtype=np.int64)
        if arr.ndim != 1 or arr.shape[0] != 1 << n:
            raise NetworkError(f"table must have exactly 2**{n} = {1 << n} entries, got {arr.size}")
        if arr.size and (arr.min() < 0 or arr.max() >= 1 << n):
            raise NetworkError(f"table entries must be {n}-bit words")
        arr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "table", arr)

    def __setattr__(self, name, value):
        raise AttributeError("BooleanNetwork is immutable")

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BooleanNetwork):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash((self.n, self.table.tobytes()))

    def __repr__(self) -> str:
        if self.n <= 3:
            return f"BooleanNetwork(n={self.n}, table={self.table.tolist()})"
        return f"BooleanNetwork(n={self.n})"

    @property
    def size(self) -> int:
        return 1 << self.n

    def local(self, i: int, x: int) -> int:
        """State ``f_i(x)``."""
        return (int(self.table[x]) >> i) & 1

    def is_bijective(self) -> bool:
        return np.unique(self.table).size == self.size

    def compose(self, other: BooleanNetwork) -> BooleanNetwork:
        """``self ∘ other``."""
        _same_size(self.n, other.n)
        return BooleanNetwork(self.n, self.table[other.table])

    def to_json(self) -> dict:
        return {"n": self.n, "table": self.table.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> BooleanNetwork:
        if not isinstance(obj, dict):
            raise NetworkError("network JSON must be an object")
        for key in ("n", "table"):
            if key not in obj:
                raise NetworkError(f"network JSON is missing field {key!r}")
        if not isinstance(obj["n"], int):
            raise NetworkError("network field 'n' must be an integer")
        if not isinstance(obj["table"], list) or not all(isinstance(v, int) for v in obj["table"]):
            raise NetworkError("network field 'table' must be a list of integers")
        return cls(obj["n"], obj["table"])

    @classmethod
    def from_function(cls, n: int, fn) -> BooleanNetwork:
        """Tabulate ``fn`` (word -> word) over all ``2**n`` configurations."""
        return cls(n, [fn(x) for x in range(1 << n)])


@dataclass(frozen=True)
class UpdateSchedule:
    """Ordered partition ``(W_0, ..., W_{p-1})`` of ``{0, ..., n-1}``.

    Validated at construction; blocks are stored as sorted tuples.
    """

    blocks: tuple[tuple[int, ...], ...]
    n: int

    def __init__(self, blocks: Iterable[Iterable[int]], n: int | None = None):
        normalized = []
        for b in blocks:
            items = sorted(int(i) for i in b)
            if len(set(items)) != len(items):
                raise NetworkError(f"block {items} repeats an automaton")
            normalized.append(tuple(items))
        seen = [i for b in normalized for i in b]
        if n is None:
            n = len(seen)
        if any(len(b) == 0 for b in normalized):
            raise NetworkError("schedule blocks must be non-empty")
        if len(seen) != len(set(seen)):
            raise NetworkError("schedule blocks must be pairwise disjoint")
        if sorted(seen) != list(range(n)):
            raise NetworkError(f"schedule blocks must cover exactly automata 0..{n - 1}")
        object.__setattr__(self, "blocks", tuple(normalized))
        object.__setattr__(self, "n", n)

    @classmethod
    def parallel(cls, n: int) -> UpdateSchedule:
        return cls([range(n)], n) if n else cls([], 0)

    @classmethod
    def sequential(cls, n: int, order: Sequence[int] | None = None) -> UpdateSchedule:
        order = range(n) if order is None else order
        return cls([[i] for i in order], n)

    @property
    def p(self) -> int:
        return len(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def is_sequential(self) -> bool:
        return all(len(b) == 1 for b in self.blocks)

    def block_of(self, i: int) -> int:
        """``W(i)``: index of the block that updates automaton ``i``."""
        for j, b in enumerate(self.blocks):
            if i in b:
                return j
        raise NetworkError(f"automaton {i} is not scheduled")

    def block_index(self) -> list[int]:
        out = [0] * self.n
        for j, b in enumerate(self.blocks):
            for i in b:
                out[i] = j
        return out

    def block_mask(self, j: int) -> int:
        return mask_of(self.blocks[j])

    def prefix_mask(self, j: int) -> int:
        """Bitmask of ``W_{<j}`` (union of the first ``j`` blocks)."""
        if not 0 <= j <= self.p:
            raise NetworkError(f"step {j} outside 0..{self.p}")
        return mask_of(i for b in self.blocks[:j] for i in b)

    def to_json(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, obj: dict, n: int | None = None) -> UpdateSchedule:
        if not isinstance(obj, dict) or "blocks" not in obj:
            raise NetworkError("schedule JSON is missing field 'blocks'")
        blocks = obj["blocks"]
        if not isinstance(blocks, list) or not all(
            isinstance(b, list) and all(isinstance(i, int) for i in b) for b in blocks
        ):
            raise NetworkError("schedule field 'blocks' must be a list of integer lists")
        return cls(blocks, n)


@dataclass(frozen=True)
class Embedding:
    """Injective map ``h`` from ``{0..n-1}`` into ``{0..m-1}``."""

    n: int
    m: int
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(v) for v in self.map))
        if len(self.map) != self.n:
            raise NetworkError(f"embedding must map {self.n} automata, got {len(self.map)}")
        if self.m < self.n:
            raise NetworkError("embedding target must be at least as large as its source")
        if len(set(self.map)) != self.n:
            raise NetworkError("embedding is not injective")
        if any(not 0 <= v < self.m for v in self.map):
            raise NetworkError(f"embedding images must lie in 0..{self.m - 1}")

    @classmethod
    def identity(cls, n: int, m: int | None = None) -> Embedding:
        return cls(n, n if m is None else m, tuple(range(n)))

    def __call__(self, i: int) -> int:
        return self.map[i]

    def image_mask(self) -> int:
        return mask_of(self.map)

    def project(self, z):
        """``φ_h``: works on a single word or elementwise on an integer array."""
        out = z & 0 if isinstance(z, np.ndarray) else 0
        for i, hi in enumerate(self.map):
            out = out | (((z >> hi) & 1) << i)
        return out

    def lift(self, x: int) -> int:
        """Configuration of size ``m`` agreeing with ``x`` on ``h(V)`` and zero elsewhere."""
        z = 0
        for i, hi in enumerate(self.map):
            z |= ((x >> i) & 1) << hi
        return z

    def to_json(self) -> list[int]:
        return list(self.map)


def _same_size(a: int, b: int) -> None:
    if a != b:
        raise NetworkError(f"size mismatch: {a} vs {b}")


def _check_config(F: BooleanNetwork, x: int) -> None:
    if not 0 <= x < F.size:
        raise NetworkError(f"configuration {x} is not a {F.n}-bit word")


def update_block(F: BooleanNetwork, x: int, block: Iterable[int]) -> int:
    """``F_I(x)``: automata in ``block`` take ``f_i(x)``, the rest keep ``x_i``."""
    _check_config(F, x)
    block = list(block)
    if any(not 0 <= i < F.n for i in block):
        raise NetworkError(f"block {block} has automata outside 0..{F.n - 1}")
    m = mask_of(block)
    return (int(F.table[x]) & m) | (x & ~m)


def _check_schedule(F: BooleanNetwork, W: UpdateSchedule) -> None:
    if W.n != F.n:
        raise NetworkError(f"schedule covers {W.n} automata, network has {F.n}")


def partial_parallel_update(F: BooleanNetwork, W: UpdateSchedule, j: int, x: int) -> int:
    """``F_{W_{<j}}(x)``: one simultaneous update of the first ``j`` blocks."""
    _check_schedule(F, W)
    _check_config(F, x)
    m = W.prefix_mask(j)
    return (int(F.table[x]) & m) | (x & ~m)


def prefix_scheduled_update(F: BooleanNetwork, W: UpdateSchedule, j: int, x: int) -> int:
    """``F^{W^{<j}}(x)``: the first ``j`` blocks applied one after the other."""
    _check_schedule(F, W)
    _check_config(F, x)
    if not 0 <= j <= W.p:
        raise NetworkError(f"step {j} outside 0..{W.p}")
    for b in range(j):
        m = W.block_mask(b)
        x = (int(F.table[x]) & m) | (x & ~m)
    return x


def step_scheduled(F: BooleanNetwork, W: UpdateSchedule, x: int) -> int:
    return prefix_scheduled_update(F, W, W.p, x)


def partial_parallel_all(F: BooleanNetwork, W: UpdateSchedule, j: int) -> np.ndarray:
    """``F_{W_{<j}}`` evaluated on every configuration at once."""
    _check_schedule(F, W)
    m = W.prefix_mask(j)
    xs = np.arange(F.size, dtype=np.int64)
    return (F.table & m) | (xs & ~m)


def scheduled_all(F: BooleanNetwork, W: UpdateSchedule, xs: np.ndarray | None = None) -> np.ndarray:
    """``F^W`` evaluated elementwise on ``xs`` (default: every configuration)."""
    _check_schedule(F, W)
    xs = np.arange(F.size, dtype=np.int64) if xs is None else np.asarray(xs, dtype=np.int64)
    for b in range(W.p):
        m = W.block_mask(b)
        xs = (F.table[xs] & m) | (xs & ~m)
    return xs


def scheduled_network(F: BooleanNetwork, W: UpdateSchedule) -> BooleanNetwork:
    """Tabulated ``F^W``; the memoized form for repeated queries."""
    return BooleanNetwork(F.n, scheduled_all(F, W))


def validate_schedule_extension(W: UpdateSchedule, Wp: UpdateSchedule, h: Embedding) -> bool:
    """Whether ``Wp`` orders ``h(V)`` exactly as ``W`` orders ``V``."""
    if W.n != h.n or Wp.n != h.m:
        raise NetworkError(
            f"size mismatch: schedule over {W.n}/{Wp.n} automata, embedding {h.n}->{h.m}"
        )
    src = W.block_index()
    dst = Wp.block_index()
    for i in range(W.n):
        for k in range(W.n):
            if (src[i] <= src[k]) != (dst[h(i)] <= dst[h(k)]):
                return False
    return True


@dataclass(frozen=True)
class SimulationCheck:
    ok: bool
    counterexample: int | None = None
    expected: int | None = None
    got: int | None = None


def simulation_report(
    Fp: BooleanNetwork,
    Wp: UpdateSchedule,
    h: Embedding,
    F: BooleanNetwork,
    W: UpdateSchedule,
) -> SimulationCheck:
    """Exhaustively compare ``φ_h ∘ Fp^{Wp}`` with ``F^W ∘ φ_h`` on all ``2**m`` states.

    On failure the smallest offending ``z`` is reported with both projections.
    """
    if h.n != F.n or h.m != Fp.n:
        raise NetworkError(f"embedding {h.n}->{h.m} does not match networks {F.n}->{Fp.n}")
    _check_schedule(Fp, Wp)
    _check_schedule(F, W)
    zs = np.arange(Fp.size, dtype=np.int64)
    lhs = h.project(scheduled_all(Fp, Wp, zs))
    rhs = scheduled_all(F, W, h.project(zs))
    bad = np.flatnonzero(lhs != rhs)
    if bad.size == 0:
        return SimulationCheck(True)
    z = int(bad[0])
    return SimulationCheck(False, z, int(rhs[z]), int(lhs[z]))


def check_simulation(
    Fp: BooleanNetwork,
    Wp: UpdateSchedule,
    h: Embedding,
    F: BooleanNetwork,
    W: UpdateSchedule,
) -> bool:
    return simulation_report(Fp, Wp, h, F, W).ok
