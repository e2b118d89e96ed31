"""Named example networks and seeded random families.

Random kinds draw from numpy's Philox counter-based generator keyed by the
seed, so a given ``(n, seed)`` produces the same table on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .confusability import DEFAULT_MAX_N, ResourceLimitError
from .core import BooleanNetwork, NetworkError, UpdateSchedule, from_string

KINDS = ("swap", "figure4", "random", "random-bijective", "constant", "identity")
SCHEDULE_KINDS = ("sequential", "parallel", "random")


def _rng(seed: int, stream: int = 0) -> np.random.Generator:
    # Philox takes a 128-bit key: seed in the low word, stream id in the high word.
    key = (int(seed) & (2**64 - 1)) | (stream << 64)
    return np.random.Generator(np.random.Philox(key=key))


def swap_network(n: int) -> tuple[BooleanNetwork, UpdateSchedule]:
    """Automata ``i`` and ``i + h`` exchange states, ``h = n // 2``.

    For odd ``n`` the last automaton copies itself.  The schedule is simple
    sequential.
    """
    if n < 2:
        raise NetworkError("swap network needs n >= 2")
    half = n // 2
    lo = (1 << half) - 1

    def step(x: int) -> int:
        a = x & lo
        b = (x >> half) & lo
        rest = x >> (2 * half)
        return b | (a << half) | (rest << (2 * half))

    return BooleanNetwork.from_function(n, step), UpdateSchedule.sequential(n)


def figure_example() -> tuple[BooleanNetwork, UpdateSchedule]:
    """Four-automaton network whose NECC and INECC graphs need 2 and 3 colors."""
    special = {"0000": "0000", "1100": "0000", "1000": "0100", "0100": "0101"}
    table = [from_string("1111")] * 16
    for x, y in special.items():
        table[from_string(x)] = from_string(y)
    return BooleanNetwork(4, table), UpdateSchedule.sequential(4)


def identity_network(n: int) -> BooleanNetwork:
    return BooleanNetwork(n, np.arange(1 << n))


def constant_network(n: int, value: int = 0) -> BooleanNetwork:
    return BooleanNetwork(n, np.full(1 << n, value))


def _check_cap(n: int, max_n: int) -> None:
    if n < 1:
        raise NetworkError("n must be at least 1")
    if n > max_n:
        raise ResourceLimitError(f"n={n} exceeds the generator cap of {max_n}")


def random_network(n: int, seed: int, max_n: int = DEFAULT_MAX_N) -> BooleanNetwork:
    """Each table entry drawn uniformly from the ``2**n`` words."""
    _check_cap(n, max_n)
    return BooleanNetwork(n, _rng(seed, 1).integers(0, 1 << n, size=1 << n, dtype=np.int64))


def random_bijective(n: int, seed: int, max_n: int = DEFAULT_MAX_N) -> BooleanNetwork:
    """Uniformly random permutation of the configurations."""
    _check_cap(n, max_n)
    return BooleanNetwork(n, _rng(seed, 2).permutation(1 << n))


def random_schedule(n: int, seed: int) -> UpdateSchedule:
    """Random ordered partition: shuffled automata cut at random points."""
    rng = _rng(seed, 3)
    order = rng.permutation(n).tolist()
    cuts = rng.integers(0, 2, size=max(n - 1, 0)).tolist()
    blocks, cur = [], [order[0]]
    for i, c in zip(order[1:], cuts):
        if c:
            blocks.append(cur)
            cur = []
        cur.append(i)
    blocks.append(cur)
    return UpdateSchedule(blocks, n)


def random_sban(n: int, seed: int, bijective: bool = False) -> tuple[BooleanNetwork, UpdateSchedule]:
    F = random_bijective(n, seed) if bijective else random_network(n, seed)
    return F, random_schedule(n, seed)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int = 4
    seed: int = 0
    schedule: str = "sequential"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise NetworkError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        if self.schedule not in SCHEDULE_KINDS:
            raise NetworkError(f"unknown schedule kind {self.schedule!r}")
        if self.n < 1:
            raise NetworkError("n must be at least 1")

    def build(self, max_n: int = DEFAULT_MAX_N) -> tuple[BooleanNetwork, UpdateSchedule]:
        if self.kind == "figure4":
            return figure_example()
        if self.kind == "swap":
            F, W = swap_network(self.n)
        elif self.kind == "random":
            F = random_network(self.n, self.seed, max_n)
        elif self.kind == "random-bijective":
            F = random_bijective(self.n, self.seed, max_n)
        elif self.kind == "constant":
            F = constant_network(self.n)
        else:
            F = identity_network(self.n)
        if self.kind != "swap" or self.schedule != "sequential":
            W = {
                "sequential": lambda: UpdateSchedule.sequential(self.n),
                "parallel": lambda: UpdateSchedule.parallel(self.n),
                "random": lambda: random_schedule(self.n, self.seed),
            }[self.schedule]()
        return F, W

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "seed": self.seed, "schedule": self.schedule}

    @classmethod
    def from_json(cls, obj: dict) -> GeneratorSpec:
        return cls(obj["kind"], int(obj.get("n", 4)), int(obj.get("seed", 0)), obj.get("schedule", "sequential"))

