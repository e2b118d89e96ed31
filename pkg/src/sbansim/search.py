"""Worst-case search for the number of added automata over size-``n`` SBANs.

Instances are addressed by an integer index so any worker can rebuild one from
``(n, strategy, seed, index)`` alone.  Reports are reduced in index order, which
keeps results identical for any number of workers.
"""

from __future__ import annotations

import functools
import itertools
import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .coloring import DEFAULT_BUDGET
from .confusability import DEFAULT_MAX_N, ResourceLimitError
from .core import BooleanNetwork, UpdateSchedule
from .generators import random_network, random_bijective, swap_network
from .synthesis import conjecture_bound, kappa, theorem_bound

log = logging.getLogger(__name__)

EXHAUSTIVE_MAX_N = 3


@functools.lru_cache(maxsize=8)
def _ordered_partitions(n: int) -> tuple[UpdateSchedule, ...]:
    out = []
    for blocks in _set_partitions(list(range(n))):
        for perm in itertools.permutations(blocks):
            out.append(UpdateSchedule(perm, n))
    return tuple(out)


def ordered_partitions(n: int) -> list[UpdateSchedule]:
    """Every block-sequential schedule of ``n`` automata (ordered set partitions)."""
    return list(_ordered_partitions(n))


def _set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def schedule_with_blocks(n: int, p: int, rng: np.random.Generator) -> UpdateSchedule:
    """Random ordered partition with exactly ``p`` blocks."""
    order = rng.permutation(n).tolist()
    cuts = sorted(rng.choice(np.arange(1, n), size=p - 1, replace=False).tolist()) if p > 1 else []
    bounds = [0] + cuts + [n]
    return UpdateSchedule([order[a:b] for a, b in zip(bounds, bounds[1:])], n)


@dataclass
class SearchConfig:
    n: int
    strategy: str = "random"
    budget: int = 10_000
    seed: int = 0
    chi_budget: int = DEFAULT_BUDGET
    prune_schedules: bool | None = None
    include_swap: bool = True
    bijective: bool = False
    stratify: bool = False

    def __post_init__(self):
        if self.strategy not in ("exhaustive", "random"):
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.strategy == "exhaustive" and self.n > EXHAUSTIVE_MAX_N:
            raise ResourceLimitError(
                f"exhaustive search is only feasible for n <= {EXHAUSTIVE_MAX_N}, got n={self.n}"
            )
        if self.strategy == "random" and self.n > DEFAULT_MAX_N:
            raise ResourceLimitError(f"n={self.n} exceeds the graph-size cap of {DEFAULT_MAX_N}")
        if self.budget < 0:
            raise ValueError("budget must be non-negative")
        if self.prune_schedules is None:
            # n = 3 has 2**24 networks; only simple sequential schedules matter for the maximum
            self.prune_schedules = self.strategy == "exhaustive" and self.n >= 3


@dataclass
class SearchReport:
    n: int
    strategy: str
    seed: int
    instances: int = 0
    total_instances: int | None = None
    complete: bool = False
    worst_kappa: int | None = None
    worst_lower: int | None = None
    worst_upper: int | None = None
    worst_exact: bool = True
    witness: dict | None = None
    conjecture_bound: int = 0
    theorem_bound: float = 0.0
    conjecture_status: str = "respected"
    counterexamples: list[dict] = field(default_factory=list)
    bound_violations: list[dict] = field(default_factory=list)
    kappa_histogram: dict[str, int] = field(default_factory=dict)
    inexact_instances: int = 0
    undecided_instances: int = 0
    elapsed_seconds: float = 0.0
    cursor: int = 0
    config: dict = field(default_factory=dict)
    free_order: dict | None = None

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> SearchReport:
        known = set(cls.__dataclass_fields__)
        return cls(**{k: v for k, v in obj.items() if k in known})


def _instance_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed & (2**64 - 1), index]).generate_state(1, np.uint64)[0])


def total_instances(cfg: SearchConfig) -> int:
    if cfg.strategy == "random":
        return cfg.budget
    nets = 1 << (cfg.n * (1 << cfg.n))
    schedules = 1 if cfg.prune_schedules else len(ordered_partitions(cfg.n))
    return nets * schedules


def build_instance(cfg: SearchConfig, index: int) -> tuple[BooleanNetwork, UpdateSchedule, dict]:
    """The ``index``-th instance of a search and a JSON description of its origin."""
    n = cfg.n
    if cfg.strategy == "exhaustive":
        schedules = (UpdateSchedule.sequential(n),) if cfg.prune_schedules else _ordered_partitions(n)
        net_index, s_index = divmod(index, len(schedules))
        width, mask = n, (1 << n) - 1
        table = [(net_index >> (width * x)) & mask for x in range(1 << n)]
        return BooleanNetwork(n, table), schedules[s_index], {"kind": "enumerated", "index": index}
    if cfg.include_swap and index == 0 and n >= 2:
        F, W = swap_network(n)
        return F, W, {"kind": "swap", "n": n}
    sub = _instance_seed(cfg.seed, index)
    F = random_bijective(n, sub) if cfg.bijective else random_network(n, sub)
    rng = np.random.Generator(np.random.Philox(key=sub | (4 << 64)))
    if cfg.stratify:
        p = 1 + index % n
    else:
        p = int(rng.integers(1, n + 1))
    W = schedule_with_blocks(n, p, rng)
    kind = "random-bijective" if cfg.bijective else "random"
    return F, W, {"kind": kind, "n": n, "seed": sub, "blocks": p}


def evaluate_instance(cfg: SearchConfig, index: int) -> dict:
    F, W, origin = build_instance(cfg, index)
    res = kappa(F, W, budget=cfg.chi_budget, witness=False, verify=False)
    return {
        "index": index,
        "lower": res.lower,
        "upper": res.upper,
        "exact": res.exact,
        "omega": res.clique_size,
        "origin": origin,
    }


def _evaluate_chunk(args: tuple[dict, int, int]) -> list[dict]:
    cfg_dict, start, stop = args
    cfg = SearchConfig(**cfg_dict)
    return [evaluate_instance(cfg, i) for i in range(start, stop)]


def _witness(cfg: SearchConfig, rec: dict) -> dict:
    F, W, origin = build_instance(cfg, rec["index"])
    return {"origin": origin, "network": F.to_json(), "schedule": W.to_json()}


def _absorb(report: SearchReport, cfg: SearchConfig, rec: dict) -> None:
    lo, hi, exact = rec["lower"], rec["upper"], rec["exact"]
    report.instances += 1
    report.cursor = rec["index"] + 1
    if exact:
        report.kappa_histogram[str(hi)] = report.kappa_histogram.get(str(hi), 0) + 1
    else:
        report.inexact_instances += 1
    if exact and hi > report.theorem_bound:
        report.bound_violations.append({"kappa": hi, **_witness(cfg, rec)})
    if lo <= report.conjecture_bound < hi:
        report.undecided_instances += 1
    if lo > report.conjecture_bound:
        report.counterexamples.append({"kappa_lower": lo, "kappa_upper": hi, **_witness(cfg, rec)})
    # worst case ordered by certified lower bound, then upper, then first index seen
    key = (lo, hi)
    if report.worst_lower is None or key > (report.worst_lower, report.worst_upper):
        report.worst_lower, report.worst_upper, report.worst_exact = lo, hi, exact
        report.worst_kappa = hi if exact else None
        report.witness = {"kappa_lower": lo, "kappa_upper": hi, "omega": rec["omega"], **_witness(cfg, rec)}
    _update_status(report)


def _update_status(report: SearchReport) -> None:
    if report.counterexamples:
        report.conjecture_status = "violated"
    elif report.undecided_instances:
        report.conjecture_status = "undecided"
    else:
        report.conjecture_status = "respected"


def _write_atomic(path: Path, obj: dict) -> None:
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(obj, indent=1))
    os.replace(tmp, path)


def search_worst_kappa(
    n: int,
    strategy: str = "random",
    budget: int = 10_000,
    seed: int = 0,
    *,
    chi_budget: int = DEFAULT_BUDGET,
    prune_schedules: bool | None = None,
    include_swap: bool = True,
    bijective: bool = False,
    stratify: bool = False,
    threads: int = 1,
    checkpoint: str | os.PathLike | None = None,
    checkpoint_every: int = 1000,
    counterexample_path: str | os.PathLike | None = None,
) -> SearchReport:
    """Largest ``κ(F, W)`` found over size-``n`` SBANs.

    ``exhaustive`` walks every network and schedule (at most ``budget``
    instances when ``budget > 0``); ``random`` samples ``budget`` instances,
    the first being the swap network when ``include_swap`` is set.  With a
    ``checkpoint`` path the report is flushed every ``checkpoint_every``
    instances and an existing compatible checkpoint is resumed.
    """
    cfg = SearchConfig(
        n, strategy, budget, seed, chi_budget, prune_schedules, include_swap, bijective, stratify
    )
    total = total_instances(cfg)
    stop = total if strategy == "random" or budget == 0 else min(total, budget)
    report = SearchReport(n, strategy, seed, total_instances=total)
    report.conjecture_bound = conjecture_bound(n)
    report.theorem_bound = theorem_bound(n)
    report.config = asdict(cfg)
    ckpt = Path(checkpoint) if checkpoint is not None else None
    if ckpt is not None and ckpt.exists():
        saved = SearchReport.from_json(json.loads(ckpt.read_text()))
        if saved.config == report.config:
            report = saved
            log.info("resuming search at instance %d", report.cursor)
        else:
            log.warning("checkpoint %s has a different configuration; starting over", ckpt)
    started = time.perf_counter() - report.elapsed_seconds
    seen_cex = len(report.counterexamples)

    def flush() -> None:
        nonlocal seen_cex
        report.elapsed_seconds = time.perf_counter() - started
        report.complete = report.cursor >= total
        if ckpt is not None:
            _write_atomic(ckpt, report.to_json())
        if counterexample_path is not None and len(report.counterexamples) > seen_cex:
            _write_atomic(Path(counterexample_path), {"counterexamples": report.counterexamples})
            seen_cex = len(report.counterexamples)

    chunk = max(1, min(checkpoint_every, 256))
    starts = list(range(report.cursor, stop, chunk))
    jobs = [(asdict(cfg), s, min(s + chunk, stop)) for s in starts]
    since_flush = 0
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = pool.map(_evaluate_chunk, jobs)
            for recs in results:
                for rec in recs:
                    _absorb(report, cfg, rec)
                since_flush += len(recs)
                if since_flush >= checkpoint_every:
                    flush()
                    since_flush = 0
    else:
        for job in jobs:
            recs = _evaluate_chunk(job)
            for rec in recs:
                _absorb(report, cfg, rec)
            since_flush += len(recs)
            if since_flush >= checkpoint_every:
                flush()
                since_flush = 0
    flush()
    return report


def kappa_histogram(report: SearchReport) -> Counter:
    return Counter({int(k): v for k, v in report.kappa_histogram.items()})
