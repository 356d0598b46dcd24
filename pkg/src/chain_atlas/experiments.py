"""Monte-Carlo study of the penalty of keeping only the fan-out orderings.

Every sample draws its dimensions from its own Philox substream (key = seed,
counter offset = sample index), so results do not depend on how samples are
partitioned across workers.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import ChainError, Instance
from .penalty import format_decimal
from .solvers import best_essential, optimal_cost

CSV_HEADER = ("n", "sample_index", "dims", "t_opt", "t_best_essential", "best_essential_h", "penalty")
HISTOGRAM_BINS = 100
QUANTILES = {"p50": Fraction(1, 2), "p90": Fraction(9, 10), "p99": Fraction(99, 100)}


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    samples: int
    dim_min: int = 1
    dim_max: int = 1000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.n < 2:
            raise ChainError(f"n must be at least 2, got {self.n}")
        if self.samples < 1:
            raise ChainError(f"samples must be at least 1, got {self.samples}")
        if not 1 <= self.dim_min <= self.dim_max:
            raise ChainError(f"need 1 <= dim_min <= dim_max, got {self.dim_min}, {self.dim_max}")
        if not 0 <= self.seed < 2**64:
            raise ChainError("seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise ChainError(f"workers must be at least 1, got {self.workers}")


@dataclass(frozen=True)
class SampleRecord:
    n: int
    sample_index: int
    dims: tuple[int, ...]
    t_opt: int
    t_best_essential: int
    best_essential_h: int
    penalty: Fraction

    def csv_row(self) -> list[str]:
        return [
            str(self.n),
            str(self.sample_index),
            ";".join(map(str, self.dims)),
            str(self.t_opt),
            str(self.t_best_essential),
            str(self.best_essential_h),
            format_decimal(self.penalty),
        ]


@dataclass
class ExperimentSummary:
    n: int
    samples: int
    fraction_nonzero: Fraction
    mean_nonzero_penalty: Fraction | None
    p50: Fraction | None
    p90: Fraction | None
    p99: Fraction | None
    max: Fraction | None
    histogram: list[int] = field(default_factory=lambda: [0] * HISTOGRAM_BINS)

    def to_json(self, cfg: ExperimentConfig | None = None) -> dict:
        def num(x):
            return None if x is None else float(x)

        out = {"n": self.n, "samples": self.samples}
        if cfg is not None:
            out.update(seed=cfg.seed, dim_min=cfg.dim_min, dim_max=cfg.dim_max)
        out.update(
            fraction_nonzero=num(self.fraction_nonzero),
            mean_nonzero_penalty=num(self.mean_nonzero_penalty),
            p50=num(self.p50),
            p90=num(self.p90),
            p99=num(self.p99),
            max=num(self.max),
            histogram=list(self.histogram),
        )
        return out


def sample_dims(cfg: ExperimentConfig, index: int) -> tuple[int, ...]:
    # word 2 of the 256-bit counter separates substreams by 2**128 blocks
    bitgen = np.random.Philox(key=cfg.seed, counter=[0, 0, index, 0])
    rng = np.random.Generator(bitgen)
    # bounded integers are drawn by rejection (Lemire), free of modulo bias
    draws = rng.integers(cfg.dim_min, cfg.dim_max, size=cfg.n + 1, endpoint=True)
    return tuple(int(d) for d in draws)


def evaluate_sample(cfg: ExperimentConfig, index: int) -> SampleRecord:
    dims = sample_dims(cfg, index)
    inst = Instance(dims)
    t_opt = optimal_cost(dims)
    best = best_essential(inst)
    return SampleRecord(
        cfg.n, index, dims, t_opt, best.cost, best.h, Fraction(best.cost, t_opt) - 1
    )


def _evaluate_range(cfg: ExperimentConfig, start: int, stop: int) -> list[SampleRecord]:
    return [evaluate_sample(cfg, i) for i in range(start, stop)]


def _chunks(total: int, parts: int) -> list[tuple[int, int]]:
    size = max(1, math.ceil(total / parts))
    return [(lo, min(lo + size, total)) for lo in range(0, total, size)]


def run_experiment(cfg: ExperimentConfig) -> tuple[list[SampleRecord], ExperimentSummary]:
    if cfg.workers == 1 or cfg.samples < 1000:
        records = _evaluate_range(cfg, 0, cfg.samples)
    else:
        records = []
        # several chunks per worker smooths out uneven progress
        spans = _chunks(cfg.samples, cfg.workers * 4)
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_evaluate_range, cfg, lo, hi) for lo, hi in spans]
            for fut in futures:
                records.extend(fut.result())
        records.sort(key=lambda r: r.sample_index)
    return records, summarize(records)


def _nearest_rank(sorted_vals: Sequence[Fraction], p: Fraction) -> Fraction:
    rank = max(1, math.ceil(p * len(sorted_vals)))
    return sorted_vals[rank - 1]


def summarize(records: Sequence[SampleRecord]) -> ExperimentSummary:
    if not records:
        raise ChainError("cannot summarise an empty record set")
    ns = {r.n for r in records}
    if len(ns) != 1:
        raise ChainError(f"records mix chain lengths {sorted(ns)}")
    nonzero = sorted(r.penalty for r in records if r.penalty != 0)
    hist = [0] * HISTOGRAM_BINS
    for p in nonzero:
        hist[min(math.floor(p * HISTOGRAM_BINS), HISTOGRAM_BINS - 1)] += 1
    summary = ExperimentSummary(
        n=ns.pop(),
        samples=len(records),
        fraction_nonzero=Fraction(len(nonzero), len(records)),
        mean_nonzero_penalty=None,
        p50=None,
        p90=None,
        p99=None,
        max=None,
        histogram=hist,
    )
    if nonzero:
        summary.mean_nonzero_penalty = sum(nonzero, Fraction(0)) / len(nonzero)
        for name, p in QUANTILES.items():
            setattr(summary, name, _nearest_rank(nonzero, p))
        summary.max = nonzero[-1]
    return summary


def write_csv(records: Sequence[SampleRecord], path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(r.csv_row())


def read_csv(path: str | os.PathLike) -> list[SampleRecord]:
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ChainError(f"unexpected CSV header {reader.fieldnames}")
        for row in reader:
            t_opt = int(row["t_opt"])
            t_best = int(row["t_best_essential"])
            records.append(
                SampleRecord(
                    n=int(row["n"]),
                    sample_index=int(row["sample_index"]),
                    dims=tuple(int(x) for x in row["dims"].split(";")),
                    t_opt=t_opt,
                    t_best_essential=t_best,
                    best_essential_h=int(row["best_essential_h"]),
                    # recomputed exactly rather than trusting the rounded text
                    penalty=Fraction(t_best, t_opt) - 1,
                )
            )
    return records


def write_summary(summary: ExperimentSummary, cfg: ExperimentConfig, path: str | os.PathLike) -> None:
    Path(path).write_text(
        json.dumps(summary.to_json(cfg), indent=2) + "\n", encoding="utf-8"
    )
