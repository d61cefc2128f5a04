"""Timing harness and box-occupancy experiments.

Each (scale, trial) pair gets its own seed, derived from the base seed, and
one generated data set that every algorithm sorts in turn.  Only the sort
call sits inside the timed region; generation and verification do not.
Timed calls run with the cyclic garbage collector paused, the same
convention ``timeit`` follows.
"""

from __future__ import annotations

import csv
import gc
import os
import statistics
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from time import perf_counter
from typing import Optional

from .datagen import DistributionSpec, generate, validate
from .errors import VerificationError
from .mapping import TwoTerminalMapper
from .sorter import (
    SortStats,
    box_indices,
    build_mapper,
    quicksort_baseline,
    sort_one_pass,
    sort_two_pass,
    verify_sorted_permutation,
)

SortFn = Callable[[list], "tuple[list, Optional[SortStats]]"]


def _quicksort(keys: list) -> tuple[list, None]:
    return quicksort_baseline(keys), None


ALGORITHMS: dict[str, SortFn] = {
    "quicksort": _quicksort,
    "gf1-two-terminals": lambda keys: sort_one_pass(keys, "two-terminals"),
    "gf1-statistical": lambda keys: sort_one_pass(keys, "statistical"),
    "gf2-two-terminals": lambda keys: sort_two_pass(keys, "two-terminals"),
    "gf2-statistical": lambda keys: sort_two_pass(keys, "statistical"),
}

ALIASES = {
    "gf1": "gf1-two-terminals",
    "gf1-stat": "gf1-statistical",
    "gf2": "gf2-two-terminals",
    "gf2-stat": "gf2-statistical",
}

DEFAULT_SCALES = (8, 11, 14, 17, 20)

# Historical reference timings in seconds (AMD Athlon 2000+, gcc 3.3.2, no
# optimisation).  Context only: nothing compares against them.
REFERENCE_TIMINGS = {
    "quicksort": {8: 0.000075, 11: 0.000525, 14: 0.005425, 17: 0.058475, 20: 0.600225},
    "gf1-two-terminals": {8: 0.000025, 11: 0.00025, 14: 0.002575, 17: 0.056725, 20: 0.603525},
    "gf1-statistical": {8: 0.000025, 11: 0.00005, 14: 0.00275, 17: 0.05105, 20: 0.60855},
    "gf2-two-terminals": {8: 0.000075, 11: 0.0003, 14: 0.00365, 17: 0.0848},
    "gf2-statistical": {8: 0.00005, 11: 0.00045, 14: 0.0043, 17: 0.081975},
}

CSV_HEADER = (
    "algorithm",
    "scale",
    "distribution",
    "trial",
    "seed",
    "elapsed_s",
    "empty_box_fraction",
    "max_occupancy",
    "cleanup_moves",
)


def resolve_algorithm(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in ALGORITHMS:
        choices = sorted(set(ALGORITHMS) | set(ALIASES))
        raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(choices)}")
    return name


@dataclass
class BenchConfig:
    algorithms: Sequence[str] = tuple(ALGORITHMS)
    scales: Sequence[int] = DEFAULT_SCALES
    distribution: DistributionSpec = field(
        default_factory=lambda: DistributionSpec("uniform", 0)
    )
    trials: int = 5
    warmup: int = 0
    seed: int = 1
    pause_gc: bool = True

    def validate(self) -> None:
        if not self.algorithms:
            raise ValueError("no algorithms selected")
        self.algorithms = [resolve_algorithm(a) for a in self.algorithms]
        if not self.scales:
            raise ValueError("no scales selected")
        if any(not isinstance(k, int) or not 0 <= k <= 40 for k in self.scales):
            raise ValueError(f"scale exponents must be integers in 0..40, got {list(self.scales)}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.warmup < 0:
            raise ValueError("warmup must be >= 0")
        validate(self.distribution.with_seed(0))


@dataclass
class BenchRow:
    algorithm: str
    scale: int
    distribution: str
    trial: int
    seed: int
    elapsed_s: float
    empty_box_fraction: Optional[float] = None
    max_occupancy: Optional[int] = None
    cleanup_moves: Optional[int] = None


def trial_seed(base: int, exponent: int, trial: int) -> int:
    """Per-trial seed; depends on scale and trial, never on the algorithm."""
    return (base * 1_000_003 + exponent * 10_007 + trial) % (1 << 64)


def _timed(fn: SortFn, keys: list, pause_gc: bool) -> tuple[float, list, Optional[SortStats]]:
    if pause_gc:
        gc.collect()
        gc.disable()
    try:
        t0 = perf_counter()
        out, stats = fn(keys)
        elapsed = perf_counter() - t0
    finally:
        if pause_gc:
            gc.enable()
    return elapsed, out, stats


def run_bench(
    config: BenchConfig, progress: Callable[[BenchRow], None] | None = None
) -> list[BenchRow]:
    """Time every (scale, trial, algorithm) combination; abort on a wrong sort."""
    config.validate()
    template = config.distribution
    rows: list[BenchRow] = []
    for exp in config.scales:
        n = 1 << exp
        for trial in range(config.trials):
            seed = trial_seed(config.seed, exp, trial)
            keys = generate(template.with_n(n).with_seed(seed))
            if trial == 0:
                for _ in range(config.warmup):
                    for name in config.algorithms:
                        ALGORITHMS[name](keys)
            for name in config.algorithms:
                elapsed, out, stats = _timed(ALGORITHMS[name], keys, config.pause_gc)
                if not verify_sorted_permutation(keys, out):
                    raise VerificationError(
                        f"{name} at scale 2^{exp} (seed {seed}) did not return "
                        "a sorted permutation of its input"
                    )
                row = BenchRow(name, n, template.kind, trial, seed, elapsed)
                if stats is not None:
                    row.empty_box_fraction = stats.empty_box_fraction
                    row.max_occupancy = stats.max_occupancy
                    row.cleanup_moves = stats.cleanup_moves
                rows.append(row)
                if progress is not None:
                    progress(row)
    return rows


def median_elapsed(rows: Iterable[BenchRow]) -> dict[tuple[str, int], float]:
    groups: dict[tuple[str, int], list[float]] = {}
    for r in rows:
        groups.setdefault((r.algorithm, r.scale), []).append(r.elapsed_s)
    return {key: statistics.median(v) for key, v in groups.items()}


def cost_ratios(rows: Iterable[BenchRow]) -> dict[tuple[str, int], float]:
    """Median gf2 time over median gf1 time, per mapper kind and scale."""
    med = median_elapsed(rows)
    ratios = {}
    for kind in ("two-terminals", "statistical"):
        for (alg, scale), t2 in med.items():
            if alg != f"gf2-{kind}":
                continue
            t1 = med.get((f"gf1-{kind}", scale))
            if t1:
                ratios[(kind, scale)] = t2 / t1
    return ratios


def summary_table(rows: Sequence[BenchRow]) -> str:
    med = median_elapsed(rows)
    algs = list(dict.fromkeys(r.algorithm for r in rows))
    scales = sorted({r.scale for r in rows})
    width = max([len("algorithm")] + [len(a) for a in algs])
    head = "algorithm".ljust(width) + "".join(f"{'2^%d' % (s.bit_length() - 1):>12}" for s in scales)
    lines = [f"median elapsed seconds over {len(rows) // max(1, len(med))} trial(s)", head]
    for a in algs:
        cells = "".join(
            f"{med[(a, s)]:>12.6f}" if (a, s) in med else f"{'-':>12}" for s in scales
        )
        lines.append(a.ljust(width) + cells)
    ratios = cost_ratios(rows)
    if ratios:
        lines.append("")
        lines.append("gf2 / gf1 elapsed ratio")
        for (kind, scale), r in sorted(ratios.items()):
            lines.append(f"  {kind:<14} 2^{scale.bit_length() - 1:<3} {r:.2f}")
    return "\n".join(lines)


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: Iterable[BenchRow], destination: str | os.PathLike) -> None:
    """One line per row; ``elapsed_s`` with 6 fractional digits, other floats exact."""
    try:
        with open(destination, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_HEADER)
            for r in rows:
                w.writerow(
                    [
                        r.algorithm,
                        r.scale,
                        r.distribution,
                        r.trial,
                        r.seed,
                        f"{r.elapsed_s:.6f}",
                        _cell(r.empty_box_fraction),
                        _cell(r.max_occupancy),
                        _cell(r.cleanup_moves),
                    ]
                )
    except OSError as exc:
        raise OSError(f"cannot write bench CSV to {os.fspath(destination)!r}: {exc}") from exc


def read_csv(source: str | os.PathLike) -> list[BenchRow]:
    def opt(cast, text):
        return cast(text) if text != "" else None

    with open(source, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {header!r}")
        return [
            BenchRow(
                alg,
                int(scale),
                dist,
                int(trial),
                int(seed),
                float(elapsed),
                opt(float, frac),
                opt(int, occ),
                opt(int, moves),
            )
            for alg, scale, dist, trial, seed, elapsed, frac, occ, moves in reader
        ]


@dataclass
class OccupancyResult:
    empty_fraction: float
    mean_nonempty_occupancy: float


def occupancy_experiment(
    n: int,
    trials: int,
    seed: int,
    distribution: DistributionSpec | None = None,
    support: bool = False,
) -> OccupancyResult:
    """Scatter fresh data into n boxes per trial and average the occupancy figures.

    By default the two-terminals mapper is built from each sample, exactly
    as the sort does.  With ``support=True`` the n boxes instead split the
    generator's ``[lo, hi)`` range into equal widths, so every box is
    equally likely; only uniform distributions have such a range.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    spec = distribution or DistributionSpec("uniform", n)
    empty_fracs: list[float] = []
    occupancies: list[float] = []
    for trial in range(trials):
        keys = generate(spec.with_n(n).with_seed(trial_seed(seed, 0, trial)))
        if support:
            p = validate(spec)
            if spec.kind != "uniform":
                raise ValueError("support boxes need a uniform distribution")
            # n + 1 terminals over [lo, hi]: n equal-width boxes below hi
            mapper = TwoTerminalMapper.from_bounds(p["lo"], p["hi"], n + 1)
        else:
            mapper = build_mapper(keys, "two-terminals")
        hit = set(box_indices(keys, mapper))
        if n in hit:
            # support mode: a key rounding onto hi joins the last real box
            hit.discard(n)
            hit.add(n - 1)
        used = len(hit)
        empty_fracs.append((n - used) / n)
        occupancies.append(n / used)
    return OccupancyResult(statistics.fmean(empty_fracs), statistics.fmean(occupancies))


def empty_box_experiment(
    n: int,
    trials: int,
    seed: int,
    distribution: DistributionSpec | None = None,
    support: bool = False,
) -> float:
    """Mean fraction of the n boxes left empty after scattering n keys."""
    return occupancy_experiment(n, trials, seed, distribution, support).empty_fraction
