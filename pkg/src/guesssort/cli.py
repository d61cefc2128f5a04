"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage / parse / spec
error, 3 non-finite key in an input file.
"""

from __future__ import annotations

import argparse
import math
import sys
from collections.abc import Sequence

from . import bench
from .datagen import KINDS, DistributionSpec, generate, provenance
from .errors import (
    InvalidSpec,
    NonFiniteKey,
    RangeOverflow,
    RecordFileError,
    VerificationError,
)
from .mapping import population_moments
from .recordfile import read_records, write_records
from .sorter import (
    box_indices,
    build_mapper,
    quicksort_baseline,
    sort_one_pass,
    sort_two_pass,
    verify_sorted_permutation,
)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_NON_FINITE = 3

SORTERS = {
    "quicksort": lambda keys: quicksort_baseline(keys),
    "gf1": lambda keys: sort_one_pass(keys, "two-terminals")[0],
    "gf1-stat": lambda keys: sort_one_pass(keys, "statistical")[0],
    "gf2": lambda keys: sort_two_pass(keys, "two-terminals")[0],
    "gf2-stat": lambda keys: sort_two_pass(keys, "statistical")[0],
}


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _names(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _dist_params(args: argparse.Namespace) -> dict:
    names = ("lo", "hi", "mean", "sigma", "centers", "spread", "weights", "value", "distinct")
    params = {k: getattr(args, k) for k in names if getattr(args, k) is not None}
    if args.integer:
        params["integer"] = True
    return params


def _add_dist_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("distribution parameters (only those of the chosen kind)")
    g.add_argument("--lo", type=float)
    g.add_argument("--hi", type=float)
    g.add_argument("--integer", action="store_true", help="uniform: whole-number keys")
    g.add_argument("--mean", type=float)
    g.add_argument("--sigma", type=float)
    g.add_argument("--centers", type=_floats, help="clustered: comma-separated centers")
    g.add_argument("--spread", type=float)
    g.add_argument("--weights", type=_floats, help="clustered: comma-separated weights")
    g.add_argument("--value", type=float, help="constant: the repeated key")
    g.add_argument("--distinct", type=int, help="heavy-duplicates: pool size")


def _read(path: str) -> list[float]:
    """Read a record file, converting failures to the documented exit codes."""
    try:
        return read_records(path)
    except RecordFileError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    except NonFiniteKey as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_NON_FINITE)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def cmd_sort(args: argparse.Namespace) -> int:
    keys = _read(args.input)
    out = SORTERS[args.algo](keys)
    if args.verify and not verify_sorted_permutation(keys, out):
        print(f"error: {args.algo} output is not a sorted permutation", file=sys.stderr)
        return EXIT_VERIFY
    write_records(args.output, out)
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    spec = DistributionSpec(args.dist, args.n, args.seed, _dist_params(args))
    try:
        keys = generate(spec)
        header = provenance(spec)
    except InvalidSpec as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    write_records(args.out, keys, header)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    config = bench.BenchConfig(
        algorithms=args.algos,
        scales=args.scales,
        distribution=DistributionSpec(args.dist, 0, 0, _dist_params(args)),
        trials=args.trials,
        warmup=args.warmup,
        seed=args.seed,
    )
    try:
        config.validate()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rows = bench.run_bench(config)
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    if args.out:
        bench.write_csv(rows, args.out)
    print(bench.summary_table(rows))
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    keys = _read(args.input)
    n = len(keys)
    print(f"n                   {n}")
    if not n:
        return EXIT_OK
    try:
        mean, sigma = population_moments(keys)
        mapper = build_mapper(keys, "two-terminals")
    except RangeOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"min                 {min(keys)!r}")
    print(f"max                 {max(keys)!r}")
    print(f"mean                {mean!r}")
    print(f"sigma               {sigma!r}{'  (degenerate)' if sigma == 0 else ''}")
    counts = [0] * mapper.n_boxes
    for b in box_indices(keys, mapper):
        counts[b] += 1
    if mapper.degenerate:
        print("two-terminals mapper degenerate: every record in box 1")
    print(f"empty_box_fraction  {counts.count(0) / mapper.n_boxes:.6f}")
    print(f"max_occupancy       {max(counts)}")
    if n >= 2:
        print(f"reference e^-1      {math.exp(-1):.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="guesssort", description="Sort by calculated positions; benchmark the variants."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sort", help="sort a record file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--algo", choices=sorted(SORTERS), default="gf1")
    p.add_argument("--verify", action="store_true", help="check the output before writing it")
    p.set_defaults(func=cmd_sort)

    p = sub.add_parser("gen", help="generate a record file")
    p.add_argument("--dist", choices=KINDS, default="uniform")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", required=True)
    _add_dist_args(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time the sorting variants across scales")
    p.add_argument("--algos", type=_names, default=list(bench.ALGORITHMS))
    p.add_argument(
        "--scales",
        type=_ints,
        default=list(bench.DEFAULT_SCALES),
        help="comma-separated exponents k; each scale is 2^k records",
    )
    p.add_argument("--dist", choices=KINDS, default="uniform")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--warmup", type=int, default=0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", help="CSV destination")
    _add_dist_args(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("stats", help="summarise a record file and its box occupancy")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
