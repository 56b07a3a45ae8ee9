"""Batch command-line front end.

Subcommands: build (tree + stats files), eval (multi-seed quality and
timing report), bench (size/dimension grid to CSV), gen-blobs (synthetic
data). Exit codes are stable: 1 bad usage, 2 bad data or I/O, 3 broken
internal invariant; stderr messages carry matching USAGE:/DATA:/INTERNAL:
prefixes.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from statistics import fmean

import numba
import numpy as np

from .errors import DataError, InternalError, UsageError
from .io import BlobSpec, gen_blobs, load_points, save_matrix, write_stats, write_tree
from .mst import exact_mst_prim, relative_error
from .pipeline import FamstConfig, famst

__all__ = ["main"]

_PHASES = ("ann", "connect", "refine", "mst", "total")


class _Parser(argparse.ArgumentParser):
    # argparse would exit(2) on flag errors; route through the usage path
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> list:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise UsageError(f"expected a non-empty list, got {text!r}")
    return values


def _apply_thread_cap() -> None:
    raw = os.environ.get("FAMST_THREADS")
    if raw is None:
        return
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"FAMST_THREADS must be an integer, got {raw!r}") from None
    if cap < 1:
        raise UsageError(f"FAMST_THREADS must be >= 1, got {cap}")
    numba.set_num_threads(min(cap, numba.get_num_threads()))


def _build_parser() -> _Parser:
    parser = _Parser(prog="famst", description="Approximate minimum spanning trees")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a tree for one input file")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--lambda", dest="n_bridges", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=("descent", "exact"), default="descent")
    p.add_argument("--output", required=True)
    p.add_argument("--stats")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("eval", help="multi-seed quality/timing report")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--lambda", dest="n_bridges", type=int, default=5)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--exact-gate", type=int, default=20_000)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("bench", help="blob grid benchmark to CSV")
    p.add_argument("--sizes", required=True, type=_int_list)
    p.add_argument("--dims", required=True, type=_int_list)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--lambda", dest="n_bridges", type=int, default=5)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("gen-blobs", help="write a synthetic blob dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--centers", type=int, default=10)
    p.add_argument("--std", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_gen_blobs)

    return parser


def _cmd_build(args) -> int:
    x = load_points(args.input)
    cfg = FamstConfig(
        k=args.k, n_bridges=args.n_bridges, seed=args.seed, backend=args.backend
    )
    tree, stats = famst(x, cfg)
    write_tree(args.output, tree)
    if args.stats:
        write_stats(args.stats, stats)
    print(
        f"n={stats.n} d={stats.d} t={stats.t} r={stats.r} "
        f"total_weight={stats.total_weight!r} -> {args.output}"
    )
    return 0


def _timing_fields(stats) -> list:
    return [
        stats.ann_seconds,
        stats.connect_seconds,
        stats.refine_seconds,
        stats.mst_seconds,
        stats.total_seconds,
    ]


def _cmd_eval(args) -> int:
    if args.runs < 1:
        raise UsageError(f"--runs must be >= 1, got {args.runs}")
    x = load_points(args.input)
    exact_tree = None
    if x.n <= args.exact_gate:
        exact_tree = exact_mst_prim(x)
    else:
        print(
            f"note: n={x.n} above exact gate {args.exact_gate}; "
            "relative error skipped"
        )
    errors = []
    timings = []
    for run in range(args.runs):
        cfg = FamstConfig(k=args.k, n_bridges=args.n_bridges, seed=run)
        tree, stats = famst(x, cfg)
        fields = _timing_fields(stats)
        timings.append(fields)
        line = f"run {run}:"
        if exact_tree is not None:
            err = relative_error(tree.total_weight, exact_tree.total_weight)
            errors.append(err)
            line += f" rel_err {err * 100:.12g}%"
        line += "".join(
            f" {name} {value:.12g}s" for name, value in zip(_PHASES, fields)
        )
        print(line)
    line = "mean:"
    if errors:
        line += f" rel_err {fmean(errors) * 100:.12g}%"
    means = [fmean(col) for col in zip(*timings)]
    line += "".join(f" {name} {value:.12g}s" for name, value in zip(_PHASES, means))
    print(line)
    return 0


def _cmd_bench(args) -> int:
    if args.repeats < 1:
        raise UsageError(f"--repeats must be >= 1, got {args.repeats}")
    rows = 0
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "n",
                "d",
                "repeat",
                "seed",
                "t",
                "r",
                "ann_seconds",
                "connect_seconds",
                "refine_seconds",
                "mst_seconds",
                "total_seconds",
                "total_weight",
            ]
        )
        for n in args.sizes:
            for d in args.dims:
                for rep in range(args.repeats):
                    seed = int(
                        np.random.SeedSequence((n, d, rep)).generate_state(
                            1, np.uint64
                        )[0]
                    )
                    x = gen_blobs(BlobSpec(n=n, d=d, seed=seed))
                    cfg = FamstConfig(
                        k=args.k, n_bridges=args.n_bridges, seed=seed
                    )
                    tree, stats = famst(x, cfg)
                    writer.writerow(
                        [n, d, rep, seed, stats.t, stats.r]
                        + [repr(v) for v in _timing_fields(stats)]
                        + [repr(stats.total_weight)]
                    )
                    rows += 1
    print(f"wrote {rows} rows to {args.output}")
    return 0


def _cmd_gen_blobs(args) -> int:
    spec = BlobSpec(
        n=args.n, d=args.d, centers=args.centers, std=args.std, seed=args.seed
    )
    save_matrix(args.output, gen_blobs(spec), precision=4)
    print(f"wrote {args.n} x {args.d} points to {args.output}")
    return 0


def main(argv=None) -> int:
    try:
        _apply_thread_cap()
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"USAGE: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError) as exc:
        print(f"DATA: {exc}", file=sys.stderr)
        return 2
    except InternalError as exc:
        print(f"INTERNAL: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
