"""Command-line interface: analyze / basis / sample / bootstrap / d2.

Exit codes: 0 success, 1 validation error, 2 verification failure.
Every command that takes --seed is fully deterministic, and reports
embed the config and seed that produced them.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import __version__
from .basis import (
    compute_markov_basis,
    d2_count,
    degree_bound,
    load_basis,
    render_move,
    save_basis,
    verify_basis,
)
from .chains import ChainConfig, bootstrap, mean_lengths, run_chain
from .datasets import BUILTINS, DatasetError, load_dataset
from .perms import partitions_of
from .spectral import (
    first_order_summary,
    pair_list,
    projection_lengths,
    round_half_away,
    second_order_summary,
)


def _part_key(lam) -> str:
    return ",".join(str(x) for x in lam)


def _fmt(value, exact: bool):
    if exact:
        return str(value)
    return float(value)


def _load(name_or_path: str):
    # DatasetError propagates to main(), which maps it to exit code 1
    return load_dataset(name_or_path)


def cmd_analyze(args) -> int:
    ds = _load(args.data)
    f = ds.to_rank_function()
    n = f.n
    lengths = projection_lengths(f)
    parts = partitions_of(n)
    bundle = {
        "provenance": {
            "command": "analyze",
            "dataset": ds.name,
            "total": f.total(),
            "version": __version__,
            "exact": bool(args.exact),
        },
        "first_order": first_order_summary(f),
        "projection_lengths": {
            _part_key(lam): (
                str(lengths[lam]) if args.exact else round_half_away(lengths[lam])
            )
            for lam in parts
        },
    }
    if n >= 4:
        pairs = pair_list(n)
        second = second_order_summary(f)
        bundle["second_order"] = {
            "pairs": [list(p) for p in pairs],
            "matrix": [list(row) for row in second],
        }
    if args.format == "json":
        json.dump(bundle, args.out, indent=2, sort_keys=True)
        args.out.write("\n")
    else:
        w = args.out
        w.write("# first_order: percent of voters ranking item i in position j\n")
        for i, row in enumerate(bundle["first_order"], start=1):
            w.write(f"{i}," + ",".join(str(v) for v in row) + "\n")
        w.write("# projection_lengths\n")
        for lam in parts:
            w.write(f"{_part_key(lam)},{bundle['projection_lengths'][_part_key(lam)]}\n")
        if "second_order" in bundle:
            w.write("# second_order\n")
            pairs = bundle["second_order"]["pairs"]
            w.write("pair," + ",".join("{%d %d}" % (a, b) for a, b in pairs) + "\n")
            for p, row in zip(pairs, bundle["second_order"]["matrix"]):
                w.write("{%d %d}," % (p[0], p[1]) + ",".join(str(v) for v in row) + "\n")
    return 0


def cmd_basis(args) -> int:
    n = args.n
    if not 3 <= n <= 6:
        print(f"error: unsupported n={n} (need 3 <= n <= 6)", file=sys.stderr)
        return 1
    max_degree = args.max_degree if args.max_degree else degree_bound(n)
    basis = compute_markov_basis(n, max_degree=max_degree, jobs=args.jobs)
    certificate = None
    if args.verify:
        check_to = degree_bound(n) if n > 3 else 3
        ok, witness = verify_basis(basis, n, check_to, jobs=args.jobs)
        certificate = {"verified_through_degree": check_to, "connected": ok}
        if not ok:
            print(f"verification FAILED at square {witness}", file=sys.stderr)
            return 2
    save_basis(basis, args.out, classes_only=args.classes_only, certificate=certificate)
    for move, size in basis.classes:
        print(f"degree {move.degree} orbit {size}: {render_move(move)}")
    print(
        f"n={n} max_degree={max_degree}: {len(basis.classes)} classes, "
        f"{len(basis.moves)} moves -> {args.out}"
    )
    return 0


def cmd_sample(args) -> int:
    ds = _load(args.data)
    f = ds.to_rank_function()
    basis = load_basis(args.basis)
    if basis.n != f.n:
        print(
            f"error: basis is for n={basis.n} but dataset has n={f.n}",
            file=sys.stderr,
        )
        return 1
    config = ChainConfig(
        target=args.target,
        basis_mode=args.basis_mode,
        steps_per_sample=args.steps,
        num_samples=args.samples,
        seed=args.seed,
        burn_in=args.burn_in,
    )
    samples = run_chain(f, basis, config)
    parts = partitions_of(f.n)
    for k, (_, lengths) in enumerate(samples, start=1):
        rec = {
            "step": k * config.steps_per_sample,
            "lengths": {_part_key(lam): float(lengths[lam]) for lam in parts},
        }
        args.out.write(json.dumps(rec, sort_keys=True) + "\n")
    means = mean_lengths(samples)
    summary = {
        "provenance": {
            "command": "sample",
            "dataset": ds.name,
            "target": config.target,
            "basis_mode": config.basis_mode,
            "steps_per_sample": config.steps_per_sample,
            "num_samples": config.num_samples,
            "seed": config.seed,
            "version": __version__,
        },
        "mean_lengths": {_part_key(lam): float(means[lam]) for lam in parts},
    }
    args.out.write(json.dumps(summary, sort_keys=True) + "\n")
    if args.histogram:
        if args.histogram_part:
            lam = tuple(int(x) for x in args.histogram_part.split(","))
        else:
            lam = (f.n - 2, 2) if f.n >= 4 else (f.n - 1, 1)
        if lam not in parts:
            print(f"error: {_part_key(lam)} is not a partition of {f.n}",
                  file=sys.stderr)
            return 1
        values = [float(lengths[lam]) for _, lengths in samples]
        lo, hi = min(values), max(values)
        width = (hi - lo) / 20 or 1.0
        bins = [0] * 20
        for v in values:
            bins[min(int((v - lo) / width), 19)] += 1
        with open(args.histogram, "w") as fh:
            fh.write("bin_low,bin_high,count\n")
            for i, c in enumerate(bins):
                fh.write(f"{lo + i * width},{lo + (i + 1) * width},{c}\n")
    return 0


def cmd_bootstrap(args) -> int:
    ds = _load(args.data)
    f = ds.to_rank_function()
    rng = random.Random(args.seed)
    parts = partitions_of(f.n)
    acc = {lam: Fraction(0) for lam in parts}
    for _ in range(args.replicates):
        lengths = projection_lengths(bootstrap(f, rng))
        for lam in parts:
            acc[lam] += lengths[lam]
    summary = {
        "provenance": {
            "command": "bootstrap",
            "dataset": ds.name,
            "replicates": args.replicates,
            "seed": args.seed,
            "version": __version__,
        },
        "mean_lengths": {
            _part_key(lam): (
                str(acc[lam] / args.replicates)
                if args.exact
                else float(acc[lam] / args.replicates)
            )
            for lam in parts
        },
    }
    json.dump(summary, args.out, indent=2, sort_keys=True)
    args.out.write("\n")
    return 0


def cmd_d2(args) -> int:
    print(d2_count(args.n))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankbasis",
        description="Spectral analysis and Markov-basis sampling for ranked data.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    builtin_note = f"builtin names: {', '.join(sorted(BUILTINS))}"

    p = sub.add_parser("analyze", help="first/second-order summaries and lengths")
    p.add_argument("--data", default="apa", help=f"CSV path or {builtin_note}")
    p.add_argument("--exact", action="store_true", help="emit exact rationals")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=argparse.FileType("w"), default=sys.stdout)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("basis", help="compute a Markov basis and write it as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=0)
    p.add_argument("--classes-only", action="store_true")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("sample", help="run a fiber walk and emit JSON-lines samples")
    p.add_argument("--data", default="apa", help=f"CSV path or {builtin_note}")
    p.add_argument("--basis", required=True, help="basis JSON file")
    p.add_argument("--target", choices=("hypergeometric", "uniform"),
                   default="hypergeometric")
    p.add_argument("--basis-mode", choices=("symmetrized", "full"),
                   default="symmetrized")
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--burn-in", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--histogram", default="", help="write a 20-bin histogram CSV here")
    p.add_argument("--histogram-part", default="",
                   help="partition for the histogram, e.g. 3,2 (default: n-2,2)")
    p.add_argument("--out", type=argparse.FileType("w"), default=sys.stdout)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("bootstrap", help="multinomial resampling of the data")
    p.add_argument("--data", default="apa", help=f"CSV path or {builtin_note}")
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--out", type=argparse.FileType("w"), default=sys.stdout)
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("d2", help="count degree-2 move symmetry classes")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_d2)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
