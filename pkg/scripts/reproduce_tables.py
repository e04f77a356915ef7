"""Reproduce the published summary tables for the APA election data:
first-order percentages, projection lengths, the second-order matrix,
and the calibration rows (data / hypergeometric / uniform / bootstrap).

Usage: python3 scripts/reproduce_tables.py [--skip-chains] [--basis FILE]

Without --basis the S_5 Markov basis is computed from scratch (~20 s).
The chain rows use 100 samples x 10,000 steps each (~40 s total).
"""

import argparse
import random
import time
from fractions import Fraction

from rankbasis.basis import compute_markov_basis, load_basis
from rankbasis.chains import ChainConfig, bootstrap, mean_lengths, run_chain
from rankbasis.datasets import builtin_apa
from rankbasis.perms import partitions_of
from rankbasis.spectral import (
    first_order_summary,
    pair_list,
    projection_lengths,
    round_half_away,
    second_order_summary,
)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--skip-chains", action="store_true")
    ap.add_argument("--basis", default="", help="precomputed S_5 basis JSON")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    f = builtin_apa().to_rank_function()
    parts = partitions_of(5)

    print("== first-order summary (percent, item x position) ==")
    for i, row in enumerate(first_order_summary(f), start=1):
        print(f"  item {i}: " + "  ".join(f"{v:5.1f}" for v in row))

    print("== projection lengths ==")
    lengths = projection_lengths(f)
    data_row = [round_half_away(lengths[lam]) for lam in parts]
    for lam, v in zip(parts, data_row):
        print(f"  S^({','.join(map(str, lam))}): {v}")

    print("== second-order matrix (rows/cols sum to 0) ==")
    pairs = pair_list(5)
    header = "        " + " ".join(f"{{{a}{b}}}".rjust(5) for a, b in pairs)
    print(header)
    for pair, row in zip(pairs, second_order_summary(f)):
        print(f"  {{{pair[0]}{pair[1]}}} " + " ".join(f"{v:5d}" for v in row))

    if args.skip_chains:
        return

    t0 = time.time()
    basis = load_basis(args.basis) if args.basis else compute_markov_basis(5)
    print(f"== S_5 basis: {len(basis.classes)} classes, {len(basis.moves)} "
          f"moves ({time.time() - t0:.0f}s) ==")

    def row(label, means):
        print(f"  {label:16s}" + "  ".join(
            f"{float(means[lam]):7.1f}" for lam in parts))

    print("== calibration (mean squared projection lengths) ==")
    row("data", lengths)
    for target in ("hypergeometric", "uniform"):
        t0 = time.time()
        cfg = ChainConfig(target=target, seed=args.seed)
        row(target, mean_lengths(run_chain(f, basis, cfg)))
        print(f"    [{time.time() - t0:.0f}s]")
    rng = random.Random(args.seed)
    acc = {lam: Fraction(0) for lam in parts}
    for _ in range(100):
        bl = projection_lengths(bootstrap(f, rng))
        for lam in parts:
            acc[lam] += bl[lam]
    row("bootstrap", {lam: acc[lam] / 100 for lam in parts})


if __name__ == "__main__":
    main()
