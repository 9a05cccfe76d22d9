#!/usr/bin/env python3
"""Sweep the softmax temperature on the symmetric population.

Reports, per temperature, the share of round selections captured by the
single most-selected cluster and the mean final accuracy: low temperatures
collapse onto one cluster and end lower, moderate temperatures spread.
"""

import argparse

import numpy as np

from skillpace.engine import EngineConfig
from skillpace.simulator import build_population, simulate_run, symmetric_spec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--taus", default="0.05,0.1,0.3,0.5,1.0,1.2")
    ap.add_argument("--seeds", type=int, default=6)
    ap.add_argument("--budget-ratio", type=float, default=0.20)
    ap.add_argument("--warmup-ratio", type=float, default=0.09)
    ap.add_argument("--round-size", type=int, default=231)
    ap.add_argument("--delta", type=float, default=0.0)
    args = ap.parse_args()

    spec = symmetric_spec()
    n = sum(t.count for t in spec.tiers) * spec.samples_per_cluster
    print(f"pool {n}, budget {int(args.budget_ratio * n)}, "
          f"{args.seeds} seeds per temperature\n")
    print(f"{'tau':>6s} {'top1 share':>11s} {'final acc':>10s}")
    for tau in (float(t) for t in args.taus.split(",")):
        shares, accs = [], []
        for seed in range(args.seeds):
            pop = build_population(spec, seed=seed)
            cfg = EngineConfig(
                budget_total=int(args.budget_ratio * n),
                warmup_ratio=args.warmup_ratio,
                round_size=args.round_size,
                tau=tau,
                delta_explore=args.delta,
                seed=seed,
            )
            log = simulate_run(pop, cfg, "progress", seed=seed)
            counts = log.pcl_cluster_counts(pop.assignment)
            shares.append(counts.max() / counts.sum())
            accs.append(log.mean_final_accuracy())
        print(f"{tau:6.2f} {np.mean(shares):11.3f} {np.mean(accs):10.4f}")


if __name__ == "__main__":
    main()
