#!/usr/bin/env python3
"""Compare selection policies on the three-tier synthetic population.

Runs every policy over shared seeds at a fixed budget and reports mean
final accuracy per tier plus paired one-sided significance of the progress
policy against each baseline.
"""

import argparse

import numpy as np
from scipy import stats

from skillpace.engine import EngineConfig
from skillpace.simulator import build_population, simulate_run, three_tier_spec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=21)
    ap.add_argument("--budget-ratio", type=float, default=0.20)
    ap.add_argument("--warmup-ratio", type=float, default=0.09)
    ap.add_argument("--round-size", type=int, default=66)
    ap.add_argument("--tau", type=float, default=1.0)
    ap.add_argument("--delta", type=float, default=0.10)
    ap.add_argument("--policies", default="progress,random,easiest,medium,hardest")
    args = ap.parse_args()

    spec = three_tier_spec()
    n = sum(t.count for t in spec.tiers) * spec.samples_per_cluster
    cfg = EngineConfig(
        budget_total=int(args.budget_ratio * n),
        warmup_ratio=args.warmup_ratio,
        round_size=args.round_size,
        tau=args.tau,
        delta_explore=args.delta,
        seed=0,
    )
    policies = args.policies.split(",")
    finals = {p: [] for p in policies}
    tiers = {p: [] for p in policies}
    for seed in range(args.seeds):
        pop = build_population(spec, seed=seed)
        for p in policies:
            log = simulate_run(pop, cfg, p, seed=seed)
            finals[p].append(log.mean_final_accuracy())
            tiers[p].append(log.summary_obj()["per_tier_final_accuracy"])

    print(f"{args.seeds} seeds, pool {n}, budget {cfg.budget_total} "
          f"(warmup {int(args.warmup_ratio * n)})\n")
    print(f"{'policy':10s} {'mean':>8s} {'easy':>8s} {'moderate':>9s} {'hard':>8s}")
    for p in policies:
        arr = np.array(finals[p])
        by_tier = {t: np.mean([x[t] for x in tiers[p]]) for t in ("easy", "moderate", "hard")}
        print(f"{p:10s} {arr.mean():8.4f} {by_tier['easy']:8.4f} "
              f"{by_tier['moderate']:9.4f} {by_tier['hard']:8.4f}")

    if "progress" in policies:
        prog = np.array(finals["progress"])
        print("\npaired one-sided tests (progress > baseline):")
        for p in policies:
            if p == "progress":
                continue
            res = stats.ttest_rel(prog, np.array(finals[p]), alternative="greater")
            d = prog - np.array(finals[p])
            print(f"  vs {p:8s}: diff={d.mean():+.4f}  p={res.pvalue:.2e}  "
                  f"wins={(d > 0).sum()}/{args.seeds}")


if __name__ == "__main__":
    main()
