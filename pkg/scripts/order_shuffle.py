#!/usr/bin/env python3
"""Order-shuffle ablation on the gated-chain population.

For each seed, run progress-driven selection, then replay the same
selected set in a uniformly shuffled order through a fresh learner and
compare final accuracies. Order-sensitive gating makes the shuffled replay
lose the curriculum benefit.
"""

import argparse

import numpy as np

from skillpace.engine import EngineConfig
from skillpace.simulator import (
    build_population,
    gated_chain_spec,
    replay_schedule,
    shuffle_order_ablation,
    simulate_run,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=22)
    ap.add_argument("--budget-ratio", type=float, default=0.20)
    ap.add_argument("--warmup-ratio", type=float, default=0.09)
    ap.add_argument("--round-size", type=int, default=44)
    args = ap.parse_args()

    spec = gated_chain_spec()
    n = sum(t.count for t in spec.tiers) * spec.samples_per_cluster
    cfg = EngineConfig(
        budget_total=int(args.budget_ratio * n),
        warmup_ratio=args.warmup_ratio,
        round_size=args.round_size,
        seed=0,
    )
    ordered, shuffled = [], []
    for seed in range(args.seeds):
        pop = build_population(spec, seed=seed)
        log = simulate_run(pop, cfg, "progress", seed=seed)
        replay = replay_schedule(pop, shuffle_order_ablation(log, seed=seed + 500))
        ordered.append(log.mean_final_accuracy())
        shuffled.append(replay.mean_final_accuracy())
        print(f"seed {seed:2d}: ordered {ordered[-1]:.4f}  shuffled {shuffled[-1]:.4f}  "
              f"diff {ordered[-1] - shuffled[-1]:+.4f}")
    o, s = np.array(ordered), np.array(shuffled)
    print(f"\nmean ordered {o.mean():.4f}  mean shuffled {s.mean():.4f}  "
          f"drop {o.mean() - s.mean():+.4f} ({100 * (o.mean() - s.mean()) / o.mean():.1f}% relative)")


if __name__ == "__main__":
    main()
