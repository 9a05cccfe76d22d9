#!/usr/bin/env python3
"""Generate a synthetic dataset for exercising the CLI end to end.

Writes a manifest, a pool embedding file, per-benchmark embedding files
with an ability-labels file, and a difficulty scores file into --out. The
pool embeddings are drawn around k latent directions so clustering has
real structure to find.
"""

import argparse
import json
from pathlib import Path

import numpy as np

from skillpace.data_model import EmbeddingMatrix, SampleRecord, save_manifest, write_embeddings
from skillpace.simulator import three_tier_spec


def unit_rows(rows):
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True)
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--k", type=int, default=10, help="latent direction count")
    ap.add_argument("--dim", type=int, default=32)
    ap.add_argument("--benchmarks", type=int, default=3)
    ap.add_argument("--bench-samples", type=int, default=60)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(args.seed)

    dirs = unit_rows(rng.normal(size=(args.k, args.dim)))
    labels = rng.integers(0, args.k, size=args.n)
    rows = unit_rows(dirs[labels] + 0.15 * rng.normal(size=(args.n, args.dim)))
    pool = EmbeddingMatrix(ids=np.arange(args.n, dtype=np.uint64), rows=rows.astype(np.float32))
    write_embeddings(pool, out / "pool.pgrs")

    records = [
        SampleRecord(id=i, question=f"what is in region {labels[i]}?", image_ref=f"img/{i:06d}.jpg")
        for i in range(args.n)
    ]
    save_manifest(records, out / "manifest.jsonl")

    abilities = ["count", "ocr", "scene", "position", "color"]
    label_lines = []
    bench_names = []
    for b in range(args.benchmarks):
        centers = dirs[rng.choice(args.k, size=3, replace=False)]
        picks = rng.integers(0, 3, size=args.bench_samples)
        bench_rows = unit_rows(centers[picks] + 0.2 * rng.normal(size=(args.bench_samples, args.dim)))
        ids = np.arange(args.bench_samples, dtype=np.uint64) + 10_000 * (b + 1)
        write_embeddings(
            EmbeddingMatrix(ids=ids, rows=bench_rows.astype(np.float32)),
            out / f"bench_{b}.pgrs",
        )
        bench_names.append(f"bench_{b}")
        for i in ids:
            label_lines.append(json.dumps({"id": int(i), "ability": abilities[int(i) % len(abilities)]}))
    (out / "bench_labels.jsonl").write_text("\n".join(label_lines) + "\n")

    scores = [
        {"name": name, "raw": float(rng.uniform(40, 95)), "max": 100.0}
        for name in bench_names
    ]
    (out / "scores.json").write_text(json.dumps(scores, indent=2) + "\n")

    pop = three_tier_spec(counts=(4, 4, 4), samples_per_cluster=50).to_dict()
    (out / "pop.json").write_text(json.dumps(pop, indent=2) + "\n")
    print(f"wrote pool ({args.n}x{args.dim}), manifest, {args.benchmarks} benchmarks, "
          f"population spec to {out}")


if __name__ == "__main__":
    main()
