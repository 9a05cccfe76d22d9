"""Command-line frontend: cluster, select, simulate, analyze.

Every command reads inputs named by flags (optionally seeded from a
--config JSON with sections data/clustering/engine/simulator/analysis,
flags winning on conflict), writes its outputs plus a resolved_config.json
into --out, and is fully determined by (config, inputs, seed).

Exit codes: 0 success, 2 validation or configuration error, 3 I/O or file
format error, 4 internal error (a bug, never expected).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis as ana
from . import clustering as clu
from . import simulator as sim
from .config import AnalysisConfig, ClusteringConfig, RunConfig, write_resolved_config
from .data_model import normalize_rows, read_embeddings
from .engine import EngineConfig, MetricSnapshot, ProgressEngine, write_selection_log
from .errors import ConfigError, FormatError, SkillpaceError, ValidationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_INTERNAL = 4


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_run_config(args) -> RunConfig:
    if getattr(args, "config", None):
        return RunConfig.load(args.config)
    return RunConfig()


def _merge(flag_value, section_value, default):
    """Flag beats config file beats default."""
    if flag_value is not None:
        return flag_value
    if section_value is not None:
        return section_value
    return default


# ---------------------------------------------------------------------------
# cluster


def cmd_cluster(args) -> int:
    cfg = _load_run_config(args)
    cc = cfg.clustering
    k = _merge(args.k, None, cc.k)
    seed = _merge(args.seed, None, cc.seed)
    emb_path = _merge(args.embeddings, cfg.data.embeddings, None)
    if emb_path is None:
        raise ConfigError("no embeddings input given (--embeddings or config data.embeddings)")
    m = read_embeddings(emb_path)
    m = normalize_rows(m)
    model = clu.fit_spherical_kmeans(
        m, k=k, seed=seed, max_iters=cc.max_iters, tol=cc.tol, n_init=cc.n_init
    )
    assignment = clu.assign(m, model)
    out = _out_dir(args.out)
    clu.save_model(model, out / "model.pgrs")
    clu.save_assignment(assignment, out / "assignment.jsonl")
    quality = clu.cluster_quality(m, assignment, model, cc.pair_sample_cap, seed)
    report = {
        "n": m.n,
        "d": m.d,
        "k": k,
        "seed": seed,
        "iterations_run": model.iterations_run,
        "objective": model.objective,
        "objective_history": model.objective_history,
        "inter_similarity": quality.inter,
        "intra_similarity_mean": float(np.nanmean(quality.intra)),
        "sizes": quality.sizes.tolist(),
    }
    with open(out / "cluster_report.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    resolved = cfg.to_dict()
    resolved["clustering"].update({"k": k, "seed": seed})
    resolved["data"]["embeddings"] = str(emb_path)
    write_resolved_config(resolved, out)
    print(f"clustered {m.n} samples into {k} clusters (objective {model.objective:.4f})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# select


def _engine_config_from(args, cfg: RunConfig, pool_size: int) -> EngineConfig:
    raw = dict(cfg.engine)
    overrides = {
        "budget_total": args.budget,
        "warmup_ratio": args.warmup_ratio,
        "tau": args.tau,
        "delta_explore": args.delta,
        "round_size": args.round_size,
        "metric_kind": args.metric,
        "seed": args.seed,
    }
    for key, val in overrides.items():
        if val is not None:
            raw[key] = val
    if "budget_total" not in raw and args.budget_ratio is not None:
        raw["budget_total"] = int(args.budget_ratio * pool_size)
    if "budget_total" not in raw:
        raise ConfigError("no budget given (--budget, --budget-ratio, or config engine.budget_total)")
    if "warmup_ratio" not in raw:
        raise ConfigError("no warmup ratio given (--warmup-ratio or config engine.warmup_ratio)")
    return EngineConfig.from_dict(raw)


def _read_metric_stream(path: str | Path, k: int, percent: bool) -> list[MetricSnapshot]:
    snapshots = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                values = np.asarray(obj["values"], dtype=np.float64)
                support = np.asarray(
                    obj.get("support", np.ones(len(values))), dtype=np.int64
                )
                step = int(obj.get("step", lineno))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}: bad metric line {lineno}: {exc}") from exc
            if percent:
                values = values / 100.0
            if values.shape != (k,):
                raise ValidationError(
                    f"{path}: line {lineno} has {values.shape[0]} values, expected {k}"
                )
            snapshots.append(MetricSnapshot(step=step, values=values, support=support))
    return snapshots


def cmd_select(args) -> int:
    cfg = _load_run_config(args)
    out = _out_dir(args.out)

    population_path = _merge(args.population, cfg.data.population, None)
    if population_path is not None:
        # simulator-backed closed loop
        with open(population_path, "r", encoding="utf-8") as fh:
            spec = sim.PopulationSpec.from_dict(json.load(fh))
        pop = sim.build_population(spec, seed=args.population_seed)
        engine_cfg = _engine_config_from(args, cfg, pop.n)
        log = sim.simulate_run(pop, engine_cfg, "progress", eval_cap=cfg.simulator.eval_cap)
        log.write_rounds_jsonl(out / "trajectory.jsonl")
        with open(out / "summary.json", "w", encoding="utf-8") as fh:
            json.dump(log.summary_obj(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        resolved = cfg.to_dict()
        resolved["engine"] = engine_cfg.to_dict()
        resolved["data"]["population"] = str(population_path)
        write_resolved_config(resolved, out)
        print(
            f"selected {log.warmup_spent + log.pcl_spent} samples "
            f"({log.warmup_spent} warmup + {log.pcl_spent} over "
            f"{len(log.rounds) - 1} rounds)"
        )
        return EXIT_OK

    emb_path = _merge(args.embeddings, cfg.data.embeddings, None)
    asg_path = _merge(args.assignment, cfg.data.assignment, None)
    model_path = _merge(args.model, cfg.data.model, None)
    metrics_path = _merge(args.metrics, cfg.data.metrics, None)
    for name, val in (("embeddings", emb_path), ("assignment", asg_path), ("model", model_path)):
        if val is None:
            raise ConfigError(f"no {name} input given")
    if metrics_path is None:
        raise ConfigError("need --metrics (snapshot stream) or --population (simulator)")

    m = normalize_rows(read_embeddings(emb_path))
    model = clu.load_model(model_path)
    assignment = clu.load_assignment(asg_path, k=model.k)
    warmup_model_path = _merge(args.warmup_model, cfg.data.warmup_model, None)
    warmup_asg_path = _merge(args.warmup_assignment, cfg.data.warmup_assignment, None)
    warmup_model = clu.load_model(warmup_model_path) if warmup_model_path else model
    warmup_assignment = (
        clu.load_assignment(warmup_asg_path, k=warmup_model.k)
        if warmup_asg_path
        else assignment
    )
    engine_cfg = _engine_config_from(args, cfg, assignment.n)
    snapshots = _read_metric_stream(metrics_path, model.k, args.percent_metrics)

    engine = ProgressEngine(engine_cfg, assignment)
    if warmup_model is model:
        engine.run_warmup(model, m)
    else:
        # warmup runs at its own clustering granularity; replay the chosen
        # ids onto the shared ledger and pool
        view = ProgressEngine(engine_cfg, warmup_assignment)
        record = view.run_warmup(warmup_model, m)
        id_to_row = {int(v): i for i, v in enumerate(engine.pool.ids)}
        rows = np.asarray([id_to_row[i] for i in record.selected_ids], dtype=np.int64)
        engine.ledger.charge(record.selected_ids, "warmup")
        engine.pool.mark(rows)
        record.budget_spent = engine.ledger.spent
        engine.rounds.append(record)

    prev: MetricSnapshot | None = None
    idx = 0
    while not engine.exhausted() and idx < len(snapshots):
        curr = snapshots[idx]
        idx += 1
        engine.run_round(curr, prev)
        prev = curr

    write_selection_log(engine.rounds, out / "trajectory.jsonl")
    summary = {
        "budget": {
            "total": engine_cfg.budget_total,
            "warmup_spent": engine.ledger.warmup_spent,
            "pcl_spent": engine.ledger.pcl_spent,
            "unspent": engine_cfg.budget_total - engine.ledger.spent,
        },
        "rounds": len(engine.rounds) - 1,
        "snapshots_consumed": idx,
        "pool": assignment.n,
    }
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    resolved = cfg.to_dict()
    resolved["engine"] = engine_cfg.to_dict()
    resolved["data"].update(
        {
            "embeddings": str(emb_path),
            "assignment": str(asg_path),
            "model": str(model_path),
            "metrics": str(metrics_path),
        }
    )
    write_resolved_config(resolved, out)
    print(
        f"selected {engine.ledger.spent}/{engine_cfg.budget_total} "
        f"({engine.ledger.warmup_spent} warmup, {engine.ledger.pcl_spent} over "
        f"{len(engine.rounds) - 1} rounds)"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    cfg = _load_run_config(args)
    out = _out_dir(args.out)
    population_path = _merge(args.population, cfg.data.population, None)
    if population_path is None:
        raise ConfigError("no population spec given (--population or config data.population)")
    with open(population_path, "r", encoding="utf-8") as fh:
        spec = sim.PopulationSpec.from_dict(json.load(fh))

    policies = args.policies.split(",") if args.policies else cfg.simulator.policies
    for p in policies:
        if p not in sim.POLICY_KINDS:
            raise ConfigError(f"unknown policy {p!r} (choose from {sim.POLICY_KINDS})")
    n_seeds = _merge(args.seeds, None, cfg.simulator.seeds)
    taus = (
        [float(t) for t in args.tau_sweep.split(",")]
        if args.tau_sweep
        else (cfg.simulator.tau_sweep or [None])
    )
    shuffle_ablation = args.shuffle_ablation or cfg.simulator.shuffle_ablation
    eval_cap = _merge(args.eval_cap, cfg.simulator.eval_cap, None)

    probe = sim.build_population(spec, seed=0)
    base_engine = _engine_config_from(args, cfg, probe.n)

    runs = []
    summary: dict = {"policies": {}, "pool": probe.n, "engine": base_engine.to_dict()}
    for tau in taus:
        engine_cfg = (
            dataclasses.replace(base_engine, tau=tau) if tau is not None else base_engine
        )
        tau_key = f"{engine_cfg.tau:g}"
        for policy in policies:
            finals, tiers_acc = [], []
            for seed in range(n_seeds):
                pop = sim.build_population(spec, seed=seed)
                log = sim.simulate_run(pop, engine_cfg, policy, seed=seed, eval_cap=eval_cap)
                stem = f"trajectory_{policy}_tau{tau_key}_seed{seed}"
                log.write_rounds_jsonl(out / f"{stem}.jsonl")
                finals.append(log.mean_final_accuracy())
                tiers_acc.append(log.summary_obj()["per_tier_final_accuracy"])
                runs.append(stem)
                if shuffle_ablation and policy == "progress":
                    schedule = sim.shuffle_order_ablation(log, seed=seed + 10_000)
                    replay = sim.replay_schedule(pop, schedule)
                    with open(out / f"{stem}_shuffled.json", "w", encoding="utf-8") as fh:
                        json.dump(
                            {
                                "ordered_mean_final_accuracy": log.mean_final_accuracy(),
                                "shuffled_mean_final_accuracy": replay.mean_final_accuracy(),
                                "shuffled_mean_curve": replay.mean_curve,
                            },
                            fh,
                            indent=2,
                        )
                        fh.write("\n")
            tier_names = sorted(tiers_acc[0]) if tiers_acc else []
            summary["policies"][f"{policy}@tau={tau_key}"] = {
                "mean_final_accuracy": float(np.mean(finals)),
                "per_seed": finals,
                "per_tier_mean": {
                    t: float(np.mean([x[t] for x in tiers_acc])) for t in tier_names
                },
            }
    with open(out / "summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    resolved = cfg.to_dict()
    resolved["engine"] = base_engine.to_dict()
    resolved["simulator"].update(
        {
            "policies": policies,
            "seeds": n_seeds,
            "tau_sweep": [t for t in taus if t is not None],
            "shuffle_ablation": shuffle_ablation,
            "eval_cap": eval_cap,
        }
    )
    resolved["data"]["population"] = str(population_path)
    write_resolved_config(resolved, out)
    print(f"wrote {len(runs)} trajectories + summary to {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze


def _analysis_config_from(args, cfg: RunConfig) -> AnalysisConfig:
    ac = cfg.analysis
    return AnalysisConfig(
        lam=_merge(getattr(args, "lam", None), None, ac.lam),
        top_k=_merge(getattr(args, "top_k", None), None, ac.top_k),
        alpha=_merge(getattr(args, "alpha", None), None, ac.alpha),
        smoothing=_merge(getattr(args, "smoothing", None), None, ac.smoothing),
        project_dim=_merge(getattr(args, "project_dim", None), None, ac.project_dim),
    )


def cmd_analyze_rarity(args) -> int:
    cfg = _load_run_config(args)
    ac = _analysis_config_from(args, cfg)
    out = _out_dir(args.out)
    train_path = _merge(args.train, cfg.data.train_embeddings, None)
    if train_path is None:
        raise ConfigError("no training embeddings given (--train)")
    bench_specs = dict(cfg.data.benchmarks)
    for item in args.benchmark or []:
        if "=" not in item:
            raise ConfigError(f"--benchmark expects name=path, got {item!r}")
        name, path = item.split("=", 1)
        bench_specs[name] = path
    if not bench_specs:
        raise ConfigError("no benchmarks given (--benchmark name=path)")
    train = read_embeddings(train_path)
    benches = [(name, read_embeddings(path)) for name, path in bench_specs.items()]
    if ac.project_dim is not None:
        mats = ana.pca_project([train] + [b for _, b in benches], ac.project_dim)
        train = mats[0]
        benches = [(name, mat) for (name, _), mat in zip(benches, mats[1:])]
    models = ana.fit_benchmark_gaussians(benches, lam=ac.lam)
    report = ana.assign_rarity(
        train, models, smoothing=ac.smoothing, projection_dim=ac.project_dim
    )
    obj = {
        "benchmarks": report.benchmarks,
        "counts": report.counts.tolist(),
        "frequencies": report.frequencies.tolist(),
        "rarities": [None if np.isinf(r) else float(r) for r in report.rarities],
        "infinite_rarity": [bool(np.isinf(r)) for r in report.rarities],
        "total": report.total,
        "provenance": {
            "lambda": report.lam,
            "smoothing": report.smoothing,
            "projection_dim": report.projection_dim,
        },
    }
    with open(out / "rarity_report.json", "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
    resolved = cfg.to_dict()
    resolved["analysis"] = dataclasses.asdict(ac)
    resolved["data"]["train_embeddings"] = str(train_path)
    resolved["data"]["benchmarks"] = {k: str(v) for k, v in bench_specs.items()}
    write_resolved_config(resolved, out)
    print(f"rarity over {len(benches)} benchmarks written to {out}")
    return EXIT_OK


def _load_labels(path: str | Path) -> dict[int, str]:
    labels: dict[int, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                labels[int(obj["id"])] = str(obj["ability"])
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}: bad label line {lineno}: {exc}") from exc
    return labels


def cmd_analyze_ability(args) -> int:
    cfg = _load_run_config(args)
    ac = _analysis_config_from(args, cfg)
    out = _out_dir(args.out)
    train_path = _merge(args.train, cfg.data.train_embeddings, None)
    asg_path = _merge(args.assignment, cfg.data.assignment, None)
    bench_path = _merge(args.benchmark_embeddings, cfg.data.benchmark_embeddings, None)
    labels_path = _merge(args.labels, cfg.data.labels, None)
    for name, val in (
        ("train", train_path),
        ("assignment", asg_path),
        ("benchmark-embeddings", bench_path),
        ("labels", labels_path),
    ):
        if val is None:
            raise ConfigError(f"no {name} input given")
    train = normalize_rows(read_embeddings(train_path))
    bench = normalize_rows(read_embeddings(bench_path))
    assignment = clu.load_assignment(asg_path)
    label_map = _load_labels(labels_path)
    if not label_map:
        raise ConfigError(f"{labels_path}: labels file is empty")
    try:
        labels = [label_map[int(i)] for i in bench.ids]
    except KeyError as exc:
        raise ValidationError(f"benchmark sample id {exc.args[0]} has no ability label") from exc
    results = ana.assign_ability(
        train, assignment, bench, labels, top_k=ac.top_k, alpha=ac.alpha
    )
    obj = {
        "clusters": [
            {
                "cluster": r.cluster,
                "ability": r.label,
                "votes": r.votes,
                "abstained": r.abstained,
                "tie": r.tie,
            }
            for r in results
        ],
        "provenance": {"top_k": ac.top_k, "alpha": ac.alpha,
                       "ties": sum(1 for r in results if r.tie)},
    }
    with open(out / "ability_report.json", "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
    resolved = cfg.to_dict()
    resolved["analysis"] = dataclasses.asdict(ac)
    write_resolved_config(resolved, out)
    print(f"ability labels for {len(results)} clusters written to {out}")
    return EXIT_OK


def cmd_analyze_difficulty(args) -> int:
    cfg = _load_run_config(args)
    out = _out_dir(args.out)
    scores_path = _merge(args.scores, cfg.data.scores, None)
    if scores_path is None:
        raise ConfigError("no scores file given (--scores)")
    with open(scores_path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{scores_path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(raw, list):
        raise ValidationError(f"{scores_path}: expected a JSON array of scores")
    triples = []
    for item in raw:
        try:
            triples.append((str(item["name"]), float(item["raw"]), float(item["max"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"{scores_path}: bad score entry {item!r}") from exc
    results = ana.compute_difficulty(triples)
    obj = [
        {"name": r.name, "raw": r.raw, "max": r.max_score, "difficulty": r.difficulty}
        for r in results
    ]
    with open(out / "difficulty_report.json", "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
    resolved = cfg.to_dict()
    resolved["data"]["scores"] = str(scores_path)
    write_resolved_config(resolved, out)
    print(f"difficulty for {len(results)} benchmarks written to {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skillpace",
        description="Budget-constrained curriculum data selection over skill clusters",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("cluster", help="fit spherical k-means over an embedding file")
    pc.add_argument("--config")
    pc.add_argument("--embeddings")
    pc.add_argument("--k", type=int)
    pc.add_argument("--seed", type=int)
    pc.add_argument("--out", required=True)
    pc.set_defaults(func=cmd_cluster)

    ps = sub.add_parser("select", help="run warmup + progress-driven selection rounds")
    ps.add_argument("--config")
    ps.add_argument("--embeddings")
    ps.add_argument("--assignment")
    ps.add_argument("--model")
    ps.add_argument("--warmup-model")
    ps.add_argument("--warmup-assignment")
    ps.add_argument("--metrics", help="JSONL stream of per-round metric snapshots")
    ps.add_argument("--percent-metrics", action="store_true",
                    help="metric values are percentages; divide by 100")
    ps.add_argument("--population", help="population spec JSON: simulate the metric source")
    ps.add_argument("--population-seed", type=int, default=0)
    ps.add_argument("--budget", type=int)
    ps.add_argument("--budget-ratio", type=float)
    ps.add_argument("--warmup-ratio", type=float)
    ps.add_argument("--tau", type=float)
    ps.add_argument("--delta", type=float, help="exploration fraction per round")
    ps.add_argument("--round-size", type=int)
    ps.add_argument("--metric", choices=["accuracy", "loss"])
    ps.add_argument("--seed", type=int)
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_select)

    pm = sub.add_parser("simulate", help="closed-loop policy comparison on a synthetic population")
    pm.add_argument("--config")
    pm.add_argument("--population")
    pm.add_argument("--policies", help="comma-separated: progress,random,easiest,medium,hardest")
    pm.add_argument("--seeds", type=int)
    pm.add_argument("--tau-sweep", help="comma-separated temperatures")
    pm.add_argument("--shuffle-ablation", action="store_true")
    pm.add_argument("--eval-cap", type=int)
    pm.add_argument("--budget", type=int)
    pm.add_argument("--budget-ratio", type=float)
    pm.add_argument("--warmup-ratio", type=float)
    pm.add_argument("--tau", type=float)
    pm.add_argument("--delta", type=float)
    pm.add_argument("--round-size", type=int)
    pm.add_argument("--metric", choices=["accuracy", "loss"])
    pm.add_argument("--seed", type=int)
    pm.add_argument("--out", required=True)
    pm.set_defaults(func=cmd_simulate)

    pa = sub.add_parser("analyze", help="rarity, ability, and difficulty reports")
    asub = pa.add_subparsers(dest="analysis_command", required=True)

    pr = asub.add_parser("rarity", help="benchmark-aligned sample rarity via Gaussian models")
    pr.add_argument("--config")
    pr.add_argument("--train")
    pr.add_argument("--benchmark", action="append", metavar="NAME=PATH")
    pr.add_argument("--lam", type=float, help="covariance ridge term")
    pr.add_argument("--smoothing", choices=["none", "add-one"])
    pr.add_argument("--project-dim", type=int)
    pr.add_argument("--out", required=True)
    pr.set_defaults(func=cmd_analyze_rarity)

    pb = asub.add_parser("ability", help="majority-vote ability label per cluster")
    pb.add_argument("--config")
    pb.add_argument("--train")
    pb.add_argument("--assignment")
    pb.add_argument("--benchmark-embeddings")
    pb.add_argument("--labels", help="JSONL of {id, ability}")
    pb.add_argument("--top-k", type=int)
    pb.add_argument("--alpha", type=float)
    pb.add_argument("--out", required=True)
    pb.set_defaults(func=cmd_analyze_ability)

    pd = asub.add_parser("difficulty", help="normalized benchmark difficulty from scores")
    pd.add_argument("--config")
    pd.add_argument("--scores", help="JSON array of {name, raw, max}")
    pd.add_argument("--out", required=True)
    pd.set_defaults(func=cmd_analyze_difficulty)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (FormatError, FileNotFoundError, IsADirectoryError, PermissionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SkillpaceError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
