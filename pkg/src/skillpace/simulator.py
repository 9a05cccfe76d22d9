"""Closed-loop harness: a synthetic learner driving the selection engine.

The learner models each skill cluster with a saturating-exponential
accuracy curve a * (1 - exp(-n/s)) over the number of annotated samples it
has absorbed, optionally gated behind prerequisite clusters: while any
prerequisite sits below its mastery threshold the cluster reports a floor
accuracy, and (for order-sensitive learners) samples fed to it are wasted.
That is enough structure to reproduce the qualitative curriculum
phenomena: fast saturation on easy skills, deferred gains on hard ones,
and degradation when the selection order is shuffled.

Accuracy estimation mirrors the judged-evaluation setup: each sample holds
a fixed latent quantile; the learner answers it correctly once the
cluster's accuracy exceeds that quantile, and a pluggable judge scores the
answer against the reference. Estimates over the annotated set are
therefore noisy but strongly correlated across checkpoints.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import numpy as np

from .clustering import Assignment, ClusterModel
from .data_model import EmbeddingMatrix
from .engine import (
    EngineConfig,
    MetricSnapshot,
    ProgressEngine,
    SelectionRound,
)
from .errors import ConfigError, ValidationError

POLICY_KINDS = ("progress", "random", "easiest", "medium", "hardest")

# Prompt used by LLM-backed judges to decide answer correctness. Shipped
# for integrators; no network client is included here.
LLM_JUDGE_PROMPT = """\
Given an input question and two answers: a candidate answer and a reference answer, determine if the candidate answer is correct or incorrect.

Rules:
- The candidate answer is correct if it is semantically equivalent to the reference answer, even if they are phrased differently.
- The candidate answer should be marked as incorrect if it:
  - Contains factual errors compared to the reference answer
  - Only partially answers the question
  - Includes hedging language (e.g., "probably", "likely", "I think", etc.)
  - Answers a different question than what was asked
- Give a reason for your prediction.

Output Format:
- Answer - correct or incorrect
- Reason -
"""

_TERMINAL_PUNCT = ".?!,;:"


class Judge(Protocol):
    def judge(self, prediction: str, reference: str) -> bool: ...


class ExactMatchJudge:
    """Normalized exact match: lowercase, trim, collapse whitespace, drop
    terminal punctuation. Deterministic for fixed inputs."""

    @staticmethod
    def _normalize(text: str) -> str:
        return " ".join(text.lower().split()).rstrip(_TERMINAL_PUNCT)

    def judge(self, prediction: str, reference: str) -> bool:
        return self._normalize(prediction) == self._normalize(reference)


@dataclass
class ClusterSkill:
    """Learning-curve parameters for one cluster."""

    asymptote: float  # a in (0, 1]
    rate: float  # s > 0, exposures to reach ~63% of the asymptote
    prerequisites: dict[int, float] = field(default_factory=dict)  # cluster -> mastery

    def __post_init__(self) -> None:
        if not 0.0 < self.asymptote <= 1.0:
            raise ConfigError(f"asymptote must be in (0, 1], got {self.asymptote}")
        if self.rate <= 0:
            raise ConfigError("rate must be > 0")


class SyntheticLearner:
    """Per-cluster saturating learning curves with prerequisite gating.

    ``order_sensitive`` learners waste samples fed to a gated cluster;
    insensitive ones absorb everything, which makes their final state a
    function of the exposure multiset alone.
    """

    def __init__(
        self,
        skills: list[ClusterSkill],
        n_samples: int,
        seed: int,
        order_sensitive: bool = True,
        gate_floor: float = 0.0,
    ):
        self.skills = skills
        self.k = len(skills)
        self.order_sensitive = order_sensitive
        self.gate_floor = gate_floor
        self.exposures = np.zeros(self.k, dtype=np.float64)  # effective
        self.raw_exposures = np.zeros(self.k, dtype=np.int64)
        self._order = self._topological_order()
        # Fixed per-sample difficulty quantiles: sample i is answered
        # correctly once its cluster accuracy exceeds quantiles[i].
        self.quantiles = np.random.default_rng(seed).random(n_samples)
        self._seed = seed
        self._n_samples = n_samples

    def _topological_order(self) -> list[int]:
        order: list[int] = []
        state = [0] * self.k  # 0 unseen, 1 visiting, 2 done
        def visit(c: int) -> None:
            if state[c] == 2:
                return
            if state[c] == 1:
                raise ConfigError("prerequisite cycle detected")
            state[c] = 1
            for p in self.skills[c].prerequisites:
                if not 0 <= p < self.k:
                    raise ConfigError(f"prerequisite {p} out of range")
                visit(p)
            state[c] = 2
            order.append(c)
        for c in range(self.k):
            visit(c)
        return order

    def _curve(self, c: int) -> float:
        s = self.skills[c]
        return s.asymptote * (1.0 - math.exp(-self.exposures[c] / s.rate))

    def accuracies(self) -> np.ndarray:
        """True accuracy of every cluster, gating applied."""
        acc = np.empty(self.k, dtype=np.float64)
        for c in self._order:
            gated = any(acc[p] < thresh for p, thresh in self.skills[c].prerequisites.items())
            acc[c] = self.gate_floor if gated else self._curve(c)
        return acc

    def accuracy(self, c: int) -> float:
        return float(self.accuracies()[c])

    def gated(self) -> np.ndarray:
        acc = self.accuracies()
        out = np.zeros(self.k, dtype=bool)
        for c in range(self.k):
            out[c] = any(acc[p] < t for p, t in self.skills[c].prerequisites.items())
        return out

    def train(self, cluster_counts: np.ndarray) -> None:
        """Absorb one training chunk, given counts of samples per cluster.

        Gates are evaluated once, on the state before the chunk; for an
        order-sensitive learner, samples landing in a gated cluster add no
        effective exposure.
        """
        counts = np.asarray(cluster_counts, dtype=np.int64)
        if counts.shape != (self.k,):
            raise ValidationError("cluster_counts must have one entry per cluster")
        if np.any(counts < 0):
            raise ValidationError("negative exposure count")
        self.raw_exposures += counts
        effective = counts.astype(np.float64)
        if self.order_sensitive:
            effective[self.gated()] = 0.0
        self.exposures += effective

    def predict(
        self, sample_row: int, cluster: int, reference: str, accuracy: float | None = None
    ) -> str:
        """The learner's answer for one sample: the reference once the
        cluster accuracy exceeds the sample's latent quantile.

        ``accuracy`` short-circuits the per-call accuracy computation when
        the caller already evaluated the full vector.
        """
        acc = self.accuracy(cluster) if accuracy is None else accuracy
        if self.quantiles[sample_row] < acc:
            return reference
        return "i do not know"

    def fresh_clone(self) -> "SyntheticLearner":
        return SyntheticLearner(
            skills=self.skills,
            n_samples=self._n_samples,
            seed=self._seed,
            order_sensitive=self.order_sensitive,
            gate_floor=self.gate_floor,
        )


def reference_answer(sample_id: int) -> str:
    return f"answer-{sample_id}"


def evaluate_snapshot(
    learner: SyntheticLearner,
    annotated_rows: np.ndarray,
    assignment: Assignment,
    judge: Judge,
    step: int,
    eval_cap: int | None = None,
    cap_rng: np.random.Generator | None = None,
) -> MetricSnapshot:
    """Judge-estimated accuracy per cluster over annotated samples only.

    Clusters with nothing annotated report value 0 with support 0. When
    ``eval_cap`` is set, at most that many annotated samples per cluster
    are judged (drawn with ``cap_rng`` for determinism).
    """
    k = assignment.k
    values = np.zeros(k, dtype=np.float64)
    support = np.zeros(k, dtype=np.int64)
    acc = learner.accuracies()
    rows_by_cluster = assignment.clusters[annotated_rows]
    for c in range(k):
        rows_c = annotated_rows[rows_by_cluster == c]
        if rows_c.size == 0:
            continue
        if eval_cap is not None and rows_c.size > eval_cap:
            if cap_rng is None:
                raise ValidationError("eval_cap requires cap_rng")
            rows_c = np.sort(cap_rng.choice(rows_c, size=eval_cap, replace=False))
        correct = 0
        cluster_acc = float(acc[c])
        for r in rows_c:
            ref = reference_answer(int(assignment.ids[r]))
            pred = learner.predict(int(r), c, ref, accuracy=cluster_acc)
            if judge.judge(pred, ref):
                correct += 1
        values[c] = correct / rows_c.size
        support[c] = rows_c.size
    return MetricSnapshot(step=step, values=values, support=support)


# ---------------------------------------------------------------------------
# Population construction


@dataclass
class PrereqSpec:
    tier: str
    count: int
    threshold: float


@dataclass
class TierSpec:
    name: str
    count: int
    a_range: tuple[float, float]
    s_range: tuple[float, float]
    prerequisites: list[PrereqSpec] = field(default_factory=list)


@dataclass
class PopulationSpec:
    """Generative description of a synthetic pool + learner."""

    tiers: list[TierSpec]
    samples_per_cluster: int
    embedding_dim: int = 16
    noise: float = 0.05
    order_sensitive: bool = True
    gate_floor: float = 0.0

    @classmethod
    def from_dict(cls, obj: dict) -> "PopulationSpec":
        allowed = {
            "tiers",
            "samples_per_cluster",
            "embedding_dim",
            "noise",
            "order_sensitive",
            "gate_floor",
        }
        unknown = set(obj) - allowed
        if unknown:
            raise ConfigError(f"unknown population keys: {sorted(unknown)}")
        tiers = []
        for t in obj["tiers"]:
            t_unknown = set(t) - {"name", "count", "a_range", "s_range", "prerequisites"}
            if t_unknown:
                raise ConfigError(f"unknown tier keys: {sorted(t_unknown)}")
            prereqs = []
            for p in t.get("prerequisites", []):
                p_unknown = set(p) - {"tier", "count", "threshold"}
                if p_unknown:
                    raise ConfigError(f"unknown prerequisite keys: {sorted(p_unknown)}")
                prereqs.append(
                    PrereqSpec(tier=p["tier"], count=int(p["count"]), threshold=float(p["threshold"]))
                )
            tiers.append(
                TierSpec(
                    name=t["name"],
                    count=int(t["count"]),
                    a_range=(float(t["a_range"][0]), float(t["a_range"][1])),
                    s_range=(float(t["s_range"][0]), float(t["s_range"][1])),
                    prerequisites=prereqs,
                )
            )
        return cls(
            tiers=tiers,
            samples_per_cluster=int(obj["samples_per_cluster"]),
            embedding_dim=int(obj.get("embedding_dim", 16)),
            noise=float(obj.get("noise", 0.05)),
            order_sensitive=bool(obj.get("order_sensitive", True)),
            gate_floor=float(obj.get("gate_floor", 0.0)),
        )

    def to_dict(self) -> dict:
        return {
            "tiers": [
                {
                    "name": t.name,
                    "count": t.count,
                    "a_range": list(t.a_range),
                    "s_range": list(t.s_range),
                    "prerequisites": [
                        {"tier": p.tier, "count": p.count, "threshold": p.threshold}
                        for p in t.prerequisites
                    ],
                }
                for t in self.tiers
            ],
            "samples_per_cluster": self.samples_per_cluster,
            "embedding_dim": self.embedding_dim,
            "noise": self.noise,
            "order_sensitive": self.order_sensitive,
            "gate_floor": self.gate_floor,
        }


@dataclass
class Population:
    """A realized pool: skills, assignment, embeddings, cluster model."""

    spec: PopulationSpec
    seed: int
    skills: list[ClusterSkill]
    tier_of_cluster: list[str]
    assignment: Assignment
    matrix: EmbeddingMatrix
    model: ClusterModel
    learner_seed: int

    @property
    def k(self) -> int:
        return len(self.skills)

    @property
    def n(self) -> int:
        return self.assignment.n

    def fresh_learner(self) -> SyntheticLearner:
        return SyntheticLearner(
            skills=self.skills,
            n_samples=self.n,
            seed=self.learner_seed,
            order_sensitive=self.spec.order_sensitive,
            gate_floor=self.spec.gate_floor,
        )


def build_population(spec: PopulationSpec, seed: int) -> Population:
    """Realize a population spec into clusters, curves, and embeddings."""
    root = np.random.SeedSequence(seed)
    param_rng, emb_rng, learner_ss = root.spawn(3)
    param_rng = np.random.default_rng(param_rng)
    emb_rng = np.random.default_rng(emb_rng)

    tier_clusters: dict[str, list[int]] = {}
    skills: list[ClusterSkill] = []
    tier_of_cluster: list[str] = []
    for tier in spec.tiers:
        if tier.count < 1:
            raise ConfigError(f"tier {tier.name!r} must have at least one cluster")
        idxs = []
        for _ in range(tier.count):
            c = len(skills)
            idxs.append(c)
            a = float(param_rng.uniform(*tier.a_range))
            s = float(param_rng.uniform(*tier.s_range))
            skills.append(ClusterSkill(asymptote=a, rate=s))
            tier_of_cluster.append(tier.name)
        tier_clusters[tier.name] = idxs
    # prerequisite edges point to earlier tiers only, keeping the DAG
    for tier in spec.tiers:
        for c in tier_clusters[tier.name]:
            for pr in tier.prerequisites:
                if pr.tier not in tier_clusters:
                    raise ConfigError(f"prerequisite tier {pr.tier!r} not defined")
                candidates = [x for x in tier_clusters[pr.tier] if x != c]
                if len(candidates) < pr.count:
                    raise ConfigError(f"tier {pr.tier!r} too small for {pr.count} prerequisites")
                chosen = param_rng.choice(candidates, size=pr.count, replace=False)
                for p in chosen:
                    skills[c].prerequisites[int(p)] = pr.threshold

    k = len(skills)
    m = spec.samples_per_cluster
    if m < 1:
        raise ConfigError("samples_per_cluster must be >= 1")
    n = k * m
    clusters = np.repeat(np.arange(k, dtype=np.int32), m)
    assignment = Assignment(ids=np.arange(n, dtype=np.uint64), clusters=clusters, k=k)

    d = spec.embedding_dim
    directions = emb_rng.normal(size=(k, d))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    rows = directions[clusters] + spec.noise * emb_rng.normal(size=(n, d))
    rows /= np.linalg.norm(rows, axis=1, keepdims=True)
    matrix = EmbeddingMatrix(ids=assignment.ids.copy(), rows=rows.astype(np.float32))

    centroids = np.zeros((k, d), dtype=np.float64)
    for c in range(k):
        mean = rows[clusters == c].mean(axis=0)
        centroids[c] = mean / np.linalg.norm(mean)
    model = ClusterModel(
        centroids=centroids, seed=seed, iterations_run=0, objective=float("nan")
    )
    learner_seed = int(learner_ss.generate_state(1)[0])
    return Population(
        spec=spec,
        seed=seed,
        skills=skills,
        tier_of_cluster=tier_of_cluster,
        assignment=assignment,
        matrix=matrix,
        model=model,
        learner_seed=learner_seed,
    )


# ---------------------------------------------------------------------------
# Run loop


@dataclass
class TrajectoryLog:
    """Full record of one closed-loop run."""

    policy: str
    seed: int
    config: dict
    rounds: list[SelectionRound]
    snapshots: list[MetricSnapshot]
    final_accuracies: np.ndarray  # true per-cluster learner accuracy
    final_snapshot: MetricSnapshot
    tier_of_cluster: list[str]
    budget_total: int
    warmup_spent: int
    pcl_spent: int

    def mean_final_accuracy(self) -> float:
        return float(self.final_accuracies.mean())

    def selected_ids(self) -> list[int]:
        out: list[int] = []
        for r in self.rounds:
            out.extend(r.selected_ids)
        return out

    def pcl_cluster_counts(self, assignment: Assignment) -> np.ndarray:
        """Selections per cluster over PCL rounds only."""
        id_to_cluster = {int(i): int(c) for i, c in zip(assignment.ids, assignment.clusters)}
        counts = np.zeros(assignment.k, dtype=np.int64)
        for r in self.rounds:
            if r.phase != "pcl":
                continue
            for sid in r.selected_ids:
                counts[id_to_cluster[sid]] += 1
        return counts

    def summary_obj(self) -> dict:
        tiers = sorted(set(self.tier_of_cluster))
        acc = self.final_accuracies
        per_tier = {
            t: float(np.mean([acc[c] for c in range(len(acc)) if self.tier_of_cluster[c] == t]))
            for t in tiers
        }
        return {
            "policy": self.policy,
            "seed": self.seed,
            "mean_final_accuracy": self.mean_final_accuracy(),
            "per_tier_final_accuracy": per_tier,
            "final_accuracies": [float(a) for a in acc],
            "budget": {
                "total": self.budget_total,
                "warmup_spent": self.warmup_spent,
                "pcl_spent": self.pcl_spent,
                "unspent": self.budget_total - self.warmup_spent - self.pcl_spent,
            },
            "rounds": len([r for r in self.rounds if r.phase == "pcl"]),
        }

    def write_rounds_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for r in self.rounds:
                fh.write(json.dumps(r.to_json_obj()) + "\n")


def policy_scores(policy: str, snapshot: MetricSnapshot) -> np.ndarray:
    """Score transform for the baseline policies (progress handled by the
    engine, random by full exploration)."""
    values = snapshot.values
    if policy == "easiest":
        return values.copy()
    if policy == "hardest":
        return -values
    if policy == "medium":
        seen = values[snapshot.support > 0]
        med = float(np.median(seen)) if seen.size else 0.0
        return -np.abs(values - med)
    raise ConfigError(f"unknown baseline policy {policy!r}")


def simulate_run(
    population: Population,
    config: EngineConfig,
    policy: str = "progress",
    seed: int | None = None,
    judge: Judge | None = None,
    eval_cap: int | None = None,
) -> TrajectoryLog:
    """Warmup, then selection rounds until the budget is spent.

    Per round: estimate the per-cluster metric over everything annotated so
    far, turn it into policy scores, let the engine allocate/select/charge,
    and feed the selection to the learner. ``seed`` overrides the config
    seed so sweeps can share populations across policies.
    """
    if policy not in POLICY_KINDS:
        raise ConfigError(f"policy must be one of {POLICY_KINDS}, got {policy!r}")
    if seed is not None:
        config = dataclasses.replace(config, seed=seed)
    judge = judge if judge is not None else ExactMatchJudge()
    if config.budget_total > population.n:
        raise ConfigError("budget exceeds pool size")

    learner = population.fresh_learner()
    engine = ProgressEngine(config, population.assignment)
    cap_rng = np.random.default_rng(np.random.SeedSequence(config.seed).spawn(3)[2])

    warmup_round = engine.run_warmup(population.model, population.matrix)
    learner.train(_cluster_counts(warmup_round.selected_ids, population.assignment))

    snapshots: list[MetricSnapshot] = []
    prev_acc: MetricSnapshot | None = None
    step = 0
    while not engine.exhausted():
        step += 1
        annotated_rows = np.where(engine.pool.annotated)[0]
        curr_acc = evaluate_snapshot(
            learner, annotated_rows, population.assignment, judge, step, eval_cap, cap_rng
        )
        snapshots.append(curr_acc)
        if policy == "progress":
            curr_m, prev_m = curr_acc, prev_acc
            if config.metric_kind == "loss":
                curr_m = _to_loss(curr_acc)
                prev_m = _to_loss(prev_acc) if prev_acc is not None else None
            record = engine.run_round(curr_m, prev_m)
        elif policy == "random":
            record = engine.run_round(curr_acc, None, scores=np.zeros(population.k), explore_override=1.0)
        else:
            record = engine.run_round(curr_acc, None, scores=policy_scores(policy, curr_acc))
        learner.train(_cluster_counts(record.selected_ids, population.assignment))
        prev_acc = curr_acc

    annotated_rows = np.where(engine.pool.annotated)[0]
    final_snapshot = evaluate_snapshot(
        learner, annotated_rows, population.assignment, judge, step + 1, eval_cap, cap_rng
    )
    return TrajectoryLog(
        policy=policy,
        seed=config.seed,
        config=config.to_dict(),
        rounds=engine.rounds,
        snapshots=snapshots + [final_snapshot],
        final_accuracies=learner.accuracies(),
        final_snapshot=final_snapshot,
        tier_of_cluster=population.tier_of_cluster,
        budget_total=config.budget_total,
        warmup_spent=engine.ledger.warmup_spent,
        pcl_spent=engine.ledger.pcl_spent,
    )


def _to_loss(snapshot: MetricSnapshot) -> MetricSnapshot:
    # simple bounded surrogate: loss = 1 - accuracy
    return MetricSnapshot(
        step=snapshot.step, values=1.0 - snapshot.values, support=snapshot.support.copy()
    )


def _cluster_counts(ids: list[int], assignment: Assignment) -> np.ndarray:
    id_to_cluster = {int(i): int(c) for i, c in zip(assignment.ids, assignment.clusters)}
    counts = np.zeros(assignment.k, dtype=np.int64)
    for sid in ids:
        counts[id_to_cluster[sid]] += 1
    return counts


# ---------------------------------------------------------------------------
# Order-shuffle ablation


def shuffle_order_ablation(log: TrajectoryLog, seed: int) -> list[list[int]]:
    """Shuffle every selected id uniformly and repartition into equal-size
    rounds (the run's round size; last chunk may be smaller)."""
    ids = log.selected_ids()
    rng = np.random.default_rng(seed)
    shuffled = [int(x) for x in rng.permutation(np.asarray(ids, dtype=np.int64))]
    chunk = int(log.config["round_size"])
    return [shuffled[i : i + chunk] for i in range(0, len(shuffled), chunk)]


@dataclass
class ReplayResult:
    final_accuracies: np.ndarray
    mean_curve: list[float]  # mean true accuracy after each chunk

    def mean_final_accuracy(self) -> float:
        return float(self.final_accuracies.mean())


def replay_schedule(
    population: Population, schedule: list[list[int]]
) -> ReplayResult:
    """Feed a fixed schedule to a fresh learner, no selection logic."""
    learner = population.fresh_learner()
    curve: list[float] = []
    for chunk in schedule:
        learner.train(_cluster_counts(chunk, population.assignment))
        curve.append(float(learner.accuracies().mean()))
    return ReplayResult(final_accuracies=learner.accuracies(), mean_curve=curve)


# ---------------------------------------------------------------------------
# Stock populations used by experiments and tests


def three_tier_spec(
    counts: tuple[int, int, int] = (17, 17, 16),
    samples_per_cluster: int = 120,
) -> PopulationSpec:
    """Easy/moderate/hard population with prerequisite-gated hard skills.

    Easy skills saturate within the warmup slice, moderate skills reward
    sustained attention, and hard skills stay gated until a moderate
    prerequisite is mastered, so both what is selected and when matters.
    """
    return PopulationSpec(
        tiers=[
            TierSpec("easy", counts[0], a_range=(0.85, 0.95), s_range=(4.0, 8.0)),
            TierSpec("moderate", counts[1], a_range=(0.70, 0.90), s_range=(35.0, 60.0)),
            TierSpec(
                "hard",
                counts[2],
                a_range=(0.70, 0.85),
                s_range=(30.0, 50.0),
                prerequisites=[PrereqSpec(tier="moderate", count=1, threshold=0.35)],
            ),
        ],
        samples_per_cluster=samples_per_cluster,
        embedding_dim=16,
        order_sensitive=True,
    )


def symmetric_spec(
    k: int = 14,
    samples_per_cluster: int = 1200,
    asymptote: float = 0.9,
    rate: float = 1500.0,
) -> PopulationSpec:
    """Identical clusters, no gating: isolates softmax temperature effects."""
    return PopulationSpec(
        tiers=[
            TierSpec(
                "uniform", k, a_range=(asymptote, asymptote), s_range=(rate, rate)
            )
        ],
        samples_per_cluster=samples_per_cluster,
        embedding_dim=16,
        order_sensitive=False,
    )


def gated_chain_spec(
    n_foundation: int = 20,
    n_dependent: int = 30,
    samples_per_cluster: int = 120,
) -> PopulationSpec:
    """Strongly order-sensitive population for the shuffle ablation.

    Every dependent skill is gated behind one foundation skill at a
    mastery threshold reachable a few rounds into a run, so samples fed to
    dependents before their foundation is learned are wasted.
    """
    return PopulationSpec(
        tiers=[
            TierSpec("foundation", n_foundation, a_range=(0.85, 0.95), s_range=(12.0, 20.0)),
            TierSpec(
                "dependent",
                n_dependent,
                a_range=(0.70, 0.90),
                s_range=(20.0, 35.0),
                prerequisites=[PrereqSpec(tier="foundation", count=1, threshold=0.50)],
            ),
        ],
        samples_per_cluster=samples_per_cluster,
        embedding_dim=16,
        order_sensitive=True,
    )
