"""Progress-driven selection: the budgeted curriculum state machine.

Round lifecycle: compare the latest per-cluster metric snapshot against the
previous one to get a progress score per cluster, turn scores into a
sampling distribution with a temperature-controlled softmax, apportion the
round's seats across clusters (plus a uniform exploration slice), draw
samples without replacement, and charge every drawn id to the budget
ledger. A warmup phase spends the first slice of the budget using
per-cluster transferability/density weights so early metric snapshots have
support.

All engine state mutates through a single owner; snapshots, distributions,
and ledger views handed out are plain values.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .clustering import Assignment, ClusterModel
from .data_model import EmbeddingMatrix
from .errors import (
    BudgetExceededError,
    ConfigError,
    PoolExhaustedError,
    ValidationError,
)

METRIC_KINDS = ("accuracy", "loss")


@dataclass
class EngineConfig:
    """Knobs for one selection run.

    ``round_size`` is the number of samples selected per round; when left
    unset it is derived as ``gamma * batch_size`` (gamma being the
    checkpoint interval in optimizer steps).
    """

    budget_total: int
    warmup_ratio: float
    metric_kind: str = "accuracy"
    epsilon: float = 0.01
    tau: float = 1.0
    delta_explore: float = 0.10
    batch_size: int = 128
    gamma: int | None = None
    round_size: int | None = None
    warmup_tau: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.metric_kind not in METRIC_KINDS:
            raise ConfigError(f"metric_kind must be one of {METRIC_KINDS}, got {self.metric_kind!r}")
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be > 0")
        if self.tau <= 0:
            raise ConfigError("tau must be > 0")
        if not 0.0 <= self.delta_explore <= 1.0:
            raise ConfigError("delta_explore must be in [0, 1]")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")
        if self.round_size is None:
            if self.gamma is None:
                raise ConfigError("set round_size or gamma")
            self.round_size = self.gamma * self.batch_size
        elif self.gamma is not None and self.gamma * self.batch_size != self.round_size:
            raise ConfigError(
                f"round_size={self.round_size} contradicts gamma*batch_size="
                f"{self.gamma * self.batch_size}"
            )
        if self.round_size < 1:
            raise ConfigError("round_size must be >= 1")
        if self.budget_total < 1:
            raise ConfigError("budget_total must be >= 1")
        if not 0.0 <= self.warmup_ratio < 1.0:
            raise ConfigError("warmup_ratio must be in [0, 1)")
        if self.warmup_tau <= 0:
            raise ConfigError("warmup_tau must be > 0")

    _FIELDS = (
        "budget_total",
        "warmup_ratio",
        "metric_kind",
        "epsilon",
        "tau",
        "delta_explore",
        "batch_size",
        "gamma",
        "round_size",
        "warmup_tau",
        "seed",
    )

    @classmethod
    def from_dict(cls, obj: dict) -> "EngineConfig":
        unknown = set(obj) - set(cls._FIELDS)
        if unknown:
            raise ConfigError(f"unknown engine config keys: {sorted(unknown)}")
        return cls(**obj)

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in self._FIELDS}


@dataclass
class MetricSnapshot:
    """Per-cluster metric values at one checkpoint step."""

    step: int
    values: np.ndarray  # (K,) float64
    support: np.ndarray  # (K,) int64, samples each value was computed over

    def __post_init__(self) -> None:
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        self.support = np.ascontiguousarray(self.support, dtype=np.int64)
        if self.values.shape != self.support.shape or self.values.ndim != 1:
            raise ValidationError("values and support must be aligned 1-d arrays")
        if not np.all(np.isfinite(self.values)):
            raise ValidationError("non-finite metric value")
        if np.any(self.support < 0):
            raise ValidationError("negative support count")

    @property
    def k(self) -> int:
        return self.values.shape[0]


@dataclass
class DeltaVector:
    """Per-cluster progress scores; positive means improvement."""

    values: np.ndarray
    metric_kind: str


@dataclass
class SamplingDistribution:
    probs: np.ndarray

    def __post_init__(self) -> None:
        self.probs = np.ascontiguousarray(self.probs, dtype=np.float64)
        total = float(self.probs.sum())
        if not math.isfinite(total) or abs(total - 1.0) > 1e-9:
            raise ValidationError(f"probabilities sum to {total}, not 1")

    @property
    def k(self) -> int:
        return self.probs.shape[0]


def compute_delta(
    curr: MetricSnapshot,
    prev: MetricSnapshot,
    epsilon: float,
    metric_kind: str = "accuracy",
) -> DeltaVector:
    """Relative per-cluster change between two checkpoints.

    Accuracy mode: (curr - prev) / (prev + epsilon).
    Loss mode:     (prev - curr) / (prev + epsilon),
    so a positive value means improvement in both modes. ``epsilon`` keeps
    the ratio finite when the baseline is zero.
    """
    if metric_kind not in METRIC_KINDS:
        raise ConfigError(f"unknown metric_kind {metric_kind!r}")
    if epsilon <= 0:
        raise ConfigError("epsilon must be > 0")
    if curr.k != prev.k:
        raise ValidationError(f"snapshot K mismatch: {curr.k} vs {prev.k}")
    if curr.step <= prev.step:
        raise ValidationError("curr.step must exceed prev.step")
    if np.any(curr.values < 0) or np.any(prev.values < 0):
        raise ValidationError("metric values must be non-negative")
    if metric_kind == "accuracy":
        if np.any(curr.values > 1.0) or np.any(prev.values > 1.0):
            raise ValidationError("accuracy values must lie in [0, 1]")
        values = (curr.values - prev.values) / (prev.values + epsilon)
    else:
        values = (prev.values - curr.values) / (prev.values + epsilon)
    return DeltaVector(values=values, metric_kind=metric_kind)


def _stable_softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - np.max(logits)
    e = np.exp(z)
    return e / e.sum()


def softmax_distribution(deltas: DeltaVector | np.ndarray, tau: float) -> SamplingDistribution:
    """Temperature-controlled softmax over progress scores.

    Computed with max-subtraction so any finite score vector is safe from
    overflow. Lower tau sharpens toward the top cluster; higher tau
    flattens toward uniform.
    """
    if tau <= 0:
        raise ConfigError("tau must be > 0")
    values = deltas.values if isinstance(deltas, DeltaVector) else np.asarray(deltas, dtype=np.float64)
    if values.ndim != 1 or values.size < 1:
        raise ValidationError("need a non-empty 1-d score vector")
    if not np.all(np.isfinite(values)):
        raise ValidationError("non-finite progress score")
    return SamplingDistribution(probs=_stable_softmax(values / tau))


def apportion(weights: np.ndarray, seats: int, capacity: np.ndarray) -> np.ndarray:
    """Largest-remainder seat apportionment with per-cluster capacity.

    Quotas are weights * seats. Each cluster first receives
    min(floor(quota), capacity); leftover seats then go one at a time to
    the cluster with the largest outstanding remainder that still has
    capacity, ties to the lowest index. Seats a cluster cannot hold spill
    to the next-largest remainders, so the result always sums to ``seats``
    provided total capacity allows it.
    """
    weights = np.asarray(weights, dtype=np.float64)
    capacity = np.asarray(capacity, dtype=np.int64)
    if seats < 0:
        raise ValidationError("seats must be >= 0")
    if int(capacity.sum()) < seats:
        raise ValidationError("total capacity below requested seats")
    quotas = weights * seats
    alloc = np.minimum(np.floor(quotas).astype(np.int64), capacity)
    np.maximum(alloc, 0, out=alloc)
    remainder = quotas - alloc
    left = seats - int(alloc.sum())
    while left > 0:
        open_mask = alloc < capacity
        masked = np.where(open_mask, remainder, -np.inf)
        j = int(np.argmax(masked))
        alloc[j] += 1
        remainder[j] -= 1.0
        left -= 1
    return alloc


@dataclass
class RoundAllocation:
    per_cluster: np.ndarray  # (K,) int64 proportional seats
    explore_n: int
    effective_size: int  # per_cluster.sum() + explore_n


def allocate_round(
    p: SamplingDistribution,
    round_size: int,
    delta_explore: float,
    available: np.ndarray,
) -> RoundAllocation:
    """Split one round's seats into proportional and exploration slices.

    The effective round size is round_size clamped to what the pool still
    offers (the caller clamps to remaining budget). The exploration count
    is round(delta_explore * effective), half rounding up; the rest is
    apportioned over clusters by largest remainder, never exceeding a
    cluster's availability.
    """
    if round_size < 1:
        raise ValidationError("round_size must be >= 1")
    if not 0.0 <= delta_explore <= 1.0:
        raise ConfigError("delta_explore must be in [0, 1]")
    available = np.asarray(available, dtype=np.int64)
    if available.shape != p.probs.shape:
        raise ValidationError("availability vector must match distribution size")
    total_available = int(available.sum())
    if total_available == 0:
        raise PoolExhaustedError("no unannotated samples remain")
    effective = min(round_size, total_available)
    explore_n = int(math.floor(delta_explore * effective + 0.5))
    explore_n = min(explore_n, effective)
    per_cluster = apportion(p.probs, effective - explore_n, available)
    return RoundAllocation(per_cluster=per_cluster, explore_n=explore_n, effective_size=effective)


class PoolState:
    """Cluster membership plus the annotated/unannotated split of a pool."""

    def __init__(self, assignment: Assignment):
        self.assignment = assignment
        self.ids = assignment.ids
        self.k = assignment.k
        self.members: list[np.ndarray] = [assignment.members(c) for c in range(self.k)]
        self.annotated = np.zeros(assignment.n, dtype=bool)

    @property
    def n(self) -> int:
        return self.ids.shape[0]

    def available_counts(self) -> np.ndarray:
        counts = np.empty(self.k, dtype=np.int64)
        for c in range(self.k):
            counts[c] = int((~self.annotated[self.members[c]]).sum())
        return counts

    def annotated_count(self) -> int:
        return int(self.annotated.sum())

    def mark(self, row_indices: np.ndarray) -> None:
        if np.any(self.annotated[row_indices]):
            raise ValidationError("sample selected twice")
        self.annotated[row_indices] = True

    def draw(
        self, allocation: RoundAllocation, rng: np.random.Generator
    ) -> np.ndarray:
        """Row indices for one round: per-cluster draws then exploration.

        Within each cluster the draw is uniform without replacement from
        unannotated members; exploration seats come uniformly from the
        whole unannotated pool minus this round's picks.
        """
        picked: list[np.ndarray] = []
        taken = np.zeros(self.n, dtype=bool)
        for c in range(self.k):
            want = int(allocation.per_cluster[c])
            if want == 0:
                continue
            cands = self.members[c][~self.annotated[self.members[c]]]
            if cands.size < want:
                raise ValidationError(
                    f"allocation exceeds availability in cluster {c} ({want} > {cands.size})"
                )
            sel = rng.choice(cands, size=want, replace=False)
            picked.append(sel)
            taken[sel] = True
        if allocation.explore_n > 0:
            cands = np.where(~self.annotated & ~taken)[0]
            if cands.size < allocation.explore_n:
                raise ValidationError("exploration seats exceed remaining pool")
            sel = rng.choice(cands, size=allocation.explore_n, replace=False)
            picked.append(sel)
        if not picked:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(picked)


def select_samples(
    allocation: RoundAllocation,
    assignment: Assignment,
    annotated_ids: Iterable[int],
    rng: np.random.Generator,
) -> list[int]:
    """One-shot selection honoring an allocation; returns sample ids."""
    pool = PoolState(assignment)
    annotated = set(int(i) for i in annotated_ids)
    if annotated:
        mask = np.fromiter((int(i) in annotated for i in assignment.ids), dtype=bool)
        pool.annotated = mask
    rows = pool.draw(allocation, rng)
    return [int(assignment.ids[r]) for r in rows]


class BudgetLedger:
    """Append-only spend log enforcing the annotation budget."""

    def __init__(self, budget_total: int):
        if budget_total < 0:
            raise ConfigError("budget must be >= 0")
        self.budget_total = budget_total
        self.entries: list[tuple[str, int]] = []
        self._spent = 0

    @property
    def spent(self) -> int:
        return self._spent

    @property
    def remaining(self) -> int:
        return self.budget_total - self._spent

    def spent_in(self, phase: str) -> int:
        return sum(count for p, count in self.entries if p == phase)

    @property
    def warmup_spent(self) -> int:
        return self.spent_in("warmup")

    @property
    def pcl_spent(self) -> int:
        return self.spent_in("pcl")

    def charge(self, ids: Iterable[int], phase: str) -> None:
        """Record a spend; raises without any partial charge on overdraw."""
        count = len(ids) if hasattr(ids, "__len__") else len(list(ids))
        if count == 0:
            return
        if self._spent + count > self.budget_total:
            raise BudgetExceededError(
                f"charge of {count} would exceed budget "
                f"({self._spent}/{self.budget_total} spent)"
            )
        self.entries.append((phase, count))
        self._spent += count


def cluster_density(
    m: EmbeddingMatrix, assignment: Assignment, model: ClusterModel, cluster_i: int
) -> float:
    """Mean cosine similarity of a cluster's members to its centroid."""
    members = assignment.members(cluster_i)
    if members.size == 0:
        raise ValidationError(f"cluster {cluster_i} is empty")
    rows = m.rows[members].astype(np.float64)
    return float((rows @ model.centroids[cluster_i]).mean())


def cluster_transferability(model: ClusterModel, cluster_i: int) -> float:
    """Mean cosine similarity between one centroid and all the others.

    Defined as 0 for a single-cluster model (nothing to transfer to).
    """
    if model.k == 1:
        return 0.0
    sims = model.centroids @ model.centroids[cluster_i]
    return float((sims.sum() - sims[cluster_i]) / (model.k - 1))


def warmup_weights(
    warmup_model: ClusterModel,
    assignment: Assignment,
    m: EmbeddingMatrix,
    warmup_tau: float,
) -> np.ndarray:
    """Per-cluster warmup sampling probabilities, exp(S_i / (tau * D_i)).

    S_i is the centroid's mean similarity to other centroids
    (transferability) and D_i the members' mean similarity to their
    centroid (density). Empty clusters get probability zero.
    """
    if warmup_tau <= 0:
        raise ConfigError("warmup_tau must be > 0")
    k = warmup_model.k
    rows = m.rows.astype(np.float64)
    sims_to_own = np.einsum("ij,ij->i", rows, warmup_model.centroids[assignment.clusters])
    counts = np.bincount(assignment.clusters, minlength=k).astype(np.float64)
    sums = np.bincount(assignment.clusters, weights=sims_to_own, minlength=k)
    density = np.divide(sums, counts, out=np.zeros(k), where=counts > 0)
    if k == 1:
        transfer = np.zeros(1)
    else:
        gram = warmup_model.centroids @ warmup_model.centroids.T
        transfer = (gram.sum(axis=1) - np.diag(gram)) / (k - 1)
    logits = np.full(k, -np.inf)
    nonempty = counts > 0
    if np.any(density[nonempty] <= 0):
        raise ValidationError("non-positive cluster density; model does not fit this pool")
    logits[nonempty] = transfer[nonempty] / (warmup_tau * density[nonempty])
    if not np.any(nonempty):
        raise ValidationError("all clusters empty")
    return _stable_softmax(logits)


def warmup_select(
    warmup_model: ClusterModel,
    assignment: Assignment,
    m: EmbeddingMatrix,
    ratio: float,
    warmup_tau: float,
    rng: np.random.Generator,
) -> tuple[list[int], np.ndarray, RoundAllocation]:
    """Pick the warmup slice: floor(ratio * n) samples.

    Cluster weights follow warmup_weights; seats are apportioned and drawn
    exactly like a selection round with no exploration slice. Returns the
    chosen ids, the weight vector, and the allocation.
    """
    if not 0.0 < ratio < 1.0:
        raise ConfigError("warmup ratio must be in (0, 1)")
    n = assignment.n
    target = int(math.floor(ratio * n))
    probs = warmup_weights(warmup_model, assignment, m, warmup_tau)
    pool = PoolState(assignment)
    allocation = RoundAllocation(
        per_cluster=apportion(probs, target, pool.available_counts()),
        explore_n=0,
        effective_size=target,
    )
    drawn = pool.draw(allocation, rng)
    ids = [int(assignment.ids[r]) for r in drawn]
    return ids, probs, allocation


@dataclass
class SelectionRound:
    """Everything recorded about one selection round."""

    round_index: int
    phase: str  # "warmup" | "pcl"
    deltas: np.ndarray
    probs: np.ndarray
    alloc: np.ndarray
    explore_n: int
    selected_ids: list[int]
    budget_spent: int  # cumulative spend after this round
    rng_digest: str

    def to_json_obj(self) -> dict:
        return {
            "round": self.round_index,
            "phase": self.phase,
            "deltas": [float(x) for x in self.deltas],
            "probs": [float(x) for x in self.probs],
            "alloc": [int(x) for x in self.alloc],
            "explore_n": self.explore_n,
            "selected_ids": self.selected_ids,
            "budget_spent": self.budget_spent,
        }


def _rng_digest(rng: np.random.Generator) -> str:
    state = json.dumps(rng.bit_generator.state, sort_keys=True, default=str)
    return hashlib.blake2s(state.encode()).hexdigest()[:16]


class ProgressEngine:
    """Single-owner state machine running warmup plus budgeted rounds."""

    def __init__(self, config: EngineConfig, assignment: Assignment):
        if config.budget_total > assignment.n:
            raise ConfigError(
                f"budget {config.budget_total} exceeds pool size {assignment.n}"
            )
        self.config = config
        self.pool = PoolState(assignment)
        self.ledger = BudgetLedger(config.budget_total)
        self.rounds: list[SelectionRound] = []
        seq = np.random.SeedSequence(config.seed)
        warmup_seed, rounds_seed = seq.spawn(2)
        self._warmup_rng = np.random.default_rng(warmup_seed)
        self._rounds_rng = np.random.default_rng(rounds_seed)

    @property
    def k(self) -> int:
        return self.pool.k

    def annotated_ids(self) -> np.ndarray:
        return self.pool.ids[self.pool.annotated]

    def run_warmup(self, warmup_model: ClusterModel, m: EmbeddingMatrix) -> SelectionRound:
        """Spend the warmup slice; recorded as round 0."""
        if self.rounds:
            raise ValidationError("warmup must run before any round")
        n = self.pool.n
        target = int(math.floor(self.config.warmup_ratio * n))
        if target > self.config.budget_total:
            raise ConfigError(
                f"warmup of {target} samples exceeds budget {self.config.budget_total}"
            )
        if target == 0:
            record = SelectionRound(
                round_index=0,
                phase="warmup",
                deltas=np.zeros(0),
                probs=np.zeros(0),
                alloc=np.zeros(self.k, dtype=np.int64),
                explore_n=0,
                selected_ids=[],
                budget_spent=self.ledger.spent,
                rng_digest=_rng_digest(self._warmup_rng),
            )
            self.rounds.append(record)
            return record
        probs = warmup_weights(warmup_model, self.pool.assignment, m, self.config.warmup_tau)
        allocation = RoundAllocation(
            per_cluster=apportion(probs, target, self.pool.available_counts()),
            explore_n=0,
            effective_size=target,
        )
        drawn = self.pool.draw(allocation, self._warmup_rng)
        ids = [int(self.pool.ids[r]) for r in drawn]
        self.ledger.charge(ids, "warmup")
        self.pool.mark(drawn)
        record = SelectionRound(
            round_index=0,
            phase="warmup",
            deltas=np.zeros(0),
            probs=probs,
            alloc=allocation.per_cluster,
            explore_n=0,
            selected_ids=ids,
            budget_spent=self.ledger.spent,
            rng_digest=_rng_digest(self._warmup_rng),
        )
        self.rounds.append(record)
        return record

    def progress_scores(
        self, curr: MetricSnapshot, prev: MetricSnapshot | None
    ) -> np.ndarray:
        """Delta scores with the cold-start rule applied.

        The first round (no previous snapshot) and any cluster lacking
        support in either snapshot score 0: no evidence, no priority.
        """
        if prev is None:
            return np.zeros(curr.k)
        delta = compute_delta(curr, prev, self.config.epsilon, self.config.metric_kind)
        values = delta.values.copy()
        values[(prev.support == 0) | (curr.support == 0)] = 0.0
        return values

    def run_round(
        self,
        curr: MetricSnapshot,
        prev: MetricSnapshot | None,
        scores: np.ndarray | None = None,
        explore_override: float | None = None,
    ) -> SelectionRound:
        """Execute one selection round against the latest snapshots.

        ``scores`` replaces the progress deltas when a different selection
        policy drives the softmax; ``explore_override`` replaces the
        configured exploration fraction (1.0 turns the round into a pure
        uniform draw).
        """
        if self.ledger.remaining <= 0:
            raise BudgetExceededError("budget exhausted")
        if scores is None:
            scores = self.progress_scores(curr, prev)
        else:
            scores = np.asarray(scores, dtype=np.float64)
            if scores.shape != (self.k,):
                raise ValidationError("scores must have one entry per cluster")
        probs = softmax_distribution(scores, self.config.tau)
        explore = self.config.delta_explore if explore_override is None else explore_override
        round_size = min(self.config.round_size, self.ledger.remaining)
        allocation = allocate_round(probs, round_size, explore, self.pool.available_counts())
        drawn = self.pool.draw(allocation, self._rounds_rng)
        ids = [int(self.pool.ids[r]) for r in drawn]
        self.ledger.charge(ids, "pcl")
        self.pool.mark(drawn)
        record = SelectionRound(
            round_index=len(self.rounds),
            phase="pcl",
            deltas=scores,
            probs=probs.probs,
            alloc=allocation.per_cluster,
            explore_n=allocation.explore_n,
            selected_ids=ids,
            budget_spent=self.ledger.spent,
            rng_digest=_rng_digest(self._rounds_rng),
        )
        self.rounds.append(record)
        return record

    def exhausted(self) -> bool:
        return self.ledger.remaining <= 0 or self.pool.annotated_count() >= self.pool.n


def write_selection_log(rounds: list[SelectionRound], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in rounds:
            fh.write(json.dumps(r.to_json_obj()) + "\n")
