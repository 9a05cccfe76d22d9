"""Post-hoc analyses: benchmark-aligned rarity, cluster ability labels,
and benchmark difficulty.

Rarity: fit one multivariate Gaussian per benchmark's embeddings, assign
every training sample to the benchmark with the highest log-likelihood,
and report rarity = log(1/frequency) per benchmark.

Ability: label each cluster with the majority ability among its samples'
filtered nearest benchmark neighbors (top-k by cosine, then keep neighbors
within alpha of each sample's best similarity).

Difficulty: (max score - achieved score) / max score, in [0, 1].
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .clustering import Assignment
from .data_model import EmbeddingMatrix
from .errors import ConfigError, SingularModelError, ValidationError

DEFAULT_LAMBDA = 1e-3
DEFAULT_TOP_K = 5
DEFAULT_ALPHA = 0.9


@dataclass
class GaussianModel:
    """Gaussian fit of one benchmark's embeddings, with cached factorization.

    The stored covariance already includes the ridge term lambda * I; the
    Cholesky factor and log-determinant are computed once at fit time.
    """

    name: str
    mean: np.ndarray  # (d,)
    covariance: np.ndarray  # (d, d), regularized
    lam: float
    chol: np.ndarray = field(repr=False, default=None)  # type: ignore[assignment]
    log_det: float = 0.0

    @property
    def d(self) -> int:
        return self.mean.shape[0]


@dataclass
class RarityReport:
    benchmarks: list[str]
    counts: np.ndarray  # matched training samples per benchmark
    frequencies: np.ndarray  # counts / N
    rarities: np.ndarray  # log(1/f); +inf sentinel when count == 0
    total: int
    lam: float
    smoothing: str = "none"  # "none" | "add-one"
    projection_dim: int | None = None


@dataclass
class AbilityAssignment:
    cluster: int
    label: str | None  # None when abstaining (no votes at all)
    votes: dict[str, int]
    abstained: bool
    tie: bool  # whether the winning count was shared


@dataclass
class DifficultyScore:
    name: str
    raw: float
    max_score: float
    difficulty: float


def fit_benchmark_gaussians(
    benchmarks: list[tuple[str, EmbeddingMatrix]], lam: float = DEFAULT_LAMBDA
) -> list[GaussianModel]:
    """Sample mean + covariance (ddof=1) + lam * I per benchmark.

    Requires at least 2 samples per benchmark. Raises SingularModelError,
    naming the benchmark, if the regularized covariance still fails to
    factorize.
    """
    if lam < 0:
        raise ConfigError("lambda must be >= 0")
    if not benchmarks:
        raise ValidationError("need at least one benchmark")
    models = []
    for name, m in benchmarks:
        if m.n < 2:
            raise ValidationError(f"benchmark {name!r} needs >= 2 samples, has {m.n}")
        rows = m.rows.astype(np.float64)
        mean = rows.mean(axis=0)
        cov = np.cov(rows, rowvar=False, ddof=1)
        cov = np.atleast_2d(cov) + lam * np.eye(m.d)
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as exc:
            raise SingularModelError(name, str(exc)) from exc
        log_det = 2.0 * float(np.log(np.diag(chol)).sum())
        models.append(
            GaussianModel(name=name, mean=mean, covariance=cov, lam=lam, chol=chol, log_det=log_det)
        )
    return models


def log_likelihood(model: GaussianModel, x: np.ndarray) -> float:
    """Gaussian log-density at x under the regularized covariance."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.shape[0] != model.d:
        raise ValidationError(f"dimension mismatch: x has {x.shape[0]}, model has {model.d}")
    diff = x - model.mean
    z = np.linalg.solve(model.chol, diff)  # forward substitution on L z = diff
    quad = float(z @ z)
    return -0.5 * (quad + model.log_det + model.d * math.log(2.0 * math.pi))


def _log_likelihood_rows(model: GaussianModel, rows: np.ndarray) -> np.ndarray:
    diff = rows - model.mean
    z = np.linalg.solve(model.chol, diff.T)
    quad = np.einsum("ij,ij->j", z, z)
    return -0.5 * (quad + model.log_det + model.d * math.log(2.0 * math.pi))


def assign_rarity(
    train: EmbeddingMatrix,
    models: list[GaussianModel],
    smoothing: str = "none",
    projection_dim: int | None = None,
) -> RarityReport:
    """Match every training sample to its highest-likelihood benchmark.

    Ties go to the lowest benchmark index. Benchmarks matching zero samples
    report an infinite rarity sentinel unless add-one smoothing is opted
    into, in which case the report declares the changed mode.
    """
    if not models:
        raise ValidationError("need at least one model")
    if smoothing not in ("none", "add-one"):
        raise ConfigError(f"unknown smoothing mode {smoothing!r}")
    d = models[0].d
    for mdl in models:
        if mdl.d != d:
            raise ValidationError("benchmark models disagree on dimension")
    if train.d != d:
        raise ValidationError(f"train dimension {train.d} != model dimension {d}")
    rows = train.rows.astype(np.float64)
    ll = np.stack([_log_likelihood_rows(mdl, rows) for mdl in models], axis=1)
    matched = np.argmax(ll, axis=1)  # first max wins -> lowest index on ties
    counts = np.bincount(matched, minlength=len(models)).astype(np.int64)
    n = train.n
    if smoothing == "add-one":
        freqs = (counts + 1.0) / (n + len(models))
        rarities = np.log(1.0 / freqs)
    else:
        freqs = counts / n
        rarities = np.full(len(models), np.inf)
        nz = counts > 0
        rarities[nz] = np.log(1.0 / freqs[nz])
    return RarityReport(
        benchmarks=[mdl.name for mdl in models],
        counts=counts,
        frequencies=freqs,
        rarities=rarities,
        total=n,
        lam=models[0].lam,
        smoothing=smoothing,
        projection_dim=projection_dim,
    )


def pca_project(
    matrices: list[EmbeddingMatrix], dim: int
) -> list[EmbeddingMatrix]:
    """Joint PCA projection of several aligned matrices to ``dim`` axes.

    Optional preprocessing for rarity at high embedding dimensionality,
    where raw covariances are singular. Components come from the pooled
    rows of all inputs; the report records the dimension used.
    """
    if dim < 1:
        raise ConfigError("projection dim must be >= 1")
    stacked = np.concatenate([m.rows.astype(np.float64) for m in matrices], axis=0)
    if dim > stacked.shape[1]:
        raise ConfigError("projection dim exceeds input dimension")
    center = stacked.mean(axis=0)
    _, _, vt = np.linalg.svd(stacked - center, full_matrices=False)
    comps = vt[:dim]
    out = []
    for m in matrices:
        proj = (m.rows.astype(np.float64) - center) @ comps.T
        out.append(EmbeddingMatrix(ids=m.ids.copy(), rows=proj.astype(np.float32)))
    return out


def assign_ability(
    train: EmbeddingMatrix,
    assignment: Assignment,
    benchmark: EmbeddingMatrix,
    labels: list[str],
    top_k: int = DEFAULT_TOP_K,
    alpha: float = DEFAULT_ALPHA,
) -> list[AbilityAssignment]:
    """Majority-vote ability label per cluster from filtered neighbors.

    Per sample: rank all benchmark items by cosine similarity, take the
    top-k (expanding through ties at the boundary so the result does not
    depend on benchmark ordering), keep neighbors with similarity >=
    alpha * the sample's best similarity, and collect their labels. Per
    cluster: the modal label over all kept votes, ties resolved to the
    lexicographically smallest label; clusters with no votes abstain.

    Embeddings must be unit-norm on both sides.
    """
    if top_k < 1:
        raise ConfigError("top_k must be >= 1")
    if not 0.0 < alpha <= 1.0:
        raise ConfigError("alpha must be in (0, 1]")
    if len(labels) != benchmark.n:
        raise ValidationError("one label per benchmark sample required")
    if train.d != benchmark.d:
        raise ValidationError("train/benchmark dimension mismatch")
    if assignment.n != train.n:
        raise ValidationError("assignment does not cover the training matrix")

    train_rows = train.rows.astype(np.float64)
    bench_rows = benchmark.rows.astype(np.float64)
    for nm, rows in (("train", train_rows), ("benchmark", bench_rows)):
        norms = np.linalg.norm(rows, axis=1)
        if np.abs(norms - 1.0).max() > 1e-4:
            raise ValidationError(f"{nm} embeddings must be unit-norm")

    sims = train_rows @ bench_rows.T  # (n, M)
    m = bench_rows.shape[0]
    k_eff = min(top_k, m)
    labels_arr = np.asarray(labels, dtype=object)

    results = []
    for c in range(assignment.k):
        members = assignment.members(c)
        if members.size == 0:
            results.append(
                AbilityAssignment(cluster=c, label=None, votes={}, abstained=True, tie=False)
            )
            continue
        votes: Counter[str] = Counter()
        for ridx in members:
            row = sims[ridx]
            order = np.argsort(-row, kind="stable")
            cutoff_sim = row[order[k_eff - 1]]
            keep = order[row[order] >= cutoff_sim]  # top-k with boundary ties expanded
            best = row[order[0]]
            kept = keep[row[keep] >= alpha * best]
            votes.update(str(labels_arr[j]) for j in kept)
        if not votes:
            results.append(
                AbilityAssignment(cluster=c, label=None, votes={}, abstained=True, tie=False)
            )
            continue
        top_count = max(votes.values())
        winners = sorted(label for label, cnt in votes.items() if cnt == top_count)
        results.append(
            AbilityAssignment(
                cluster=c,
                label=winners[0],
                votes=dict(sorted(votes.items())),
                abstained=False,
                tie=len(winners) > 1,
            )
        )
    return results


def compute_difficulty(scores: list[tuple[str, float, float]]) -> list[DifficultyScore]:
    """Normalized headroom per benchmark: (max - raw) / max."""
    out = []
    for name, raw, max_score in scores:
        if max_score <= 0:
            raise ValidationError(f"{name}: max score must be > 0")
        if raw < 0 or raw > max_score:
            raise ValidationError(f"{name}: raw score {raw} outside [0, {max_score}]")
        out.append(
            DifficultyScore(
                name=name, raw=raw, max_score=max_score, difficulty=(max_score - raw) / max_score
            )
        )
    return out
