"""Skill discovery: spherical k-means over unit-norm joint embeddings.

Partitions a pool into K clusters by cosine similarity. Rows must already
be unit-norm (see data_model.normalize_rows) so cosine similarity is a
plain dot product throughout.

Determinism contract: identical (matrix, k, seed, max_iters, tol) produce
bit-identical centroids and assignments. All reductions therefore run in
fixed index order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data_model import EmbeddingMatrix, read_embeddings, write_embeddings
from .errors import ConfigError, FormatError, ValidationError

UNIT_NORM_TOL = 1e-4
_ASSIGN_CHUNK = 2048  # rows per similarity block, caps peak memory


@dataclass
class ClusterModel:
    """Fitted spherical k-means model: K unit-norm centroids."""

    centroids: np.ndarray  # (k, d) float64, rows unit-norm
    seed: int
    iterations_run: int
    objective: float  # mean cosine of points to their assigned centroid
    objective_history: list[float] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    @property
    def d(self) -> int:
        return self.centroids.shape[1]


@dataclass
class Assignment:
    """Maps every sample id to a cluster index in [0, k)."""

    ids: np.ndarray  # (n,) uint64
    clusters: np.ndarray  # (n,) int32
    k: int

    def __post_init__(self) -> None:
        self.ids = np.ascontiguousarray(self.ids, dtype=np.uint64)
        self.clusters = np.ascontiguousarray(self.clusters, dtype=np.int32)
        if self.ids.shape != self.clusters.shape:
            raise ValidationError("ids and clusters must align")
        if self.clusters.size and (self.clusters.min() < 0 or self.clusters.max() >= self.k):
            raise ValidationError("cluster index out of range")

    @property
    def n(self) -> int:
        return self.ids.shape[0]

    def as_dict(self) -> dict[int, int]:
        return {int(i): int(c) for i, c in zip(self.ids, self.clusters)}

    def members(self, cluster: int) -> np.ndarray:
        """Row indices (not ids) assigned to ``cluster``, ascending."""
        return np.where(self.clusters == cluster)[0]

    def sizes(self) -> np.ndarray:
        return np.bincount(self.clusters, minlength=self.k).astype(np.int64)


@dataclass
class ClusterQualityReport:
    intra: np.ndarray  # per-cluster mean pairwise cosine (sampled)
    singleton: np.ndarray  # bool flags for size-1 clusters
    inter: float | None  # mean pairwise centroid cosine; None when k == 1
    sizes: np.ndarray


def _check_unit_rows(rows: np.ndarray) -> None:
    norms = np.linalg.norm(rows, axis=1)
    worst = float(np.abs(norms - 1.0).max()) if norms.size else 0.0
    if worst > UNIT_NORM_TOL:
        raise ValidationError(f"rows are not unit-norm (max deviation {worst:.3g})")


def _assign_chunked(rows: np.ndarray, centroids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Argmax-cosine assignment; ties go to the lowest cluster index.

    Returns (labels, best_sims). Processes rows in blocks so the n x k
    similarity matrix never materializes in full.
    """
    n = rows.shape[0]
    labels = np.empty(n, dtype=np.int32)
    best = np.empty(n, dtype=np.float64)
    ct = centroids.T
    for start in range(0, n, _ASSIGN_CHUNK):
        stop = min(start + _ASSIGN_CHUNK, n)
        sims = rows[start:stop] @ ct
        labels[start:stop] = np.argmax(sims, axis=1)
        best[start:stop] = sims[np.arange(stop - start), labels[start:stop]]
    return labels, best


def _kmeanspp_init(rows: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding with (1 - cosine) as the distance."""
    n = rows.shape[0]
    chosen = np.empty(k, dtype=np.int64)
    chosen[0] = rng.integers(n)
    # distance to the nearest already-chosen seed
    dist = 1.0 - rows @ rows[chosen[0]]
    np.clip(dist, 0.0, None, out=dist)
    for j in range(1, k):
        total = float(dist.sum())
        if total <= 0.0:
            # all remaining points coincide with a seed; pick uniformly
            chosen[j] = rng.integers(n)
        else:
            chosen[j] = rng.choice(n, p=dist / total)
        np.minimum(dist, np.clip(1.0 - rows @ rows[chosen[j]], 0.0, None), out=dist)
    return rows[chosen].copy()


def _update_centroids(
    rows: np.ndarray, labels: np.ndarray, centroids: np.ndarray, sims: np.ndarray
) -> np.ndarray:
    """Normalized per-cluster means; empty clusters reseed to the worst-fit point."""
    k, d = centroids.shape
    sums = np.zeros((k, d), dtype=np.float64)
    np.add.at(sums, labels, rows)
    counts = np.bincount(labels, minlength=k)
    new = centroids.copy()
    norms = np.linalg.norm(sums, axis=1)
    ok = (counts > 0) & (norms > 1e-12)
    new[ok] = sums[ok] / norms[ok, None]
    empties = np.where(counts == 0)[0]
    if empties.size:
        order = np.argsort(sims, kind="stable")  # worst-fit points first
        cursor = 0
        for e in empties:
            new[e] = rows[order[cursor]]
            cursor += 1
    return new


def _lloyd(
    rows: np.ndarray, k: int, rng: np.random.Generator, max_iters: int, tol: float
) -> tuple[np.ndarray, float, list[float], int]:
    centroids = _kmeanspp_init(rows, k, rng)
    labels, sims = _assign_chunked(rows, centroids)
    objective = float(sims.mean())
    history = [objective]
    iterations = 0
    for _ in range(max_iters):
        new_centroids = _update_centroids(rows, labels, centroids, sims)
        new_labels, new_sims = _assign_chunked(rows, new_centroids)
        new_objective = float(new_sims.mean())
        if new_objective < objective:
            break  # round-off regression at convergence; keep the better state
        centroids, labels, sims = new_centroids, new_labels, new_sims
        improvement = new_objective - objective
        objective = new_objective
        history.append(objective)
        iterations += 1
        if improvement < tol:
            break
    return centroids, objective, history, iterations


def fit_spherical_kmeans(
    m: EmbeddingMatrix,
    k: int,
    seed: int,
    max_iters: int = 100,
    tol: float = 1e-4,
    n_init: int = 4,
) -> ClusterModel:
    """Lloyd-style spherical k-means on unit-norm rows.

    Runs ``n_init`` k-means++ restarts off one seeded generator and keeps
    the run with the best objective (first wins on exact ties), so results
    are deterministic for a fixed seed. The recorded objective history
    (mean cosine to the assigned centroid) is non-decreasing: an iteration
    whose objective would drop below the current best (only possible
    through floating-point round-off at convergence) is discarded and the
    previous state kept.
    """
    if not 1 <= k <= m.n:
        raise ConfigError(f"k={k} must satisfy 1 <= k <= n={m.n}")
    if max_iters < 1:
        raise ConfigError("max_iters must be >= 1")
    if tol <= 0:
        raise ConfigError("tol must be > 0")
    if n_init < 1:
        raise ConfigError("n_init must be >= 1")
    rows = m.rows.astype(np.float64)
    _check_unit_rows(rows)

    rng = np.random.default_rng(seed)
    best: tuple[np.ndarray, float, list[float], int] | None = None
    for _ in range(n_init):
        result = _lloyd(rows, k, rng, max_iters, tol)
        if best is None or result[1] > best[1]:
            best = result
    centroids, objective, history, iterations = best
    return ClusterModel(
        centroids=centroids,
        seed=seed,
        iterations_run=iterations,
        objective=objective,
        objective_history=history,
    )


def assign(m: EmbeddingMatrix, model: ClusterModel) -> Assignment:
    """Assign every row to its most-similar centroid (ties: lowest index)."""
    if m.d != model.d:
        raise ValidationError(f"dimension mismatch: matrix d={m.d}, model d={model.d}")
    rows = m.rows.astype(np.float64)
    _check_unit_rows(rows)
    labels, _ = _assign_chunked(rows, model.centroids)
    return Assignment(ids=m.ids.copy(), clusters=labels, k=model.k)


def cluster_quality(
    m: EmbeddingMatrix,
    assignment: Assignment,
    model: ClusterModel,
    pair_sample_cap: int = 1000,
    seed: int = 0,
) -> ClusterQualityReport:
    """Intra-cluster cohesion and inter-centroid similarity.

    Intra is the mean pairwise cosine within each cluster, estimated over
    at most ``pair_sample_cap`` random member pairs (deterministic for a
    fixed seed). Singletons report intra 1.0 with a flag. Inter is the
    mean pairwise centroid cosine, None when there is a single cluster.
    """
    if assignment.n != m.n:
        raise ValidationError("assignment does not cover the matrix")
    rows = m.rows.astype(np.float64)
    rng = np.random.default_rng(seed)
    k = model.k
    intra = np.zeros(k, dtype=np.float64)
    singleton = np.zeros(k, dtype=bool)
    sizes = assignment.sizes()
    for c in range(k):
        members = assignment.members(c)
        sz = members.size
        if sz == 0:
            intra[c] = np.nan
            continue
        if sz == 1:
            intra[c] = 1.0
            singleton[c] = True
            continue
        n_pairs = sz * (sz - 1) // 2
        if n_pairs <= pair_sample_cap:
            sub = rows[members]
            sims = sub @ sub.T
            iu = np.triu_indices(sz, k=1)
            intra[c] = float(sims[iu].mean())
        else:
            a = members[rng.integers(0, sz, size=pair_sample_cap)]
            b = members[rng.integers(0, sz, size=pair_sample_cap)]
            clash = a == b
            while np.any(clash):
                b[clash] = members[rng.integers(0, sz, size=int(clash.sum()))]
                clash = a == b
            intra[c] = float(np.einsum("ij,ij->i", rows[a], rows[b]).mean())

    if k == 1:
        inter = None
    else:
        sims = model.centroids @ model.centroids.T
        iu = np.triu_indices(k, k=1)
        inter = float(sims[iu].mean())
    return ClusterQualityReport(intra=intra, singleton=singleton, inter=inter, sizes=sizes)


def save_assignment(assignment: Assignment, path: str | Path) -> None:
    """JSONL export: one {"id", "cluster"} object per sample."""
    with open(path, "w", encoding="utf-8") as fh:
        for i, c in zip(assignment.ids, assignment.clusters):
            fh.write(json.dumps({"id": int(i), "cluster": int(c)}) + "\n")


def load_assignment(path: str | Path, k: int | None = None) -> Assignment:
    ids: list[int] = []
    clusters: list[int] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                ids.append(int(obj["id"]))
                clusters.append(int(obj["cluster"]))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise FormatError(f"{path}: bad assignment line {lineno}: {exc}") from exc
    arr_ids = np.asarray(ids, dtype=np.uint64)
    arr_clusters = np.asarray(clusters, dtype=np.int32)
    if k is None:
        k = int(arr_clusters.max()) + 1 if arr_clusters.size else 0
    return Assignment(ids=arr_ids, clusters=arr_clusters, k=k)


def save_model(model: ClusterModel, path: str | Path) -> None:
    """Persist centroids in the embedding binary format, cluster index as id."""
    m = EmbeddingMatrix(
        ids=np.arange(model.k, dtype=np.uint64),
        rows=model.centroids.astype(np.float32),
    )
    write_embeddings(m, path)


def load_model(path: str | Path, seed: int = 0) -> ClusterModel:
    m = read_embeddings(path)
    order = np.argsort(m.ids, kind="stable")
    centroids = m.rows[order].astype(np.float64)
    norms = np.linalg.norm(centroids, axis=1)
    if np.any(norms < 1e-12):
        raise ValidationError(f"{path}: zero-norm centroid")
    centroids /= norms[:, None]
    obj = float("nan")
    return ClusterModel(
        centroids=centroids, seed=seed, iterations_run=0, objective=obj, objective_history=[]
    )
