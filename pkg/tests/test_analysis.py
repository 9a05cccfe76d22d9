import math

import numpy as np
import pytest
from scipy.stats import multivariate_normal

from skillpace.analysis import (
    assign_ability,
    assign_rarity,
    compute_difficulty,
    fit_benchmark_gaussians,
    log_likelihood,
    pca_project,
)
from skillpace.clustering import Assignment
from skillpace.data_model import EmbeddingMatrix
from skillpace.errors import ConfigError, SingularModelError, ValidationError


def emb(rows, ids=None):
    rows = np.asarray(rows, dtype=np.float32)
    if ids is None:
        ids = np.arange(rows.shape[0])
    return EmbeddingMatrix(ids=np.asarray(ids), rows=rows)


# --- gaussian fitting --------------------------------------------------------


def test_fit_hand_covariance():
    bm = emb([[0, 0], [2, 0], [0, 2], [2, 2]])
    g = fit_benchmark_gaussians([("b", bm)], lam=0.0)[0]
    assert np.allclose(g.mean, [1.0, 1.0])
    assert np.allclose(g.covariance, (4.0 / 3.0) * np.eye(2))


def test_fit_identical_points_singular():
    bm = emb([[1, 1], [1, 1], [1, 1]])
    with pytest.raises(SingularModelError, match="dup"):
        fit_benchmark_gaussians([("dup", bm)], lam=0.0)


def test_fit_identical_points_regularized():
    bm = emb([[1, 1], [1, 1], [1, 1]])
    g = fit_benchmark_gaussians([("dup", bm)], lam=0.1)[0]
    assert np.allclose(g.covariance, 0.1 * np.eye(2))


def test_fit_requires_two_samples():
    with pytest.raises(ValidationError):
        fit_benchmark_gaussians([("one", emb([[1, 2]]))], lam=0.1)


# --- log likelihood ----------------------------------------------------------


def standard_normal_model(d):
    from skillpace.analysis import GaussianModel

    cov = np.eye(d)
    return GaussianModel(
        name="std",
        mean=np.zeros(d),
        covariance=cov,
        lam=0.0,
        chol=np.linalg.cholesky(cov),
        log_det=0.0,
    )


def test_loglik_standard_normal_at_mean():
    g = standard_normal_model(2)
    assert log_likelihood(g, np.zeros(2)) == pytest.approx(-math.log(2 * math.pi), rel=1e-12)


def test_loglik_one_dim_unit_offset():
    g = standard_normal_model(1)
    assert log_likelihood(g, np.array([1.0])) == pytest.approx(
        -0.5 * (1 + math.log(2 * math.pi)), rel=1e-12
    )


def test_loglik_maximized_at_mean():
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(40, 3))
    g = fit_benchmark_gaussians([("b", emb(pts))], lam=1e-3)[0]
    at_mean = log_likelihood(g, g.mean)
    for _ in range(50):
        assert log_likelihood(g, g.mean + rng.normal(scale=0.3, size=3)) < at_mean


def test_loglik_matches_scipy():
    rng = np.random.default_rng(4)
    pts = rng.normal(size=(30, 4))
    g = fit_benchmark_gaussians([("b", emb(pts))], lam=1e-2)[0]
    ref = multivariate_normal(mean=g.mean, cov=g.covariance)
    for _ in range(20):
        x = rng.normal(size=4)
        assert log_likelihood(g, x) == pytest.approx(ref.logpdf(x), rel=1e-10)


def test_loglik_dimension_mismatch():
    g = standard_normal_model(2)
    with pytest.raises(ValidationError):
        log_likelihood(g, np.zeros(3))


# --- rarity -------------------------------------------------------------------


def test_rarity_single_benchmark():
    rng = np.random.default_rng(5)
    models = fit_benchmark_gaussians([("only", emb(rng.normal(size=(10, 2))))], lam=1e-3)
    report = assign_rarity(emb(rng.normal(size=(50, 2))), models)
    assert report.frequencies[0] == 1.0
    assert report.rarities[0] == 0.0


def test_rarity_symmetric_two_benchmarks():
    rng = np.random.default_rng(6)
    # identical covariance structure around two distant means
    offsets = rng.normal(scale=0.5, size=(40, 2))
    b1 = emb(offsets + np.array([10.0, 0.0]))
    b2 = emb(offsets + np.array([-10.0, 0.0]))
    models = fit_benchmark_gaussians([("right", b1), ("left", b2)], lam=1e-3)
    probe_offsets = rng.normal(scale=0.5, size=(150, 2))
    train = emb(
        np.concatenate([probe_offsets + [10.0, 0.0], probe_offsets + [-10.0, 0.0]])
    )
    report = assign_rarity(train, models)
    assert report.counts.tolist() == [150, 150]
    assert report.rarities[0] == pytest.approx(math.log(2), abs=1e-12)
    assert report.rarities[1] == pytest.approx(math.log(2), abs=1e-12)


def test_rarity_zero_count_sentinel():
    rng = np.random.default_rng(7)
    b1 = emb(rng.normal(size=(20, 2)) + [50.0, 0.0])
    b2 = emb(rng.normal(size=(20, 2)) - [50.0, 0.0])
    models = fit_benchmark_gaussians([("near", b1), ("far", b2)], lam=1e-3)
    train = emb(rng.normal(size=(30, 2)) + [50.0, 0.0])
    report = assign_rarity(train, models)
    assert report.counts.tolist() == [30, 0]
    assert math.isinf(report.rarities[1])
    assert report.smoothing == "none"


def test_rarity_add_one_smoothing():
    rng = np.random.default_rng(8)
    b1 = emb(rng.normal(size=(20, 2)) + [50.0, 0.0])
    b2 = emb(rng.normal(size=(20, 2)) - [50.0, 0.0])
    models = fit_benchmark_gaussians([("near", b1), ("far", b2)], lam=1e-3)
    train = emb(rng.normal(size=(30, 2)) + [50.0, 0.0])
    report = assign_rarity(train, models, smoothing="add-one")
    assert report.smoothing == "add-one"
    assert np.all(np.isfinite(report.rarities))
    assert report.frequencies[0] == pytest.approx(31 / 32)


def test_rarity_matches_brute_force_oracle():
    # direct per-pair density argmax via scipy, no shared factorization
    rng = np.random.default_rng(9)
    centers = np.array([[0.0, 0.0], [4.0, 1.0], [-3.0, 5.0]])
    bench = [
        (f"b{j}", emb(rng.normal(size=(25, 2)) + centers[j])) for j in range(3)
    ]
    models = fit_benchmark_gaussians(bench, lam=1e-3)
    train = emb(rng.normal(scale=3.0, size=(500, 2)))
    report = assign_rarity(train, models)

    ref_dists = [
        multivariate_normal(mean=m.mean, cov=m.covariance) for m in models
    ]
    rows = train.rows.astype(np.float64)
    oracle_counts = np.zeros(3, dtype=np.int64)
    for x in rows:
        lls = [rd.logpdf(x) for rd in ref_dists]
        oracle_counts[int(np.argmax(lls))] += 1
    assert report.counts.tolist() == oracle_counts.tolist()
    freqs = oracle_counts / 500
    for j in range(3):
        if oracle_counts[j] > 0:
            assert report.rarities[j] == pytest.approx(math.log(1 / freqs[j]), rel=1e-12)
    assert report.counts.sum() == 500


def test_rarity_monotone_in_frequency():
    rng = np.random.default_rng(10)
    b = [(f"b{j}", emb(rng.normal(size=(15, 2)) + [6.0 * j, 0.0])) for j in range(3)]
    models = fit_benchmark_gaussians(b, lam=1e-3)
    train_rows = np.concatenate(
        [rng.normal(size=(cnt, 2)) + [6.0 * j, 0.0] for j, cnt in enumerate([200, 120, 30])]
    )
    report = assign_rarity(emb(train_rows), models)
    order_by_freq = np.argsort(-report.frequencies)
    rarities = report.rarities[order_by_freq]
    assert np.all(np.diff(rarities) >= 0)


def test_pca_projection_dims():
    rng = np.random.default_rng(11)
    ms = [emb(rng.normal(size=(30, 10))), emb(rng.normal(size=(20, 10)))]
    out = pca_project(ms, dim=3)
    assert all(o.d == 3 for o in out)
    assert out[0].n == 30 and out[1].n == 20


# --- ability assignment --------------------------------------------------------


def unit_rows(rows):
    rows = np.asarray(rows, dtype=np.float64)
    return (rows / np.linalg.norm(rows, axis=1, keepdims=True)).astype(np.float32)


def test_ability_single_benchmark_sample():
    train = emb(unit_rows([[1, 0], [0.9, 0.1], [0, 1]]))
    asg = Assignment(ids=train.ids, clusters=np.array([0, 0, 1], dtype=np.int32), k=2)
    bench = emb(unit_rows([[1, 0.05]]), ids=[100])
    out = assign_ability(train, asg, bench, ["OCR"], top_k=5, alpha=0.9)
    assert [a.label for a in out] == ["OCR", "OCR"]


def test_ability_majority_vote():
    train = emb(unit_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    asg = Assignment(ids=train.ids, clusters=np.zeros(3, dtype=np.int32), k=1)
    bench = emb(unit_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), ids=[10, 11, 12])
    # each sample matches exactly one benchmark item; labels A, A, B
    out = assign_ability(train, asg, bench, ["A", "A", "B"], top_k=1, alpha=0.95)
    assert out[0].label == "A"
    assert out[0].votes == {"A": 2, "B": 1}


def test_ability_alpha_filter_hand_case():
    # one training sample with benchmark similarities 0.95, 0.90, 0.85, 0.50,
    # 0.40: threshold 0.9 * 0.95 = 0.855, so exactly the first two survive
    base = np.zeros(6)
    base[0] = 1.0
    sims = [0.95, 0.90, 0.85, 0.50, 0.40]
    bench_rows = []
    for i, s in enumerate(sims):
        v = np.zeros(6)
        v[0] = s
        v[i + 1] = math.sqrt(1 - s * s)
        bench_rows.append(v)
    train = emb(unit_rows([base]))
    asg = Assignment(ids=train.ids, clusters=np.zeros(1, dtype=np.int32), k=1)
    bench = emb(np.asarray(bench_rows, dtype=np.float32), ids=np.arange(5) + 50)
    labels = ["keep1", "keep2", "drop3", "drop4", "drop5"]
    out = assign_ability(train, asg, bench, labels, top_k=5, alpha=0.9)
    assert out[0].votes == {"keep1": 1, "keep2": 1}


def test_ability_tie_lexicographic():
    train = emb(unit_rows([[1, 0], [0, 1]]))
    asg = Assignment(ids=train.ids, clusters=np.zeros(2, dtype=np.int32), k=1)
    bench = emb(unit_rows([[1, 0], [0, 1]]), ids=[7, 8])
    out = assign_ability(train, asg, bench, ["zebra", "apple"], top_k=1, alpha=0.99)
    assert out[0].tie
    assert out[0].label == "apple"


def test_ability_invariant_to_benchmark_order():
    rng = np.random.default_rng(12)
    train = emb(unit_rows(rng.normal(size=(20, 8))))
    asg = Assignment(
        ids=train.ids, clusters=(np.arange(20) % 3).astype(np.int32), k=3
    )
    bench_rows = unit_rows(rng.normal(size=(12, 8)))
    labels = [f"lab{i % 4}" for i in range(12)]
    out1 = assign_ability(emb(train.rows), asg, emb(bench_rows, ids=np.arange(12)), labels)
    perm = rng.permutation(12)
    out2 = assign_ability(
        emb(train.rows), asg,
        emb(bench_rows[perm], ids=np.arange(12)), [labels[i] for i in perm],
    )
    assert [a.label for a in out1] == [a.label for a in out2]
    assert [a.votes for a in out1] == [a.votes for a in out2]


def test_ability_empty_cluster_abstains():
    train = emb(unit_rows([[1, 0]]))
    asg = Assignment(ids=train.ids, clusters=np.zeros(1, dtype=np.int32), k=2)
    bench = emb(unit_rows([[1, 0]]), ids=[5])
    out = assign_ability(train, asg, bench, ["X"])
    assert out[1].abstained and out[1].label is None


def test_ability_requires_unit_norm():
    train = emb([[2.0, 0.0]])
    asg = Assignment(ids=train.ids, clusters=np.zeros(1, dtype=np.int32), k=1)
    bench = emb(unit_rows([[1, 0]]), ids=[5])
    with pytest.raises(ValidationError):
        assign_ability(train, asg, bench, ["X"])


# --- difficulty ----------------------------------------------------------------


def test_difficulty_values():
    out = compute_difficulty([("POPE", 86.4, 100.0), ("MME", 1476.9, 2800.0)])
    assert out[0].difficulty == pytest.approx(0.136, abs=1e-12)
    assert out[1].difficulty == pytest.approx(0.4725357142857143, abs=1e-9)


def test_difficulty_perfect_score():
    out = compute_difficulty([("X", 50.0, 50.0)])
    assert out[0].difficulty == 0.0


def test_difficulty_raw_above_max_rejected():
    with pytest.raises(ValidationError):
        compute_difficulty([("X", 101.0, 100.0)])


def test_difficulty_in_unit_interval():
    rng = np.random.default_rng(13)
    for _ in range(50):
        mx = rng.uniform(1, 3000)
        raw = rng.uniform(0, mx)
        d = compute_difficulty([("b", raw, mx)])[0].difficulty
        assert 0.0 <= d <= 1.0
        assert (d == 0.0) == (raw == mx)
