import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skillpace.clustering import Assignment, ClusterModel
from skillpace.data_model import EmbeddingMatrix, normalize_rows
from skillpace.engine import (
    BudgetLedger,
    EngineConfig,
    MetricSnapshot,
    PoolState,
    RoundAllocation,
    allocate_round,
    apportion,
    cluster_density,
    cluster_transferability,
    compute_delta,
    select_samples,
    softmax_distribution,
    warmup_select,
)
from skillpace.errors import (
    BudgetExceededError,
    ConfigError,
    PoolExhaustedError,
    ValidationError,
)


def snap(step, values, support=None):
    values = np.asarray(values, dtype=np.float64)
    if support is None:
        support = np.ones(values.shape, dtype=np.int64)
    return MetricSnapshot(step=step, values=values, support=support)


# --- compute_delta -----------------------------------------------------------


def test_delta_zero_change():
    d = compute_delta(snap(2, [0.5]), snap(1, [0.5]), epsilon=0.01)
    assert d.values[0] == 0.0


def test_delta_accuracy_hand_value():
    d = compute_delta(snap(2, [0.6]), snap(1, [0.5]), epsilon=0.01)
    assert d.values[0] == pytest.approx(0.1 / 0.51, rel=1e-12)


def test_delta_loss_hand_value():
    d = compute_delta(snap(2, [1.0]), snap(1, [2.0]), epsilon=0.01, metric_kind="loss")
    assert d.values[0] == pytest.approx(1.0 / 2.01, rel=1e-12)


def test_delta_mismatched_k():
    with pytest.raises(ValidationError):
        compute_delta(snap(2, [0.5, 0.5]), snap(1, [0.5]), epsilon=0.01)


def test_delta_requires_later_step():
    with pytest.raises(ValidationError):
        compute_delta(snap(1, [0.5]), snap(1, [0.5]), epsilon=0.01)


@given(
    vals=st.lists(st.floats(0.0, 1.0), min_size=1, max_size=16),
    eps=st.floats(1e-6, 1.0),
    kind=st.sampled_from(["accuracy", "loss"]),
)
def test_delta_zero_identity_property(vals, eps, kind):
    s1, s2 = snap(1, vals), snap(2, vals)
    d = compute_delta(s2, s1, epsilon=eps, metric_kind=kind)
    assert np.all(d.values == 0.0)


# --- softmax -----------------------------------------------------------------


def test_softmax_symmetry():
    for c in (-5.0, 0.0, 3.7):
        p = softmax_distribution(np.array([c, c, c]), tau=1.0)
        assert np.allclose(p.probs, 1.0 / 3.0, atol=1e-12)


def test_softmax_hand_value():
    p = softmax_distribution(np.array([0.2, 0.1]), tau=1.0)
    assert p.probs[0] == pytest.approx(0.524979, abs=1e-6)
    assert p.probs[1] == pytest.approx(0.475021, abs=1e-6)


def test_softmax_mode_collapse_regime():
    p = softmax_distribution(np.array([10.0, 0.0]), tau=0.01)
    assert p.probs[0] > 1.0 - 1e-12


def test_softmax_tau_zero_rejected():
    with pytest.raises(ConfigError):
        softmax_distribution(np.array([0.1]), tau=0.0)


@settings(max_examples=300, deadline=None)
@given(
    vals=st.lists(st.floats(-100.0, 100.0), min_size=2, max_size=20),
    tau=st.floats(0.01, 10.0),
    shift=st.floats(-100.0, 100.0),
    scale=st.floats(0.01, 100.0),
    data=st.data(),
)
def test_softmax_invariants_property(vals, tau, shift, scale, data):
    v = np.asarray(vals)
    p = softmax_distribution(v, tau).probs
    # normalization
    assert abs(p.sum() - 1.0) < 1e-9
    # shift invariance
    p_shift = softmax_distribution(v + shift, tau).probs
    assert np.max(np.abs(p - p_shift)) < 1e-9
    # temperature coupling softmax(v, tau) == softmax(s v, s tau)
    p_scale = softmax_distribution(v * scale, tau * scale).probs
    assert np.max(np.abs(p - p_scale)) < 1e-9
    # monotonicity on a random pair; strictness only above the float64
    # underflow floor (exp(-x) flushes to exactly 0 past ~745)
    i = data.draw(st.integers(0, len(vals) - 1))
    j = data.draw(st.integers(0, len(vals) - 1))
    if v[i] > v[j]:
        assert p[i] >= p[j]
        if (v[i] - v[j]) / tau > 1e-9 and (v.max() - v[j]) / tau < 700.0:
            assert p[i] > p[j]


# --- apportionment and allocation --------------------------------------------


def test_apportion_exact_proportions():
    out = apportion(np.array([0.5, 0.3, 0.2]), 10, np.array([99, 99, 99]))
    assert out.tolist() == [5, 3, 2]


def test_apportion_tie_goes_low_index():
    out = apportion(np.array([0.55, 0.45]), 10, np.array([99, 99]))
    assert out.tolist() == [6, 4]


def test_apportion_capacity_redistribution():
    out = apportion(np.array([1.0, 0.0]), 10, np.array([4, 99]))
    assert out.tolist() == [4, 6]


@settings(max_examples=200, deadline=None)
@given(
    weights=st.lists(st.floats(0.0, 1.0), min_size=1, max_size=12),
    seats=st.integers(0, 200),
    data=st.data(),
)
def test_apportion_exactness_property(weights, seats, data):
    w = np.asarray(weights)
    total = w.sum()
    if total == 0:
        w = np.ones_like(w)
        total = w.sum()
    w = w / total
    cap = np.asarray(
        data.draw(
            st.lists(
                st.integers(0, 100), min_size=len(weights), max_size=len(weights)
            )
        ),
        dtype=np.int64,
    )
    if cap.sum() < seats:
        seats = int(cap.sum())
    out = apportion(w, seats, cap)
    assert out.sum() == seats
    assert np.all(out <= cap)
    assert np.all(out >= 0)


def test_allocate_round_explore_count():
    from skillpace.engine import SamplingDistribution

    p = SamplingDistribution(np.array([0.5, 0.5]))
    alloc = allocate_round(p, round_size=20, delta_explore=0.10, available=np.array([50, 50]))
    assert alloc.explore_n == 2
    assert alloc.per_cluster.sum() == 18
    assert alloc.effective_size == 20


def test_allocate_round_clamps_to_availability():
    from skillpace.engine import SamplingDistribution

    p = SamplingDistribution(np.array([0.5, 0.5]))
    alloc = allocate_round(p, round_size=100, delta_explore=0.0, available=np.array([3, 4]))
    assert alloc.effective_size == 7
    assert alloc.per_cluster.tolist() == [3, 4]


def test_allocate_round_pool_exhausted():
    from skillpace.engine import SamplingDistribution

    p = SamplingDistribution(np.array([1.0]))
    with pytest.raises(PoolExhaustedError):
        allocate_round(p, round_size=5, delta_explore=0.0, available=np.array([0]))


# --- selection ---------------------------------------------------------------


def three_cluster_assignment():
    # ids 0..11, clusters 0,0,0,0 / 1,1,1,1 / 2,2,2,2
    return Assignment(
        ids=np.arange(12, dtype=np.uint64),
        clusters=np.repeat(np.arange(3, dtype=np.int32), 4),
        k=3,
    )


def test_select_forced_cluster():
    asg = three_cluster_assignment()
    alloc = RoundAllocation(
        per_cluster=np.array([0, 3, 0]), explore_n=0, effective_size=3
    )
    ids = select_samples(alloc, asg, annotated_ids={5}, rng=np.random.default_rng(0))
    assert sorted(ids) == [4, 6, 7]  # the only 3 unannotated members of cluster 1


def test_select_deterministic():
    asg = three_cluster_assignment()
    alloc = RoundAllocation(
        per_cluster=np.array([2, 1, 1]), explore_n=2, effective_size=6
    )
    a = select_samples(alloc, asg, annotated_ids=set(), rng=np.random.default_rng(42))
    b = select_samples(alloc, asg, annotated_ids=set(), rng=np.random.default_rng(42))
    assert a == b


def test_select_pure_exploration():
    asg = three_cluster_assignment()
    alloc = RoundAllocation(
        per_cluster=np.array([0, 0, 0]), explore_n=5, effective_size=5
    )
    annotated = set(range(7))  # leaves ids 7..11
    ids = select_samples(alloc, asg, annotated_ids=annotated, rng=np.random.default_rng(1))
    assert sorted(ids) == [7, 8, 9, 10, 11]


def test_select_never_repeats_annotated():
    asg = three_cluster_assignment()
    pool = PoolState(asg)
    rng = np.random.default_rng(3)
    seen = set()
    for _ in range(3):
        alloc = RoundAllocation(
            per_cluster=np.minimum(pool.available_counts(), 1),
            explore_n=1,
            effective_size=int(np.minimum(pool.available_counts(), 1).sum()) + 1,
        )
        rows = pool.draw(alloc, rng)
        ids = {int(asg.ids[r]) for r in rows}
        assert not (ids & seen)
        seen |= ids
        pool.mark(rows)


# --- warmup: density, transferability, selection -----------------------------


def unit(v):
    v = np.asarray(v, dtype=np.float64)
    return v / np.linalg.norm(v)


def test_density_members_equal_centroid():
    m = EmbeddingMatrix(
        ids=np.arange(2), rows=np.array([[1, 0], [1, 0]], dtype=np.float32)
    )
    asg = Assignment(ids=m.ids, clusters=np.zeros(2, dtype=np.int32), k=1)
    model = ClusterModel(
        centroids=np.array([[1.0, 0.0]]), seed=0, iterations_run=0, objective=1.0
    )
    assert cluster_density(m, asg, model, 0) == pytest.approx(1.0, abs=1e-7)


def test_density_two_members_at_45_degrees():
    rows = np.array([unit([1, 1]), unit([1, -1])], dtype=np.float32)
    m = EmbeddingMatrix(ids=np.arange(2), rows=rows)
    asg = Assignment(ids=m.ids, clusters=np.zeros(2, dtype=np.int32), k=1)
    model = ClusterModel(
        centroids=np.array([[1.0, 0.0]]), seed=0, iterations_run=0, objective=1.0
    )
    assert cluster_density(m, asg, model, 0) == pytest.approx(np.cos(np.pi / 4), abs=1e-7)


def test_density_singleton():
    m = EmbeddingMatrix(ids=np.array([0]), rows=np.array([[0.0, 1.0]], dtype=np.float32))
    asg = Assignment(ids=m.ids, clusters=np.zeros(1, dtype=np.int32), k=1)
    model = ClusterModel(
        centroids=np.array([[0.0, 1.0]]), seed=0, iterations_run=0, objective=1.0
    )
    assert cluster_density(m, asg, model, 0) == pytest.approx(1.0, abs=1e-7)


def test_transferability_orthogonal_pair():
    model = ClusterModel(
        centroids=np.array([[1.0, 0.0], [0.0, 1.0]]), seed=0, iterations_run=0, objective=1.0
    )
    assert cluster_transferability(model, 0) == pytest.approx(0.0, abs=1e-12)
    assert cluster_transferability(model, 1) == pytest.approx(0.0, abs=1e-12)


def test_transferability_hand_value():
    model = ClusterModel(
        centroids=np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
        seed=0,
        iterations_run=0,
        objective=1.0,
    )
    assert cluster_transferability(model, 0) == pytest.approx(0.5, abs=1e-12)


def test_transferability_single_cluster():
    model = ClusterModel(
        centroids=np.array([[1.0, 0.0]]), seed=0, iterations_run=0, objective=1.0
    )
    assert cluster_transferability(model, 0) == 0.0


def test_warmup_single_cluster_uniform():
    rng = np.random.default_rng(0)
    rows = rng.normal(size=(40, 6))
    m = normalize_rows(EmbeddingMatrix(ids=np.arange(40), rows=rows.astype(np.float32)))
    asg = Assignment(ids=m.ids, clusters=np.zeros(40, dtype=np.int32), k=1)
    centroid = unit(m.rows.astype(np.float64).mean(axis=0))
    model = ClusterModel(centroids=centroid[None], seed=0, iterations_run=0, objective=1.0)
    ids, probs, alloc = warmup_select(model, asg, m, ratio=0.25, warmup_tau=1.0, rng=rng)
    assert probs.tolist() == [1.0]
    assert len(ids) == 10
    assert alloc.per_cluster.tolist() == [10]


def test_warmup_symmetric_clusters_split_evenly():
    # two mirror-image clusters: equal S and D by construction
    rows = np.array(
        [unit([1, 0.1]), unit([1, -0.1]), unit([-1, 0.1]), unit([-1, -0.1])] * 5,
        dtype=np.float32,
    )
    n = rows.shape[0]
    clusters = np.tile(np.array([0, 0, 1, 1], dtype=np.int32), 5)
    m = EmbeddingMatrix(ids=np.arange(n), rows=rows)
    asg = Assignment(ids=m.ids, clusters=clusters, k=2)
    model = ClusterModel(
        centroids=np.array([[1.0, 0.0], [-1.0, 0.0]]), seed=0, iterations_run=0, objective=1.0
    )
    ids, probs, alloc = warmup_select(model, asg, m, ratio=0.5, warmup_tau=1.0,
                                      rng=np.random.default_rng(0))
    assert probs[0] == pytest.approx(probs[1], abs=1e-12)
    assert abs(int(alloc.per_cluster[0]) - int(alloc.per_cluster[1])) <= 1
    assert len(ids) == 10


def test_warmup_ratio_bounds():
    m = EmbeddingMatrix(ids=np.arange(2), rows=np.eye(2, dtype=np.float32))
    asg = Assignment(ids=m.ids, clusters=np.arange(2, dtype=np.int32), k=2)
    model = ClusterModel(centroids=np.eye(2), seed=0, iterations_run=0, objective=1.0)
    with pytest.raises(ConfigError):
        warmup_select(model, asg, m, ratio=1.5, warmup_tau=1.0, rng=np.random.default_rng(0))


# --- budget ledger ------------------------------------------------------------


def test_ledger_exact_exhaustion():
    ledger = BudgetLedger(10)
    ledger.charge(list(range(10)), "warmup")
    assert ledger.remaining == 0
    assert ledger.warmup_spent == 10


def test_ledger_overdraw_atomic():
    ledger = BudgetLedger(10)
    ledger.charge(list(range(8)), "pcl")
    with pytest.raises(BudgetExceededError):
        ledger.charge([100, 101, 102], "pcl")
    assert ledger.spent == 8
    assert len(ledger.entries) == 1


def test_ledger_empty_charge_noop():
    ledger = BudgetLedger(5)
    ledger.charge([], "pcl")
    assert ledger.spent == 0
    assert ledger.entries == []


# --- engine state machine guards ----------------------------------------------


def test_engine_budget_above_pool_rejected():
    from skillpace.engine import ProgressEngine

    asg = three_cluster_assignment()  # 12 samples
    cfg = EngineConfig(budget_total=13, warmup_ratio=0.1, round_size=4)
    with pytest.raises(ConfigError, match="pool"):
        ProgressEngine(cfg, asg)


def test_engine_warmup_exceeding_budget_rejected():
    from skillpace.engine import ProgressEngine
    from skillpace.clustering import ClusterModel

    asg = three_cluster_assignment()
    m = EmbeddingMatrix(
        ids=asg.ids,
        rows=np.tile(np.eye(3, dtype=np.float32), (4, 1)),
    )
    model = ClusterModel(centroids=np.eye(3), seed=0, iterations_run=0, objective=1.0)
    cfg = EngineConfig(budget_total=3, warmup_ratio=0.5, round_size=2)  # warmup 6 > 3
    engine = ProgressEngine(cfg, asg)
    with pytest.raises(ConfigError, match="warmup"):
        engine.run_warmup(model, m)


# --- config -------------------------------------------------------------------


def test_config_round_size_from_gamma():
    cfg = EngineConfig(budget_total=100, warmup_ratio=0.1, gamma=3, batch_size=4)
    assert cfg.round_size == 12


def test_config_round_size_conflict():
    with pytest.raises(ConfigError):
        EngineConfig(
            budget_total=100, warmup_ratio=0.1, gamma=3, batch_size=4, round_size=13
        )


def test_config_unknown_key_rejected():
    with pytest.raises(ConfigError, match="unknown"):
        EngineConfig.from_dict(
            {"budget_total": 10, "warmup_ratio": 0.1, "round_size": 5, "bogus": 1}
        )


def test_config_invalid_values():
    with pytest.raises(ConfigError):
        EngineConfig(budget_total=10, warmup_ratio=0.1, round_size=5, tau=0.0)
    with pytest.raises(ConfigError):
        EngineConfig(budget_total=10, warmup_ratio=0.1, round_size=5, delta_explore=1.5)
    with pytest.raises(ConfigError):
        EngineConfig(budget_total=10, warmup_ratio=0.1, round_size=5, metric_kind="reward")


def test_config_round_trip():
    cfg = EngineConfig(budget_total=50, warmup_ratio=0.2, round_size=10, seed=3)
    assert EngineConfig.from_dict(cfg.to_dict()) == cfg
