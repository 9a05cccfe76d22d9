"""Budget-constrained curriculum data selection over discovered skill
clusters, driven by each cluster's recent learning progress."""

from .analysis import (
    assign_ability,
    assign_rarity,
    compute_difficulty,
    fit_benchmark_gaussians,
    log_likelihood,
)
from .clustering import (
    Assignment,
    ClusterModel,
    assign,
    cluster_quality,
    fit_spherical_kmeans,
)
from .data_model import (
    EmbeddingMatrix,
    SampleRecord,
    concat_features,
    load_manifest,
    normalize_rows,
    read_embeddings,
    write_embeddings,
)
from .engine import (
    BudgetLedger,
    DeltaVector,
    EngineConfig,
    MetricSnapshot,
    ProgressEngine,
    SamplingDistribution,
    allocate_round,
    apportion,
    compute_delta,
    select_samples,
    softmax_distribution,
    warmup_select,
)
from .simulator import (
    ExactMatchJudge,
    Population,
    PopulationSpec,
    SyntheticLearner,
    TrajectoryLog,
    build_population,
    evaluate_snapshot,
    replay_schedule,
    shuffle_order_ablation,
    simulate_run,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BudgetLedger",
    "ClusterModel",
    "DeltaVector",
    "EmbeddingMatrix",
    "EngineConfig",
    "ExactMatchJudge",
    "MetricSnapshot",
    "Population",
    "PopulationSpec",
    "ProgressEngine",
    "SampleRecord",
    "SamplingDistribution",
    "SyntheticLearner",
    "TrajectoryLog",
    "allocate_round",
    "apportion",
    "assign",
    "assign_ability",
    "assign_rarity",
    "build_population",
    "cluster_quality",
    "compute_delta",
    "compute_difficulty",
    "concat_features",
    "evaluate_snapshot",
    "fit_benchmark_gaussians",
    "fit_spherical_kmeans",
    "load_manifest",
    "log_likelihood",
    "normalize_rows",
    "read_embeddings",
    "replay_schedule",
    "select_samples",
    "shuffle_order_ablation",
    "simulate_run",
    "softmax_distribution",
    "warmup_select",
    "write_embeddings",
]
