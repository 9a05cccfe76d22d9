"""Run configuration: one sectioned JSON document drives every command.

Sections: ``data`` (input paths), ``clustering``, ``engine``, ``simulator``,
``analysis``. Parsing is strict; unknown keys anywhere are rejected before
any work starts. Every command writes the fully resolved configuration
(file values merged with CLI overrides) next to its outputs so runs can be
reproduced and compared.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import ConfigError


def _check_keys(obj: dict, allowed: set[str], section: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {section}: {sorted(unknown)}")


@dataclass
class DataPaths:
    embeddings: str | None = None
    manifest: str | None = None
    assignment: str | None = None
    model: str | None = None
    warmup_model: str | None = None
    warmup_assignment: str | None = None
    metrics: str | None = None
    population: str | None = None
    train_embeddings: str | None = None
    benchmarks: dict[str, str] = field(default_factory=dict)
    benchmark_embeddings: str | None = None
    labels: str | None = None
    scores: str | None = None

    @classmethod
    def from_dict(cls, obj: dict) -> "DataPaths":
        _check_keys(obj, set(cls.__dataclass_fields__), "data")
        return cls(**obj)


@dataclass
class ClusteringConfig:
    k: int = 8
    seed: int = 0
    max_iters: int = 100
    tol: float = 1e-4
    n_init: int = 4
    pair_sample_cap: int = 1000

    @classmethod
    def from_dict(cls, obj: dict) -> "ClusteringConfig":
        _check_keys(obj, set(cls.__dataclass_fields__), "clustering")
        return cls(**obj)


@dataclass
class SimulatorConfig:
    policies: list[str] = field(default_factory=lambda: ["progress"])
    seeds: int = 1
    tau_sweep: list[float] = field(default_factory=list)
    shuffle_ablation: bool = False
    eval_cap: int | None = None

    @classmethod
    def from_dict(cls, obj: dict) -> "SimulatorConfig":
        _check_keys(obj, set(cls.__dataclass_fields__), "simulator")
        return cls(**obj)


@dataclass
class AnalysisConfig:
    lam: float = 1e-3
    top_k: int = 5
    alpha: float = 0.9
    smoothing: str = "none"
    project_dim: int | None = None

    @classmethod
    def from_dict(cls, obj: dict) -> "AnalysisConfig":
        _check_keys(obj, set(cls.__dataclass_fields__), "analysis")
        return cls(**obj)


@dataclass
class RunConfig:
    data: DataPaths = field(default_factory=DataPaths)
    clustering: ClusteringConfig = field(default_factory=ClusteringConfig)
    engine: dict = field(default_factory=dict)  # raw EngineConfig fields
    simulator: SimulatorConfig = field(default_factory=SimulatorConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)

    @classmethod
    def from_dict(cls, obj: dict) -> "RunConfig":
        _check_keys(obj, {"data", "clustering", "engine", "simulator", "analysis"}, "config")
        from .engine import EngineConfig

        engine_raw = dict(obj.get("engine", {}))
        if engine_raw:
            # validate keys now; values are re-validated when the config is built
            unknown = set(engine_raw) - set(EngineConfig._FIELDS)
            if unknown:
                raise ConfigError(f"unknown keys in engine: {sorted(unknown)}")
        return cls(
            data=DataPaths.from_dict(obj.get("data", {})),
            clustering=ClusteringConfig.from_dict(obj.get("clustering", {})),
            engine=engine_raw,
            simulator=SimulatorConfig.from_dict(obj.get("simulator", {})),
            analysis=AnalysisConfig.from_dict(obj.get("analysis", {})),
        )

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc.msg})") from exc
        if not isinstance(obj, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(obj)

    def to_dict(self) -> dict:
        out = asdict(self)
        return out


def write_resolved_config(config_obj: dict, out_dir: str | Path) -> Path:
    """Echo the fully resolved configuration next to a run's outputs."""
    out = Path(out_dir) / "resolved_config.json"
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(config_obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out
