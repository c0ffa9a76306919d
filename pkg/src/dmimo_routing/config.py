"""Scenario configuration (TOML); defaults are the 4x4-grid, 28 GHz evaluation setup."""
from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass, field, fields
from typing import Any, List, Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .grouping import ARU_CLOSEST_TO_DU, ARU_STRONGEST


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    name: str = "default"
    rows: int = 4
    cols: int = 4
    area_m: float = 100.0
    n_ue: int = 8
    n_blockers: int = 1000
    blocker_radius_m: float = 0.5
    carrier_ghz: float = 28.0
    bandwidth_hz: float = 200e6
    ru_power_dbm: float = 13.0
    noise_figure_db: float = 10.0
    array_gain_db: float = 15.051499783199061  # 2 subarrays of 4x4 elements
    shadowing: bool = False
    tdd_dl_fraction: float = 0.5  # recorded only; plays no part in SINR
    subset_rule: str = "top_m"
    subset_size: int = 5
    alpha: float = 0.95
    aru_criterion: str = ARU_STRONGEST
    base_capacity: int = 10
    corner_multiplier: int = 2
    du_corner: str = "top_left"
    max_path_length: Any = "auto"
    ue_order: str = "ascending"
    routing: bool = True
    mask_precoder: bool = True
    realizations: int = 50
    master_seed: int = 0
    seed_key: str | None = None
    iterations: int = 1

    def __post_init__(self):
        errors = validate(self)
        if errors:
            raise ConfigError("; ".join(errors))

    @property
    def spacing_m(self) -> float:
        return self.area_m / max(self.rows, self.cols)

    @property
    def hop_limit(self) -> int:
        from .routing import max_path_length

        return max_path_length(self.base_capacity, self.max_path_length)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def validate(cfg: ScenarioConfig) -> List[str]:
    errs = []
    positive = ("rows", "cols", "area_m", "n_ue", "carrier_ghz", "bandwidth_hz", "subset_size",
                "base_capacity", "corner_multiplier", "realizations", "iterations")
    for name in positive:
        if getattr(cfg, name) <= 0:
            errs.append(f"{name}: must be positive, got {getattr(cfg, name)!r}")
    if cfg.n_blockers < 0:
        errs.append(f"n_blockers: must be >= 0, got {cfg.n_blockers}")
    if cfg.blocker_radius_m < 0:
        errs.append(f"blocker_radius_m: must be >= 0, got {cfg.blocker_radius_m}")
    if cfg.subset_rule not in ("top_m", "alpha"):
        errs.append(f"subset_rule: expected 'top_m' or 'alpha', got {cfg.subset_rule!r}")
    if cfg.subset_rule == "top_m" and cfg.subset_size > cfg.rows * cfg.cols:
        errs.append(f"subset_size: {cfg.subset_size} exceeds RU count {cfg.rows * cfg.cols}")
    if not 0 < cfg.alpha <= 1:
        errs.append(f"alpha: must be in (0, 1], got {cfg.alpha}")
    if cfg.aru_criterion not in (ARU_STRONGEST, ARU_CLOSEST_TO_DU):
        errs.append(f"aru_criterion: expected {ARU_STRONGEST!r} or {ARU_CLOSEST_TO_DU!r}, got {cfg.aru_criterion!r}")
    if cfg.ue_order not in ("ascending", "random"):
        errs.append(f"ue_order: expected 'ascending' or 'random', got {cfg.ue_order!r}")
    if cfg.max_path_length != "auto":
        try:
            if int(cfg.max_path_length) < 1 or isinstance(cfg.max_path_length, bool):
                raise ValueError
        except (TypeError, ValueError):
            errs.append(f"max_path_length: expected 'auto' or a positive integer, got {cfg.max_path_length!r}")
    return errs


_FIELDS = {f.name for f in fields(ScenarioConfig)}


def from_dict(data: Mapping[str, Any]) -> ScenarioConfig:
    unknown = sorted(set(data) - _FIELDS)
    if unknown:
        raise ConfigError(f"unknown config field(s): {', '.join(unknown)}")
    return ScenarioConfig(**data)


def load_toml(path) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def load_scenario(path) -> ScenarioConfig:
    data = load_toml(path)
    return from_dict(data.get("scenario", data))


def default_sweep(base: ScenarioConfig | None = None, n_ues=(8, 15), capacities=(5, 10, 100)) -> List[ScenarioConfig]:
    base = base or ScenarioConfig()
    return [
        base.replace(name=f"K{k}_cap{c}", n_ue=k, base_capacity=c)
        for k, c in itertools.product(n_ues, capacities)
    ]


def load_sweep(path) -> List[ScenarioConfig]:
    """``[base]`` holds shared fields; ``[sweep]`` maps field names to value lists."""
    data = load_toml(path)
    base = from_dict(data.get("base", {}))
    axes = data.get("sweep", {})
    unknown = sorted(set(axes) - _FIELDS)
    if unknown:
        raise ConfigError(f"unknown sweep field(s): {', '.join(unknown)}")
    if not axes:
        return [base]
    keys = list(axes)
    out = []
    for values in itertools.product(*(axes[k] for k in keys)):
        changes = dict(zip(keys, values))
        tag = "_".join(f"{k}{v}" for k, v in changes.items())
        out.append(base.replace(name=f"{base.name}_{tag}", **changes))
    return out
