"""Aggregation of per-realization outputs into distribution samples."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple

import numpy as np

METRIC_FAMILIES = ("segment_utilization", "sinr_db", "connection_ratio", "l2_path_length")


@dataclass
class RealizationResult:
    scenario_id: str
    index: int
    n_ue: int
    segment_utilization: List[float]
    sinr_db: List[float]  # served UEs only
    connection_ratio: List[float]  # every UE; dropped UEs contribute 0
    l2_path_lengths: List[int]
    dropped: List[bool]
    diagnostics: dict = field(default_factory=dict)


@dataclass
class MetricBatch:
    scenario_id: str | None = None
    segment_utilization: List[float] = field(default_factory=list)
    sinr_db: List[float] = field(default_factory=list)
    connection_ratio: List[float] = field(default_factory=list)
    l2_path_lengths: List[int] = field(default_factory=list)
    n_ue_slots: int = 0
    n_dropped: int = 0
    n_realizations: int = 0

    @property
    def drop_rate(self) -> float:
        return self.n_dropped / self.n_ue_slots if self.n_ue_slots else 0.0

    def family(self, name: str) -> list:
        if name == "l2_path_length":
            return self.l2_path_lengths
        return getattr(self, name)


def collect(results: Iterable[RealizationResult]) -> MetricBatch:
    results = sorted(results, key=lambda r: r.index)
    batch = MetricBatch()
    for r in results:
        if batch.scenario_id is None:
            batch.scenario_id = r.scenario_id
        elif r.scenario_id != batch.scenario_id:
            raise ValueError(f"cannot mix scenarios {batch.scenario_id!r} and {r.scenario_id!r}")
        batch.segment_utilization.extend(r.segment_utilization)
        batch.sinr_db.extend(r.sinr_db)
        batch.connection_ratio.extend(r.connection_ratio)
        batch.l2_path_lengths.extend(r.l2_path_lengths)
        batch.n_ue_slots += r.n_ue
        batch.n_dropped += sum(bool(d) for d in r.dropped)
        batch.n_realizations += 1
    return batch


def empirical_cdf(samples: Sequence[float]) -> List[Tuple[float, float]]:
    """Sorted ``(value, i/n)`` pairs; repeated values share the last step."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise ValueError("empirical_cdf needs at least one sample")
    out = []
    for i, v in enumerate(x, start=1):
        if i < n and x[i] == v:
            continue
        out.append((float(v), i / n))
    return out


def summary(batch: MetricBatch) -> dict:
    sinr = np.asarray(batch.sinr_db, dtype=float)
    util = np.asarray(batch.segment_utilization, dtype=float)
    lens = np.asarray(batch.l2_path_lengths, dtype=int)
    return {
        "scenario_id": batch.scenario_id,
        "realizations": batch.n_realizations,
        "ue_slots": batch.n_ue_slots,
        "drop_rate": batch.drop_rate,
        "sinr_db_mean": float(sinr.mean()) if sinr.size else None,
        "sinr_db_median": float(np.median(sinr)) if sinr.size else None,
        "segment_utilization_mean": float(util.mean()) if util.size else None,
        "connection_ratio_mean": float(np.mean(batch.connection_ratio)) if batch.connection_ratio else None,
        "l2_path_length_max": int(lens.max()) if lens.size else None,
    }


def cdf_table(batch: MetricBatch) -> str:
    """CSV text: scenario_id, metric, value, cdf; one block per metric family."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scenario_id", "metric", "value", "cdf"])
    for name in METRIC_FAMILIES:
        samples = batch.family(name)
        if not samples:
            continue
        for v, p in empirical_cdf(samples):
            w.writerow([batch.scenario_id, name, repr(v), repr(p)])
    return buf.getvalue()


def summary_json(batch: MetricBatch) -> str:
    return json.dumps(summary(batch), indent=2, sort_keys=True) + "\n"
