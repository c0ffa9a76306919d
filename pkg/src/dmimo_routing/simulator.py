"""Monte-Carlo driver: group -> route -> update association -> precode -> SINR."""
from __future__ import annotations

import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from . import association, channel, grouping, precoding, routing
from .config import ScenarioConfig
from .metrics import MetricBatch, RealizationResult, collect
from .topology import FronthaulTopology, build_grid


@dataclass
class RunReport:
    scenario_id: str
    config: ScenarioConfig
    batch: MetricBatch
    realizations: List[RealizationResult]
    wall_clock_s: float = 0.0

    @property
    def diagnostics(self) -> List[dict]:
        return [r.diagnostics for r in self.realizations]


@dataclass
class RealizationState:
    """Everything one realization produced, kept for tests and debugging."""

    topology: FronthaulTopology
    channel: channel.ChannelState
    subsets: List[grouping.ServingSubset]
    initial: association.AssociationMatrix
    updated: association.AssociationMatrix
    decisions: dict
    ledger: routing.RoutingLedger
    precoders: precoding.PrecoderSet
    sinr: np.ndarray
    extra: dict = field(default_factory=dict)


def realization_seed(cfg: ScenarioConfig, index: int) -> np.random.SeedSequence:
    """Child seed from (master seed, scenario key, realization index)."""
    key = cfg.seed_key if cfg.seed_key is not None else cfg.name
    return np.random.SeedSequence(cfg.master_seed, spawn_key=(zlib.crc32(key.encode()), index))


def make_topology(cfg: ScenarioConfig) -> FronthaulTopology:
    return build_grid(cfg.rows, cfg.cols, cfg.spacing_m, cfg.base_capacity,
                      cfg.corner_multiplier, cfg.du_corner)


def channel_params(cfg: ScenarioConfig) -> channel.ChannelParams:
    return channel.ChannelParams(cfg.carrier_ghz, cfg.bandwidth_hz, cfg.ru_power_dbm,
                                 cfg.noise_figure_db, cfg.array_gain_db, cfg.shadowing)


def _subsets(cfg: ScenarioConfig, gains: np.ndarray, hops) -> List[grouping.ServingSubset]:
    if cfg.subset_rule == "alpha":
        subs = grouping.select_alpha(gains, cfg.alpha)
    else:
        subs = grouping.select_top_m(gains, min(cfg.subset_size, gains.shape[1]))
    return grouping.with_aru(subs, gains, cfg.aru_criterion, hops)


def simulate_realization(cfg: ScenarioConfig, index: int, topology: FronthaulTopology | None = None) -> RealizationState:
    topo = topology or make_topology(cfg)
    place_ss, chan_ss, order_ss = realization_seed(cfg, index).spawn(3)
    drop = channel.place_entities((cfg.area_m, cfg.area_m), cfg.n_ue, cfg.n_blockers,
                                  np.random.default_rng(place_ss), cfg.blocker_radius_m)
    ch = channel.draw_channel(drop, topo.ru_positions(), channel_params(cfg), np.random.default_rng(chan_ss))
    hops = [topo.hop_distance(topo.du_node, n) for n in range(topo.n_ru)]
    order = routing.ue_order(range(cfg.n_ue), cfg.ue_order, int(order_ss.generate_state(1)[0]))

    gains = ch.large_scale
    subsets = _subsets(cfg, gains, hops)
    initial = grouping.to_association(subsets, cfg.n_ue, topo.n_ru)
    ledger = routing.RoutingLedger.for_topology(topo)
    decisions: dict = {}
    updated = initial

    if cfg.routing:
        active = subsets
        excluded = np.zeros_like(gains, dtype=bool)
        for it in range(cfg.iterations):
            ledger = routing.RoutingLedger.for_topology(topo)
            decisions = routing.route_two_level(topo, ledger, active, cfg.hop_limit, order)
            updated = association.apply_routing_outcomes(initial, decisions)
            if it + 1 == cfg.iterations:
                break
            # later passes: refill each served UE's subset without the RUs that failed for it
            excluded |= (initial.a == 1) & (updated.a == 0) & ~updated.dropped[:, None]
            masked = np.where(excluded, -np.inf, gains)
            refreshed = [
                grouping.ServingSubset(s.ue_id, s.ru_ids, s.aru_id) if updated.dropped[s.ue_id]
                else _refill(s, masked[s.ue_id], cfg.subset_size)
                for s in subsets
            ]
            order = [k for k in order if not updated.dropped[k]]
            dropped_prev = updated.dropped.copy()
            active = [s for s in refreshed if not dropped_prev[s.ue_id]]
            initial = grouping.to_association(refreshed, cfg.n_ue, topo.n_ru)
            initial.dropped[:] = dropped_prev
            initial.a[dropped_prev] = 0

    pre = precoding.precode(ch.h, updated, ch.per_ru_power, cfg.mask_precoder)
    gamma = precoding.sinr(ch.h, pre, updated, ch.noise_power)
    return RealizationState(topo, ch, subsets, initial, updated, decisions, ledger, pre, gamma)


def _refill(subset: grouping.ServingSubset, masked_row: np.ndarray, m: int) -> grouping.ServingSubset:
    keep = [n for n in np.lexsort((np.arange(masked_row.size), -masked_row)) if np.isfinite(masked_row[n])]
    ids = [subset.aru_id] + [int(n) for n in keep if n != subset.aru_id][: m - 1]
    return grouping.ServingSubset(subset.ue_id, tuple(ids), subset.aru_id)


def summarize_realization(cfg: ScenarioConfig, index: int, st: RealizationState) -> RealizationResult:
    n_ue = cfg.n_ue
    ratios = [association.connection_ratio(st.initial, st.updated, k) if st.initial.a[k].any() else 0.0
              for k in range(n_ue)]
    l2_lengths = sorted(d.path_length for ue in st.decisions.values() for d in ue.l2.values() if d.success)
    served = ~np.isnan(st.sinr)
    diag = {
        "zf_residual": st.precoders.diagnostics.get("zf_residual", 0.0),
        "zf_rank": st.precoders.diagnostics.get("rank", 0),
        "ledger_peak_used": max(st.ledger.used) if st.ledger.used else 0,
        "ledger_peak_utilization": max(st.ledger.utilization()) if st.ledger.used else 0.0,
        "bits_cleared": int(st.initial.a.sum() - st.updated.a.sum()),
        "max_ru_power_w": float(st.precoders.per_ru_tx_power.max()),
        "off_mask_energy": st.precoders.diagnostics.get("off_mask_energy", 0.0),
    }
    return RealizationResult(
        scenario_id=cfg.name,
        index=index,
        n_ue=n_ue,
        segment_utilization=st.ledger.utilization(),
        sinr_db=[float(x) for x in precoding.to_db(st.sinr[served])],
        connection_ratio=ratios,
        l2_path_lengths=l2_lengths,
        dropped=[bool(x) for x in st.updated.dropped],
        diagnostics=diag,
    )


def run_realization(cfg: ScenarioConfig, index: int) -> RealizationResult:
    return summarize_realization(cfg, index, simulate_realization(cfg, index))


def _run_indexed(args):
    return run_realization(*args)


def run_scenario(cfg: ScenarioConfig, jobs: int = 1) -> RunReport:
    t0 = time.perf_counter()
    tasks = [(cfg, r) for r in range(cfg.realizations)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_indexed, tasks))
    else:
        results = [_run_indexed(t) for t in tasks]
    results.sort(key=lambda r: r.index)
    return RunReport(cfg.name, cfg, collect(results), results, time.perf_counter() - t0)


def run_sweep(configs: Sequence[ScenarioConfig], jobs: int = 1) -> List[RunReport]:
    if not configs:
        raise ValueError("sweep needs at least one scenario")
    return [run_scenario(c, jobs) for c in configs]
