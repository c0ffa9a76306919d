"""Congestion-aware two-level route discovery over the fronthaul mesh.

Candidate routes are all simple paths of at most ``max_len`` segments that
avoid saturated segments. Each candidate is scored with

    utility(R) = prod_{z in R} (1 - used_z / total_z) / len(R)

and the best one is committed, consuming one packet unit on every segment
it crosses. Level 1 connects the DU to a UE's ARU; level 2 connects the ARU
to each remaining serving RU.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .grouping import ServingSubset
from .topology import FronthaulTopology

L1 = "L1"
L2 = "L2"


@dataclass
class RoutingLedger:
    """Per-segment packet counters; ``used[z] <= total[z]`` always holds."""

    total: List[int]
    used: List[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.used:
            self.used = [0] * len(self.total)
        if len(self.used) != len(self.total):
            raise ValueError("used/total length mismatch")
        for u, t in zip(self.used, self.total):
            if t < 1 or not 0 <= u <= t:
                raise ValueError(f"invalid ledger entry used={u} total={t}")

    @classmethod
    def for_topology(cls, topology: FronthaulTopology) -> "RoutingLedger":
        return cls(total=topology.capacities)

    def copy(self) -> "RoutingLedger":
        return RoutingLedger(total=list(self.total), used=list(self.used))

    def saturated(self, segment_id: int) -> bool:
        return self.used[segment_id] >= self.total[segment_id]

    def utilization(self) -> List[float]:
        return [u / t for u, t in zip(self.used, self.total)]


@dataclass(frozen=True)
class Route:
    nodes: Tuple[int, ...]
    segments: Tuple[int, ...]

    def __post_init__(self):
        if len(self.segments) < 1 or len(self.nodes) != len(self.segments) + 1:
            raise ValueError("a route needs >= 1 segment and len(nodes) == len(segments) + 1")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError(f"route revisits a node: {self.nodes}")

    @property
    def length(self) -> int:
        return len(self.segments)


@dataclass(frozen=True)
class RouteDecision:
    ue_id: int
    target_ru_id: int
    level: str
    best: Optional[Route]
    utility: float
    candidates_count: int

    @property
    def success(self) -> bool:
        return self.best is not None

    @property
    def path_length(self) -> int:
        return self.best.length if self.best is not None else 0


@dataclass
class UeRouting:
    """All decisions for one UE; ``l2`` is keyed by target RU id."""

    ue_id: int
    aru_id: int
    l1: RouteDecision
    l2: Dict[int, RouteDecision] = field(default_factory=dict)

    @property
    def dropped(self) -> bool:
        return not self.l1.success

    def decisions(self) -> List[RouteDecision]:
        return [self.l1, *self.l2.values()]


def occupancy(ledger: RoutingLedger, segment_id: int) -> float:
    return ledger.used[segment_id] / ledger.total[segment_id]


def utilizable_rate(ledger: RoutingLedger, route: Route) -> float:
    rho = 1.0
    for z in route.segments:
        rho *= 1.0 - occupancy(ledger, z)
    return rho


def utility(ledger: RoutingLedger, route: Route) -> float:
    return utilizable_rate(ledger, route) / route.length


def exact_utility(ledger: RoutingLedger, route: Route) -> Fraction:
    """Utility as an exact rational; used for ranking so ties are real ties."""
    num, den = 1, route.length
    for z in route.segments:
        num *= ledger.total[z] - ledger.used[z]
        den *= ledger.total[z]
    return Fraction(num, den)


def discover_routes(
    topology: FronthaulTopology,
    ledger: RoutingLedger,
    src: int,
    dst: int,
    max_len: int,
) -> List[Route]:
    """All simple ``src -> dst`` paths of <= ``max_len`` unsaturated segments.

    Sorted lexicographically by node sequence.
    """
    if src == dst:
        raise ValueError("src and dst must differ")
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    adj = topology.adjacency
    segs = topology.segments
    total, used = ledger.total, ledger.used

    # open (unsaturated) neighbour lists, ascending segment id
    nbrs: Dict[int, List[Tuple[int, int]]] = {
        u: [(z, segs[z].other(u)) for z in zs if used[z] < total[z]] for u, zs in adj.items()
    }
    # hop distance to dst over open segments, for depth pruning
    dist = {dst: 0}
    frontier = [dst]
    while frontier:
        nxt = []
        for u in frontier:
            for _, v in nbrs[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    if src not in dist or dist[src] > max_len:
        return []

    found: List[Route] = []
    node_path = [src]
    seg_path: List[int] = []
    on_path = {src}

    def reachable(u: int, budget: int) -> bool:
        # dst still reachable from u within budget hops, avoiding the current path
        seen = {u}
        layer = [u]
        for _ in range(budget):
            nxt = []
            for a in layer:
                for _, b in nbrs[a]:
                    if b == dst:
                        return True
                    if b not in seen and b not in on_path:
                        seen.add(b)
                        nxt.append(b)
            if not nxt:
                return False
            layer = nxt
        return False

    def dfs(u: int) -> None:
        depth = len(seg_path)
        for z, v in nbrs[u]:
            if v in on_path:
                continue
            if v == dst:
                found.append(Route(tuple(node_path) + (v,), tuple(seg_path) + (z,)))
                continue
            remaining = max_len - depth - 1
            if dist.get(v, max_len + 1) > remaining:
                continue
            on_path.add(v)
            if reachable(v, remaining):
                node_path.append(v)
                seg_path.append(z)
                dfs(v)
                node_path.pop()
                seg_path.pop()
            on_path.discard(v)

    dfs(src)
    found.sort(key=lambda r: r.nodes)
    return found


def rank_key(ledger: RoutingLedger, route: Route):
    """Sort key: higher utility first, then shorter, then lexicographic nodes."""
    return (-exact_utility(ledger, route), route.length, route.nodes)


def best_route(
    candidates: Sequence[Route],
    ledger: RoutingLedger,
    ue_id: int = -1,
    target_ru_id: int = -1,
    level: str = L2,
) -> RouteDecision:
    if not candidates:
        return RouteDecision(ue_id, target_ru_id, level, None, 0.0, 0)
    best = min(candidates, key=lambda r: rank_key(ledger, r))
    return RouteDecision(ue_id, target_ru_id, level, best, utility(ledger, best), len(candidates))


def commit(ledger: RoutingLedger, route: Route) -> RoutingLedger:
    """Consume one packet unit on every segment of ``route`` (in place)."""
    for z in route.segments:
        if ledger.used[z] >= ledger.total[z]:
            raise ValueError(f"segment {z} is saturated; cannot commit route {route.nodes}")
    for z in route.segments:
        ledger.used[z] += 1
    return ledger


def _route_one(topology, ledger, src, dst, max_len, ue_id, level) -> RouteDecision:
    decision = best_route(discover_routes(topology, ledger, src, dst, max_len), ledger, ue_id, dst, level)
    if decision.best is not None:
        commit(ledger, decision.best)
    return decision


def ue_order(ue_ids: Iterable[int], policy: str = "ascending", seed: int | None = None) -> List[int]:
    ids = sorted(ue_ids)
    if policy == "ascending":
        return ids
    if policy == "random":
        random.Random(seed).shuffle(ids)
        return ids
    raise ValueError(f"unknown UE order policy {policy!r}")


def route_two_level(
    topology: FronthaulTopology,
    ledger: RoutingLedger,
    subsets: Sequence[ServingSubset],
    max_len: int,
    order: Sequence[int] | None = None,
) -> Dict[int, UeRouting]:
    """Route every UE at L1 (DU -> ARU) then L2 (ARU -> other serving RUs).

    ``subsets[i].ru_ids`` is taken to be in descending large-scale order, which
    is the L2 target order. The ledger is updated in place and carries over
    from one UE to the next.
    """
    by_ue = {s.ue_id: s for s in subsets}
    if order is None:
        order = sorted(by_ue)
    out: Dict[int, UeRouting] = {}
    for k in order:
        sub = by_ue[k]
        l1 = _route_one(topology, ledger, topology.du_node, sub.aru_id, max_len, k, L1)
        ue = UeRouting(k, sub.aru_id, l1)
        if l1.success:
            for n in sub.ru_ids:
                if n == sub.aru_id:
                    continue
                ue.l2[n] = _route_one(topology, ledger, sub.aru_id, n, max_len, k, L2)
        out[k] = ue
    return out


def max_path_length(base_capacity: int, setting: int | str = "auto") -> int:
    """``"auto"`` ties the hop limit to the base segment capacity."""
    if setting == "auto":
        return int(base_capacity)
    value = int(setting)
    if value < 1:
        raise ValueError("max path length must be >= 1")
    return value
