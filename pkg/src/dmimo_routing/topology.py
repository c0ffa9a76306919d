"""Segmented fronthaul mesh: RUs on a regular grid, neighbour segments, one DU.

Node ids ``0..N-1`` are RUs in row-major order; the DU is node ``N``.
Segment ids run over horizontal segments row by row, then vertical segments
column by column, with the DU attachment segment last.
"""
from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

CORNERS = ("top_left", "top_right", "bottom_left", "bottom_right")


@dataclass(frozen=True)
class RuNode:
    id: int
    position: Tuple[float, float]
    antenna_count: int = 1


@dataclass(frozen=True)
class Segment:
    id: int
    endpoints: Tuple[int, int]
    total_capacity: int

    def other(self, node_id: int) -> int:
        a, b = self.endpoints
        if node_id == a:
            return b
        if node_id == b:
            return a
        raise KeyError(f"node {node_id} is not an endpoint of segment {self.id}")


@dataclass(frozen=True)
class FronthaulTopology:
    nodes: List[RuNode]
    du_node: int
    du_position: Tuple[float, float]
    segments: List[Segment]
    adjacency: Dict[int, Tuple[int, ...]] = field(repr=False)
    rows: int = 0
    cols: int = 0
    du_attachment: int = 0

    @property
    def n_ru(self) -> int:
        return len(self.nodes)

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    @property
    def capacities(self) -> List[int]:
        return [s.total_capacity for s in self.segments]

    def ru_positions(self):
        import numpy as np

        return np.array([n.position for n in self.nodes], dtype=float)

    def hop_distance(self, src: int, dst: int) -> int:
        """Unweighted shortest-path length in segments (-1 if unreachable)."""
        dist = _bfs(self, src)
        return dist.get(dst, -1)


def expected_segment_count(rows: int, cols: int, du_segments: int = 1) -> int:
    return rows * (cols - 1) + cols * (rows - 1) + du_segments


def _corner_index(rows: int, cols: int, corner: str) -> int:
    if corner not in CORNERS:
        raise ValueError(f"du_corner must be one of {CORNERS}, got {corner!r}")
    r = 0 if corner.startswith("top") else rows - 1
    c = 0 if corner.endswith("left") else cols - 1
    return r * cols + c


def build_grid(
    rows: int,
    cols: int,
    spacing: float = 25.0,
    base_capacity: int = 10,
    du_corner_multiplier: int = 2,
    du_corner: str = "top_left",
    origin: Tuple[float, float] | None = None,
) -> FronthaulTopology:
    """Build a ``rows x cols`` RU grid with the DU hung off one corner RU.

    RUs sit at cell centres, so a 4x4 grid with 25 m spacing covers a
    100 m x 100 m area. The DU attachment segment and every inter-RU segment
    touching the attachment RU get ``base_capacity * du_corner_multiplier``.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"grid dimensions must be positive, got {rows}x{cols}")
    if base_capacity < 1:
        raise ValueError("base_capacity must be >= 1")
    if du_corner_multiplier < 1:
        raise ValueError("du_corner_multiplier must be >= 1")
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    ox, oy = origin if origin is not None else (spacing / 2, spacing / 2)

    nodes = [
        RuNode(r * cols + c, (ox + c * spacing, oy + r * spacing))
        for r in range(rows)
        for c in range(cols)
    ]
    attach = _corner_index(rows, cols, du_corner)
    du = rows * cols
    boosted = base_capacity * du_corner_multiplier

    pairs: List[Tuple[int, int]] = []
    for r in range(rows):
        for c in range(cols - 1):
            pairs.append((r * cols + c, r * cols + c + 1))
    for c in range(cols):
        for r in range(rows - 1):
            pairs.append((r * cols + c, (r + 1) * cols + c))
    pairs.append((attach, du))

    segments = [
        Segment(z, (a, b), boosted if attach in (a, b) else base_capacity)
        for z, (a, b) in enumerate(pairs)
    ]
    adjacency: Dict[int, List[int]] = {n: [] for n in range(du + 1)}
    for s in segments:
        for n in s.endpoints:
            adjacency[n].append(s.id)

    ax, ay = nodes[attach].position
    # DU drawn just outside the grid, diagonally off its corner
    dx = -1.0 if du_corner.endswith("left") else 1.0
    dy = -1.0 if du_corner.startswith("top") else 1.0
    du_pos = (ax + dx * spacing / 2, ay + dy * spacing / 2)

    return FronthaulTopology(
        nodes=nodes,
        du_node=du,
        du_position=du_pos,
        segments=segments,
        adjacency={n: tuple(sorted(v)) for n, v in adjacency.items()},
        rows=rows,
        cols=cols,
        du_attachment=attach,
    )


def incident_segments(topology: FronthaulTopology, node_id: int) -> List[int]:
    try:
        return list(topology.adjacency[node_id])
    except KeyError:
        raise KeyError(f"unknown node id {node_id}") from None


def _bfs(topology: FronthaulTopology, src: int) -> Dict[int, int]:
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for z in topology.adjacency[u]:
            v = topology.segments[z].other(u)
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def is_connected(topology: FronthaulTopology) -> bool:
    return len(_bfs(topology, topology.du_node)) == topology.n_ru + 1


def segment_records(topology: FronthaulTopology) -> List[Tuple[int, int, int, int]]:
    return [(s.id, s.endpoints[0], s.endpoints[1], s.total_capacity) for s in topology.segments]


def dump_segments(topology: FronthaulTopology, path) -> None:
    """Write one ``id,endpoint_a,endpoint_b,capacity`` row per segment."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "endpoint_a", "endpoint_b", "capacity"])
        w.writerows(segment_records(topology))


def node_sequence_to_segments(topology: FronthaulTopology, nodes: Sequence[int]) -> List[int]:
    out = []
    for u, v in zip(nodes, nodes[1:]):
        for z in topology.adjacency[u]:
            if topology.segments[z].other(u) == v:
                out.append(z)
                break
        else:
            raise ValueError(f"nodes {u} and {v} are not adjacent")
    return out
