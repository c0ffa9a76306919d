"""Initial per-UE serving RU subsets and ARU designation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

ARU_STRONGEST = "strongest"
ARU_CLOSEST_TO_DU = "closest_to_du"


@dataclass(frozen=True)
class ServingSubset:
    ue_id: int
    ru_ids: Tuple[int, ...]
    aru_id: int

    def __post_init__(self):
        if len(set(self.ru_ids)) != len(self.ru_ids):
            raise ValueError(f"duplicate RU ids in subset {self.ru_ids}")
        if self.ru_ids and self.aru_id not in self.ru_ids:
            raise ValueError(f"ARU {self.aru_id} not in subset {self.ru_ids}")

    @property
    def size(self) -> int:
        return len(self.ru_ids)


def _ranked(gains: np.ndarray) -> np.ndarray:
    # descending gain, ascending RU id on ties
    return np.lexsort((np.arange(gains.size), -gains))


def select_top_m(large_scale, m: int) -> List[ServingSubset]:
    g = np.asarray(large_scale, dtype=float)
    n_ru = g.shape[1]
    if not 1 <= m <= n_ru:
        raise ValueError(f"subset size m={m} must lie in [1, {n_ru}]")
    out = []
    for k, row in enumerate(g):
        ids = tuple(int(i) for i in _ranked(row)[:m])
        out.append(ServingSubset(k, ids, ids[0]))
    return out


def select_alpha(large_scale, alpha: float) -> List[ServingSubset]:
    """Smallest strongest-first prefix holding at least ``alpha`` of the UE's total gain."""
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    g = np.asarray(large_scale, dtype=float)
    out = []
    for k, row in enumerate(g):
        order = _ranked(row)
        frac = np.cumsum(row[order]) / row.sum()
        # guard the alpha=1 case against cumsum round-off
        frac[-1] = 1.0
        size = int(np.argmax(frac >= alpha)) + 1
        if alpha == 1:
            size = max(size, int(np.count_nonzero(row > 0)))
        ids = tuple(int(i) for i in order[:size])
        out.append(ServingSubset(k, ids, ids[0]))
    return out


def select_aru(subset: Sequence[int], gains_row, criterion: str = ARU_STRONGEST, hops=None) -> int:
    """Pick the ARU from ``subset``.

    ``gains_row`` is the UE's large-scale row. With ``closest_to_du`` the RU
    with fewest hops to the DU wins (``hops[n]``), falling back to gain.
    """
    if len(subset) == 0:
        raise ValueError("cannot pick an ARU from an empty subset")
    g = np.asarray(gains_row, dtype=float)
    if criterion == ARU_STRONGEST:
        return int(min(subset, key=lambda n: (-g[n], n)))
    if criterion == ARU_CLOSEST_TO_DU:
        if hops is None:
            raise ValueError("closest_to_du needs hop distances")
        return int(min(subset, key=lambda n: (hops[n], -g[n], n)))
    raise ValueError(f"unknown ARU criterion {criterion!r}")


def with_aru(subsets: Sequence[ServingSubset], large_scale, criterion: str, hops=None) -> List[ServingSubset]:
    g = np.asarray(large_scale, dtype=float)
    return [
        ServingSubset(s.ue_id, s.ru_ids, select_aru(s.ru_ids, g[s.ue_id], criterion, hops))
        for s in subsets
    ]


def to_association(subsets: Sequence[ServingSubset], n_ue: int, n_ru: int):
    from .association import AssociationMatrix

    a = np.zeros((n_ue, n_ru), dtype=np.int8)
    aru = np.full(n_ue, -1, dtype=int)
    for s in subsets:
        a[s.ue_id, list(s.ru_ids)] = 1
        if s.ru_ids:
            aru[s.ue_id] = s.aru_id
    return AssociationMatrix(a=a, aru=aru, dropped=np.zeros(n_ue, dtype=bool))
