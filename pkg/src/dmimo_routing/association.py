"""RU-UE association updates from routing outcomes.

Rows are UEs and columns RUs: ``a[k, n] == 1`` means RU ``n`` serves UE ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .routing import UeRouting


@dataclass
class AssociationMatrix:
    a: np.ndarray
    aru: np.ndarray
    dropped: np.ndarray

    @property
    def shape(self):
        return self.a.shape

    def copy(self) -> "AssociationMatrix":
        return AssociationMatrix(self.a.copy(), self.aru.copy(), self.dropped.copy())

    def active_ues(self) -> list[int]:
        return [k for k in range(self.a.shape[0]) if not self.dropped[k] and self.a[k].any()]


def apply_routing_outcomes(
    initial: AssociationMatrix, decisions: Mapping[int, UeRouting]
) -> AssociationMatrix:
    """Clear every (UE, RU) bit whose route failed; drop UEs whose ARU failed."""
    out = initial.copy()
    for k in range(initial.a.shape[0]):
        served = np.flatnonzero(initial.a[k])
        if served.size == 0:
            continue
        if k not in decisions:
            raise KeyError(f"no routing decisions for associated UE {k}")
        ue = decisions[k]
        if ue.dropped:
            out.a[k] = 0
            out.dropped[k] = True
            continue
        for n in served:
            n = int(n)
            if n == ue.aru_id:
                continue
            if n not in ue.l2:
                raise KeyError(f"no L2 decision for UE {k}, RU {n}")
            if not ue.l2[n].success:
                out.a[k, n] = 0
    return out


def connection_ratio(initial: AssociationMatrix, updated: AssociationMatrix, ue_id: int) -> float:
    m = int(initial.a[ue_id].sum())
    if m == 0:
        raise ValueError(f"UE {ue_id} had an empty initial subset")
    return int(updated.a[ue_id].sum()) / m
