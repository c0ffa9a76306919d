"""Centralized zero-forcing on the association-masked channel, and SINR.

The effective channel is the true channel with unassociated (UE, RU) entries
zeroed. Precoders are its pseudo-inverse over the served UEs. The
pseudo-inverse spreads each stream over the RUs of *all* served UEs, so
before transmission the weights are restricted to the RUs that actually
hold that UE's data, then scaled by one common factor so the most loaded RU
transmits exactly at its power limit. SINR is evaluated on the true channel,
so links cut by routing leak interference the masked ZF cannot null.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

PINV_RCOND = 1e-10


@dataclass(frozen=True)
class EffectiveChannel:
    h_eff: np.ndarray  # (K, N)
    active_ues: List[int]


@dataclass(frozen=True)
class PrecoderSet:
    w: np.ndarray  # (N, K); columns of inactive UEs are zero
    per_ru_tx_power: np.ndarray  # (N,)
    scale: float = 0.0
    diagnostics: dict = field(default_factory=dict)


def service_mask(a) -> np.ndarray:
    """Boolean (K, N) mask from an AssociationMatrix or a plain 0/1 array."""
    mask = np.asarray(getattr(a, "a", a)).astype(bool)
    dropped = getattr(a, "dropped", None)
    if dropped is not None:
        mask = mask & ~np.asarray(dropped, dtype=bool)[:, None]
    return mask


def effective_channel(h, a) -> EffectiveChannel:
    """Mask ``h`` (K x N) with the association; dropped UEs become zero rows."""
    h = np.asarray(h)
    mask = service_mask(a)
    if h.shape != mask.shape:
        raise ValueError(f"channel shape {h.shape} != association shape {mask.shape}")
    h_eff = np.where(mask, h, 0)
    active = [k for k in range(h.shape[0]) if mask[k].any()]
    return EffectiveChannel(h_eff=h_eff, active_ues=active)


def czf(eff: EffectiveChannel) -> tuple[np.ndarray, dict]:
    """Pseudo-inverse of the active rows, embedded back into an (N, K) matrix."""
    n_ue, n_ru = eff.h_eff.shape
    w = np.zeros((n_ru, n_ue), dtype=complex)
    if not eff.active_ues:
        return w, {"zf_residual": 0.0, "rank": 0}
    h_act = eff.h_eff[eff.active_ues]
    w_act = np.linalg.pinv(h_act, rcond=PINV_RCOND)
    w[:, eff.active_ues] = w_act
    residual = float(np.max(np.abs(h_act @ w_act - np.eye(len(eff.active_ues)))))
    rank = int(np.linalg.matrix_rank(h_act, tol=PINV_RCOND * np.linalg.norm(h_act, 2)))
    return w, {"zf_residual": residual, "rank": rank}


def normalize_power(w, per_ru_limit: float, diagnostics: dict | None = None) -> PrecoderSet:
    w = np.asarray(w, dtype=complex)
    if not np.all(np.isfinite(w)):
        raise ValueError("precoder weights must be finite")
    power = np.sum(np.abs(w) ** 2, axis=1)
    peak = float(power.max()) if power.size else 0.0
    if peak == 0.0:
        return PrecoderSet(np.zeros_like(w), np.zeros(w.shape[0]), 0.0, dict(diagnostics or {}))
    s = np.sqrt(per_ru_limit / peak)
    w = w * s
    return PrecoderSet(w, np.sum(np.abs(w) ** 2, axis=1), float(s), dict(diagnostics or {}))


def restrict_to_association(w, a) -> np.ndarray:
    """Zero ``w[n, k]`` wherever RU ``n`` does not serve UE ``k``."""
    return np.where(service_mask(a).T, w, 0)


def precode(h, a, per_ru_limit: float, mask: bool = True) -> PrecoderSet:
    eff = effective_channel(h, a)
    w, diag = czf(eff)
    if mask:
        full = np.sum(np.abs(w) ** 2)
        w = restrict_to_association(w, a)
        diag["off_mask_energy"] = float(1 - np.sum(np.abs(w) ** 2) / full) if full > 0 else 0.0
    return normalize_power(w, per_ru_limit, diag)


def sinr(h, precoders: PrecoderSet, a, noise_power: float) -> np.ndarray:
    """Per-UE linear SINR on the true channel; NaN for UEs without service."""
    h = np.asarray(h)
    w = precoders.w
    active = effective_channel(h, a).active_ues
    rx = h @ w  # rx[k, j]: UE k's received amplitude from UE j's stream
    out = np.full(h.shape[0], np.nan)
    for k in active:
        signal = np.abs(rx[k, k]) ** 2
        interference = sum(np.abs(rx[k, j]) ** 2 for j in active if j != k)
        out[k] = signal / (interference + noise_power)
    return out


def to_db(x):
    return 10 * np.log10(x)
