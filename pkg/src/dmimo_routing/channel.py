"""UE/blocker drops and downlink channel draws for an indoor-hotspot deployment.

Pathloss follows the 3GPP TR 38.901 InH-Office model. A UE-RU link whose
straight line crosses any blocker disk uses the NLOS branch. UEs and RUs sit
at the same height, so all geometry is 2-D.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

THERMAL_NOISE_DBM_HZ = -174.0
SHADOW_STD_LOS_DB = 3.0
SHADOW_STD_NLOS_DB = 8.03
MIN_DISTANCE_M = 1.0


@dataclass(frozen=True)
class DeploymentRealization:
    ue_positions: np.ndarray  # (K, 2)
    blocker_positions: np.ndarray  # (B, 2)
    blocker_radius: float
    rng_seed: int | None = None


@dataclass(frozen=True)
class ChannelState:
    h: np.ndarray  # (K, N) complex
    large_scale: np.ndarray  # (K, N), E|h|^2
    noise_power: float  # W
    per_ru_power: float  # W
    los: np.ndarray  # (K, N) bool


@dataclass(frozen=True)
class ChannelParams:
    carrier_ghz: float = 28.0
    bandwidth_hz: float = 200e6
    ru_power_dbm: float = 13.0
    noise_figure_db: float = 10.0
    array_gain_db: float = 10 * np.log10(32)
    shadowing: bool = False


def dbm_to_watts(dbm):
    return 10 ** ((np.asarray(dbm, dtype=float) - 30.0) / 10.0)


def noise_power(bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise over the band plus the receiver noise figure, in watts."""
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be positive")
    dbm = THERMAL_NOISE_DBM_HZ + 10 * np.log10(bandwidth_hz) + noise_figure_db
    return float(dbm_to_watts(dbm))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def place_entities(
    area: tuple[float, float],
    n_ue: int,
    n_blockers: int,
    seed=None,
    blocker_radius: float = 0.5,
) -> DeploymentRealization:
    if n_ue < 1:
        raise ValueError("need at least one UE")
    if n_blockers < 0:
        raise ValueError("blocker count must be >= 0")
    rng = _as_rng(seed)
    w, h = area
    ues = rng.uniform((0.0, 0.0), (w, h), size=(n_ue, 2))
    blockers = rng.uniform((0.0, 0.0), (w, h), size=(n_blockers, 2))
    return DeploymentRealization(ues, blockers, float(blocker_radius), seed if isinstance(seed, int) else None)


def _segment_point_distance(p0: np.ndarray, p1: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Distance from points ``q`` (..., B, 2) to segments ``p0->p1`` (..., 1, 2)."""
    d = p1 - p0
    dd = np.sum(d * d, axis=-1, keepdims=True)
    t = np.where(dd > 0, np.sum((q - p0) * d, axis=-1, keepdims=True) / np.where(dd > 0, dd, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = p0 + t * d
    return np.linalg.norm(q - closest, axis=-1)


def is_los(ue_pos, ru_pos, blockers, radius: float = 0.5) -> bool:
    blockers = np.asarray(blockers, dtype=float).reshape(-1, 2)
    if blockers.shape[0] == 0:
        return True
    p0 = np.asarray(ue_pos, dtype=float)[None, :]
    p1 = np.asarray(ru_pos, dtype=float)[None, :]
    return bool(np.all(_segment_point_distance(p0, p1, blockers) > radius))


def los_matrix(ue_positions, ru_positions, blockers, radius: float = 0.5) -> np.ndarray:
    ue = np.asarray(ue_positions, dtype=float)
    ru = np.asarray(ru_positions, dtype=float)
    blk = np.asarray(blockers, dtype=float).reshape(-1, 2)
    if blk.shape[0] == 0:
        return np.ones((ue.shape[0], ru.shape[0]), dtype=bool)
    p0 = np.broadcast_to(ue[:, None, None, :], (ue.shape[0], ru.shape[0], 1, 2))
    p1 = np.broadcast_to(ru[None, :, None, :], (ue.shape[0], ru.shape[0], 1, 2))
    dist = _segment_point_distance(p0, p1, blk[None, None, :, :])
    return np.all(dist > radius, axis=-1)


def pathloss_db(distance, los, carrier_ghz: float = 28.0):
    """InH-Office pathloss in dB; distances below 1 m are evaluated at 1 m.

    LOS:  32.4 + 17.3 log10(d) + 20 log10(fc)
    NLOS: max(LOS, 17.3 + 38.3 log10(d) + 24.9 log10(fc))
    """
    d = np.asarray(distance, dtype=float)
    if np.any(d <= 0):
        raise ValueError("distance must be positive")
    d = np.maximum(d, MIN_DISTANCE_M)
    pl_los = 32.4 + 17.3 * np.log10(d) + 20.0 * np.log10(carrier_ghz)
    pl_nlos = np.maximum(pl_los, 17.3 + 38.3 * np.log10(d) + 24.9 * np.log10(carrier_ghz))
    out = np.where(np.asarray(los, dtype=bool), pl_los, pl_nlos)
    return float(out) if out.ndim == 0 else out


def draw_channel(
    realization: DeploymentRealization,
    ru_positions,
    params: ChannelParams = ChannelParams(),
    seed=None,
) -> ChannelState:
    rng = _as_rng(seed)
    ru = np.asarray(ru_positions, dtype=float)
    ue = realization.ue_positions
    dist = np.linalg.norm(ue[:, None, :] - ru[None, :, :], axis=-1)
    dist = np.maximum(dist, MIN_DISTANCE_M)
    los = los_matrix(ue, ru, realization.blocker_positions, realization.blocker_radius)
    gain_db = params.array_gain_db - pathloss_db(dist, los, params.carrier_ghz)
    # drawn unconditionally so toggling shadowing leaves the fading stream untouched
    shadow = rng.standard_normal(dist.shape)
    if params.shadowing:
        gain_db = gain_db - shadow * np.where(los, SHADOW_STD_LOS_DB, SHADOW_STD_NLOS_DB)
    g = 10 ** (gain_db / 10.0)
    z = (rng.standard_normal(dist.shape) + 1j * rng.standard_normal(dist.shape)) / np.sqrt(2.0)
    return ChannelState(
        h=np.sqrt(g) * z,
        large_scale=g,
        noise_power=noise_power(params.bandwidth_hz, params.noise_figure_db),
        per_ru_power=float(dbm_to_watts(params.ru_power_dbm)),
        los=los,
    )
