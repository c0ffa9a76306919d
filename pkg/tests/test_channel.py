import numpy as np
import pytest
from hypothesis import given, strategies as st

from dmimo_routing.channel import (
    ChannelParams,
    dbm_to_watts,
    draw_channel,
    is_los,
    noise_power,
    pathloss_db,
    place_entities,
)
from dmimo_routing.topology import build_grid


def test_place_entities_deterministic():
    a = place_entities((100, 100), 8, 1000, seed=7)
    b = place_entities((100, 100), 8, 1000, seed=7)
    assert a.ue_positions.shape == (8, 2)
    np.testing.assert_array_equal(a.ue_positions, b.ue_positions)
    np.testing.assert_array_equal(a.blocker_positions, b.blocker_positions)
    assert place_entities((100, 100), 15, 0, seed=1).ue_positions.shape == (15, 2)
    assert np.all((a.ue_positions >= 0) & (a.ue_positions <= 100))
    with pytest.raises(ValueError):
        place_entities((100, 100), 0, 0)


def test_no_blockers_all_los():
    topo = build_grid(4, 4)
    drop = place_entities((100, 100), 8, 0, seed=3)
    ch = draw_channel(drop, topo.ru_positions(), seed=3)
    assert ch.los.all()


def test_is_los_cases():
    assert is_los((0, 0), (10, 0), np.empty((0, 2)))
    assert not is_los((0, 0), (10, 0), [(5, 0)], radius=0.5)
    assert is_los((0, 0), (10, 0), [(5, 3)], radius=0.5)
    # beyond the endpoint: distance measured to the segment, not the line
    assert is_los((0, 0), (10, 0), [(12, 0)], radius=0.5)


@given(st.lists(st.floats(0, 100), min_size=4, max_size=4), st.lists(st.floats(0, 100), min_size=2, max_size=20))
def test_is_los_symmetric(pts, blk):
    blockers = np.array(blk[: len(blk) // 2 * 2]).reshape(-1, 2)
    a, b = pts[:2], pts[2:]
    assert is_los(a, b, blockers) == is_los(b, a, blockers)


def test_pathloss_inh_los_1m():
    # 32.4 + 17.3*log10(1) + 20*log10(28) = 32.4 + 28.943160626
    assert pathloss_db(1.0, True, 28.0) == pytest.approx(61.343160626, abs=1e-8)


def test_pathloss_inh_nlos_value():
    # 17.3 + 38.3*log10(20) + 24.9*log10(28) = 17.3 + 49.829 + 36.034 by hand
    want = 17.3 + 38.3 * 1.3010299957 + 24.9 * 1.4471580313
    assert pathloss_db(20.0, False, 28.0) == pytest.approx(want, abs=1e-8)


@given(st.floats(0.1, 200), st.floats(0.1, 200), st.booleans())
def test_pathloss_monotone(d1, d2, los):
    lo, hi = sorted((d1, d2))
    assert pathloss_db(hi, los) >= pathloss_db(lo, los)
    assert pathloss_db(lo, False) >= pathloss_db(lo, True)


def test_pathloss_rejects_nonpositive():
    with pytest.raises(ValueError):
        pathloss_db(0.0, True)


def test_noise_power():
    # -174 + 10*log10(2e8) + 10 = -80.9897 dBm
    assert 10 * np.log10(noise_power(200e6, 10.0) * 1e3) == pytest.approx(-80.98970004, abs=1e-6)
    assert 10 * np.log10(noise_power(1.0, 0.0) * 1e3) == pytest.approx(-174.0)
    ratio = noise_power(2e6, 5.0) / noise_power(1e6, 5.0)
    assert 10 * np.log10(ratio) == pytest.approx(3.0103, abs=1e-4)
    with pytest.raises(ValueError):
        noise_power(0, 10)


def test_dbm_to_watts():
    assert dbm_to_watts(13.0) == pytest.approx(0.019952623)


def test_draw_channel_deterministic_and_consistent():
    topo = build_grid(4, 4)
    drop = place_entities((100, 100), 8, 1000, seed=11)
    a = draw_channel(drop, topo.ru_positions(), seed=5)
    b = draw_channel(drop, topo.ru_positions(), seed=5)
    np.testing.assert_array_equal(a.h, b.h)
    assert a.h.shape == (8, 16)
    assert np.all(a.large_scale > 0) and a.noise_power > 0
    assert np.all(np.isfinite(a.h))


def test_large_scale_is_mean_power():
    topo = build_grid(2, 2)
    drop = place_entities((50, 50), 1, 0, seed=2)
    n = 20000
    draws = np.stack([draw_channel(drop, topo.ru_positions(), seed=s).h for s in range(n)])
    g = draw_channel(drop, topo.ru_positions(), seed=0).large_scale
    p = np.abs(draws) ** 2
    mean, se = p.mean(axis=0), p.std(axis=0) / np.sqrt(n)
    assert np.all(np.abs(mean - g) <= 3 * se)
    z = draws / np.sqrt(g)
    assert abs(np.var(z) - 1) < 0.05


def test_closer_ru_stronger():
    ru = np.array([[10.0, 0.0], [40.0, 0.0]])
    from dmimo_routing.channel import DeploymentRealization

    drop = DeploymentRealization(np.array([[0.0, 0.0]]), np.empty((0, 2)), 0.5)
    ch = draw_channel(drop, ru, seed=0)
    assert ch.large_scale[0, 0] > ch.large_scale[0, 1]


def test_shadowing_flag():
    topo = build_grid(4, 4)
    drop = place_entities((100, 100), 4, 100, seed=1)
    off = draw_channel(drop, topo.ru_positions(), ChannelParams(shadowing=False), seed=9)
    on = draw_channel(drop, topo.ru_positions(), ChannelParams(shadowing=True), seed=9)
    assert not np.allclose(off.large_scale, on.large_scale)
    # same small-scale stream either way
    np.testing.assert_allclose(off.h / np.sqrt(off.large_scale), on.h / np.sqrt(on.large_scale))
