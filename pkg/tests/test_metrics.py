import numpy as np
import pytest
from hypothesis import given, strategies as st

from dmimo_routing.metrics import RealizationResult, cdf_table, collect, empirical_cdf, summary


def result(i, n_ue=8, dropped=0, scenario="s"):
    return RealizationResult(
        scenario_id=scenario, index=i, n_ue=n_ue,
        segment_utilization=[0.1, 0.2],
        sinr_db=[1.0 * i] * (n_ue - dropped),
        connection_ratio=[1.0] * (n_ue - dropped) + [0.0] * dropped,
        l2_path_lengths=[1, 2],
        dropped=[False] * (n_ue - dropped) + [True] * dropped,
    )


def test_collect_fifty_realizations():
    b = collect([result(i) for i in range(50)])
    assert b.n_ue_slots == 400 and len(b.sinr_db) == 400 and b.drop_rate == 0.0


def test_collect_empty_and_all_dropped():
    assert collect([]).n_realizations == 0
    b = collect([result(0, dropped=8)])
    assert b.sinr_db == [] and b.drop_rate == 1.0
    assert summary(b)["sinr_db_median"] is None


def test_collect_rejects_mixed_scenarios():
    with pytest.raises(ValueError):
        collect([result(0, scenario="a"), result(1, scenario="b")])


def test_collect_order_insensitive():
    rs = [result(i, dropped=i % 3) for i in range(6)]
    a, b = collect(rs), collect(rs[::-1])
    assert cdf_table(a) == cdf_table(b)


def test_empirical_cdf_examples():
    assert empirical_cdf([1, 2, 3]) == [(1.0, 1 / 3), (2.0, 2 / 3), (3.0, 1.0)]
    assert empirical_cdf([4, 4, 4]) == [(4.0, 1.0)]
    assert empirical_cdf([3, 1, 2]) == empirical_cdf([1, 2, 3])
    with pytest.raises(ValueError):
        empirical_cdf([])


@given(st.lists(st.floats(-100, 100), min_size=1, max_size=50), st.randoms())
def test_empirical_cdf_properties(xs, rnd):
    cdf = empirical_cdf(xs)
    vals, ps = zip(*cdf)
    assert list(vals) == sorted(vals) and list(ps) == sorted(ps)
    assert ps[-1] == 1.0
    shuffled = list(xs)
    rnd.shuffle(shuffled)
    assert empirical_cdf(shuffled) == cdf


def test_cdf_table_format():
    text = cdf_table(collect([result(0), result(1)]))
    lines = text.splitlines()
    assert lines[0] == "scenario_id,metric,value,cdf"
    assert {l.split(",")[1] for l in lines[1:]} == {"segment_utilization", "sinr_db", "connection_ratio", "l2_path_length"}
