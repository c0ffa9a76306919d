import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dmimo_routing.association import apply_routing_outcomes, connection_ratio
from dmimo_routing.grouping import ServingSubset, to_association
from dmimo_routing.routing import L1, L2, Route, RouteDecision, RoutingLedger, UeRouting, route_two_level
from dmimo_routing.topology import build_grid

OK = Route((0, 1), (0,))


def decision(k, n, level, ok):
    return RouteDecision(k, n, level, OK if ok else None, 1.0 if ok else 0.0, int(ok))


def ue_routing(k, aru, l1_ok, l2):
    return UeRouting(k, aru, decision(k, aru, L1, l1_ok), {n: decision(k, n, L2, ok) for n, ok in l2.items()})


def initial():
    return to_association([ServingSubset(0, (1, 2, 3, 4, 5), 1), ServingSubset(1, (5, 6), 6)], 2, 8)


def test_all_success_is_identity():
    init = initial()
    dec = {0: ue_routing(0, 1, True, {2: True, 3: True, 4: True, 5: True}),
           1: ue_routing(1, 6, True, {5: True})}
    out = apply_routing_outcomes(init, dec)
    np.testing.assert_array_equal(out.a, init.a)
    assert not out.dropped.any()
    assert connection_ratio(init, out, 0) == 1.0


def test_l1_failure_drops_ue():
    init = initial()
    dec = {0: ue_routing(0, 1, False, {}), 1: ue_routing(1, 6, True, {5: True})}
    out = apply_routing_outcomes(init, dec)
    assert out.a[0].sum() == 0 and out.dropped[0]
    assert out.a[1].sum() == 2 and not out.dropped[1]
    assert connection_ratio(init, out, 0) == 0.0
    assert out.active_ues() == [1]


def test_partial_l2_failures():
    init = to_association([ServingSubset(0, (1, 2, 3, 4, 5), 1)], 1, 8)
    dec = {0: ue_routing(0, 1, True, {2: False, 3: True, 4: False, 5: True})}
    out = apply_routing_outcomes(init, dec)
    assert out.a[0].tolist() == [0, 1, 0, 1, 0, 1, 0, 0]
    assert connection_ratio(init, out, 0) == pytest.approx(3 / 5)
    assert init.a[0].sum() == 5  # input untouched


def test_two_of_five_survive():
    init = to_association([ServingSubset(0, (1, 2, 3, 4, 5), 1)], 1, 8)
    dec = {0: ue_routing(0, 1, True, {2: False, 3: False, 4: False, 5: True})}
    assert connection_ratio(init, apply_routing_outcomes(init, dec), 0) == 0.4


def test_missing_decision_rejected():
    init = initial()
    with pytest.raises(KeyError):
        apply_routing_outcomes(init, {0: ue_routing(0, 1, True, {2: True, 3: True, 4: True, 5: True})})
    with pytest.raises(KeyError):
        apply_routing_outcomes(init, {0: ue_routing(0, 1, True, {2: True}), 1: ue_routing(1, 6, True, {5: True})})


def test_connection_ratio_empty_subset():
    init = to_association([ServingSubset(0, (), -1)], 1, 4)
    with pytest.raises(ValueError):
        connection_ratio(init, init, 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_update_properties(cap, n_ue, seed):
    topo = build_grid(3, 3, base_capacity=cap)
    rng = np.random.default_rng(seed)
    subs = []
    for k in range(n_ue):
        ids = tuple(int(i) for i in rng.permutation(9)[:4])
        subs.append(ServingSubset(k, ids, ids[0]))
    init = to_association(subs, n_ue, 9)
    dec = route_two_level(topo, RoutingLedger.for_topology(topo), subs, 3)
    out = apply_routing_outcomes(init, dec)
    assert (out.a <= init.a).all()
    for k in range(n_ue):
        assert out.dropped[k] == (not dec[k].l1.success)
        if out.dropped[k]:
            assert out.a[k].sum() == 0
        else:
            assert out.a[k, dec[k].aru_id] == 1
            assert connection_ratio(init, out, k) >= 1 / 4
        r = connection_ratio(init, out, k)
        assert r * 4 == int(r * 4)
