from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fixture_b, random_arc_instance, tiny_instance
from oracles import mdvsp_optimum, relaxation_optimum
from mdvsp.circulation import (
    BYPASS_ARC,
    LINK_ARC,
    TRIP_ARC,
    build_circulation_network,
    check_circulation,
    circulation_to_flow_solution,
    solve_min_cost_circulation,
    solve_relaxation,
)
from mdvsp.errors import InfeasibleError
from mdvsp.instances import Instance
from mdvsp.network import build_connection_network


def test_fixture_structure(g_b):
    net = build_circulation_network(g_b)
    assert net.num_nodes == 8
    kinds = net.kind.tolist()
    assert kinds.count(TRIP_ARC) == 2
    assert kinds.count(BYPASS_ARC) == 2
    assert kinds.count(LINK_ARC) == 7
    assert int(net.supply.sum()) == 0
    assert int(net.supply[net.supply > 0].sum()) == 2
    trip = net.kind == TRIP_ARC
    assert (net.lower[trip] == 1).all() and (net.upper[trip] == 1).all() and (net.cost[trip] == 0).all()
    bypass = net.kind == BYPASS_ARC
    assert net.upper[bypass].tolist() == [1, 1] and (net.lower[bypass] == 0).all()
    # trip 2 -> trip 3 becomes 2+ -> 3-
    a = [k for k in range(net.num_arcs) if (net.origin_tail[k], net.origin_head[k]) == (2, 3)][0]
    assert (net.tail[a], net.head[a]) == (net.trip_out(2), net.trip_in(3))
    assert net.node_label(net.trip_out(2)) == "2+"


def test_smallest_network():
    inst = Instance.from_arcs(1, 1, (1,), {(0, 1): 3, (1, 0): 4})
    net = build_circulation_network(build_connection_network(inst))
    assert net.num_nodes == 4
    pairs = set(zip(net.tail.tolist(), net.head.tolist()))
    assert pairs == {(0, 2), (2, 3), (3, 1), (0, 1)}
    c = solve_min_cost_circulation(net)
    assert c.cost == 7


def test_fixture_optimum_is_the_feasible_schedule(g_b):
    # the relaxation optimum of this fixture already closes 0 -> 2 -> 3 -> 0
    x = solve_relaxation(g_b)
    assert x.objective == 25
    assert dict(x.values) == {(0, 2): 1, (2, 3): 1, (3, 0): 1, (1, 1): 1}


def test_missing_pull_in_gives_witness():
    # trip 1 lost its only pull-in and has no successor trip
    inst = Instance.from_arcs(1, 2, (2,), {(0, 1): 1, (0, 2): 1, (2, 0): 1})
    net = build_circulation_network(build_connection_network(inst, validate=False))
    with pytest.raises(InfeasibleError) as err:
        solve_min_cost_circulation(net)
    assert err.value.trip == 1


def test_capacity_shortage_is_infeasible():
    arcs = {(0, 1): 1, (0, 2): 1, (1, 0): 1, (2, 0): 1}
    net = build_circulation_network(build_connection_network(Instance.from_arcs(1, 2, (1,), arcs)))
    with pytest.raises(InfeasibleError) as err:
        solve_min_cost_circulation(net)
    assert err.value.trip in (1, 2)


def test_zero_demand_network():
    inst = Instance.from_arcs(1, 0, (0,), {})
    net = build_circulation_network(build_connection_network(inst, validate=False))
    c = solve_min_cost_circulation(net)
    x = circulation_to_flow_solution(c, net)
    assert c.cost == 0 and x.objective == 0 and dict(x.values) == {}


def test_negative_costs_are_supported():
    arcs = {(0, 1): -5, (1, 0): 2, (0, 2): 3, (2, 0): -1, (1, 2): -4}
    inst = Instance.from_arcs(1, 2, (2,), arcs)
    assert solve_relaxation(build_connection_network(inst)).objective == relaxation_optimum(inst)


def test_matches_exhaustive_relaxation_on_arbitrary_arc_sets():
    checked = 0
    for seed in range(150):
        inst = random_arc_instance(seed)
        want = relaxation_optimum(inst)
        g = build_connection_network(inst)
        if want is None:
            with pytest.raises(InfeasibleError):
                solve_relaxation(g)
            continue
        assert solve_relaxation(g).objective == want, seed
        checked += 1
    assert checked > 80


def _invariants(inst):
    g = build_connection_network(inst)
    net = build_circulation_network(g)
    c = solve_min_cost_circulation(net)
    assert check_circulation(net, c) == []
    assert (c.flow[net.kind == TRIP_ARC] == 1).all()
    resid_fwd = c.flow < net.upper
    resid_bwd = c.flow > net.lower
    rc = net.cost + c.potential[net.tail] - c.potential[net.head]
    assert (rc[resid_fwd] >= 0).all() and (rc[resid_bwd] <= 0).all()
    x = circulation_to_flow_solution(c, net)
    assert x.objective == c.cost
    m = inst.num_depots
    for d in range(m):
        pull_out = sum(v for (a, b), v in x.values.items() if a == d and b >= m)
        pull_in = sum(v for (a, b), v in x.values.items() if b == d and a >= m)
        assert pull_out == pull_in <= inst.depot_capacity[d]
        assert pull_out + x.value(d, d) == inst.depot_capacity[d]
    assert all(float(v).is_integer() for v in x.values.values())
    return c.cost


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 100_000))
def test_circulation_invariants(seed):
    inst = tiny_instance(seed)
    cost = _invariants(inst)
    assert cost <= mdvsp_optimum(inst)


def test_lower_bound_on_fixture():
    assert _invariants(fixture_b()) <= mdvsp_optimum(fixture_b())


def test_solution_is_deterministic():
    inst = tiny_instance(3)
    g = build_connection_network(inst)
    a, b = solve_relaxation(g), solve_relaxation(g)
    assert dict(a.values) == dict(b.values)


def test_larger_capacities_use_scaling():
    rng = np.random.default_rng(0)
    arcs = {}
    for t in range(2, 40):
        arcs[(0, t)] = int(rng.integers(50, 100))
        arcs[(1, t)] = int(rng.integers(50, 100))
        arcs[(t, 0)] = int(rng.integers(0, 10))
        arcs[(t, 1)] = int(rng.integers(0, 10))
        for u in range(2, t):
            if rng.random() < 0.3:
                arcs[(u, t)] = int(rng.integers(0, 20))
    inst = Instance.from_arcs(2, 38, (25, 30), arcs)
    _invariants(inst)
