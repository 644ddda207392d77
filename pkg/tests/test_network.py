from __future__ import annotations

import pytest

from conftest import fixture_b, random_arc_instance
from mdvsp.errors import InvalidInstanceError
from mdvsp.instances import Instance
from mdvsp.network import build_connection_network, to_dot


def test_fixture_arcs(g_b):
    assert g_b.num_arcs == 9
    assert {(u, v) for u, v, _ in g_b.arcs()} == {
        (0, 2), (1, 3), (2, 1), (3, 0), (2, 3), (2, 0), (3, 1), (0, 0), (1, 1)
    }
    assert g_b.arc_cost(2, 3) == 5
    assert g_b.arc_index(2, 3) is not None
    assert g_b.arc_index(3, 2) is None


def test_trips_without_links_see_only_depots():
    inst = Instance.from_arcs(2, 3, (1, 1), {(d, t): 1 for d in range(2) for t in range(2, 5)}
                              | {(t, d): 1 for d in range(2) for t in range(2, 5)})
    g = build_connection_network(inst)
    for t in g.trips:
        assert all(g.is_depot(v) for v, _ in g.out_arcs(t))
        assert all(g.is_depot(u) for u, _ in g.in_arcs(t))


def test_handshake_and_adjacency_consistency():
    for seed in range(30):
        g = build_connection_network(random_arc_instance(seed))
        outs = sum(g.out_degree(v) for v in range(g.num_nodes))
        ins = sum(g.in_degree(v) for v in range(g.num_nodes))
        assert outs == ins == g.num_arcs == int(g.instance.present.sum())
        listed = {(u, v, c) for u in range(g.num_nodes) for v, c in g.out_arcs(u)}
        listed_in = {(u, v, c) for v in range(g.num_nodes) for u, c in g.in_arcs(v)}
        assert listed == listed_in == set(g.arcs())
        assert len(listed) == g.num_arcs
        for u, v, c in g.arcs():
            assert g.instance.arc_cost(u, v) == c


def test_invalid_instance_is_rejected():
    inst = Instance.from_arcs(1, 1, (1,), {(0, 1): 1})
    with pytest.raises(InvalidInstanceError):
        build_connection_network(inst)


def test_dot_dump():
    text = to_dot(build_connection_network(fixture_b()))
    assert text.startswith('digraph "fixture_b"')
    assert '2 -> 3 [label="5"];' in text
