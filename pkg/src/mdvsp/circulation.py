"""Depot-aggregated relaxation as a minimum-cost circulation.

Each depot ``i`` becomes a source ``i`` (supply ``r_i``) and a sink ``i'``
(demand ``r_i``) joined by a bypass arc for idle vehicles.  Each trip ``j``
becomes an arc ``j- -> j+`` with lower and upper bound 1.  Pull-outs enter
``j-``, pull-ins leave ``j+`` and a link ``i -> j`` between trips becomes
``i+ -> j-``.

The solver is successive shortest paths with capacity scaling.  Lower
bounds are removed by pre-sending them, potentials start from a
label-correcting pass when costs can be negative, distances are computed
on reduced costs, and every shortest-path round augments along all
zero-reduced-cost paths it can find, scanning nodes and arcs in ascending
index order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import NegativeCycleError, bellman_ford, dijkstra

from .errors import InfeasibleError
from .milp import FlowSolution
from .network import ConnectionNetwork

TRIP_ARC, BYPASS_ARC, LINK_ARC = 0, 1, 2


@dataclass(frozen=True, eq=False)
class CirculationNetwork:
    """Arc arrays of the transformed network plus the map back to ``G``.

    ``origin_tail[a], origin_head[a]`` is the originating arc of the
    connection network for ``LINK_ARC`` entries, ``(j, j)`` for the trip arc
    of trip ``j`` and ``(i, i)`` for the bypass of depot ``i``.
    """

    network: ConnectionNetwork
    num_nodes: int
    supply: np.ndarray
    tail: np.ndarray
    head: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    cost: np.ndarray
    kind: np.ndarray
    origin_tail: np.ndarray
    origin_head: np.ndarray

    @property
    def num_arcs(self) -> int:
        return int(self.tail.shape[0])

    @property
    def max_capacity(self) -> int:
        return int(self.upper.max()) if self.num_arcs else 0

    def source(self, depot: int) -> int:
        return depot

    def sink(self, depot: int) -> int:
        return self.network.num_depots + depot

    def trip_in(self, trip: int) -> int:
        m = self.network.num_depots
        return 2 * m + (trip - m)

    def trip_out(self, trip: int) -> int:
        m, n = self.network.num_depots, self.network.num_trips
        return 2 * m + n + (trip - m)

    def node_trip(self, v: int) -> int | None:
        """Trip owning circulation node ``v``, or ``None`` for depot nodes."""
        m, n = self.network.num_depots, self.network.num_trips
        if v < 2 * m:
            return None
        return m + (v - 2 * m) % n

    def node_label(self, v: int) -> str:
        m = self.network.num_depots
        n = self.network.num_trips
        if v < m:
            return f"s{v}"
        if v < 2 * m:
            return f"s{v - m}'"
        if v < 2 * m + n:
            return f"{v - 2 * m + m}-"
        return f"{v - 2 * m - n + m}+"


@dataclass(frozen=True, eq=False)
class Circulation:
    flow: np.ndarray
    cost: int
    potential: np.ndarray
    rounds: int = 0


def build_circulation_network(g: ConnectionNetwork) -> CirculationNetwork:
    m, n = g.num_depots, g.num_trips
    caps = np.array(g.instance.depot_capacity, dtype=np.int64)
    num_nodes = 2 * m + 2 * n
    supply = np.zeros(num_nodes, dtype=np.int64)
    supply[:m] = caps
    supply[m:2 * m] = -caps

    trips = np.arange(m, m + n, dtype=np.int64)
    depots = np.arange(m, dtype=np.int64)
    t_in = 2 * m + (trips - m)
    t_out = 2 * m + n + (trips - m)

    gt, gh, gc = g.tail, g.head, g.cost
    keep = gt != gh
    gt, gh, gc = gt[keep], gh[keep], gc[keep]
    tail_dep, head_dep = gt < m, gh < m
    link_tail = np.where(tail_dep, gt, 2 * m + n + (gt - m))
    link_head = np.where(head_dep, m + gh, 2 * m + (gh - m))

    tail = np.concatenate([t_in, depots, link_tail])
    head = np.concatenate([t_out, m + depots, link_head])
    lower = np.concatenate([np.ones(n, np.int64), np.zeros(m, np.int64), np.zeros(gt.size, np.int64)])
    upper = np.concatenate([np.ones(n, np.int64), caps, np.ones(gt.size, np.int64)])
    cost = np.concatenate([np.zeros(n + m, np.int64), gc.astype(np.int64)])
    kind = np.concatenate([
        np.full(n, TRIP_ARC, np.int8), np.full(m, BYPASS_ARC, np.int8), np.full(gt.size, LINK_ARC, np.int8)
    ])
    origin_tail = np.concatenate([trips, depots, gt])
    origin_head = np.concatenate([trips, depots, gh])
    arrays = (supply, tail, head, lower, upper, cost, kind, origin_tail, origin_head)
    for a in arrays:
        a.setflags(write=False)
    return CirculationNetwork(g, num_nodes, *arrays)


class _Residual:
    """Residual arcs ``k < A`` are forward copies, ``k >= A`` reverse copies."""

    def __init__(self, net: CirculationNetwork):
        self.n = net.num_nodes
        self.A = net.num_arcs
        self.cap = (net.upper - net.lower).astype(np.int64)
        if np.any(self.cap < 0):
            raise ValueError("lower bound exceeds upper bound")
        self.flow = np.zeros(self.A, dtype=np.int64)
        self.rt = np.concatenate([net.tail, net.head]).astype(np.int64)
        self.rh = np.concatenate([net.head, net.tail]).astype(np.int64)
        self.rcost = np.concatenate([net.cost, -net.cost]).astype(np.int64)
        key = self.rt * self.n + self.rh
        self.parallel = np.unique(key).size != key.size

    def residual(self) -> np.ndarray:
        return np.concatenate([self.cap - self.flow, self.flow])

    def push(self, k: np.ndarray, amount: np.ndarray) -> None:
        fwd = k < self.A
        np.add.at(self.flow, k[fwd], amount[fwd])
        np.add.at(self.flow, k[~fwd] - self.A, -amount[~fwd])


def _graph(res: _Residual, mask: np.ndarray, weight: np.ndarray) -> csr_matrix:
    rt, rh, w = res.rt[mask], res.rh[mask], weight[mask]
    if res.parallel and rt.size:
        order = np.lexsort((w, rh, rt))
        rt, rh, w = rt[order], rh[order], w[order]
        first = np.ones(rt.size, dtype=bool)
        first[1:] = (rt[1:] != rt[:-1]) | (rh[1:] != rh[:-1])
        rt, rh, w = rt[first], rh[first], w[first]
    return csr_matrix((w.astype(np.float64), (rt, rh)), shape=(res.n, res.n))


def _initial_potential(res: _Residual) -> np.ndarray:
    usable = res.residual() > 0
    if not usable.any() or res.rcost[usable].min() >= 0:
        return np.zeros(res.n, dtype=np.int64)
    n = res.n
    rt = np.concatenate([res.rt[usable], np.full(n, n)])
    rh = np.concatenate([res.rh[usable], np.arange(n)])
    w = np.concatenate([res.rcost[usable], np.zeros(n, np.int64)]).astype(np.float64)
    order = np.lexsort((w, rh, rt))
    rt, rh, w = rt[order], rh[order], w[order]
    first = np.ones(rt.size, dtype=bool)
    first[1:] = (rt[1:] != rt[:-1]) | (rh[1:] != rh[:-1])
    graph = csr_matrix((w[first], (rt[first], rh[first])), shape=(n + 1, n + 1))
    try:
        dist = bellman_ford(graph, directed=True, indices=n)
    except NegativeCycleError:
        raise ValueError("negative-cost cycle in the circulation network") from None
    return np.rint(dist[:n]).astype(np.int64)


def _blocking_flow(res: _Residual, rc: np.ndarray, excess: np.ndarray, delta: int) -> int:
    resid = res.residual()
    adm = np.nonzero((resid >= delta) & (rc == 0))[0]
    if adm.size == 0:
        return 0
    adm = adm[np.lexsort((res.rh[adm], res.rt[adm]))]
    tails = res.rt[adm]
    start = np.searchsorted(tails, np.arange(res.n), side="left")
    end = np.searchsorted(tails, np.arange(res.n), side="right")
    cur = start.tolist()
    end = end.tolist()
    arcs = adm.tolist()
    heads = res.rh[adm].tolist()
    A = res.A
    cap, flow = res.cap, res.flow
    dead = bytearray(res.n)
    on_stack = bytearray(res.n)
    pushed = 0
    for s in np.nonzero(excess >= delta)[0].tolist():
        while excess[s] >= delta and not dead[s]:
            stack = [s]
            path: list[int] = []
            on_stack[s] = 1
            found = False
            while stack:
                u = stack[-1]
                if u != s and excess[u] <= -delta:
                    found = True
                    break
                advanced = False
                p = cur[u]
                while p < end[u]:
                    k = arcs[p]
                    v = heads[p]
                    r = cap[k] - flow[k] if k < A else flow[k - A]
                    if r >= delta and not dead[v] and not on_stack[v]:
                        stack.append(v)
                        path.append(k)
                        on_stack[v] = 1
                        advanced = True
                        break
                    p += 1
                cur[u] = p
                if not advanced:
                    dead[u] = 1
                    on_stack[u] = 0
                    stack.pop()
                    if path:
                        path.pop()
            for v in stack:
                on_stack[v] = 0
            if not found:
                break
            for k in path:
                if k < A:
                    flow[k] += delta
                else:
                    flow[k - A] -= delta
            excess[s] -= delta
            excess[stack[-1]] += delta
            pushed += delta
    return pushed


def solve_min_cost_circulation(net: CirculationNetwork) -> Circulation:
    """Optimal integral circulation; raises :class:`InfeasibleError` with a witness trip."""
    res = _Residual(net)
    excess = net.supply.astype(np.int64).copy()
    np.add.at(excess, net.tail, -net.lower)
    np.add.at(excess, net.head, net.lower)
    pi = _initial_potential(res)
    U = int(res.cap.max()) if res.A else 0
    delta = 1 << (U.bit_length() - 1) if U > 0 else 1
    rounds = 0
    while delta >= 1:
        resid = res.residual()
        rc = res.rcost + pi[res.rt] - pi[res.rh]
        neg = np.nonzero((resid >= delta) & (rc < 0))[0]
        if neg.size:
            amount = resid[neg]
            res.push(neg, amount)
            np.add.at(excess, res.rt[neg], -amount)
            np.add.at(excess, res.rh[neg], amount)
        while True:
            sources = np.nonzero(excess >= delta)[0]
            sinks = np.nonzero(excess <= -delta)[0]
            if sources.size == 0 or sinks.size == 0:
                break
            resid = res.residual()
            rc = res.rcost + pi[res.rt] - pi[res.rh]
            usable = resid >= delta
            graph = _graph(res, usable, rc)
            dist = dijkstra(graph, directed=True, indices=sources, min_only=True)
            if not np.isfinite(dist[sinks]).any():
                break
            finite = np.isfinite(dist)
            dist[~finite] = dist[finite].max()
            pi = pi + np.rint(dist).astype(np.int64)
            rc = res.rcost + pi[res.rt] - pi[res.rh]
            rounds += 1
            if _blocking_flow(res, rc, excess, delta) == 0:
                raise RuntimeError("shortest-path round made no progress")
        delta //= 2
    if np.any(excess != 0):
        bad = np.nonzero(excess != 0)[0].tolist()
        trips = sorted({t for t in (net.node_trip(v) for v in bad) if t is not None})
        witness = trips[0] if trips else None
        raise InfeasibleError(
            f"no feasible circulation: trip {witness} cannot be covered", trip=witness
        )
    resid = res.residual()
    rc = res.rcost + pi[res.rt] - pi[res.rh]
    if np.any(rc[resid > 0] < 0):
        raise RuntimeError("optimality certificate violated")
    flow = res.flow + net.lower
    flow.setflags(write=False)
    cost = int(np.dot(flow, net.cost))
    return Circulation(flow, cost, pi, rounds)


def check_circulation(net: CirculationNetwork, circ: Circulation) -> list[str]:
    """Bound and conservation violations of ``circ`` (empty when feasible)."""
    problems = []
    f = circ.flow
    for a in np.nonzero((f < net.lower) | (f > net.upper))[0].tolist():
        problems.append(f"arc {a} flow {f[a]} outside [{net.lower[a]}, {net.upper[a]}]")
    balance = np.zeros(net.num_nodes, dtype=np.int64)
    np.add.at(balance, net.tail, f)
    np.add.at(balance, net.head, -f)
    for v in np.nonzero(balance != net.supply)[0].tolist():
        problems.append(f"node {net.node_label(v)} balance {balance[v]} != supply {net.supply[v]}")
    if int(np.dot(f, net.cost)) != circ.cost:
        problems.append("cost mismatch")
    return problems


def circulation_to_flow_solution(c: Circulation, net: CirculationNetwork) -> FlowSolution:
    """Map circulation flow to arc values of ``G``; bypass flow becomes the depot loop."""
    sel = np.nonzero((net.kind != TRIP_ARC) & (c.flow > 0))[0]
    values = {
        (int(net.origin_tail[a]), int(net.origin_head[a])): int(c.flow[a]) for a in sel.tolist()
    }
    inst = net.network.instance
    objective = sum(int(inst.values[u, v]) * x for (u, v), x in values.items())
    if objective != c.cost:
        raise RuntimeError("circulation cost does not match the mapped objective")
    return FlowSolution(values, objective, True)


def solve_relaxation(g: ConnectionNetwork) -> FlowSolution:
    """Optimal integral solution of the relaxation without path constraints."""
    net = build_circulation_network(g)
    return circulation_to_flow_solution(solve_min_cost_circulation(net), net)
