"""Separation of violated depot-to-depot paths and the cut-generation loop.

With ``alpha_ij = 1 - x_ij`` a path ``P`` violates ``sum x(P) <= |E(P)| - 1``
exactly when ``alpha(P) < 1``.  Arcs with ``x_ij = 0`` have weight 1 and can
never lie on a violated path, so separation only searches the support of
``x``.
"""

from __future__ import annotations

import csv
import heapq
import io
import logging
from dataclasses import dataclass, field
from typing import Protocol

import numpy as np

from .instances import Instance
from .milp import TOL, FlowSolution, ModelSpec, add_path_constraint, build_base_model
from .network import ConnectionNetwork, build_connection_network

log = logging.getLogger(__name__)

Arc = tuple[int, int]


class Backend(Protocol):
    def solve(self, model: ModelSpec) -> FlowSolution: ...


@dataclass(frozen=True)
class SeparationGraph:
    """Support arcs (no depot loops) with ``alpha`` clamped to ``[0, 1]``."""

    num_depots: int
    succ: dict[int, list[tuple[int, float]]]

    def alpha(self, u: int, v: int) -> float:
        for w, a in self.succ.get(u, ()):
            if w == v:
                return a
        return 1.0


def separation_graph(x: FlowSolution, g: ConnectionNetwork) -> SeparationGraph:
    succ: dict[int, list[tuple[int, float]]] = {}
    for (u, v), val in sorted(x.values.items()):
        if u == v or val <= 0:
            continue
        succ.setdefault(u, []).append((v, min(1.0, max(0.0, 1.0 - float(val)))))
    return SeparationGraph(g.num_depots, succ)


def path_alpha(path: list[Arc], x: FlowSolution) -> float:
    return float(sum(min(1.0, max(0.0, 1.0 - float(x.value(u, v)))) for u, v in path))


@dataclass(frozen=True, order=True)
class ViolatedPath:
    """Ordered by weight, then arc count, then node sequence."""

    weight: float
    length: int
    nodes: tuple[int, ...]

    @property
    def arcs(self) -> list[Arc]:
        return list(zip(self.nodes, self.nodes[1:]))


def _from_depot(sg: SeparationGraph, d: int, limit: float) -> dict[int, ViolatedPath]:
    """Best label reaching each other depot from ``d`` through trips only."""
    m = sg.num_depots
    best: dict[int, tuple] = {d: (0.0, 0, (d,))}
    found: dict[int, ViolatedPath] = {}
    heap = [(0.0, 0, (d,))]
    done: set[int] = set()
    while heap:
        w, k, nodes = heapq.heappop(heap)
        u = nodes[-1]
        if u in done or w >= limit:
            continue
        done.add(u)
        for v, a in sg.succ.get(u, ()):
            label = (w + a, k + 1, nodes + (v,))
            if v < m:
                if v != d and label[0] < limit:
                    cur = found.get(v)
                    cand = ViolatedPath(*label)
                    if cur is None or cand < cur:
                        found[v] = cand
                continue
            if v in done:
                continue
            old = best.get(v)
            if old is None or label < old:
                best[v] = label
                heapq.heappush(heap, label)
    return found


def find_violated_paths(x: FlowSolution, g: ConnectionNetwork, tol: float = TOL) -> list[ViolatedPath]:
    """Best violated path for every ordered depot pair that has one, sorted."""
    sg = separation_graph(x, g)
    out = []
    for d in g.depots:
        out.extend(_from_depot(sg, d, 1.0 - tol).values())
    return sorted(out)


def find_violated_path(x: FlowSolution, g: ConnectionNetwork, tol: float = TOL) -> list[Arc] | None:
    """Most violated depot-to-other-depot path (arc list) or ``None``."""
    paths = find_violated_paths(x, g, tol)
    return paths[0].arcs if paths else None


@dataclass
class PoolResult:
    model: ModelSpec
    solution: FlowSolution
    rounds: int
    clean: bool
    log: list[tuple[int, float, float | None, int | None]] = field(default_factory=list)

    @property
    def cuts(self) -> int:
        return len(self.model.paths)

    def objectives(self) -> list[float]:
        return [row[1] for row in self.log]

    def log_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["round", "lp_objective", "path_weight", "path_length"])
        for r, obj, weight, length in self.log:
            w.writerow([r, repr(float(obj)), "" if weight is None else repr(weight), "" if length is None else length])
        return buf.getvalue()


def build_constraint_pool(
    inst: Instance | ConnectionNetwork,
    backend: Backend,
    tol: float = TOL,
    max_rounds: int = 200,
    per_pair: bool = False,
) -> PoolResult:
    """Solve the LP, add the most violated path, repeat.

    A round is one LP solve.  The loop stops when separation finds nothing
    (``clean``) or after ``max_rounds`` solves; in the latter case the
    result is returned with ``clean = False``.  With ``per_pair`` every
    ordered depot pair contributes its best violated path each round.
    """
    g = inst if isinstance(inst, ConnectionNetwork) else build_connection_network(inst)
    model = build_base_model(g, integral=False)
    rows = []
    rounds = 0
    while True:
        x = backend.solve(model)
        rounds += 1
        found = find_violated_paths(x, g, tol)
        if not found:
            rows.append((rounds, x.objective, None, None))
            return PoolResult(model, x, rounds, True, rows)
        chosen = found if per_pair else found[:1]
        rows.append((rounds, x.objective, chosen[0].weight, chosen[0].length))
        if rounds >= max_rounds:
            log.warning("cut loop stopped after %d rounds with violated paths left", rounds)
            return PoolResult(model, x, rounds, False, rows)
        before = len(model.paths)
        for p in chosen:
            model = add_path_constraint(model, p.arcs)
        if len(model.paths) == before:
            raise RuntimeError("separation returned a path that is already in the pool")


def final_check(result: PoolResult, tol: float = TOL) -> bool:
    """Independent separation pass on the returned solution."""
    return find_violated_path(result.solution, result.model.network, tol) is None


def alpha_vector(x: FlowSolution, g: ConnectionNetwork) -> np.ndarray:
    """``alpha`` per arc of ``g`` in arc order (loops included for indexing)."""
    vals = np.array([x.value(u, v) for u, v in zip(g.tail.tolist(), g.head.tolist())], dtype=float)
    return np.clip(1.0 - vals, 0.0, 1.0)
