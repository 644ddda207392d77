"""The connection digraph over depots and trips."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .instances import Instance, check_instance


@dataclass(frozen=True, eq=False)
class ConnectionNetwork:
    """Arc list of an instance in CSR form, sorted by ``(tail, head)``.

    ``in_order`` lists arc indices sorted by ``(head, tail)`` and ``in_ptr``
    delimits them per head node.  Depot loops are real arcs.
    """

    instance: Instance
    tail: np.ndarray
    head: np.ndarray
    cost: np.ndarray
    out_ptr: np.ndarray
    in_order: np.ndarray
    in_ptr: np.ndarray
    _out_lists: list = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_out_lists", [None] * self.num_nodes)

    @property
    def num_depots(self) -> int:
        return self.instance.num_depots

    @property
    def num_trips(self) -> int:
        return self.instance.num_trips

    @property
    def num_nodes(self) -> int:
        return self.instance.size

    @property
    def num_arcs(self) -> int:
        return int(self.tail.shape[0])

    @property
    def depots(self) -> range:
        return range(self.num_depots)

    @property
    def trips(self) -> range:
        return range(self.num_depots, self.num_nodes)

    def is_depot(self, v: int) -> bool:
        return v < self.num_depots

    def has_arc(self, u: int, v: int) -> bool:
        return self.instance.has_arc(u, v)

    def arc_cost(self, u: int, v: int) -> int | None:
        return self.instance.arc_cost(u, v)

    def arcs(self):
        """All arcs as ``(tail, head, cost)`` tuples, in index order."""
        return list(zip(self.tail.tolist(), self.head.tolist(), self.cost.tolist()))

    def arc_index(self, u: int, v: int) -> int | None:
        lo, hi = int(self.out_ptr[u]), int(self.out_ptr[u + 1])
        k = lo + int(np.searchsorted(self.head[lo:hi], v))
        if k < hi and int(self.head[k]) == v:
            return k
        return None

    def out_arcs(self, u: int) -> list[tuple[int, int]]:
        """``[(head, cost), ...]`` in ascending head order."""
        cached = self._out_lists[u]
        if cached is None:
            lo, hi = int(self.out_ptr[u]), int(self.out_ptr[u + 1])
            cached = list(zip(self.head[lo:hi].tolist(), self.cost[lo:hi].tolist()))
            self._out_lists[u] = cached
        return cached

    def in_arcs(self, v: int) -> list[tuple[int, int]]:
        """``[(tail, cost), ...]`` in ascending tail order."""
        idx = self.in_order[int(self.in_ptr[v]):int(self.in_ptr[v + 1])]
        return list(zip(self.tail[idx].tolist(), self.cost[idx].tolist()))

    def out_degree(self, u: int) -> int:
        return int(self.out_ptr[u + 1] - self.out_ptr[u])

    def in_degree(self, v: int) -> int:
        return int(self.in_ptr[v + 1] - self.in_ptr[v])


def build_connection_network(inst: Instance, validate: bool = True) -> ConnectionNetwork:
    if validate:
        check_instance(inst)
    size = inst.size
    tails, heads = np.nonzero(inst.present)  # row-major -> sorted by (tail, head)
    tails = tails.astype(np.int64)
    heads = heads.astype(np.int64)
    costs = inst.values[tails, heads].astype(np.int64)
    out_ptr = np.zeros(size + 1, dtype=np.int64)
    np.cumsum(np.bincount(tails, minlength=size), out=out_ptr[1:])
    in_order = np.lexsort((tails, heads)).astype(np.int64)
    in_ptr = np.zeros(size + 1, dtype=np.int64)
    np.cumsum(np.bincount(heads, minlength=size), out=in_ptr[1:])
    for a in (tails, heads, costs, out_ptr, in_order, in_ptr):
        a.setflags(write=False)
    return ConnectionNetwork(inst, tails, heads, costs, out_ptr, in_order, in_ptr)


def to_dot(g: ConnectionNetwork) -> str:
    """Graphviz description of the network (depots as boxes)."""
    lines = [f'digraph "{g.instance.name or "mdvsp"}" {{']
    for d in g.depots:
        lines.append(f'  {d} [shape=box, label="D{d} r={g.instance.depot_capacity[d]}"];')
    for t in g.trips:
        lines.append(f"  {t};")
    for u, v, c in g.arcs():
        lines.append(f'  {u} -> {v} [label="{c}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
