"""Vehicle blocks, infeasible subtours and the depot digraph.

Blocks text format, one block per line::

    0: 2 5 7 -> 0 (1234)

``#`` lines are comments.  The cost in parentheses is optional on input and
checked against the network when present.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DecompositionError
from .milp import TOL, FlowSolution, make_flow_solution
from .network import ConnectionNetwork

Arc = tuple[int, int]


@dataclass(frozen=True)
class Block:
    """A vehicle: start depot, ordered trips, end depot."""

    start_depot: int
    end_depot: int
    trips: tuple[int, ...]
    cost: int

    def __post_init__(self):
        object.__setattr__(self, "trips", tuple(int(t) for t in self.trips))
        if not self.trips:
            raise ValueError("a block needs at least one trip")

    @property
    def feasible(self) -> bool:
        return self.start_depot == self.end_depot

    @property
    def first(self) -> int:
        return self.trips[0]

    @property
    def last(self) -> int:
        return self.trips[-1]

    def nodes(self) -> list[int]:
        return [self.start_depot, *self.trips, self.end_depot]

    def arcs(self) -> list[Arc]:
        nodes = self.nodes()
        return list(zip(nodes, nodes[1:]))

    def __str__(self) -> str:
        return format_block(self)


@dataclass(frozen=True)
class Subtour(Block):
    """A block whose end depot differs from its start depot."""

    def __post_init__(self):
        super().__post_init__()
        if self.start_depot == self.end_depot:
            raise ValueError(f"not a subtour: starts and ends at depot {self.start_depot}")

    @classmethod
    def of(cls, b: Block) -> "Subtour":
        return cls(b.start_depot, b.end_depot, b.trips, b.cost)


def block_cost(g: ConnectionNetwork, start: int, trips: Sequence[int], end: int) -> int:
    """Cost of ``start -> trips -> end``; raises ``ValueError`` on a missing arc."""
    nodes = [start, *trips, end]
    total = 0
    for u, v in zip(nodes, nodes[1:]):
        c = g.arc_cost(u, v)
        if c is None:
            raise ValueError(f"arc {u}->{v} does not exist")
        total += c
    return total


def make_block(g: ConnectionNetwork, start: int, trips: Sequence[int], end: int) -> Block:
    return Block(start, end, tuple(trips), block_cost(g, start, trips, end))


def decompose(x: FlowSolution, g: ConnectionNetwork) -> list[Block]:
    """Split an integral solution into blocks.

    Walks start at each depot in index order and, within a depot, at its
    outgoing arcs in ascending head order.  Trips are covered by exactly one
    block; flow on trip-only cycles is reported as an error.
    """
    m = g.num_depots
    succ: dict[int, int] = {}
    indeg: dict[int, int] = {}
    starts: dict[int, list[int]] = {d: [] for d in g.depots}
    for (u, v), val in x.values.items():
        if abs(val - round(val)) > TOL:
            raise DecompositionError(f"fractional value {val} on arc {u}->{v}")
        val = int(round(val))
        if val == 0 or u == v:
            continue
        if u < m:
            if val != 1:
                raise DecompositionError(f"pull-out {u}->{v} carries {val} vehicles")
            starts[u].append(v)
        else:
            if u in succ or val != 1:
                raise DecompositionError(f"trip {u} has out-flow other than 1")
            succ[u] = v
        if v >= m:
            indeg[v] = indeg.get(v, 0) + val
    for t in g.trips:
        if indeg.get(t, 0) != 1 or t not in succ:
            raise DecompositionError(f"trip {t} does not have in- and out-flow 1")
    blocks: list[Block] = []
    seen: set[int] = set()
    for d in g.depots:
        for first in sorted(starts[d]):
            trips = []
            node = first
            while node >= m:
                if node in seen:
                    raise DecompositionError(f"trip {node} reached twice")
                seen.add(node)
                trips.append(node)
                node = succ[node]
            blocks.append(make_block(g, d, trips, node))
    if len(seen) != g.num_trips:
        left = min(set(g.trips) - seen)
        raise DecompositionError(f"trip {left} lies on a cycle of trips with no depot")
    return blocks


def find_infeasible(blocks: Iterable[Block]) -> list[Subtour]:
    return [Subtour.of(b) for b in blocks if not b.feasible]


def unused_vehicles(x: FlowSolution, g: ConnectionNetwork) -> list[int]:
    """Per-depot loop value ``x_jj``."""
    return [int(round(x.value(d, d))) for d in g.depots]


def solution_from_blocks(blocks: Iterable[Block], g: ConnectionNetwork) -> FlowSolution:
    """Integral arc vector for a set of blocks; idle vehicles stay on the loops."""
    inst = g.instance
    values: dict[Arc, int] = {}
    used = [0] * g.num_depots
    for b in blocks:
        used[b.start_depot] += 1
        for a in b.arcs():
            values[a] = values.get(a, 0) + 1
    for d in g.depots:
        idle = inst.depot_capacity[d] - used[d]
        if idle < 0:
            raise ValueError(f"depot {d} sends out {used[d]} vehicles but has {inst.depot_capacity[d]}")
        if idle:
            values[(d, d)] = idle
    return make_flow_solution(g, values, True)


def check_schedule(blocks: Sequence[Block], g: ConnectionNetwork) -> list[str]:
    """Problems that make ``blocks`` an invalid MDVSP solution (empty if none).

    Checked: arcs exist and costs match, every trip covered exactly once,
    every block returns to its own depot, depot capacities respected.
    """
    problems = []
    m = g.num_depots
    count: dict[int, int] = {}
    used = [0] * m
    for k, b in enumerate(blocks):
        if not (0 <= b.start_depot < m and 0 <= b.end_depot < m):
            problems.append(f"block {k}: endpoints must be depots")
            continue
        if not b.feasible:
            problems.append(f"block {k}: starts at depot {b.start_depot} but ends at {b.end_depot}")
        used[b.start_depot] += 1
        for t in b.trips:
            if not m <= t < g.num_nodes:
                problems.append(f"block {k}: {t} is not a trip")
            count[t] = count.get(t, 0) + 1
        try:
            c = block_cost(g, b.start_depot, b.trips, b.end_depot)
        except (ValueError, IndexError) as exc:
            problems.append(f"block {k}: {exc}")
        else:
            if c != b.cost:
                problems.append(f"block {k}: cost {b.cost} but arcs sum to {c}")
    for t in g.trips:
        seen = count.get(t, 0)
        if seen != 1:
            problems.append(f"trip {t} covered {seen} times")
    for d in g.depots:
        if used[d] > g.instance.depot_capacity[d]:
            problems.append(f"depot {d} uses {used[d]} vehicles, capacity {g.instance.depot_capacity[d]}")
    return problems


# --------------------------------------------------------------------------
# depot digraph


@dataclass(frozen=True)
class DepotDigraph:
    """Depot pairs joined by subtours, with the subtours kept per arc."""

    num_depots: int
    subtours: dict[Arc, tuple[Subtour, ...]] = field(default_factory=dict)

    def weight(self, i: int, j: int) -> int:
        return len(self.subtours.get((i, j), ()))

    def arcs(self) -> list[tuple[int, int, int]]:
        return [(i, j, len(s)) for (i, j), s in sorted(self.subtours.items())]

    def __len__(self) -> int:
        return len(self.subtours)


def build_depot_digraph(subs: Iterable[Subtour], m: int) -> DepotDigraph:
    groups: dict[Arc, list[Subtour]] = {}
    for s in subs:
        groups.setdefault((s.start_depot, s.end_depot), []).append(s)
    return DepotDigraph(m, {k: tuple(v) for k, v in groups.items()})


# --------------------------------------------------------------------------
# text format

_LINE = re.compile(r"^\s*(\d+)\s*:\s*((?:\d+\s*)+)->\s*(\d+)\s*(?:\(\s*(-?\d+)\s*\))?\s*$")


def format_block(b: Block) -> str:
    return f"{b.start_depot}: {' '.join(map(str, b.trips))} -> {b.end_depot} ({b.cost})"


def format_blocks(blocks: Iterable[Block], objective: int | None = None) -> str:
    lines = [format_block(b) for b in blocks]
    if objective is not None:
        lines.append(f"# objective {objective}")
    return "\n".join(lines) + "\n"


def parse_blocks(text: str, g: ConnectionNetwork | None = None) -> list[Block]:
    """Parse the blocks format.  With ``g`` costs are computed and checked."""
    blocks = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        mt = _LINE.match(s)
        if mt is None:
            raise ValueError(f"line {lineno}: expected 'depot: trips -> depot (cost)', got {s!r}")
        start, end = int(mt.group(1)), int(mt.group(3))
        trips = tuple(int(t) for t in mt.group(2).split())
        stated = None if mt.group(4) is None else int(mt.group(4))
        if g is not None:
            try:
                cost = block_cost(g, start, trips, end)
            except (ValueError, IndexError) as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
            if stated is not None and stated != cost:
                raise ValueError(f"line {lineno}: stated cost {stated} but arcs sum to {cost}")
        elif stated is None:
            raise ValueError(f"line {lineno}: cost required without a network")
        else:
            cost = stated
        blocks.append(Block(start, end, trips, cost))
    return blocks
