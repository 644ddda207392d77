"""Turning infeasible subtours into same-depot blocks.

A subtour ``P: i -> t_1 .. t_p -> j`` can be closed by changing its last
arc to ``t_p -> i`` (keep-start, P') or its first arc to ``j -> t_1``
(swap-start, P'').  Two compatible subtours ``i -> j`` and ``j -> i`` can
instead be crossed into two closed blocks.  The global repair models all
choices as a bipartite matching between subtours and their copies.

Ineligible options have ``penalty is None`` and weight ``math.inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import NoPerfectMatchingError, UnrepairableSubtourError
from .matching import min_weight_perfect_matching
from .milp import FlowSolution
from .network import ConnectionNetwork
from .schedules import Block, Subtour, decompose, find_infeasible, make_block, solution_from_blocks, unused_vehicles

KEEP_START = "keep-start"
SWAP_START = "swap-start"
PAIR = "pair-crossing"


@dataclass(frozen=True)
class RepairOption:
    kind: str
    penalty: int | None
    h: int | None = None
    k: int | None = None
    partner: int | None = None

    @property
    def eligible(self) -> bool:
        return self.penalty is not None

    @property
    def weight(self) -> float:
        return math.inf if self.penalty is None else self.penalty


def _require_subtour(p: Block) -> None:
    if p.start_depot == p.end_depot:
        raise ValueError(f"block {p} is not an infeasible subtour")


def self_repair_options(
    p: Block, g: ConnectionNetwork, spare: Sequence[int]
) -> tuple[RepairOption, RepairOption]:
    """Options ``(P', P'')`` for one subtour.

    P'' moves a vehicle start to depot ``j`` so it needs ``spare[j] >= 1``.
    """
    _require_subtour(p)
    i, j = p.start_depot, p.end_depot
    t1, tp = p.first, p.last
    back = g.arc_cost(tp, i)
    keep = RepairOption(KEEP_START, None if back is None else back - g.arc_cost(tp, j))
    out = g.arc_cost(j, t1)
    if out is None or spare[j] < 1:
        swap = RepairOption(SWAP_START, None)
    else:
        swap = RepairOption(SWAP_START, out - g.arc_cost(i, t1))
    return keep, swap


def pair_repair_option(p1: Block, p2: Block, g: ConnectionNetwork, partner: int | None = None) -> RepairOption:
    """Cheapest crossing of ``p1: i -> j`` with ``p2: j -> i``.

    Crossing at ``(h, k)`` yields ``i -> t1_1..t1_h, t2_k..t2_q -> i`` and
    ``j -> t2_1..t2_{k-1}, t1_{h+1}..t1_p -> j``, with ``t2_0 = j`` and
    ``t1_{p+1} = j``.  At ``h = p, k = 1`` the second block is empty and
    its vehicle stays idle at ``j`` (the loop ``j -> j`` costs 0).  Ties go
    to the smallest ``h`` and then the smallest ``k`` (both 1-based).
    """
    _require_subtour(p1)
    i, j = p1.start_depot, p1.end_depot
    if (p2.start_depot, p2.end_depot) != (j, i):
        raise ValueError(f"subtours {i}->{j} and {p2.start_depot}->{p2.end_depot} are not compatible")
    a = (*p1.trips, j)  # a[h] is t1_{h+1}; a[p] is j
    b = (j, *p2.trips)  # b[k-1] is t2_{k-1}; b[0] is j
    p, q = len(p1.trips), len(p2.trips)
    arc = g.arc_cost
    best: tuple[int, int, int] | None = None
    for h in range(1, p + 1):
        x, nxt = a[h - 1], a[h]
        removed_first = arc(x, nxt)
        for k in range(1, q + 1):
            prev, y = b[k - 1], b[k]
            c1 = arc(x, y)
            if c1 is None:
                continue
            c2 = 0 if prev == nxt == j else arc(prev, nxt)
            if c2 is None:
                continue
            gamma = c1 + c2 - removed_first - arc(prev, y)
            if best is None or gamma < best[0]:
                best = (gamma, h, k)
    if best is None:
        return RepairOption(PAIR, None, partner=partner)
    return RepairOption(PAIR, best[0], best[1], best[2], partner)


def apply_pair(p1: Block, p2: Block, opt: RepairOption, g: ConnectionNetwork) -> list[Block]:
    """The one or two blocks produced by crossing ``p1`` and ``p2`` at ``opt``."""
    i, j = p1.start_depot, p1.end_depot
    h, k = opt.h, opt.k
    first = make_block(g, i, p1.trips[:h] + p2.trips[k - 1:], i)
    rest = p2.trips[:k - 1] + p1.trips[h:]
    if not rest:
        return [first]
    return [first, make_block(g, j, rest, j)]


def apply_self(p: Block, opt: RepairOption, g: ConnectionNetwork) -> Block:
    if opt.kind == KEEP_START:
        return make_block(g, p.start_depot, p.trips, p.start_depot)
    return make_block(g, p.end_depot, p.trips, p.end_depot)


# --------------------------------------------------------------------------
# repair graph


@dataclass(frozen=True)
class RepairGraph:
    """Bipartite graph between subtours (rows) and their copies (columns).

    ``pair[(a, b)]`` exists for compatible ``a: i -> j`` and ``b: j -> i``.
    The two weightings differ only on the diagonal: ``keep[a]`` for the
    first, ``swap[a]`` for the second.
    """

    subtours: tuple[Subtour, ...]
    keep: tuple[RepairOption, ...]
    swap: tuple[RepairOption, ...]
    pair: dict[tuple[int, int], RepairOption] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.subtours)

    def weights(self, which: str = "prime") -> list[list[float]]:
        diag = self.keep if which == "prime" else self.swap
        k = len(self.subtours)
        w = [[math.inf] * k for _ in range(k)]
        for a in range(k):
            w[a][a] = diag[a].weight
        for (a, b), opt in self.pair.items():
            w[a][b] = opt.weight
        return w

    def self_weight(self, which: str = "prime") -> float:
        diag = self.keep if which == "prime" else self.swap
        return sum(o.weight for o in diag)


def build_repair_graph(subs: Sequence[Subtour], g: ConnectionNetwork, spare: Sequence[int]) -> RepairGraph:
    subs = tuple(subs)
    keep, swap = [], []
    for s in subs:
        o1, o2 = self_repair_options(s, g, spare)
        keep.append(o1)
        swap.append(o2)
    by_dir: dict[tuple[int, int], list[int]] = {}
    for idx, s in enumerate(subs):
        by_dir.setdefault((s.start_depot, s.end_depot), []).append(idx)
    pair = {}
    for a, s in enumerate(subs):
        for b in by_dir.get((s.end_depot, s.start_depot), []):
            pair[(a, b)] = pair_repair_option(s, subs[b], g, partner=b)
    return RepairGraph(subs, tuple(keep), tuple(swap), pair)


# --------------------------------------------------------------------------
# global repair


@dataclass(frozen=True)
class RepairOutcome:
    """Result of repairing one solution.

    ``matching_weight`` and ``self_weight`` refer to the weighting that was
    chosen (``which``); ``applied`` lists ``(kind, penalty)`` per repair.
    """

    blocks: tuple[Block, ...]
    objective: int
    subtours: int
    which: str | None = None
    matching_weight: float = 0
    self_weight: float = 0
    applied: tuple[tuple[str, int], ...] = ()
    solution: FlowSolution | None = None

    @property
    def penalty(self) -> int:
        return sum(p for _, p in self.applied)


class _Pass:
    """One post-processing pass; tracks spare vehicles as repairs land."""

    def __init__(self, graph: RepairGraph, g: ConnectionNetwork, spare: Sequence[int]):
        self.graph = graph
        self.g = g
        self.spare = list(spare)
        self.blocks: list[Block] = []
        self.applied: list[tuple[str, int]] = []

    def self_repair(self, a: int, prefer: str | None = None) -> None:
        """Apply ``prefer`` if usable, else the cheaper usable self option."""
        s = self.graph.subtours[a]
        keep, swap = self_repair_options(s, self.g, self.spare)
        options = [o for o in (keep, swap) if o.eligible]
        if prefer is not None:
            chosen = [o for o in options if o.kind == prefer]
            if chosen:
                options = chosen
        if not options:
            raise UnrepairableSubtourError(f"no eligible repair for subtour {s}", subtour=s)
        opt = min(options, key=lambda o: o.penalty)  # keep-start first on ties
        if opt.kind == SWAP_START:
            self.spare[s.end_depot] -= 1
            self.spare[s.start_depot] += 1
        self.blocks.append(apply_self(s, opt, self.g))
        self.applied.append((opt.kind, opt.penalty))

    def pair_repair(self, a: int, b: int, opt: RepairOption) -> None:
        s1, s2 = self.graph.subtours[a], self.graph.subtours[b]
        new = apply_pair(s1, s2, opt, self.g)
        if len(new) == 1:
            self.spare[s1.end_depot] += 1
        self.blocks.extend(new)
        self.applied.append((PAIR, opt.penalty))


def _post_process(graph: RepairGraph, match: list[int], which: str, g: ConnectionNetwork,
                  spare: Sequence[int]) -> _Pass:
    prefer = KEEP_START if which == "prime" else SWAP_START
    run = _Pass(graph, g, spare)
    done = [False] * len(graph)
    for a in range(len(graph)):
        if done[a]:
            continue
        b = match[a]
        done[a] = True
        if b != a and not done[b] and match[b] == a:
            opt = graph.pair[(a, b)]
            other = graph.pair[(b, a)]
            if other.weight < opt.weight:
                run.pair_repair(b, a, other)
            else:
                run.pair_repair(a, b, opt)
            done[b] = True
        elif b == a:
            run.self_repair(a, prefer)
        else:
            run.self_repair(a)
    return run


def _finish(blocks: Sequence[Block], feasible: Sequence[Block], x: FlowSolution, g: ConnectionNetwork,
            subtours: int, **extra) -> RepairOutcome:
    all_blocks = tuple(sorted((*feasible, *blocks), key=lambda b: (b.start_depot, b.trips)))
    sol = solution_from_blocks(all_blocks, g)
    applied = extra.get("applied", ())
    if sol.objective != x.objective + sum(p for _, p in applied):
        raise RuntimeError("repaired objective does not match the applied penalties")
    return RepairOutcome(all_blocks, int(sol.objective), subtours, solution=sol, **extra)


def match_repair(x: FlowSolution, g: ConnectionNetwork) -> RepairOutcome:
    """Repair every subtour of ``x`` through the cheaper of the two matchings.

    Each weighting is matched and post-processed; the repaired solution with
    the smaller objective wins, ties going to the keep-start weighting.
    Raises :class:`UnrepairableSubtourError` when neither weighting yields
    a complete repair.
    """
    blocks = decompose(x, g)
    subs = find_infeasible(blocks)
    feasible = [b for b in blocks if b.feasible]
    if not subs:
        return _finish([], feasible, x, g, 0)
    spare = unused_vehicles(x, g)
    graph = build_repair_graph(subs, g, spare)
    best = None
    failure = None
    for which in ("prime", "double"):
        try:
            match, weight = min_weight_perfect_matching(graph.weights(which))
            run = _post_process(graph, match, which, g, spare)
        except (NoPerfectMatchingError, UnrepairableSubtourError) as exc:
            failure = failure or exc
            continue
        out = _finish(run.blocks, feasible, x, g, len(subs), which=which, matching_weight=weight,
                      self_weight=graph.self_weight(which), applied=tuple(run.applied))
        if best is None or out.objective < best.objective:
            best = out
    if best is None:
        # neither weighting has a finite perfect matching; repair one by one
        try:
            best = iterative_repair(x, g)
        except UnrepairableSubtourError:
            if isinstance(failure, UnrepairableSubtourError):
                raise failure from None
            raise
    return best


def iterative_repair(x: FlowSolution, g: ConnectionNetwork) -> RepairOutcome:
    """Repair each subtour on its own by its cheaper usable self option."""
    blocks = decompose(x, g)
    subs = find_infeasible(blocks)
    feasible = [b for b in blocks if b.feasible]
    if not subs:
        return _finish([], feasible, x, g, 0)
    spare = unused_vehicles(x, g)
    graph = build_repair_graph(subs, g, spare)
    run = _Pass(graph, g, spare)
    for a in range(len(subs)):
        run.self_repair(a)
    return _finish(run.blocks, feasible, x, g, len(subs), which="iterative",
                   applied=tuple(run.applied))


def repair_all_matching(x: FlowSolution, g: ConnectionNetwork) -> FlowSolution:
    out = match_repair(x, g)
    return out.solution


def repair_all_iterative(x: FlowSolution, g: ConnectionNetwork) -> FlowSolution:
    return iterative_repair(x, g).solution
