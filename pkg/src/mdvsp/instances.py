"""Instance data model, text formats, validation and random generation.

Node numbering follows the connection digraph: depots are ``0..m-1`` and
trips are ``m..m+n-1``.  An absent arc is a masked entry of the cost matrix
in memory and ``-1`` in files.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InstanceFormatError, InvalidInstanceError

log = logging.getLogger(__name__)

ABSENT = -1  # file sentinel for a missing arc


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Instance:
    """An MDVSP instance: depots with vehicle counts and an arc cost matrix.

    ``cost`` is a ``(m+n) x (m+n)`` integer masked array; masked entries are
    arcs that do not exist.  The constructor copies its input and the stored
    arrays are read-only.
    """

    num_depots: int
    num_trips: int
    depot_capacity: tuple[int, ...]
    cost: np.ma.MaskedArray
    name: str = ""
    _data: np.ndarray = field(init=False, repr=False)
    _present: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        raw = np.ma.asarray(self.cost)
        data = np.array(raw.filled(0), dtype=np.int64)
        present = ~np.ma.getmaskarray(raw).copy()
        data[~present] = 0
        _frozen(data)
        _frozen(present)
        masked = np.ma.MaskedArray(data, mask=~present, hard_mask=True)
        object.__setattr__(self, "depot_capacity", tuple(int(r) for r in self.depot_capacity))
        object.__setattr__(self, "cost", masked)
        object.__setattr__(self, "_data", data)
        object.__setattr__(self, "_present", _frozen(np.array(present)))

    @classmethod
    def from_rows(
        cls,
        num_depots: int,
        num_trips: int,
        depot_capacity: Sequence[int],
        rows: Sequence[Sequence[int | None]],
        name: str = "",
    ) -> "Instance":
        """Build from nested rows where ``None`` marks an absent arc."""
        size = num_depots + num_trips
        data = np.zeros((size, size), dtype=np.int64)
        mask = np.ones((size, size), dtype=bool)
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                if value is not None:
                    data[i, j] = value
                    mask[i, j] = False
        return cls(num_depots, num_trips, tuple(depot_capacity), np.ma.MaskedArray(data, mask=mask), name)

    @classmethod
    def from_arcs(
        cls,
        num_depots: int,
        num_trips: int,
        depot_capacity: Sequence[int],
        arcs: dict[tuple[int, int], int],
        name: str = "",
        depot_loops: bool = True,
    ) -> "Instance":
        """Build from an ``{(tail, head): cost}`` map; depot loops added at cost 0."""
        size = num_depots + num_trips
        data = np.zeros((size, size), dtype=np.int64)
        mask = np.ones((size, size), dtype=bool)
        if depot_loops:
            for d in range(num_depots):
                mask[d, d] = False
        for (i, j), c in arcs.items():
            data[i, j] = c
            mask[i, j] = False
        return cls(num_depots, num_trips, tuple(depot_capacity), np.ma.MaskedArray(data, mask=mask), name)

    @property
    def size(self) -> int:
        return self.num_depots + self.num_trips

    @property
    def present(self) -> np.ndarray:
        """Boolean matrix, ``True`` where the arc exists."""
        return self._present

    @property
    def values(self) -> np.ndarray:
        """Raw cost values; meaningful only where :attr:`present` is true."""
        return self._data

    @property
    def depots(self) -> range:
        return range(self.num_depots)

    @property
    def trips(self) -> range:
        return range(self.num_depots, self.size)

    def is_depot(self, v: int) -> bool:
        return v < self.num_depots

    def requirement(self, v: int) -> int:
        """Right-hand side of the degree rows: ``r_v`` for depots, 1 for trips."""
        return self.depot_capacity[v] if v < self.num_depots else 1

    def has_arc(self, i: int, j: int) -> bool:
        return bool(self._present[i, j])

    def arc_cost(self, i: int, j: int) -> int | None:
        """Cost of arc ``i -> j`` or ``None`` when the arc is absent."""
        if not self._present[i, j]:
            return None
        return int(self._data[i, j])

    def with_costs(self, values: np.ndarray, name: str | None = None) -> "Instance":
        """Same arc set with new cost values (used for cost perturbation)."""
        masked = np.ma.MaskedArray(np.asarray(values, dtype=np.int64), mask=~self._present)
        return Instance(self.num_depots, self.num_trips, self.depot_capacity, masked,
                        self.name if name is None else name)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.num_depots == other.num_depots
            and self.num_trips == other.num_trips
            and self.depot_capacity == other.depot_capacity
            and self.name == other.name
            and self._present.shape == other._present.shape
            and bool(np.array_equal(self._present, other._present))
            and bool(np.array_equal(self._data, other._data))
        )

    __hash__ = None


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def validate(inst: Instance) -> list[Violation]:
    """Return every invariant violation; an empty list means the instance is usable."""
    out: list[Violation] = []
    m, n = inst.num_depots, inst.num_trips
    if m < 1:
        out.append(Violation("no depots", f"m={m}"))
    if n < 1:
        out.append(Violation("no trips", f"n={n}"))
    if len(inst.depot_capacity) != m:
        out.append(Violation("capacity count", f"{len(inst.depot_capacity)} capacities for {m} depots"))
    for d, r in enumerate(inst.depot_capacity):
        if r < 0:
            out.append(Violation("negative capacity", f"depot {d} has r={r}"))
    size = m + n
    if inst.present.shape != (size, size):
        out.append(Violation("matrix shape", f"{inst.present.shape} != {(size, size)}"))
        return out
    present, data = inst.present, inst.values
    for i in range(m):
        if not present[i, i]:
            out.append(Violation("missing depot loop", f"depot {i}"))
        elif data[i, i] != 0:
            out.append(Violation("nonzero depot loop", f"depot {i} loop cost {data[i, i]}"))
        for j in range(m):
            if i != j and present[i, j]:
                out.append(Violation("forbidden depot-depot arc", f"{i}->{j}"))
    for t in range(m, size):
        if present[t, t]:
            out.append(Violation("trip self-loop", f"trip {t}"))
    if m >= 1 and n >= 1:
        has_pull_out = present[:m, m:].any(axis=0)
        has_pull_in = present[m:, :m].any(axis=1)
        for k in range(n):
            if not has_pull_out[k]:
                out.append(Violation("uncoverable trip", f"trip {m + k} has no pull-out arc"))
            if not has_pull_in[k]:
                out.append(Violation("uncoverable trip", f"trip {m + k} has no pull-in arc"))
    return out


def check_instance(inst: Instance) -> Instance:
    """Raise :class:`InvalidInstanceError` unless ``validate`` is clean."""
    violations = validate(inst)
    if violations:
        raise InvalidInstanceError(violations)
    return inst


# --------------------------------------------------------------------------
# text format


def _int_tokens(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise InstanceFormatError(f"line {lineno}: non-integer token ({exc})") from None


def parse_instance(text: str, name: str = "", strict: bool = True) -> Instance:
    """Parse the canonical format or the benchmark dialect.

    Canonical: ``m n`` / capacities / ``m+n`` matrix rows.  The benchmark
    dialect puts the capacities on the first line after ``m n``; in that
    dialect off-diagonal depot-depot entries are dropped (with a warning)
    because the model has no such arcs.  With ``strict`` the result must
    pass :func:`validate`.
    """
    lines = [(k + 1, ln) for k, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines:
        raise InstanceFormatError("empty input")
    lineno, first = lines[0]
    head = _int_tokens(first, lineno)
    if len(head) < 2:
        raise InstanceFormatError(f"line {lineno}: header needs 'm n'")
    m, n = head[0], head[1]
    if m < 1 or n < 0:
        raise InstanceFormatError(f"line {lineno}: bad header m={m} n={n}")
    dialect = len(head) > 2
    if dialect:
        if len(head) != 2 + m:
            raise InstanceFormatError(f"line {lineno}: expected {m} capacities after 'm n', got {len(head) - 2}")
        capacity = head[2:]
        body = lines[1:]
    else:
        if len(lines) < 2:
            raise InstanceFormatError("missing capacity line")
        cap_no, cap_line = lines[1]
        capacity = _int_tokens(cap_line, cap_no)
        if len(capacity) != m:
            raise InstanceFormatError(f"line {cap_no}: expected {m} capacities, got {len(capacity)}")
        body = lines[2:]
    for d, r in enumerate(capacity):
        if r < 0:
            raise InstanceFormatError(f"negative capacity {r} for depot {d}")
    size = m + n
    if len(body) != size:
        raise InstanceFormatError(f"expected {size} matrix rows, got {len(body)}")
    matrix = np.empty((size, size), dtype=np.int64)
    for row, (lno, ln) in enumerate(body):
        try:
            values = np.array(ln.split(), dtype=np.int64)
        except ValueError:
            raise InstanceFormatError(f"line {lno}: non-integer token") from None
        if values.shape[0] != size:
            raise InstanceFormatError(f"line {lno}: row {row} has {values.shape[0]} entries, expected {size}")
        matrix[row] = values
    mask = matrix == ABSENT
    for d in range(m):
        diag = matrix[d, d]
        if diag not in (ABSENT, 0):
            raise InstanceFormatError(f"depot {d} diagonal must be -1 or 0, got {diag}")
        matrix[d, d] = 0
        mask[d, d] = False
    if dialect:
        block = ~mask[:m, :m]
        np.fill_diagonal(block, False)
        if block.any():
            log.warning("%s: ignoring %d depot-depot entries", name or "instance", int(block.sum()))
            off = ~np.eye(m, dtype=bool)
            mask[:m, :m] |= off
    inst = Instance(m, n, tuple(capacity), np.ma.MaskedArray(matrix, mask=mask), name)
    if strict:
        check_instance(inst)
    return inst


def write_instance(inst: Instance) -> str:
    """Canonical text: two header lines then one row per node, ``-1`` for absent arcs."""
    out = [f"{inst.num_depots} {inst.num_trips}", " ".join(str(r) for r in inst.depot_capacity)]
    rows = np.where(inst.present, inst.values, ABSENT)
    for row in rows.tolist():
        out.append(" ".join(map(str, row)))
    return "\n".join(out) + "\n"


def read_instance(path: str | Path, strict: bool = True) -> Instance:
    path = Path(path)
    return parse_instance(path.read_text(encoding="utf-8"), name=path.stem, strict=strict)


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(write_instance(inst), encoding="utf-8")


# --------------------------------------------------------------------------
# timetabled trips


@dataclass(frozen=True, eq=False)
class TripTable:
    """Timetable data from which arc costs are derived.

    Times are minutes.  ``deadhead[i, j]`` is the travel time from the end
    of trip ``i`` to the start of trip ``j``; ``running_cost[i, j]`` is the
    cost of linking them when the pair is feasible.  Depot matrices are
    ``pull_out_*[d, j]`` and ``pull_in_*[i, d]``.
    """

    start_time: np.ndarray
    end_time: np.ndarray
    deadhead: np.ndarray
    running_cost: np.ndarray
    pull_out_cost: np.ndarray
    pull_in_cost: np.ndarray
    depot_capacity: tuple[int, ...]
    pull_out_allowed: np.ndarray | None = None
    pull_in_allowed: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        start = np.asarray(self.start_time)
        end = np.asarray(self.end_time)
        if start.shape != end.shape:
            raise ValueError("start_time and end_time differ in length")
        if np.any(start >= end):
            bad = int(np.argmax(start >= end))
            raise ValueError(f"trip {bad}: start time must precede end time")
        if np.any(np.asarray(self.deadhead) < 0):
            raise ValueError("deadhead times must be non-negative")

    @property
    def num_trips(self) -> int:
        return len(self.start_time)

    @property
    def num_depots(self) -> int:
        return len(self.depot_capacity)

    def feasible_pairs(self) -> np.ndarray:
        """``F[i, j]`` is true iff trip ``j`` can follow trip ``i``."""
        start = np.asarray(self.start_time, dtype=np.int64)
        end = np.asarray(self.end_time, dtype=np.int64)
        dead = np.asarray(self.deadhead, dtype=np.int64)
        feasible = end[:, None] + dead <= start[None, :]
        np.fill_diagonal(feasible, False)
        return feasible


def build_costs_from_trips(t: TripTable) -> Instance:
    """Arc ``i -> j`` between trips exists iff ``end_i + deadhead_ij <= start_j``."""
    m, n = t.num_depots, t.num_trips
    size = m + n
    data = np.zeros((size, size), dtype=np.int64)
    present = np.zeros((size, size), dtype=bool)
    feasible = t.feasible_pairs()
    data[m:, m:] = np.where(feasible, np.asarray(t.running_cost, dtype=np.int64), 0)
    present[m:, m:] = feasible
    out_ok = np.ones((m, n), dtype=bool) if t.pull_out_allowed is None else np.asarray(t.pull_out_allowed, bool)
    in_ok = np.ones((n, m), dtype=bool) if t.pull_in_allowed is None else np.asarray(t.pull_in_allowed, bool)
    data[:m, m:] = np.where(out_ok, np.asarray(t.pull_out_cost, dtype=np.int64), 0)
    present[:m, m:] = out_ok
    data[m:, :m] = np.where(in_ok, np.asarray(t.pull_in_cost, dtype=np.int64), 0)
    present[m:, :m] = in_ok
    for d in range(m):
        present[d, d] = True
    return Instance(m, n, t.depot_capacity, np.ma.MaskedArray(data, mask=~present), t.name)


# --------------------------------------------------------------------------
# random generation


def _check_range(label: str, bounds: tuple[float, float]) -> None:
    lo, hi = bounds
    if lo > hi:
        raise ValueError(f"empty range for {label}: {bounds}")


@dataclass(frozen=True)
class GeneratorParams:
    """Parameters of the random timetable generator.

    Locations are uniform points in an ``area x area`` square whose unit is
    one minute of travel.  With ``capacity_range=None`` each depot gets
    between ``fleet_slack[0]`` and ``fleet_slack[1]`` times an equal share of
    a greedy chain cover, so instances are feasible by construction.
    """

    m: int
    n: int
    capacity_range: tuple[int, int] | None = None
    fleet_slack: tuple[float, float] = (1.0, 1.3)
    horizon: tuple[int, int] = (300, 1380)
    duration_range: tuple[int, int] = (10, 120)
    area: float = 60.0
    travel_cost: tuple[int, int] = (10, 10)
    wait_cost: tuple[int, int] = (2, 2)
    vehicle_cost: tuple[int, int] = (5000, 5000)
    depot_arc_prob: float = 1.0

    def check(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError("generator needs m >= 1 and n >= 1")
        if self.capacity_range is not None:
            _check_range("capacity_range", self.capacity_range)
            if self.capacity_range[0] < 0:
                raise ValueError("capacities must be non-negative")
        for label in ("fleet_slack", "horizon", "duration_range", "travel_cost", "wait_cost", "vehicle_cost"):
            _check_range(label, getattr(self, label))
        if self.horizon[1] - self.horizon[0] < 1:
            raise ValueError("horizon too short")
        if not 0.0 < self.depot_arc_prob <= 1.0:
            raise ValueError("depot_arc_prob must be in (0, 1]")


def greedy_chain_count(feasible: np.ndarray, start: np.ndarray) -> int:
    """Vehicles used by first-fit chaining of trips in start-time order."""
    order = np.argsort(start, kind="stable")
    tails: list[int] = []
    for j in order.tolist():
        for c, last in enumerate(tails):
            if feasible[last, j]:
                tails[c] = j
                break
        else:
            tails.append(j)
    return len(tails)


def generate_trip_table(params: GeneratorParams, seed: int) -> TripTable:
    params.check()
    rng = np.random.default_rng(seed)
    m, n = params.m, params.n
    depot_xy = rng.uniform(0.0, params.area, size=(m, 2))
    start_xy = rng.uniform(0.0, params.area, size=(n, 2))
    end_xy = rng.uniform(0.0, params.area, size=(n, 2))
    ride = np.rint(np.linalg.norm(end_xy - start_xy, axis=1)).astype(np.int64)
    extra = rng.integers(params.duration_range[0], params.duration_range[1] + 1, size=n)
    duration = np.maximum(ride + extra, 1)
    lo, hi = params.horizon
    start = rng.integers(lo, max(lo + 1, hi - int(duration.max()) + 1), size=n).astype(np.int64)
    end = start + duration

    def dist(a, b):
        return np.rint(np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)).astype(np.int64)

    travel = int(rng.integers(params.travel_cost[0], params.travel_cost[1] + 1))
    wait = int(rng.integers(params.wait_cost[0], params.wait_cost[1] + 1))
    vehicle = int(rng.integers(params.vehicle_cost[0], params.vehicle_cost[1] + 1))

    deadhead = dist(end_xy, start_xy)
    slack = start[None, :] - end[:, None] - deadhead
    running = travel * deadhead + wait * np.maximum(slack, 0)
    pull_out = vehicle + travel * dist(depot_xy, start_xy)
    pull_in = travel * dist(end_xy, depot_xy)
    if params.depot_arc_prob < 1.0:
        out_ok = rng.random((m, n)) < params.depot_arc_prob
        in_ok = rng.random((n, m)) < params.depot_arc_prob
        # every trip keeps at least one pull-out and one pull-in
        out_ok[rng.integers(0, m, size=n), np.arange(n)] = True
        in_ok[np.arange(n), rng.integers(0, m, size=n)] = True
    else:
        out_ok = in_ok = None

    feasible = end[:, None] + deadhead <= start[None, :]
    np.fill_diagonal(feasible, False)
    if params.capacity_range is None:
        fleet = greedy_chain_count(feasible, start)
        share = fleet / m
        cap_lo = math.ceil(share * params.fleet_slack[0])
        cap_hi = max(cap_lo, math.ceil(share * params.fleet_slack[1]))
    else:
        cap_lo, cap_hi = params.capacity_range
    capacity = tuple(int(c) for c in rng.integers(cap_lo, cap_hi + 1, size=m))
    return TripTable(
        start_time=start,
        end_time=end,
        deadhead=deadhead,
        running_cost=running,
        pull_out_cost=pull_out,
        pull_in_cost=pull_in,
        depot_capacity=capacity,
        pull_out_allowed=out_ok,
        pull_in_allowed=in_ok,
        name=f"rand_m{m}n{n}s{seed}",
    )


def generate_random(params: GeneratorParams, seed: int) -> Instance:
    """Deterministic random instance for ``(params, seed)``."""
    return build_costs_from_trips(generate_trip_table(params, seed))


def nested_rows(inst: Instance) -> list[list[int | None]]:
    """Cost matrix as nested lists with ``None`` for absent arcs."""
    return [
        [int(v) if p else None for v, p in zip(vals, pres)]
        for vals, pres in zip(inst.values.tolist(), inst.present.tolist())
    ]


def arcs_of(inst: Instance) -> Iterable[tuple[int, int, int]]:
    tails, heads = np.nonzero(inst.present)
    for i, j in zip(tails.tolist(), heads.tolist()):
        yield i, j, int(inst.values[i, j])
