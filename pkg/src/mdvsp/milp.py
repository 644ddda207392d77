"""Symbolic arc-flow model, LP-file export and solution import.

Variables are named ``x_<tail>_<head>``, one per arc of the connection
network, in network arc order.  Rows are named ``in_<v>`` (in-degree),
``out_<v>`` (out-degree) and ``p_<k>`` for the k-th path constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ModelError, SolutionImportError
from .instances import Instance
from .network import ConnectionNetwork, build_connection_network

TOL = 1e-6

Arc = tuple[int, int]


@dataclass(frozen=True)
class FlowSolution:
    """Arc values of the connection network (only nonzero arcs are stored)."""

    values: Mapping[Arc, float]
    objective: float
    integral: bool

    def value(self, u: int, v: int) -> float:
        return self.values.get((u, v), 0)

    def arcs(self) -> list[Arc]:
        return sorted(self.values)

    def arc_set(self) -> frozenset[Arc]:
        return frozenset(self.values)


def make_flow_solution(
    g: ConnectionNetwork,
    values: Mapping[Arc, float],
    integral: bool,
    tol: float = TOL,
) -> FlowSolution:
    """Validate raw arc values and compute the objective.

    Values must be non-negative, sit on arcs of ``g`` and satisfy both degree
    equations to ``tol``.  With ``integral`` every value must be within
    ``tol`` of an integer and is stored rounded.
    """
    inst = g.instance
    clean: dict[Arc, float] = {}
    for (u, v), x in values.items():
        if not inst.has_arc(u, v):
            raise SolutionImportError(f"value on missing arc {u}->{v}")
        if x < -tol:
            raise SolutionImportError(f"negative value {x} on arc {u}->{v}")
        if integral:
            r = round(x)
            if abs(x - r) > tol:
                raise SolutionImportError(f"fractional value {x} on arc {u}->{v}")
            if r != 0:
                clean[(u, v)] = int(r)
        elif x > 0:
            clean[(u, v)] = float(x)
    size = inst.size
    inflow = np.zeros(size)
    outflow = np.zeros(size)
    for (u, v), x in clean.items():
        outflow[u] += x
        inflow[v] += x
    req = np.array([inst.requirement(v) for v in range(size)], dtype=float)
    bad_in = np.nonzero(np.abs(inflow - req) > tol)[0]
    bad_out = np.nonzero(np.abs(outflow - req) > tol)[0]
    if bad_in.size:
        v = int(bad_in[0])
        raise SolutionImportError(f"in-degree of node {v} is {inflow[v]}, expected {req[v]}")
    if bad_out.size:
        v = int(bad_out[0])
        raise SolutionImportError(f"out-degree of node {v} is {outflow[v]}, expected {req[v]}")
    if integral:
        objective = sum(int(inst.values[u, v]) * x for (u, v), x in clean.items())
    else:
        objective = math.fsum(float(inst.values[u, v]) * x for (u, v), x in clean.items())
    return FlowSolution(clean, objective, integral)


def var_name(u: int, v: int) -> str:
    return f"x_{u}_{v}"


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """Degree-constrained arc model plus the current pool of path constraints."""

    network: ConnectionNetwork
    integral: bool = True
    paths: tuple[tuple[Arc, ...], ...] = ()
    _path_keys: frozenset = field(default=frozenset(), repr=False)

    @property
    def instance(self) -> Instance:
        return self.network.instance

    @property
    def num_variables(self) -> int:
        return self.network.num_arcs

    @property
    def num_rows(self) -> int:
        return 2 * self.network.num_nodes + len(self.paths)

    def variable_names(self) -> list[str]:
        g = self.network
        return [var_name(u, v) for u, v in zip(g.tail.tolist(), g.head.tolist())]

    def upper_bounds(self) -> np.ndarray:
        g = self.network
        cap = np.array(self.instance.depot_capacity + (0,), dtype=float)
        ub = np.ones(g.num_arcs)
        loop = g.tail == g.head
        ub[loop] = cap[g.tail[loop]]
        return ub

    def rhs(self) -> np.ndarray:
        inst = self.instance
        return np.array([inst.requirement(v) for v in range(inst.size)], dtype=float)

    def path_rhs(self) -> list[int]:
        return [len(p) - 1 for p in self.paths]

    def path_index(self, path: Sequence[Arc]) -> int | None:
        key = frozenset(path)
        for k, p in enumerate(self.paths):
            if frozenset(p) == key:
                return k
        return None

    def relaxed(self) -> "ModelSpec":
        return replace(self, integral=False)

    def with_integrality(self, integral: bool) -> "ModelSpec":
        return replace(self, integral=integral)


def build_base_model(inst: Instance | ConnectionNetwork, integral: bool = True) -> ModelSpec:
    g = inst if isinstance(inst, ConnectionNetwork) else build_connection_network(inst)
    return ModelSpec(g, integral)


def _check_path(g: ConnectionNetwork, path: Sequence[Arc]) -> tuple[Arc, ...]:
    arcs = tuple((int(u), int(v)) for u, v in path)
    if not arcs:
        raise ModelError("empty path")
    for (u, v) in arcs:
        if not g.has_arc(u, v):
            raise ModelError(f"arc {u}->{v} is not in the network")
    for (_, v), (u2, _) in zip(arcs, arcs[1:]):
        if v != u2:
            raise ModelError("arcs do not form a path")
    first, last = arcs[0][0], arcs[-1][1]
    if not (g.is_depot(first) and g.is_depot(last)) or first == last:
        raise ModelError(f"path must join two distinct depots, got {first}->{last}")
    inner = [v for _, v in arcs[:-1]]
    if any(g.is_depot(v) for v in inner) or len(set(inner)) != len(inner):
        raise ModelError("path must pass through distinct trips only")
    return arcs


def add_path_constraint(model: ModelSpec, path: Sequence[Arc]) -> ModelSpec:
    """Append ``sum x(P) <= |E(P)| - 1``; a path already present is a no-op."""
    arcs = _check_path(model.network, path)
    key = frozenset(arcs)
    if key in model._path_keys:
        return model
    return replace(model, paths=model.paths + (arcs,), _path_keys=model._path_keys | {key})


# --------------------------------------------------------------------------
# LP file


def _terms(coeffs: Iterable[tuple[int, str]], per_line: int = 8) -> list[str]:
    """Format ``c name`` terms, wrapped over continuation lines."""
    chunks: list[str] = []
    line: list[str] = []
    for k, (c, name) in enumerate(coeffs):
        if k == 0:
            tok = f"{c} {name}" if c >= 0 else f"- {-c} {name}"
        else:
            tok = f"+ {c} {name}" if c >= 0 else f"- {-c} {name}"
        line.append(tok)
        if len(line) == per_line:
            chunks.append(" ".join(line))
            line = []
    if line:
        chunks.append(" ".join(line))
    return chunks


def _sum_terms(names: Sequence[str], per_line: int = 10) -> list[str]:
    chunks = []
    for k in range(0, len(names), per_line):
        part = " + ".join(names[k:k + per_line])
        chunks.append(part if k == 0 else "+ " + part)
    return chunks


def _row(label: str, chunks: list[str], tail: str) -> list[str]:
    if not chunks:
        return [f" {label}: 0 {tail}"]
    lines = [f" {label}: {chunks[0]}"] + [f"   {c}" for c in chunks[1:]]
    lines[-1] += f" {tail}"
    return lines


def export_model(model: ModelSpec) -> str:
    """Deterministic ``.lp`` text (Minimize / Subject To / Bounds / Generals / End)."""
    g = model.network
    inst = model.instance
    names = model.variable_names()
    tails, heads, costs = g.tail.tolist(), g.head.tolist(), g.cost.tolist()
    out = [f"\\ mdvsp arc-flow model {inst.name or 'unnamed'}", "Minimize"]
    obj = _terms(zip(costs, names))
    if obj:
        out += [f" obj: {obj[0]}"] + [f"   {c}" for c in obj[1:]]
    else:
        out.append(" obj:")
    out.append("Subject To")
    for v in range(g.num_nodes):
        idx = g.in_order[int(g.in_ptr[v]):int(g.in_ptr[v + 1])].tolist()
        out += _row(f"in_{v}", _sum_terms([names[a] for a in idx]), f"= {inst.requirement(v)}")
    for u in range(g.num_nodes):
        idx = range(int(g.out_ptr[u]), int(g.out_ptr[u + 1]))
        out += _row(f"out_{u}", _sum_terms([names[a] for a in idx]), f"= {inst.requirement(u)}")
    for k, path in enumerate(model.paths):
        out += _row(f"p_{k}", _sum_terms([var_name(u, v) for u, v in path]), f"<= {len(path) - 1}")
    out.append("Bounds")
    for a, name in enumerate(names):
        ub = inst.depot_capacity[tails[a]] if tails[a] == heads[a] else 1
        out.append(f" 0 <= {name} <= {ub}")
    if model.integral:
        out.append("Generals")
        for k in range(0, len(names), 10):
            out.append(" " + " ".join(names[k:k + 10]))
    out.append("End")
    return "\n".join(out) + "\n"


def parse_solution_values(text: str) -> dict[str, float]:
    """``name value`` pairs; blank lines and ``#`` comment lines are skipped."""
    values: dict[str, float] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise SolutionImportError(f"line {lineno}: expected 'name value', got {s!r}")
        try:
            values[parts[0]] = float(parts[1])
        except ValueError:
            raise SolutionImportError(f"line {lineno}: bad value {parts[1]!r}") from None
    return values


def solution_from_named_values(model: ModelSpec, named: Mapping[str, float], tol: float = TOL) -> FlowSolution:
    index = {name: a for a, name in enumerate(model.variable_names())}
    g = model.network
    values: dict[Arc, float] = {}
    for name, x in named.items():
        a = index.get(name)
        if a is None:
            raise SolutionImportError(f"unknown variable {name!r}")
        if x != 0:
            values[(int(g.tail[a]), int(g.head[a]))] = x
    return _check_paths(model, make_flow_solution(g, values, model.integral, tol), tol)


def solution_from_vector(model: ModelSpec, x: np.ndarray, tol: float = TOL) -> FlowSolution:
    g = model.network
    nz = np.nonzero(np.abs(x) > 0)[0]
    values = {(int(g.tail[a]), int(g.head[a])): float(x[a]) for a in nz.tolist()}
    return _check_paths(model, make_flow_solution(g, values, model.integral, tol), tol)


def _check_paths(model: ModelSpec, x: FlowSolution, tol: float) -> FlowSolution:
    for k, (path, rhs) in enumerate(zip(model.paths, model.path_rhs())):
        total = sum(x.value(u, v) for u, v in path)
        if total > rhs + tol:
            raise SolutionImportError(f"path row p_{k} has {total}, limit {rhs}")
    return x


def import_solution(text: str, model: ModelSpec, tol: float = TOL) -> FlowSolution:
    """Read a solver solution; the objective is recomputed from the values."""
    return solution_from_named_values(model, parse_solution_values(text), tol)


def write_solution(x: FlowSolution) -> str:
    """Inverse of :func:`import_solution` for the nonzero values of ``x``."""
    lines = [f"# objective {x.objective}"]
    for (u, v) in x.arcs():
        lines.append(f"{var_name(u, v)} {x.values[(u, v)]}")
    return "\n".join(lines) + "\n"
