"""The three repair heuristics.

* ``h1``: circulation relaxation, then matching repair.
* ``h2``: a pool of relaxation solutions under slightly perturbed costs,
  each repaired under the original costs; the best one is kept.
* ``h3``: cut generation on the LP, one integral solve with the cut pool,
  then matching repair.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .circulation import solve_relaxation
from .cuts import Backend, build_constraint_pool
from .errors import UnrepairableSubtourError
from .instances import Instance
from .milp import TOL, FlowSolution, make_flow_solution
from .network import ConnectionNetwork, build_connection_network
from .repair import RepairOutcome, match_repair
from .schedules import Block, check_schedule, format_blocks


@dataclass
class SolutionReport:
    heuristic: str
    objective: int
    relaxation_objective: float
    blocks: tuple[Block, ...]
    subtours: int
    elapsed: float
    seed: int | None = None
    params: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    solution: FlowSolution | None = None

    def problems(self, g: ConnectionNetwork) -> list[str]:
        return check_schedule(self.blocks, g)

    def blocks_text(self) -> str:
        return format_blocks(self.blocks, self.objective)


def _network(inst: Instance | ConnectionNetwork) -> ConnectionNetwork:
    return inst if isinstance(inst, ConnectionNetwork) else build_connection_network(inst)


def _outcome_diag(out: RepairOutcome) -> dict:
    return {
        "weighting": out.which,
        "matching_weight": out.matching_weight,
        "self_weight": out.self_weight,
        "repairs": [kind for kind, _ in out.applied],
    }


def h1(inst: Instance | ConnectionNetwork) -> SolutionReport:
    t0 = time.perf_counter()
    g = _network(inst)
    x = solve_relaxation(g)
    out = match_repair(x, g)
    return SolutionReport(
        "h1", out.objective, x.objective, out.blocks, out.subtours,
        time.perf_counter() - t0, diagnostics=_outcome_diag(out), solution=out.solution,
    )


def perturbed_pool(g: ConnectionNetwork, pool_size: int, seed: int, epsilon: float = 0.01,
                   first: FlowSolution | None = None) -> list[FlowSolution]:
    """Distinct relaxation solutions, valued under the original costs.

    Member 0 is the unperturbed optimum.  Attempt ``a`` (1-based) draws ``u``
    from ``default_rng([seed, a])`` and solves with costs
    ``round(c * (1 + epsilon * u))``.  Solutions with an arc set already in
    the pool are dropped; at most ``3 * pool_size`` attempts are made, so a
    smaller pool is always a prefix of a larger one.
    """
    if pool_size < 1:
        raise ValueError("pool_size must be at least 1")
    inst = g.instance
    pool = [first if first is not None else solve_relaxation(g)]
    keys = {pool[0].arc_set()}
    present = inst.present
    base = inst.values.astype(np.float64)
    for attempt in range(1, 3 * pool_size + 1):
        if len(pool) >= pool_size:
            break
        rng = np.random.default_rng([seed, attempt])
        u = rng.random(base.shape)
        costs = np.where(present, np.rint(base * (1.0 + epsilon * u)), 0).astype(np.int64)
        gp = build_connection_network(inst.with_costs(costs), validate=False)
        xp = solve_relaxation(gp)
        key = xp.arc_set()
        if key in keys:
            continue
        keys.add(key)
        pool.append(make_flow_solution(g, xp.values, True, TOL))
    return pool


def h2(inst: Instance | ConnectionNetwork, pool_size: int = 10, seed: int = 0, epsilon: float = 0.01,
       workers: int = 1) -> SolutionReport:
    t0 = time.perf_counter()
    g = _network(inst)
    pool = perturbed_pool(g, pool_size, seed, epsilon)

    def repair(x):
        try:
            return match_repair(x, g)
        except UnrepairableSubtourError as exc:
            return exc

    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            outcomes = list(ex.map(repair, pool))
    else:
        outcomes = [repair(x) for x in pool]
    if isinstance(outcomes[0], Exception):
        raise outcomes[0]
    best = min(
        (k for k, o in enumerate(outcomes) if not isinstance(o, Exception)),
        key=lambda k: (outcomes[k].objective, k),
    )
    out = outcomes[best]
    diag = _outcome_diag(out)
    diag.update(pool=len(pool), best_member=best,
                member_objectives=[None if isinstance(o, Exception) else o.objective for o in outcomes])
    return SolutionReport(
        "h2", out.objective, pool[0].objective, out.blocks, out.subtours, time.perf_counter() - t0,
        seed=seed, params={"pool_size": pool_size, "epsilon": epsilon}, diagnostics=diag,
        solution=out.solution,
    )


def h3(inst: Instance | ConnectionNetwork, backend: Backend, tol: float = TOL, max_rounds: int = 200,
       per_pair: bool = False) -> SolutionReport:
    t0 = time.perf_counter()
    g = _network(inst)
    pool = build_constraint_pool(g, backend, tol, max_rounds, per_pair)
    x = backend.solve(pool.model.with_integrality(True))
    out = match_repair(x, g)
    diag = _outcome_diag(out)
    diag.update(rounds=pool.rounds, cuts=pool.cuts, clean=pool.clean, lp_objective=pool.solution.objective,
                ilp_objective=x.objective)
    return SolutionReport(
        "h3", out.objective, x.objective, out.blocks, out.subtours, time.perf_counter() - t0,
        params={"tol": tol, "max_rounds": max_rounds, "per_pair": per_pair,
                "backend": getattr(backend, "name", type(backend).__name__)},
        diagnostics=diag, solution=out.solution,
    )


HEURISTICS = ("h1", "h2", "h3")
