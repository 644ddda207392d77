"""Multiple-depot vehicle scheduling: relaxations, repair heuristics, benchmark harness."""

from __future__ import annotations

from .circulation import build_circulation_network, circulation_to_flow_solution, solve_min_cost_circulation, solve_relaxation
from .cuts import build_constraint_pool, find_violated_path
from .heuristics import SolutionReport, h1, h2, h3
from .instances import Instance, TripTable, build_costs_from_trips, generate_random, parse_instance, validate, write_instance
from .milp import FlowSolution, ModelSpec, add_path_constraint, build_base_model, export_model, import_solution
from .network import ConnectionNetwork, build_connection_network
from .repair import repair_all_iterative, repair_all_matching
from .schedules import Block, Subtour, build_depot_digraph, decompose, find_infeasible

__version__ = "0.1.0"

__all__ = [
    "Block",
    "ConnectionNetwork",
    "FlowSolution",
    "Instance",
    "ModelSpec",
    "SolutionReport",
    "Subtour",
    "TripTable",
    "add_path_constraint",
    "build_base_model",
    "build_circulation_network",
    "build_connection_network",
    "build_constraint_pool",
    "build_costs_from_trips",
    "build_depot_digraph",
    "circulation_to_flow_solution",
    "decompose",
    "export_model",
    "find_infeasible",
    "find_violated_path",
    "generate_random",
    "h1",
    "h2",
    "h3",
    "import_solution",
    "parse_instance",
    "repair_all_iterative",
    "repair_all_matching",
    "solve_min_cost_circulation",
    "solve_relaxation",
    "validate",
    "write_instance",
]
