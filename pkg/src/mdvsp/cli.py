"""Command line entry point ``mdvsp``.

Exit codes: 0 success, 1 infeasible or invalid input/solution, 2
configuration error (bad options, solver backend unavailable).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import bench, heuristics
from .backends import load_backend
from .errors import (
    BackendError,
    BackendUnavailableError,
    InfeasibleError,
    InstanceFormatError,
    InvalidInstanceError,
    MDVSPError,
    SolutionImportError,
)
from .instances import GeneratorParams, generate_random, read_instance, save_instance, write_instance
from .milp import build_base_model, import_solution
from .network import build_connection_network
from .schedules import check_schedule, decompose, parse_blocks

EXIT_OK, EXIT_INFEASIBLE, EXIT_CONFIG = 0, 1, 2


def _csv_list(text: str, cast=str) -> tuple:
    return tuple(cast(t) for t in text.split(",") if t.strip())


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    if args.heuristic == "h1":
        rep = heuristics.h1(inst)
    elif args.heuristic == "h2":
        rep = heuristics.h2(inst, args.pool, args.seed)
    else:
        backend = load_backend(args.backend, args.config)
        rep = heuristics.h3(inst, backend, max_rounds=args.max_rounds)
    sys.stdout.write(rep.blocks_text())
    print(
        f"# {rep.heuristic}: objective {rep.objective}, relaxation {rep.relaxation_objective}, "
        f"subtours repaired {rep.subtours}, {rep.elapsed:.3f} s",
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = bench.BenchConfig(
        heuristics=_csv_list(args.heuristics),
        seeds=_csv_list(args.seeds, int),
        pool_size=args.pool,
        backend=args.backend,
        backend_config=args.config,
        timeout=args.timeout or None,
        workers=args.workers,
        max_rounds=args.max_rounds,
    )
    unknown = set(cfg.heuristics) - set(heuristics.HEURISTICS)
    if unknown:
        print(f"unknown heuristic(s): {', '.join(sorted(unknown))}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        records = bench.run_benchmark(args.directory, cfg)
    except NotADirectoryError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    text = bench.records_csv(records)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_gen(args) -> int:
    params = GeneratorParams(
        m=args.m, n=args.n, capacity_range=tuple(args.capacity_range) if args.capacity_range else None
    )
    try:
        inst = generate_random(params, args.seed)
    except ValueError as exc:
        print(exc, file=sys.stderr)
        return EXIT_CONFIG
    if args.out:
        save_instance(inst, args.out)
    else:
        sys.stdout.write(write_instance(inst))
    return EXIT_OK


def cmd_check(args) -> int:
    inst = read_instance(args.instance)
    g = build_connection_network(inst)
    text = Path(args.solution).read_text(encoding="utf-8")
    body = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    try:
        if body and body[0].startswith("x_"):
            x = import_solution(text, build_base_model(g))
            blocks = decompose(x, g)
        else:
            blocks = parse_blocks(text, g)
    except (ValueError, SolutionImportError) as exc:
        print(f"invalid solution: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    problems = check_schedule(blocks, g)
    objective = sum(b.cost for b in blocks)
    for p in problems:
        print(p, file=sys.stderr)
    print(f"objective {objective}")
    print("feasible" if not problems else f"infeasible ({len(problems)} problems)")
    return EXIT_OK if not problems else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mdvsp", description="Multiple-depot vehicle scheduling heuristics")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one instance and print its blocks")
    s.add_argument("instance")
    s.add_argument("--heuristic", choices=heuristics.HEURISTICS, default="h1")
    s.add_argument("--pool", type=int, default=10, help="pool size for h2")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--backend", default=None, help="highs, cbc, or a command template with {model} and {solution}")
    s.add_argument("--config", default=None, help="JSON solver configuration file")
    s.add_argument("--max-rounds", type=int, default=200)
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run heuristics over a directory of instances")
    b.add_argument("directory")
    b.add_argument("--out", default=None)
    b.add_argument("--heuristics", default="h1", help="comma-separated, e.g. h1,h3")
    b.add_argument("--seeds", default="0", help="comma-separated seeds for h2")
    b.add_argument("--pool", type=int, default=10)
    b.add_argument("--backend", default=None)
    b.add_argument("--config", default=None)
    b.add_argument("--timeout", type=float, default=3600.0, help="seconds per run, 0 disables")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--max-rounds", type=int, default=200)
    b.set_defaults(func=cmd_bench)

    gp = sub.add_parser("gen", help="write a random instance")
    gp.add_argument("--m", type=int, required=True)
    gp.add_argument("--n", type=int, required=True)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--capacity-range", type=int, nargs=2, metavar=("LO", "HI"))
    gp.add_argument("--out", default=None)
    gp.set_defaults(func=cmd_gen)

    c = sub.add_parser("check", help="check a blocks or name-value solution file")
    c.add_argument("instance")
    c.add_argument("solution")
    c.set_defaults(func=cmd_check)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (BackendUnavailableError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InstanceFormatError, InvalidInstanceError, InfeasibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BackendError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MDVSPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
