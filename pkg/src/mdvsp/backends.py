"""Solver backends for arc-flow models.

``HighsBackend`` solves in-process through ``scipy.optimize.milp``.
``ExternalSolverBackend`` writes the ``.lp`` file, runs a configured
command and reads the solution file back; values are always revalidated
by :func:`mdvsp.milp.solution_from_named_values`.

Configuration (highest priority first): explicit arguments, environment
variables ``MDVSP_SOLVER_CMD``, ``MDVSP_SOLVER_FORMAT``,
``MDVSP_SOLVER_TIMEOUT``, ``MDVSP_TMPDIR``, then a JSON config file::

    {"solver": {"command": "cbc {model} solve solu {solution}",
                "format": "cbc", "timeout": 600, "tmpdir": "/tmp"}}
"""

from __future__ import annotations

import json
import os
import shlex
import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_matrix

from .errors import BackendError, BackendTimeoutError, BackendUnavailableError, SolutionImportError
from .milp import FlowSolution, ModelSpec, export_model, parse_solution_values, solution_from_named_values, solution_from_vector

CBC_TEMPLATE = "{exe} {model} solve solu {solution}"


def constraint_matrix(model: ModelSpec) -> tuple[csr_matrix, np.ndarray, np.ndarray]:
    """Row matrix with bounds: degree rows as equalities, path rows as ``<=``."""
    g = model.network
    n_nodes, n_arcs = g.num_nodes, g.num_arcs
    arc = np.arange(n_arcs)
    rows = [g.head, n_nodes + g.tail]
    cols = [arc, arc]
    index = {(u, v): a for a, (u, v) in enumerate(zip(g.tail.tolist(), g.head.tolist()))}
    for k, path in enumerate(model.paths):
        rows.append(np.full(len(path), 2 * n_nodes + k))
        cols.append(np.array([index[a] for a in path]))
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    a = csr_matrix((np.ones(r.size), (r, c)), shape=(model.num_rows, n_arcs))
    rhs = model.rhs()
    lo = np.concatenate([rhs, rhs, np.full(len(model.paths), -np.inf)])
    hi = np.concatenate([rhs, rhs, np.array(model.path_rhs(), dtype=float)])
    return a, lo, hi


@dataclass
class HighsBackend:
    time_limit: float | None = None
    name: str = "highs"

    def solve(self, model: ModelSpec) -> FlowSolution:
        g = model.network
        a, lo, hi = constraint_matrix(model)
        options = {"presolve": True}
        if self.time_limit is not None:
            options["time_limit"] = self.time_limit
        res = milp(
            c=g.cost.astype(float),
            constraints=LinearConstraint(a, lo, hi),
            integrality=np.full(g.num_arcs, 1 if model.integral else 0),
            bounds=Bounds(np.zeros(g.num_arcs), model.upper_bounds()),
            options=options,
        )
        if res.status == 1:
            raise BackendTimeoutError(f"HiGHS stopped at its limit: {res.message}")
        if res.status != 0 or res.x is None:
            raise BackendError(f"HiGHS failed (status {res.status}): {res.message}")
        try:
            return solution_from_vector(model, res.x)
        except SolutionImportError as exc:
            raise BackendError(f"HiGHS returned an invalid solution: {exc}") from None


def parse_cbc_solution(text: str) -> dict[str, float]:
    """CBC ``solu`` output: a status line, then ``index name value reduced-cost``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise BackendError("empty solution file")
    status = lines[0].strip()
    if not status.lower().startswith("optimal"):
        raise BackendError(f"solver status: {status}")
    values = {}
    for ln in lines[1:]:
        parts = ln.replace("**", " ").split()
        if len(parts) < 3:
            raise SolutionImportError(f"bad solution line {ln!r}")
        values[parts[1]] = float(parts[2])
    return values


@dataclass
class ExternalSolverBackend:
    """Run ``command`` (a template with ``{model}`` and ``{solution}``)."""

    command: str
    format: str = "sol"
    timeout: float | None = None
    tmpdir: str | None = None
    name: str = "external"

    def argv(self, model_path: str, solution_path: str) -> list[str]:
        parts = shlex.split(self.command)
        if not any("{model}" in p for p in parts):
            parts.append("{model}")
        return [p.replace("{model}", model_path).replace("{solution}", solution_path) for p in parts]

    def solve(self, model: ModelSpec) -> FlowSolution:
        if self.format not in ("sol", "cbc"):
            raise BackendError(f"unknown solution format {self.format!r}")
        with tempfile.TemporaryDirectory(prefix="mdvsp-", dir=self.tmpdir) as tmp:
            model_path = os.path.join(tmp, "model.lp")
            sol_path = os.path.join(tmp, "model.sol")
            Path(model_path).write_text(export_model(model), encoding="utf-8")
            argv = self.argv(model_path, sol_path)
            try:
                proc = subprocess.run(argv, capture_output=True, text=True, timeout=self.timeout, cwd=tmp)
            except FileNotFoundError:
                raise BackendUnavailableError(f"solver executable not found: {argv[0]}") from None
            except PermissionError:
                raise BackendUnavailableError(f"solver executable not runnable: {argv[0]}") from None
            except subprocess.TimeoutExpired:
                raise BackendTimeoutError(f"solver exceeded {self.timeout} s") from None
            if proc.returncode != 0:
                raise BackendError(f"solver exited with {proc.returncode}: {proc.stderr.strip()[:500]}")
            if not os.path.exists(sol_path):
                raise BackendError("solver wrote no solution file")
            text = Path(sol_path).read_text(encoding="utf-8")
        named = parse_cbc_solution(text) if self.format == "cbc" else parse_solution_values(text)
        return solution_from_named_values(model, named)


def find_cbc() -> str | None:
    """``MDVSP_CBC`` if set, else ``cbc`` on the ``PATH``."""
    return os.environ.get("MDVSP_CBC") or shutil.which("cbc")


def load_config(path: str | Path | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise BackendError(f"cannot read solver config {path}: {exc}") from None
    return data.get("solver", {})


def load_backend(choice: str | None = None, config: str | Path | None = None):
    """Backend from a CLI-style choice.

    ``None`` picks ``MDVSP_SOLVER_CMD`` or the config file when set, else
    HiGHS.  ``"highs"`` and ``"cbc"`` are shorthands; anything else is a
    command template for :class:`ExternalSolverBackend`.
    """
    conf = load_config(config)
    env = os.environ
    command = choice or env.get("MDVSP_SOLVER_CMD") or conf.get("command")
    timeout = env.get("MDVSP_SOLVER_TIMEOUT", conf.get("timeout"))
    timeout = float(timeout) if timeout not in (None, "") else None
    tmpdir = env.get("MDVSP_TMPDIR") or conf.get("tmpdir")
    fmt = env.get("MDVSP_SOLVER_FORMAT") or conf.get("format")
    if command in (None, "highs"):
        return HighsBackend(time_limit=timeout)
    if command == "cbc":
        exe = find_cbc()
        if exe is None:
            raise BackendUnavailableError("cbc executable not found")
        return ExternalSolverBackend(CBC_TEMPLATE.format(exe=shlex.quote(exe), model="{model}", solution="{solution}"),
                                     "cbc", timeout, tmpdir, name="cbc")
    return ExternalSolverBackend(command, fmt or "sol", timeout, tmpdir)
