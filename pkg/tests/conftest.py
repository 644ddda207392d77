from __future__ import annotations

import os
import shutil
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mdvsp.instances import GeneratorParams, Instance, generate_random  # noqa: E402
from mdvsp.milp import make_flow_solution  # noqa: E402
from mdvsp.network import build_connection_network  # noqa: E402
from mdvsp.schedules import make_block  # noqa: E402

DATA = Path(__file__).parent / "data"

FIXTURE_B_ARCS = {
    (0, 2): 10, (1, 3): 10, (2, 1): 10, (3, 0): 10,
    (2, 0): 14, (3, 1): 14, (2, 3): 5,
}
# the two-subtour solution 0->2->1, 1->3->0
FIXTURE_B_SUBTOUR_ARCS = {(0, 2): 1, (2, 1): 1, (1, 3): 1, (3, 0): 1}

PULP_CBC = "/usr/local/lib/python3.10/dist-packages/pulp/solverdir/cbc/linux/i64/cbc"


def fixture_b() -> Instance:
    return Instance.from_arcs(2, 2, (1, 1), FIXTURE_B_ARCS, name="fixture_b")


def fixture_b_subtour_solution():
    g = build_connection_network(fixture_b())
    return make_flow_solution(g, FIXTURE_B_SUBTOUR_ARCS, True), g


def tiny_params(m: int, n: int) -> GeneratorParams:
    # short horizon and cheap vehicles so relaxations produce subtours
    return GeneratorParams(m=m, n=n, horizon=(0, 300), duration_range=(5, 40), area=40.0,
                           vehicle_cost=(50, 200), fleet_slack=(1.0, 1.5))


def tiny_instance(seed: int) -> Instance:
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 4))
    n = int(rng.integers(2, 9))
    return generate_random(tiny_params(m, n), seed)


def random_arc_instance(seed: int, m_max: int = 3, n_max: int = 8) -> Instance:
    """Arbitrary arc sets (cycles among trips allowed), every trip coverable."""
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, m_max + 1))
    n = int(rng.integers(1, n_max + 1))
    caps = tuple(int(c) for c in rng.integers(1, 3, size=m))
    arcs = {}
    for t in range(m, m + n):
        arcs[(int(rng.integers(0, m)), t)] = int(rng.integers(0, 30))
        arcs[(t, int(rng.integers(0, m)))] = int(rng.integers(0, 30))
        for d in range(m):
            if rng.random() < 0.5:
                arcs[(d, t)] = int(rng.integers(0, 30))
            if rng.random() < 0.5:
                arcs[(t, d)] = int(rng.integers(0, 30))
        for u in range(m, m + n):
            if u != t and rng.random() < 0.35:
                arcs[(u, t)] = int(rng.integers(0, 30))
    return Instance.from_arcs(m, n, caps, arcs, name=f"arcs{seed}")


def random_subtour_pair(rng):
    """Two compatible subtours ``0 -> a -> 1`` and ``1 -> b -> 0`` with p, q <= 6.

    Returns ``(inst, g, p1, p2, a, b)``; other arcs are random and may be
    missing, so some crossings are impossible.
    """
    p, q = int(rng.integers(1, 7)), int(rng.integers(1, 7))
    n = p + q
    perm = [int(t) for t in rng.permutation(range(2, 2 + n))]
    a, b = perm[:p], perm[p:]
    arcs = {}
    for u in range(2 + n):
        for v in range(2 + n):
            if u == v or (u < 2 and v < 2):
                continue
            if rng.random() < 0.55:
                arcs[(u, v)] = int(rng.integers(-5, 40))
    for chain in ([0, *a, 1], [1, *b, 0]):
        for u, v in zip(chain, chain[1:]):
            arcs.setdefault((u, v), int(rng.integers(0, 40)))
    inst = Instance.from_arcs(2, n, (1, 1), arcs)
    g = build_connection_network(inst, validate=False)
    return inst, g, make_block(g, 0, a, 1), make_block(g, 1, b, 0), a, b


def cbc_path() -> str | None:
    exe = os.environ.get("MDVSP_CBC") or shutil.which("cbc")
    if exe:
        return exe
    return PULP_CBC if os.access(PULP_CBC, os.X_OK) else None


@pytest.fixture
def inst_b() -> Instance:
    return fixture_b()


@pytest.fixture
def g_b():
    return build_connection_network(fixture_b())


# acceptance criteria append (name, passed, detail) here
ACCEPTANCE: list[tuple[str, bool | None, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        label = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
        terminalreporter.write_line(f"{label} {name}: {detail}")
