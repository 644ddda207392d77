from __future__ import annotations

import pytest

from conftest import DATA, fixture_b, tiny_instance
from oracles import mdvsp_optimum
from mdvsp.backends import HighsBackend
from mdvsp.circulation import solve_relaxation
from mdvsp.errors import ModelError, SolutionImportError
from mdvsp.instances import Instance
from mdvsp.milp import (
    add_path_constraint,
    build_base_model,
    export_model,
    import_solution,
    make_flow_solution,
    write_solution,
)
from mdvsp.network import build_connection_network


def _minimal():
    return Instance.from_arcs(1, 1, (1,), {(0, 1): 7, (1, 0): 3}, name="minimal")


def test_fixture_model_size(inst_b):
    model = build_base_model(inst_b)
    assert model.num_variables == 9
    assert model.num_rows == 8
    assert model.integral


def test_minimal_model():
    model = build_base_model(_minimal())
    assert model.num_variables == 3
    assert model.num_rows == 4
    assert list(model.rhs()) == [1, 1]


def test_trip_rows_have_rhs_one(inst_b):
    model = build_base_model(inst_b)
    assert list(model.rhs()) == [1, 1, 1, 1]
    inst = Instance.from_arcs(2, 1, (3, 2), {(0, 2): 1, (2, 1): 1})
    assert list(build_base_model(inst).rhs()) == [3, 2, 1]
    assert sorted(build_base_model(inst).upper_bounds().tolist()) == [1, 1, 2, 3]


def test_path_constraint(inst_b):
    model = add_path_constraint(build_base_model(inst_b), [(0, 2), (2, 1)])
    assert model.paths == (((0, 2), (2, 1)),)
    assert model.path_rhs() == [1]
    again = add_path_constraint(model, [(0, 2), (2, 1)])
    assert again is model
    text = export_model(model)
    assert text.count("p_0:") == 1
    assert " p_0: x_0_2 + x_2_1 <= 1" in text


@pytest.mark.parametrize(
    "path, msg",
    [
        ([(0, 3), (3, 1)], "not in the network"),
        ([(0, 2), (2, 0)], "distinct depots"),
        ([(0, 2), (3, 0)], "do not form a path"),
        ([], "empty"),
    ],
)
def test_bad_paths(inst_b, path, msg):
    with pytest.raises(ModelError, match=msg):
        add_path_constraint(build_base_model(inst_b), path)


def test_golden_lp_file():
    assert export_model(build_base_model(_minimal())) == (DATA / "minimal.lp").read_text()


def test_export_is_deterministic(inst_b):
    m = add_path_constraint(build_base_model(inst_b), [(1, 3), (3, 0)])
    assert export_model(m) == export_model(add_path_constraint(build_base_model(inst_b), [(1, 3), (3, 0)]))
    assert "Generals" not in export_model(m.relaxed())


def test_import_fixture_solution(inst_b):
    model = build_base_model(inst_b)
    x = import_solution("# from a solver\nx_0_2 1\nx_2_1 1\nx_1_3 1\nx_3_0 1\n", model)
    assert x.objective == 40
    assert x.value(0, 0) == 0


def test_import_rejects_unknown_variable(inst_b):
    with pytest.raises(SolutionImportError, match="unknown variable"):
        import_solution("x_9_9 1\n", build_base_model(inst_b))


def test_import_rejects_degree_violation(inst_b):
    with pytest.raises(SolutionImportError, match="degree"):
        import_solution("x_0_2 1\nx_2_1 1\n", build_base_model(inst_b))


def test_import_rejects_fractional_when_integral(inst_b):
    text = "x_0_2 1\nx_2_1 0.5\nx_2_3 0.5\nx_1_3 0.5\nx_1_1 0.5\nx_3_0 1\n"
    with pytest.raises(SolutionImportError, match="fractional"):
        import_solution(text, build_base_model(inst_b))
    x = import_solution(text, build_base_model(inst_b).relaxed())
    assert x.objective == pytest.approx(32.5)


def test_import_rounds_within_tolerance(inst_b):
    x = import_solution("x_0_2 0.9999999\nx_2_3 1.0000001\nx_3_0 1\nx_1_1 1\n", build_base_model(inst_b))
    assert x.values[(0, 2)] == 1 and isinstance(x.values[(0, 2)], int)


def test_empty_file_on_zero_vehicle_instance():
    inst = Instance.from_arcs(1, 0, (0,), {})
    g = build_connection_network(inst, validate=False)
    x = import_solution("", build_base_model(g))
    assert x.objective == 0 and dict(x.values) == {}


def test_write_solution_round_trip(inst_b):
    model = build_base_model(inst_b)
    x = import_solution("x_0_2 1\nx_2_1 1\nx_1_3 1\nx_3_0 1\n", model)
    assert dict(import_solution(write_solution(x), model).values) == dict(x.values)


def test_bad_solution_lines(inst_b):
    with pytest.raises(SolutionImportError):
        import_solution("x_0_2\n", build_base_model(inst_b))
    with pytest.raises(SolutionImportError):
        import_solution("x_0_2 one\n", build_base_model(inst_b))


def test_make_flow_solution_checks(g_b):
    with pytest.raises(SolutionImportError, match="missing arc"):
        make_flow_solution(g_b, {(3, 2): 1}, True)
    with pytest.raises(SolutionImportError, match="negative"):
        make_flow_solution(g_b, {(0, 2): -1}, True)


def test_backend_fixture_values(inst_b):
    be = HighsBackend()
    base = build_base_model(inst_b)
    assert be.solve(base.relaxed()).objective == pytest.approx(25)
    assert be.solve(base).objective == 25
    both = add_path_constraint(add_path_constraint(base, [(0, 2), (2, 1)]), [(1, 3), (3, 0)])
    assert be.solve(both).objective == 25 == mdvsp_optimum(inst_b)


def test_backend_matches_circulation():
    be = HighsBackend()
    for seed in range(100):
        inst = tiny_instance(seed)
        g = build_connection_network(inst)
        assert be.solve(build_base_model(g)).objective == solve_relaxation(g).objective


def test_cuts_never_lower_the_optimum(inst_b):
    be = HighsBackend()
    base = build_base_model(inst_b)
    z0 = be.solve(base).objective
    z1 = be.solve(add_path_constraint(base, [(0, 2), (2, 3), (3, 1)])).objective
    assert z1 >= z0
