"""ILP model construction, LP export, and the branch-and-bound solver."""

import pytest

from ncplan import build_model, exact_solve, generate_demands, plan_nc, plan_wnc
from ncplan import export_model, validate_plan
from ncplan.ilp import NC, WNC, BudgetError, model_to_lp
from ncplan.topology import Demand, DemandSet, WavelengthGrid


@pytest.fixture(scope="module")
def small(six_node):
    return generate_demands(six_node, 0.3, 1, 0), WavelengthGrid(4)


def test_wnc_variable_count(six_node, small):
    demands, grid = small
    model = build_model(six_node, demands, grid, mode=WNC)
    n_arcs = len(six_node.arcs)
    expected = (
        len(demands) * n_arcs * grid.count * 2  # a and b flows
        + len(demands) * grid.count  # wavelength selection t
        + n_arcs * grid.count  # occupancy g
    )
    assert len(model.variables) == expected
    assert len(model.variables) == len(set(model.variables))
    # objective counts exactly the occupancy cells
    assert set(model.objective) == {v for v in model.variables if v.startswith("g_")}


def test_nc_model_adds_coding_families(six_node, small):
    demands, grid = small
    wnc = build_model(six_node, demands, grid, mode=WNC)
    nc = build_model(six_node, demands, grid, mode=NC)
    assert len(nc.variables) > len(wnc.variables)
    prefixes = {v.split("_")[0] for v in nc.variables}
    assert {"a", "b", "t", "z", "dl", "g"} <= prefixes
    names = {c.name.split("_")[0] for c in nc.constraints}
    assert {"C1", "C2", "C2z", "C3", "C4a", "C4b", "C4t", "C9"} <= names


def test_constraint_family_counts(six_node, small):
    demands, grid = small
    model = build_model(six_node, demands, grid, mode=WNC)
    by_family: dict[str, int] = {}
    for c in model.constraints:
        fam = c.name.split("_")[0]
        by_family[fam] = by_family.get(fam, 0) + 1
    d, n, fib, arcs, w = (
        len(demands),
        six_node.n_nodes,
        len(six_node.fibers),
        len(six_node.arcs),
        grid.count,
    )
    assert by_family["C1"] == d * n
    assert by_family["C2"] == d * n
    assert by_family["C3"] == d * fib
    assert by_family["C4a"] == d * w and by_family["C4t"] == d
    assert by_family["C9"] == arcs * w


def test_budget_guard(six_node, small):
    demands, grid = small
    with pytest.raises(BudgetError):
        build_model(six_node, demands, grid, mode=WNC, variable_budget=100)


def test_invalid_mode_rejected(six_node, small):
    demands, grid = small
    with pytest.raises(ValueError, match="mode"):
        build_model(six_node, demands, grid, mode="XYZ")
    with pytest.raises(ValueError, match="mode"):
        exact_solve(six_node, demands, grid, mode="XYZ")


def test_lp_export_deterministic_and_wellformed(six_node, small, tmp_path):
    demands, grid = small
    model = build_model(six_node, demands, grid, mode=WNC)
    text1 = model_to_lp(model)
    text2 = model_to_lp(build_model(six_node, demands, grid, mode=WNC))
    assert text1 == text2
    lines = text1.splitlines()
    assert lines[0] == "Minimize"
    assert "Subject To" in lines and "Binary" in lines and lines[-1] == "End"
    out = tmp_path / "model.lp"
    export_model(model, out)
    assert out.read_text() == text1


def test_lp_roundtrip_through_parser(six_node, small):
    from lpsolve import parse_lp

    demands, grid = small
    model = build_model(six_node, demands, grid, mode=WNC)
    objective, constraints, binaries = parse_lp(model_to_lp(model))
    assert binaries == model.variables
    assert objective == model.objective
    assert len(constraints) == len(model.constraints)
    for (name, coeffs, sense, rhs), c in zip(constraints, model.constraints):
        assert name == c.name and sense == c.sense and rhs == c.rhs
        assert coeffs == {k: v for k, v in c.coeffs.items() if v != 0}


def test_exact_solve_wnc_small(six_node, small):
    demands, grid = small
    result = exact_solve(six_node, demands, grid, mode=WNC, time_limit=30)
    assert result.optimal
    assert validate_plan(six_node, demands, grid, result.plan) == []
    assert result.cost == result.plan.cost
    heuristic = plan_wnc(six_node, demands, grid)
    assert result.cost <= heuristic.cost


def test_exact_solve_nc_beats_or_matches_heuristic(six_node, small):
    demands, grid = small
    result = exact_solve(six_node, demands, grid, mode=NC, time_limit=30)
    assert result.optimal
    assert validate_plan(six_node, demands, grid, result.plan) == []
    heuristic = plan_nc(six_node, demands, grid)
    assert result.cost <= heuristic.cost
    wnc = exact_solve(six_node, demands, grid, mode=WNC, time_limit=30)
    assert result.cost <= wnc.cost


def test_exact_solve_bound_does_not_change_answer(six_node):
    demands = DemandSet(tuple(Demand(i, s, t) for i, (s, t) in enumerate(
        [(0, 4), (1, 4), (2, 4), (0, 5), (3, 0), (5, 1)]
    )))
    grid = WavelengthGrid(6)
    with_bound = exact_solve(six_node, demands, grid, mode=NC, use_bound=True)
    without = exact_solve(six_node, demands, grid, mode=NC, use_bound=False)
    assert with_bound.cost == without.cost
    assert with_bound.nodes_explored <= without.nodes_explored


def test_exact_solve_demand_cap(six_node, grid):
    demands = generate_demands(six_node, 1.0, 1, 0)
    with pytest.raises(ValueError, match="cap"):
        exact_solve(six_node, demands, grid, demand_cap=10)


def test_external_solver_agrees_with_exact_search(six_node, small):
    """The exported WNC model, solved by HiGHS through scipy, reaches the
    same optimum as the cycle-based exact search."""
    from lpsolve import solve_lp_text

    demands, grid = small
    model = build_model(six_node, demands, grid, mode=WNC)
    objective, _ = solve_lp_text(model_to_lp(model), time_limit=120)
    exact = exact_solve(six_node, demands, grid, mode=WNC, time_limit=60)
    heuristic = plan_wnc(six_node, demands, grid)
    assert round(objective) <= heuristic.cost
    assert round(objective) == exact.cost
