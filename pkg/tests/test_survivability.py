"""Single-fiber failure simulation and the recovery sweep."""

import pytest

from ncplan import (
    Plan,
    Provision,
    Verdict,
    generate_demands,
    plan_nc,
    plan_wnc,
    simulate_failure,
    verify_all_failures,
)
from ncplan.paths import make_path
from ncplan.survivability import report_to_csv, sweep_to_csv


def _coded_pair(butterfly):
    pa = make_path(butterfly, (0, 2, 3, 4))
    pb = make_path(butterfly, (1, 2, 3, 4))
    sfx = pa.tail(2)
    return Plan.from_provisions(
        {
            0: Provision(0, make_path(butterfly, (0, 4)), pa, 0, 1, 2, sfx),
            1: Provision(1, make_path(butterfly, (1, 4)), pb, 0, 0, 2, sfx),
        }
    )


def test_verdicts_on_coded_pair(butterfly):
    plan = _coded_pair(butterfly)
    # cut demand 0's working fiber: XOR recovery via partner
    report = simulate_failure(butterfly, plan, (0, 4))
    assert report.per_demand[0] is Verdict.RECOVERED_VIA_XOR
    assert report.per_demand[1] is Verdict.WORKING_INTACT
    assert "xor" in report.recovery_expression[0]
    assert report.lost == []
    # cut a shared protection fiber: both workings still intact
    report = simulate_failure(butterfly, plan, (2, 3))
    assert set(report.per_demand.values()) == {Verdict.WORKING_INTACT}


def test_uncoded_verdicts(butterfly):
    plan = Plan.from_provisions(
        {
            0: Provision(
                0, make_path(butterfly, (0, 4)), make_path(butterfly, (0, 2, 3, 4)), 0
            )
        }
    )
    report = simulate_failure(butterfly, plan, (4, 0))  # direction-insensitive
    assert report.per_demand[0] is Verdict.RECOVERED_VIA_PROTECTION
    ok, first_failure = verify_all_failures(butterfly, plan)
    assert ok and first_failure is None


def test_lost_when_workings_share_a_fiber():
    """A pairing that violates cross-disjointness loses both demands when
    the shared working fiber is cut: each decode needs the other's
    working signal, and both are down."""
    from ncplan import Topology

    t = Topology("square", range(4), [(0, 1), (1, 2), (2, 3), (0, 3)])
    pa = make_path(t, (0, 3, 2))
    pb = make_path(t, (1, 0, 3, 2))
    plan = Plan.from_provisions(
        {
            0: Provision(0, make_path(t, (0, 1, 2)), pa, 0, 1, 0, pa.tail(2)),
            1: Provision(1, make_path(t, (1, 2)), pb, 0, 0, 0, pb.tail(2)),
        }
    )
    report = simulate_failure(t, plan, (1, 2))
    assert report.per_demand[0] is Verdict.LOST
    assert report.per_demand[1] is Verdict.LOST
    assert report.lost == [0, 1]
    ok, first_failure = verify_all_failures(t, plan)
    assert not ok and first_failure.failed_fiber == (1, 2)


def test_unknown_fiber_rejected(butterfly):
    plan = _coded_pair(butterfly)
    with pytest.raises(ValueError, match="unknown fiber"):
        simulate_failure(butterfly, plan, (0, 3))


def test_planner_outputs_fully_survivable(six_node, nsfnet, grid):
    for topology, load in ((six_node, 1.0), (nsfnet, 0.3)):
        demands = generate_demands(topology, load, 1, 0)
        for planner in (plan_wnc, plan_nc):
            ok, report = verify_all_failures(topology, planner(topology, demands, grid))
            assert ok, report


def test_csv_outputs(butterfly):
    plan = _coded_pair(butterfly)
    report = simulate_failure(butterfly, plan, (0, 4))
    csv = report_to_csv(report)
    lines = csv.strip().splitlines()
    assert lines[0] == "fiber,demand,verdict"
    assert lines[1] == "0-4,0,recovered_via_xor"
    sweep = sweep_to_csv(butterfly, plan)
    rows = sweep.strip().splitlines()
    # header + one row per (fiber, demand)
    assert len(rows) == 1 + len(butterfly.fibers) * 2
    assert rows[0] == "fiber,demand,verdict"
    assert "LOST" not in sweep
