"""Heuristic designs.

plan_wnc: dedicated 1+1 protection with Suurballe-optimal cycles and
first-fit wavelength assignment (the optical-bypass baseline).

plan_nc: the coding-aware pass — group demands by destination, order
groups by size and demands by cycle length (both descending), then give
each demand the cheapest of: its Suurballe cycle uncoded, or the same
cycle XOR-paired with an already-provisioned group member.  A coded
option must respect first-fit discipline: it is rejected when it would
place the demand on a higher wavelength than the uncoded first-fit
assignment, so coding never fragments the spectrum upward.

Wavelength exhaustion is repaired deterministically: the blocked demand
is promoted to the front of the processing order and the pass restarts;
only a demand that still blocks while processed first raises
CapacityError.
"""

from __future__ import annotations

from dataclasses import replace

from .coding import CodingCandidate, check_codeable
from .paths import Cycle, k_shortest_cycles, suurballe_pair
from .plan import (
    CapacityError,
    Cell,
    Plan,
    Provision,
    coded_signal,
    protection_signal,
    working_signal,
)
from .topology import Demand, DemandSet, Topology, WavelengthGrid


class _Blocked(Exception):
    def __init__(self, demand: Demand):
        self.demand = demand


def _first_fit(occupancy, arcs, grid: WavelengthGrid) -> int | None:
    for w in range(grid.count):
        if all((arc, w) not in occupancy for arc in arcs):
            return w
    return None


def _fit_cycle(topology, occupancy, cycles, grid: WavelengthGrid, demand):
    """Cycle plus first-fit wavelength for one demand.

    Tries the candidate cycles in order; when none admits a continuous
    wavelength, routes a fresh disjoint pair on each wavelength layer
    (the subgraph of arcs free at that wavelength) before giving up.
    """
    for cyc in cycles:
        w = _first_fit(occupancy, cyc.working.arcs + cyc.protection.arcs, grid)
        if w is not None:
            return cyc, w
    for w in range(grid.count):
        free = [a for a in topology.arc_length if (a, w) not in occupancy]
        layer = Topology.restricted_to(topology, free)
        cyc = suurballe_pair(layer, demand.source, demand.destination)
        if cyc is not None:
            return cyc, w
    raise _Blocked(demand)


def _with_repair(base_order: list, attempt) -> dict[int, Provision]:
    """Re-run `attempt` with blocked demands promoted to the front.

    Gives up when a demand still blocks at the very front of the order, or
    when every demand has had a promotion without reaching a feasible pass
    (the grid is genuinely exhausted)."""
    priority: list = []
    for _ in range(len(base_order) + 1):
        order = priority + [d for d in base_order if d not in priority]
        try:
            return attempt(order)
        except _Blocked as blocked:
            if blocked.demand == order[0]:
                raise CapacityError(blocked.demand.id) from None
            priority = [blocked.demand] + [
                d for d in priority if d != blocked.demand
            ]
    raise CapacityError(priority[0].id)


def _candidate_cycles(topology, demands, k) -> dict[int, list[Cycle]]:
    cycles: dict[int, list[Cycle]] = {}
    for d in demands:
        cs = k_shortest_cycles(topology, d.source, d.destination, k)
        if not cs:
            raise ValueError(f"no fiber-disjoint cycle for demand {d.id}")
        cycles[d.id] = cs
    return cycles


def plan_wnc(
    topology: Topology,
    demands: DemandSet,
    grid: WavelengthGrid,
    k: int = 8,
) -> Plan:
    """Baseline without coding: Suurballe cycle per demand (alternate
    cycles only on wavelength exhaustion), longest cycles first, lowest
    feasible wavelength for working plus protection."""
    cycles = _candidate_cycles(topology, demands, k)
    base_order = sorted(demands, key=lambda d: (-cycles[d.id][0].total_length, d.id))

    def attempt(order):
        occupancy: dict[Cell, set[str]] = {}
        provisions: dict[int, Provision] = {}
        for d in order:
            cyc, w = _fit_cycle(topology, occupancy, cycles[d.id], grid, d)
            for arc in cyc.working.arcs:
                occupancy[(arc, w)] = {working_signal(d.id)}
            for arc in cyc.protection.arcs:
                occupancy[(arc, w)] = {protection_signal(d.id)}
            provisions[d.id] = Provision(d.id, cyc.working, cyc.protection, w)
        return provisions

    return Plan.from_provisions(_with_repair(base_order, attempt))


def plan_nc(
    topology: Topology,
    demands: DemandSet,
    grid: WavelengthGrid,
    k: int = 8,
) -> Plan:
    """Coding-aware heuristic (greedy, single forward pass)."""
    cycles = _candidate_cycles(topology, demands, k)
    groups: dict[int, list] = {}
    for d in demands:
        groups.setdefault(d.destination, []).append(d)
    group_order = sorted(groups, key=lambda v: (-len(groups[v]), v))
    base_order = []
    for v in group_order:
        base_order.extend(
            sorted(groups[v], key=lambda d: (-cycles[d.id][0].total_length, d.id))
        )

    def attempt(order):
        occupancy: dict[Cell, set[str]] = {}
        provisions: dict[int, Provision] = {}

        def coded_option_feasible(prov: Provision, partner: Provision) -> bool:
            w = partner.wavelength
            for arc in prov.working.arcs + prov.presuffix_arcs:
                if (arc, w) in occupancy:
                    return False
            merged = {protection_signal(partner.demand)}
            return all(
                occupancy.get((arc, w)) == merged for arc in prov.shared_suffix.arcs
            )

        for d in order:
            cyc = cycles[d.id][0]
            base_cost = len(cyc.working) + len(cyc.protection)
            first_fit_w = _first_fit(
                occupancy, cyc.working.arcs + cyc.protection.arcs, grid
            )
            # best (incremental cost, -saving, partner id)
            best_key = None
            best: tuple[Provision, Provision] | None = None
            peers = [
                provisions[p.id]
                for p in groups[d.destination]
                if p.id in provisions and not provisions[p.id].coded
            ]
            tentative = Provision(d.id, cyc.working, cyc.protection)
            for peer in peers:
                verdict = check_codeable(tentative, peer)
                if not isinstance(verdict, CodingCandidate):
                    continue
                if first_fit_w is not None and peer.wavelength > first_fit_w:
                    continue
                inc = base_cost - verdict.saving
                coded = replace(
                    tentative,
                    wavelength=peer.wavelength,
                    partner=peer.demand,
                    coding_node=verdict.coding_node,
                    shared_suffix=verdict.shared_suffix,
                )
                if not coded_option_feasible(coded, peer):
                    continue
                key = (inc, -verdict.saving, peer.demand)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (
                        coded,
                        replace(
                            peer,
                            partner=d.id,
                            coding_node=verdict.coding_node,
                            shared_suffix=verdict.shared_suffix,
                        ),
                    )

            if best is not None:
                prov, partner = best
                w = prov.wavelength
                for arc in prov.working.arcs:
                    occupancy[(arc, w)] = {working_signal(d.id)}
                for arc in prov.presuffix_arcs:
                    occupancy[(arc, w)] = {protection_signal(d.id)}
                merged = coded_signal(d.id, partner.demand)
                for arc in prov.shared_suffix.arcs:
                    occupancy[(arc, w)] = {merged}
                provisions[d.id] = prov
                provisions[partner.demand] = partner
            else:
                cyc, w = _fit_cycle(topology, occupancy, cycles[d.id], grid, d)
                for arc in cyc.working.arcs:
                    occupancy[(arc, w)] = {working_signal(d.id)}
                for arc in cyc.protection.arcs:
                    occupancy[(arc, w)] = {protection_signal(d.id)}
                provisions[d.id] = Provision(d.id, cyc.working, cyc.protection, w)
        return provisions

    return Plan.from_provisions(_with_repair(base_order, attempt))
