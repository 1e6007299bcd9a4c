"""Edge-based integer linear program for the two designs, plus a
cycle-based branch-and-bound exact solver for desk-scale instances.

Variable families (all binary):
  a[d,e,w]     working signal of demand d on arc e, wavelength w
  b[d,e,w]     own (pre-coding) protection signal
  t[d,w]       wavelength selection (one per demand, no conversion)
  z[d,v,e,w]   coded protection flow of d downstream of encoding node v
  dl[d,v]      d encodes at node v
  f[d1,d2]     d1 paired with d2 (d1 < d2, common destination)
  g[e,w]       (arc, wavelength) cell occupied — the objective

Auxiliaries: pr[d1,d2,v] (pair encodes at v) and dup[d1,d2,v,e,w]
(merged-cell double count), which linearize the shared-channel rules.

Constraint families:
  C1 working flow conservation        C6 cross-disjointness when paired
  C2 protection flow (b, then z)      C7 shared-channel equality of z
  C3 own working/protection disjoint  C8 same wavelength when paired
  C4 wavelength binding               C9 clash / occupancy coupling
  C5 pairing logic
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

from .coding import CodingCandidate, check_codeable
from .paths import Cycle, k_shortest_cycles
from .plan import (
    CapacityError,
    Cell,
    Plan,
    Provision,
    coded_signal,
    protection_signal,
    working_signal,
)
from .topology import DemandSet, Topology, WavelengthGrid

WNC = "WNC"
NC = "NC"


class BudgetError(ValueError):
    """Instance exceeds the configured variable budget."""


@dataclass
class Constraint:
    name: str
    coeffs: dict[str, float]
    sense: str  # "<=", ">=", "="
    rhs: float


@dataclass
class IlpModel:
    mode: str
    variables: list[str]
    objective: dict[str, float]
    constraints: list[Constraint]

    def add(self, name: str, coeffs: dict[str, float], sense: str, rhs: float):
        self.constraints.append(Constraint(name, coeffs, sense, rhs))


def _pairable(demands: DemandSet) -> list[tuple[int, int]]:
    by_dest: dict[int, list[int]] = {}
    for d in demands:
        by_dest.setdefault(d.destination, []).append(d.id)
    pairs = []
    for ids in by_dest.values():
        ids = sorted(ids)
        for i, d1 in enumerate(ids):
            for d2 in ids[i + 1 :]:
                pairs.append((d1, d2))
    return sorted(pairs)


def build_model(
    topology: Topology,
    demands: DemandSet,
    grid: WavelengthGrid,
    mode: str = WNC,
    variable_budget: int = 1_000_000,
) -> IlpModel:
    if mode not in (WNC, NC):
        raise ValueError(f"mode must be {WNC} or {NC}")
    arcs = topology.arcs
    ws = range(grid.count)
    dems = {d.id: d for d in demands}
    pairs = _pairable(demands) if mode == NC else []
    # encoding node candidates: anywhere except the demand's destination
    enc = {
        did: [v for v in sorted(topology.nodes) if v != d.destination]
        for did, d in dems.items()
    }

    n_vars = len(dems) * len(arcs) * grid.count * 2
    n_vars += len(dems) * grid.count + len(arcs) * grid.count
    if mode == NC:
        for did in dems:
            n_vars += len(enc[did]) * (len(arcs) * grid.count + 1)
        for d1, d2 in pairs:
            nv = len(enc[d1])
            n_vars += 1 + nv + nv * len(arcs) * grid.count
    if n_vars > variable_budget:
        raise BudgetError(
            f"{n_vars} variables exceed the budget of {variable_budget}"
        )

    model = IlpModel(mode, [], {}, [])

    def a(d, e, w):
        return f"a_{d}_{e[0]}_{e[1]}_{w}"

    def b(d, e, w):
        return f"b_{d}_{e[0]}_{e[1]}_{w}"

    def t(d, w):
        return f"t_{d}_{w}"

    def z(d, v, e, w):
        return f"z_{d}_{v}_{e[0]}_{e[1]}_{w}"

    def dl(d, v):
        return f"dl_{d}_{v}"

    def fvar(d1, d2):
        return f"f_{d1}_{d2}"

    def pr(d1, d2, v):
        return f"pr_{d1}_{d2}_{v}"

    def dup(d1, d2, v, e, w):
        return f"dup_{d1}_{d2}_{v}_{e[0]}_{e[1]}_{w}"

    def g(e, w):
        return f"g_{e[0]}_{e[1]}_{w}"

    for did in sorted(dems):
        for e in arcs:
            for w in ws:
                model.variables.append(a(did, e, w))
        for e in arcs:
            for w in ws:
                model.variables.append(b(did, e, w))
        for w in ws:
            model.variables.append(t(did, w))
    if mode == NC:
        for did in sorted(dems):
            for v in enc[did]:
                model.variables.append(dl(did, v))
                for e in arcs:
                    for w in ws:
                        model.variables.append(z(did, v, e, w))
        for d1, d2 in pairs:
            model.variables.append(fvar(d1, d2))
            for v in enc[d1]:
                model.variables.append(pr(d1, d2, v))
                for e in arcs:
                    for w in ws:
                        model.variables.append(dup(d1, d2, v, e, w))
    for e in arcs:
        for w in ws:
            name = g(e, w)
            model.variables.append(name)
            model.objective[name] = 1.0

    out_arcs = {n: [e for e in arcs if e[0] == n] for n in sorted(topology.nodes)}
    in_arcs = {n: [e for e in arcs if e[1] == n] for n in sorted(topology.nodes)}

    # C1: unit working flow per demand
    for did, d in sorted(dems.items()):
        for n in sorted(topology.nodes):
            coeffs: dict[str, float] = {}
            for e in out_arcs[n]:
                for w in ws:
                    coeffs[a(did, e, w)] = 1.0
            for e in in_arcs[n]:
                for w in ws:
                    coeffs[a(did, e, w)] = -1.0
            rhs = 1.0 if n == d.source else (-1.0 if n == d.destination else 0.0)
            model.add(f"C1_{did}_{n}", coeffs, "=", rhs)

    # C2: protection flow on b; with encoding, b terminates at the coding node
    for did, d in sorted(dems.items()):
        for n in sorted(topology.nodes):
            coeffs = {}
            for e in out_arcs[n]:
                for w in ws:
                    coeffs[b(did, e, w)] = 1.0
            for e in in_arcs[n]:
                for w in ws:
                    coeffs[b(did, e, w)] = -1.0
            if mode == NC and n == d.destination:
                for v in enc[did]:
                    coeffs[dl(did, v)] = -1.0
                model.add(f"C2_{did}_{n}", coeffs, "=", -1.0)
            elif mode == NC:
                if n in enc[did]:
                    coeffs[dl(did, n)] = 1.0
                rhs = 1.0 if n == d.source else 0.0
                model.add(f"C2_{did}_{n}", coeffs, "=", rhs)
            else:
                rhs = 1.0 if n == d.source else (-1.0 if n == d.destination else 0.0)
                model.add(f"C2_{did}_{n}", coeffs, "=", rhs)

    # C2z: coded flow runs from the selected encoding node to the destination
    if mode == NC:
        for did, d in sorted(dems.items()):
            for v in enc[did]:
                for n in sorted(topology.nodes):
                    coeffs = {}
                    for e in out_arcs[n]:
                        for w in ws:
                            coeffs[z(did, v, e, w)] = 1.0
                    for e in in_arcs[n]:
                        for w in ws:
                            coeffs[z(did, v, e, w)] = -1.0
                    if n == v:
                        coeffs[dl(did, v)] = coeffs.get(dl(did, v), 0.0) - 1.0
                    elif n == d.destination:
                        coeffs[dl(did, v)] = coeffs.get(dl(did, v), 0.0) + 1.0
                    model.add(f"C2z_{did}_{v}_{n}", coeffs, "=", 0.0)

    # C3: per demand, each fiber serves working or protection, once, one way
    for did in sorted(dems):
        for u, v in sorted(topology.fibers):
            coeffs = {}
            for e in ((u, v), (v, u)):
                for w in ws:
                    coeffs[a(did, e, w)] = 1.0
                    coeffs[b(did, e, w)] = 1.0
                    if mode == NC:
                        for vv in enc[did]:
                            coeffs[z(did, vv, e, w)] = 1.0
            model.add(f"C3_{did}_{u}_{v}", coeffs, "<=", 1.0)

    # C4: signals only on the demand's selected wavelength
    big_m = float(len(arcs))
    for did in sorted(dems):
        for w in ws:
            coeffs = {a(did, e, w): 1.0 for e in arcs}
            coeffs[t(did, w)] = -big_m
            model.add(f"C4a_{did}_{w}", coeffs, "<=", 0.0)
            coeffs = {b(did, e, w): 1.0 for e in arcs}
            coeffs[t(did, w)] = -big_m
            model.add(f"C4b_{did}_{w}", coeffs, "<=", 0.0)
            if mode == NC:
                for v in enc[did]:
                    coeffs = {z(did, v, e, w): 1.0 for e in arcs}
                    coeffs[t(did, w)] = -big_m
                    model.add(f"C4z_{did}_{v}_{w}", coeffs, "<=", 0.0)
        model.add(f"C4t_{did}", {t(did, w): 1.0 for w in ws}, "=", 1.0)

    if mode == NC:
        # C5: at most one partner; pairing fixes a common encoding node
        for did in sorted(dems):
            coeffs = {}
            for d1, d2 in pairs:
                if did in (d1, d2):
                    coeffs[fvar(d1, d2)] = 1.0
            if coeffs:
                model.add(f"C5a_{did}", coeffs, "<=", 1.0)
        for d1, d2 in pairs:
            coeffs = {fvar(d1, d2): 1.0}
            for v in enc[d1]:
                coeffs[pr(d1, d2, v)] = -1.0
            model.add(f"C5b_{d1}_{d2}", coeffs, "=", 0.0)
        for did in sorted(dems):
            for v in enc[did]:
                coeffs = {dl(did, v): 1.0}
                for d1, d2 in pairs:
                    if did in (d1, d2):
                        coeffs[pr(d1, d2, v)] = -1.0
                model.add(f"C5c_{did}_{v}", coeffs, "=", 0.0)

        # C6: pairing activates the three cross-disjointness requirements
        for d1, d2 in pairs:
            for u, v in sorted(topology.fibers):
                fib = ((u, v), (v, u))
                w_terms = {
                    1: {a(d1, e, w): 1.0 for e in fib for w in ws},
                    2: {a(d2, e, w): 1.0 for e in fib for w in ws},
                }
                p_terms = {}
                for idx, dd in ((1, d1), (2, d2)):
                    terms = {}
                    for e in fib:
                        for w in ws:
                            terms[b(dd, e, w)] = 1.0
                            for vv in enc[dd]:
                                terms[z(dd, vv, e, w)] = 1.0
                    p_terms[idx] = terms
                for tag, lhs in (
                    ("ww", {**w_terms[1], **w_terms[2]}),
                    ("wp", {**w_terms[1], **p_terms[2]}),
                    ("pw", {**w_terms[2], **p_terms[1]}),
                ):
                    coeffs = dict(lhs)
                    coeffs[fvar(d1, d2)] = 1.0
                    model.add(f"C6{tag}_{d1}_{d2}_{u}_{v}", coeffs, "<=", 2.0)

        # C7: paired coded flows are identical past the common coding node
        for d1, d2 in pairs:
            for v in enc[d1]:
                for e in arcs:
                    for w in ws:
                        model.add(
                            f"C7a_{d1}_{d2}_{v}_{e[0]}_{e[1]}_{w}",
                            {
                                z(d1, v, e, w): 1.0,
                                z(d2, v, e, w): -1.0,
                                pr(d1, d2, v): 1.0,
                            },
                            "<=",
                            1.0,
                        )
                        model.add(
                            f"C7b_{d1}_{d2}_{v}_{e[0]}_{e[1]}_{w}",
                            {
                                z(d2, v, e, w): 1.0,
                                z(d1, v, e, w): -1.0,
                                pr(d1, d2, v): 1.0,
                            },
                            "<=",
                            1.0,
                        )

        # C8: paired demands ride the same wavelength
        for d1, d2 in pairs:
            for w in ws:
                model.add(
                    f"C8a_{d1}_{d2}_{w}",
                    {t(d1, w): 1.0, t(d2, w): -1.0, fvar(d1, d2): 1.0},
                    "<=",
                    1.0,
                )
                model.add(
                    f"C8b_{d1}_{d2}_{w}",
                    {t(d2, w): 1.0, t(d1, w): -1.0, fvar(d1, d2): 1.0},
                    "<=",
                    1.0,
                )

        # dup may fire only where a pair genuinely shares the coded cell
        for d1, d2 in pairs:
            for v in enc[d1]:
                for e in arcs:
                    for w in ws:
                        dname = dup(d1, d2, v, e, w)
                        model.add(
                            f"C9d1_{dname}", {dname: 1.0, z(d1, v, e, w): -1.0}, "<=", 0.0
                        )
                        model.add(
                            f"C9d2_{dname}", {dname: 1.0, z(d2, v, e, w): -1.0}, "<=", 0.0
                        )
                        model.add(
                            f"C9d3_{dname}", {dname: 1.0, pr(d1, d2, v): -1.0}, "<=", 0.0
                        )

    # C9: clash and occupancy — merged coded cells are counted once
    for e in arcs:
        for w in ws:
            coeffs = {}
            for did in sorted(dems):
                coeffs[a(did, e, w)] = 1.0
                coeffs[b(did, e, w)] = 1.0
                if mode == NC:
                    for v in enc[did]:
                        coeffs[z(did, v, e, w)] = 1.0
            if mode == NC:
                for d1, d2 in pairs:
                    for v in enc[d1]:
                        coeffs[dup(d1, d2, v, e, w)] = -1.0
            coeffs[g(e, w)] = -1.0
            model.add(f"C9_{e[0]}_{e[1]}_{w}", coeffs, "<=", 0.0)

    return model


def model_to_lp(model: IlpModel) -> str:
    """Serialize to the LP text interchange format, deterministically."""
    lines = ["Minimize"]
    obj = " + ".join(name for name in model.variables if name in model.objective)
    lines.append(f" obj: {obj}")
    lines.append("Subject To")
    for c in model.constraints:
        terms = []
        for name in sorted(c.coeffs):
            coef = c.coeffs[name]
            if coef == 0:
                continue
            sign = "+" if coef > 0 else "-"
            mag = abs(coef)
            coef_txt = "" if mag == 1 else f"{mag:g} "
            terms.append(f"{sign} {coef_txt}{name}")
        body = " ".join(terms)
        if body.startswith("+ "):
            body = body[2:]
        sense = {"<=": "<=", ">=": ">=", "=": "="}[c.sense]
        lines.append(f" {c.name}: {body} {sense} {c.rhs:g}")
    lines.append("Binary")
    for name in model.variables:
        lines.append(f" {name}")
    lines.append("End")
    return "\n".join(lines) + "\n"


def export_model(model: IlpModel, path) -> None:
    from pathlib import Path as _P

    _P(path).write_text(model_to_lp(model))


# ---------------------------------------------------------------------------
# exact search over per-demand (cycle, wavelength, partner) choices
# ---------------------------------------------------------------------------


@dataclass
class ExactResult:
    plan: Plan
    optimal: bool
    cost: int
    nodes_explored: int


def exact_solve(
    topology: Topology,
    demands: DemandSet,
    grid: WavelengthGrid,
    mode: str = NC,
    k: int = 8,
    time_limit: float = 60.0,
    demand_cap: int = 40,
    use_bound: bool = True,
) -> ExactResult:
    """Branch and bound over candidate cycles.

    Optimality is relative to the k-shortest-cycle candidate sets and the
    first-fit wavelength policy for uncoded demands (coded demands adopt
    their partner's wavelength).  Branches are explored cheapest first,
    so good incumbents appear early even when the search is cut off by
    the time limit.
    """
    if mode not in (WNC, NC):
        raise ValueError(f"mode must be {WNC} or {NC}")
    if len(demands) > demand_cap:
        raise ValueError(f"{len(demands)} demands exceed the cap of {demand_cap}")

    cycles: dict[int, list[Cycle]] = {}
    for d in demands:
        cs = k_shortest_cycles(topology, d.source, d.destination, k)
        if not cs:
            raise ValueError(f"no fiber-disjoint cycle for demand {d.id}")
        cycles[d.id] = cs

    groups: dict[int, list] = {}
    for d in demands:
        groups.setdefault(d.destination, []).append(d)
    group_order = sorted(groups, key=lambda v: (-len(groups[v]), v))
    order = []
    for v in group_order:
        order.extend(
            sorted(groups[v], key=lambda d: (-cycles[d.id][0].total_length, d.id))
        )

    base_len = {d.id: len(cycles[d.id][0].working) + len(cycles[d.id][0].protection)
                for d in demands}
    max_save: dict[int, int] = {d.id: 0 for d in demands}
    if mode == NC:
        from .coding import common_suffix

        for v, members in groups.items():
            for d in members:
                best = 0
                for other in members:
                    if other.id == d.id:
                        continue
                    for c1 in cycles[d.id]:
                        for c2 in cycles[other.id]:
                            sfx = common_suffix(c1.protection, c2.protection)
                            if sfx is not None:
                                best = max(best, len(sfx))
                max_save[d.id] = best

    suffix_bound = [0] * (len(order) + 1)
    for i in range(len(order) - 1, -1, -1):
        d = order[i]
        suffix_bound[i] = suffix_bound[i + 1] + max(
            0, base_len[d.id] - max_save[d.id]
        )

    occupancy: dict[Cell, set[str]] = {}
    provisions: dict[int, Provision] = {}
    best_plan: dict[int, Provision] | None = None
    best_cost = float("inf")
    nodes_explored = 0
    deadline = time.monotonic() + time_limit
    timed_out = False

    def coded_feasible(prov: Provision, partner: Provision) -> bool:
        w = partner.wavelength
        for arc in prov.working.arcs + prov.presuffix_arcs:
            if (arc, w) in occupancy:
                return False
        merged = {protection_signal(partner.demand)}
        return all(
            occupancy.get((arc, w)) == merged for arc in prov.shared_suffix.arcs
        )

    def place(prov: Provision, partner: Provision | None) -> list:
        undo = []
        w = prov.wavelength
        for arc in prov.working.arcs:
            occupancy[(arc, w)] = {working_signal(prov.demand)}
            undo.append(("del", (arc, w)))
        if partner is None:
            for arc in prov.protection.arcs:
                occupancy[(arc, w)] = {protection_signal(prov.demand)}
                undo.append(("del", (arc, w)))
            provisions[prov.demand] = prov
            undo.append(("pop", prov.demand, None))
        else:
            for arc in prov.presuffix_arcs:
                occupancy[(arc, w)] = {protection_signal(prov.demand)}
                undo.append(("del", (arc, w)))
            merged = coded_signal(prov.demand, partner.demand)
            for arc in prov.shared_suffix.arcs:
                old = occupancy[(arc, w)]
                occupancy[(arc, w)] = {merged}
                undo.append(("restore", (arc, w), old))
            old_partner = provisions[partner.demand]
            provisions[prov.demand] = prov
            provisions[partner.demand] = replace(
                old_partner,
                partner=prov.demand,
                coding_node=prov.coding_node,
                shared_suffix=prov.shared_suffix,
            )
            undo.append(("pop", prov.demand, None))
            undo.append(("set", partner.demand, old_partner))
        return undo

    def unwind(undo: list) -> None:
        for op in reversed(undo):
            if op[0] == "del":
                del occupancy[op[1]]
            elif op[0] == "restore":
                occupancy[op[1]] = op[2]
            elif op[0] == "pop":
                del provisions[op[1]]
            elif op[0] == "set":
                provisions[op[1]] = op[2]

    def dfs(i: int, cost: int) -> None:
        nonlocal best_plan, best_cost, nodes_explored, timed_out
        if timed_out:
            return
        nodes_explored += 1
        if nodes_explored % 1024 == 0 and time.monotonic() > deadline:
            timed_out = True
            return
        if i == len(order):
            if cost < best_cost:
                best_cost = cost
                best_plan = dict(provisions)
            return
        if use_bound and cost + suffix_bound[i] >= best_cost:
            return
        d = order[i]
        options = []
        peers = (
            [
                provisions[p.id]
                for p in groups[d.destination]
                if p.id in provisions and not provisions[p.id].coded
            ]
            if mode == NC
            else []
        )
        for ci, cyc in enumerate(cycles[d.id]):
            inc_unc = len(cyc.working) + len(cyc.protection)
            for peer in peers:
                tentative = Provision(d.id, cyc.working, cyc.protection)
                verdict = check_codeable(tentative, peer)
                if not isinstance(verdict, CodingCandidate):
                    continue
                coded = replace(
                    tentative,
                    wavelength=peer.wavelength,
                    partner=peer.demand,
                    coding_node=verdict.coding_node,
                    shared_suffix=verdict.shared_suffix,
                )
                if not coded_feasible(coded, peer):
                    continue
                inc = inc_unc - verdict.saving
                options.append(
                    ((inc, 0, -verdict.saving, peer.demand, ci), coded, peer)
                )
            try:
                arcs = cyc.working.arcs + cyc.protection.arcs
                w = next(
                    w
                    for w in range(grid.count)
                    if all((arc, w) not in occupancy for arc in arcs)
                )
            except StopIteration:
                continue
            uncoded = Provision(d.id, cyc.working, cyc.protection, w)
            options.append(((inc_unc, 1, 0, -1, ci), uncoded, None))
        options.sort(key=lambda o: o[0])
        for (inc, *_), prov, partner in options:
            undo = place(prov, partner)
            dfs(i + 1, cost + inc)
            unwind(undo)
            if timed_out:
                return

    dfs(0, 0)
    if best_plan is None:
        raise CapacityError(order[0].id if order else -1)
    return ExactResult(
        plan=Plan.from_provisions(best_plan),
        optimal=not timed_out,
        cost=int(best_cost),
        nodes_explored=nodes_explored,
    )
