"""Provisioned plans: per-demand lightpaths, coding pairings, occupancy.

Cost is the number of occupied (directed arc, wavelength) cells.  A coded
pair's shared protection suffix occupies each cell once, carrying the
merged XOR signal of both demands.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

from .coding import CodingCandidate, check_codeable, common_suffix
from .paths import Arc, Path, make_path
from .topology import DemandSet, Topology, WavelengthGrid

Cell = tuple[Arc, int]


class CapacityError(RuntimeError):
    """No wavelength left for a demand."""

    def __init__(self, demand_id: int):
        super().__init__(f"wavelength grid exhausted at demand {demand_id}")
        self.demand_id = demand_id


@dataclass(frozen=True)
class Provision:
    """One demand's routed cycle, wavelength, and (optional) coding state."""

    demand: int
    working: Path
    protection: Path
    wavelength: int | None = None
    partner: int | None = None
    coding_node: int | None = None
    shared_suffix: Path | None = None

    def __post_init__(self):
        if self.working.fibers & self.protection.fibers:
            raise ValueError(f"demand {self.demand}: working/protection share a fiber")
        coded = (self.partner, self.coding_node, self.shared_suffix)
        if any(x is not None for x in coded) and any(x is None for x in coded):
            raise ValueError(
                f"demand {self.demand}: partner, coding_node and shared_suffix "
                "must be set together"
            )

    @property
    def coded(self) -> bool:
        return self.partner is not None

    @property
    def presuffix_arcs(self) -> tuple[Arc, ...]:
        """Protection arcs before the coded suffix (whole path if uncoded)."""
        if not self.coded:
            return self.protection.arcs
        return self.protection.arcs[: len(self.protection.arcs) - len(self.shared_suffix)]


def working_signal(d: int) -> str:
    return f"w{d}"


def protection_signal(d: int) -> str:
    return f"p{d}"


def coded_signal(d1: int, d2: int) -> str:
    a, b = sorted((d1, d2))
    return f"x{a}+{b}"


def build_occupancy(provisions: Mapping[int, Provision]) -> dict[Cell, set[str]]:
    """Occupancy map (arc, wavelength) -> set of occupying signal ids."""
    occ: dict[Cell, set[str]] = {}

    def put(arc: Arc, w: int, signal: str) -> None:
        occ.setdefault((arc, w), set()).add(signal)

    for p in provisions.values():
        w = p.wavelength
        for arc in p.working.arcs:
            put(arc, w, working_signal(p.demand))
        if p.coded:
            for arc in p.presuffix_arcs:
                put(arc, w, protection_signal(p.demand))
            for arc in p.shared_suffix.arcs:
                put(arc, w, coded_signal(p.demand, p.partner))
        else:
            for arc in p.protection.arcs:
                put(arc, w, protection_signal(p.demand))
    return occ


@dataclass(frozen=True)
class Plan:
    """Immutable planning result for one demand set."""

    provisions: dict[int, Provision]
    occupancy: dict[Cell, frozenset[str]]
    cost: int
    coding_ops: int

    @classmethod
    def from_provisions(cls, provisions: Mapping[int, Provision]) -> "Plan":
        occ = build_occupancy(provisions)
        pairs = {
            tuple(sorted((p.demand, p.partner)))
            for p in provisions.values()
            if p.coded
        }
        return cls(
            provisions=dict(provisions),
            occupancy={cell: frozenset(s) for cell, s in occ.items()},
            cost=len(occ),
            coding_ops=len(pairs),
        )


def validate_plan(
    topology: Topology,
    demands: DemandSet,
    grid: WavelengthGrid,
    plan: Plan,
) -> list[str]:
    """Referee for planners and the exact solver: returns every violated
    rule, or an empty list for a fully consistent plan."""
    out: list[str] = []
    by_id = {d.id: d for d in demands}
    if set(plan.provisions) != set(by_id):
        out.append("coverage: provisioned demand ids differ from the demand set")

    for did, p in sorted(plan.provisions.items()):
        d = by_id.get(did)
        if d is None:
            continue
        for path, label in ((p.working, "working"), (p.protection, "protection")):
            nodes = path.nodes
            if nodes[0] != d.source or nodes[-1] != d.destination:
                out.append(f"routing: demand {did} {label} path endpoints wrong")
            if len(set(nodes)) != len(nodes):
                out.append(f"routing: demand {did} {label} path not simple")
            for arc in path.arcs:
                if not topology.has_arc(*arc):
                    out.append(f"routing: demand {did} {label} uses missing arc {arc}")
        if p.working.fibers & p.protection.fibers:
            out.append(f"disjointness: demand {did} working/protection share a fiber")
        if p.wavelength is None:
            out.append(f"wavelength: demand {did} unassigned")
        elif not 0 <= p.wavelength < grid.count:
            out.append(f"wavelength: demand {did} index {p.wavelength} out of grid")

        if p.coded:
            q = plan.provisions.get(p.partner)
            if q is None or q.partner != did:
                out.append(f"pairing: demand {did} partner link not mutual")
                continue
            if q.wavelength != p.wavelength:
                out.append(f"condition ii: pair ({did},{p.partner}) wavelengths differ")
            if q.shared_suffix != p.shared_suffix and did < p.partner:
                out.append(f"pairing: pair ({did},{p.partner}) suffixes differ")
            if p.shared_suffix.arcs != p.protection.arcs[len(p.protection.arcs) - len(p.shared_suffix):]:
                out.append(f"pairing: demand {did} suffix is not a protection suffix")
            if p.shared_suffix.source != p.coding_node:
                out.append(f"pairing: demand {did} coding node not at suffix head")
            if did < p.partner:
                verdict = check_codeable(p, q)
                if isinstance(verdict, str):
                    out.append(f"pair ({did},{p.partner}) rejected: {verdict}")
                elif verdict.saving != len(p.shared_suffix):
                    out.append(
                        f"pairing: pair ({did},{p.partner}) suffix not maximal/consistent"
                    )

    rebuilt = build_occupancy(plan.provisions)
    if {c: frozenset(s) for c, s in rebuilt.items()} != plan.occupancy:
        out.append("occupancy: stored map differs from provisions")
    for cell, signals in sorted(rebuilt.items()):
        if len(signals) > 1:
            out.append(f"clash: cell {cell} carries {sorted(signals)}")
    if plan.cost != len(rebuilt):
        out.append(f"cost: stored {plan.cost} != occupied cells {len(rebuilt)}")

    arcs_total = sum(
        len(p.working) + len(p.protection) for p in plan.provisions.values()
    )
    savings = sum(
        len(p.shared_suffix)
        for p in plan.provisions.values()
        if p.coded and p.demand < p.partner
    )
    if arcs_total - savings != len(rebuilt):
        out.append(
            f"cost identity: sum(|W|+|P|) - savings = {arcs_total - savings} "
            f"!= occupied cells {len(rebuilt)}"
        )
    pairs = {
        tuple(sorted((p.demand, p.partner)))
        for p in plan.provisions.values()
        if p.coded
    }
    if plan.coding_ops != len(pairs):
        out.append(f"coding_ops: stored {plan.coding_ops} != pairs {len(pairs)}")
    return out


# ---------------------------------------------------------------------------
# plan text format:
#   prov <demand> <wavelength> W:<n0-n1-...> P:<n0-...> [CODE partner=<id> node=<v>]
#   cost <int>
#   coding_ops <int>
# ---------------------------------------------------------------------------


def _fmt_nodes(path: Path) -> str:
    return "-".join(str(v) for v in path.nodes)


def plan_to_text(plan: Plan) -> str:
    lines = []
    for did in sorted(plan.provisions):
        p = plan.provisions[did]
        line = (
            f"prov {did} {p.wavelength} "
            f"W:{_fmt_nodes(p.working)} P:{_fmt_nodes(p.protection)}"
        )
        if p.coded:
            line += f" CODE partner={p.partner} node={p.coding_node}"
        lines.append(line)
    lines.append(f"cost {plan.cost}")
    lines.append(f"coding_ops {plan.coding_ops}")
    return "\n".join(lines) + "\n"


def plan_from_text(topology: Topology, text: str) -> Plan:
    raw: dict[int, dict] = {}
    declared_cost = declared_ops = None
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "prov":
            entry = {
                "demand": int(parts[1]),
                "wavelength": int(parts[2]),
                "working": [int(x) for x in parts[3][2:].split("-")],
                "protection": [int(x) for x in parts[4][2:].split("-")],
                "partner": None,
                "coding_node": None,
            }
            if len(parts) > 5:
                if parts[5] != "CODE":
                    raise ValueError(f"line {lineno}: unrecognized trailer")
                entry["partner"] = int(parts[6].split("=")[1])
                entry["coding_node"] = int(parts[7].split("=")[1])
            raw[entry["demand"]] = entry
        elif parts[0] == "cost":
            declared_cost = int(parts[1])
        elif parts[0] == "coding_ops":
            declared_ops = int(parts[1])
        else:
            raise ValueError(f"line {lineno}: unrecognized line {rawline!r}")

    provisions: dict[int, Provision] = {}
    for did, e in raw.items():
        working = make_path(topology, e["working"])
        protection = make_path(topology, e["protection"])
        suffix = None
        if e["partner"] is not None:
            partner = raw.get(e["partner"])
            if partner is None:
                raise ValueError(f"demand {did}: partner {e['partner']} missing")
            suffix = common_suffix(
                protection, make_path(topology, partner["protection"])
            )
            if suffix is None:
                raise ValueError(f"demand {did}: coded pair has no common suffix")
        provisions[did] = Provision(
            demand=did,
            working=working,
            protection=protection,
            wavelength=e["wavelength"],
            partner=e["partner"],
            coding_node=e["coding_node"] if suffix is not None else None,
            shared_suffix=suffix,
        )
    plan = Plan.from_provisions(provisions)
    if declared_cost is not None and declared_cost != plan.cost:
        raise ValueError(f"declared cost {declared_cost} != computed {plan.cost}")
    if declared_ops is not None and declared_ops != plan.coding_ops:
        raise ValueError(
            f"declared coding_ops {declared_ops} != computed {plan.coding_ops}"
        )
    return plan
