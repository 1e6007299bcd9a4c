"""Codeability rules for XOR-merged protection sharing.

Two demands may share one protection wavelength channel when:
  i)   they terminate at the same destination,
  ii)  they use (or can use) the same wavelength,
  iii) their working paths are fiber-disjoint from each other and from the
       partner's protection path (both cross pairs),
  iv)  their protection paths share a common trailing sub-path ending at
       the destination (the coded segment).

The first node of the shared suffix is the coding node, where the two
protection signals are XOR-combined; decoding happens at the destination.
"""

from __future__ import annotations

from dataclasses import dataclass

from .paths import Path

CONDITION_COMMON_DESTINATION = "condition i: destinations differ"
CONDITION_SAME_WAVELENGTH = "condition ii: wavelengths differ"
CONDITION_DISJOINT = "condition iii: working/protection paths not fiber-disjoint"
CONDITION_COMMON_SUFFIX = "condition iv: protection paths share no common suffix"


@dataclass(frozen=True)
class CodingCandidate:
    """An accepted pairing: where to encode and how many arc-wavelength
    cells the merge saves."""

    demand_a: int
    demand_b: int
    coding_node: int
    shared_suffix: Path
    saving: int


def common_suffix(p1: Path, p2: Path) -> Path | None:
    """Maximal common trailing arc sequence of two paths with the same
    destination; None when even the last arcs differ."""
    if p1.destination != p2.destination:
        raise ValueError("paths end at different destinations")
    n = 0
    while n < min(len(p1), len(p2)) and p1.arcs[-1 - n] == p2.arcs[-1 - n]:
        n += 1
    if n == 0:
        return None
    return p1.tail(n)


def check_codeable(prov_a, prov_b) -> CodingCandidate | str:
    """Verdict for pairing two provisioned demands.

    Returns a CodingCandidate when all four conditions hold, otherwise the
    first violated condition as a string.  Wavelengths still unassigned on
    either side leave condition ii to the caller (a shared feasible
    wavelength must then exist at assignment time).
    """
    if prov_a.working.destination != prov_b.working.destination:
        return CONDITION_COMMON_DESTINATION
    if (
        prov_a.wavelength is not None
        and prov_b.wavelength is not None
        and prov_a.wavelength != prov_b.wavelength
    ):
        return CONDITION_SAME_WAVELENGTH
    wa, wb = prov_a.working.fibers, prov_b.working.fibers
    pa, pb = prov_a.protection.fibers, prov_b.protection.fibers
    if wa & wb or wa & pb or wb & pa:
        return CONDITION_DISJOINT
    suffix = common_suffix(prov_a.protection, prov_b.protection)
    if suffix is None:
        return CONDITION_COMMON_SUFFIX
    return CodingCandidate(
        demand_a=prov_a.demand,
        demand_b=prov_b.demand,
        coding_node=suffix.source,
        shared_suffix=suffix,
        saving=len(suffix),
    )
