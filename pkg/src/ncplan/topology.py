"""Physical topology, wavelength grid, and traffic demand model.

Nodes are dense integers 0..N-1.  Fibers are undirected node pairs; every
fiber carries two directed arcs, and wavelength occupancy is always counted
per directed arc.  All types are immutable after construction.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

Arc = tuple[int, int]
Fiber = tuple[int, int]

BUILTIN_NAMES = ("six_node", "nsfnet", "cost239")


class TopologyError(ValueError):
    """Invalid topology (structure or invariant violation)."""


class TopologyParseError(TopologyError):
    """Malformed topology or demand file; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def fiber_of(u: int, v: int) -> Fiber:
    """Canonical (sorted) undirected fiber key for an arc or node pair."""
    return (u, v) if u < v else (v, u)


class Topology:
    """An undirected fiber graph expanded into directed arcs.

    The graph must be 2-edge-connected so that every node pair admits a
    fiber-disjoint working/protection cycle.
    """

    def __init__(
        self,
        name: str,
        nodes: Iterable[int],
        fibers: Iterable[Fiber],
        fiber_length: Mapping[Fiber, float] | None = None,
    ):
        self.name = name
        self.nodes = frozenset(nodes)
        n = len(self.nodes)
        if self.nodes != frozenset(range(n)):
            raise TopologyError(f"node ids must be dense 0..{n - 1}")

        seen: set[Fiber] = set()
        for u, v in fibers:
            if u == v:
                raise TopologyError(f"self-loop fiber {u}-{v}")
            if u not in self.nodes or v not in self.nodes:
                raise TopologyError(f"fiber {u}-{v} references unknown node")
            f = fiber_of(u, v)
            if f in seen:
                raise TopologyError(f"duplicate fiber {f[0]}-{f[1]}")
            seen.add(f)
        self.fibers = frozenset(seen)

        lengths = dict(fiber_length or {})
        self.arc_length: dict[Arc, float] = {}
        for u, v in self.fibers:
            w = float(lengths.get((u, v), 1.0))
            if w <= 0:
                raise TopologyError(f"non-positive length on fiber {u}-{v}")
            self.arc_length[(u, v)] = w
            self.arc_length[(v, u)] = w

        self._check_two_edge_connected()

        # sorted adjacency gives deterministic traversal order everywhere
        adj: dict[int, list[int]] = {v: [] for v in range(n)}
        for u, v in self.fibers:
            adj[u].append(v)
            adj[v].append(u)
        self.adjacency = {v: tuple(sorted(nb)) for v, nb in adj.items()}

    @classmethod
    def restricted_to(cls, base: "Topology", arcs: Iterable[Arc]) -> "Topology":
        """Unvalidated view of `base` keeping only the given directed arcs.

        Used for per-wavelength routing layers; the view may be
        disconnected or asymmetric, so invariant checks are skipped.
        """
        t = cls.__new__(cls)
        t.name = base.name
        t.nodes = base.nodes
        t.arc_length = {
            a: w for a, w in base.arc_length.items() if a in set(arcs)
        }
        t.fibers = frozenset(fiber_of(u, v) for u, v in t.arc_length)
        adj: dict[int, list[int]] = {v: [] for v in sorted(base.nodes)}
        for u, v in t.arc_length:
            adj[u].append(v)
        t.adjacency = {v: tuple(sorted(nb)) for v, nb in adj.items()}
        return t

    def _check_two_edge_connected(self) -> None:
        if len(self.nodes) < 2:
            raise TopologyError("topology needs at least 2 nodes")
        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(self.fibers)
        if not nx.is_connected(g):
            raise TopologyError("graph is not connected")
        for u, v in nx.bridges(g):
            raise TopologyError(
                f"graph is not 2-edge-connected: fiber {u}-{v} is a cut edge"
            )

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def arcs(self) -> list[Arc]:
        return sorted(self.arc_length)

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arc_length

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Topology)
            and self.name == other.name
            and self.nodes == other.nodes
            and self.fibers == other.fibers
            and self.arc_length == other.arc_length
        )

    def __repr__(self) -> str:
        return (
            f"Topology({self.name!r}, {self.n_nodes} nodes, "
            f"{len(self.fibers)} fibers)"
        )


@dataclass(frozen=True)
class WavelengthGrid:
    """Per-fiber wavelength channels, indexed 0..count-1."""

    count: int = 40

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("wavelength count must be >= 1")


@dataclass(frozen=True, order=True)
class Demand:
    """Unit-capacity directed traffic request."""

    id: int
    source: int
    destination: int

    def __post_init__(self):
        if self.source == self.destination:
            raise ValueError(f"demand {self.id}: source equals destination")


@dataclass(frozen=True)
class DemandSet:
    """A collection of demands, at most one per ordered node pair.

    Generated sets carry the (load_fraction, seed, sample_index) that
    produced them; sets read from a file leave those as None.
    """

    demands: tuple[Demand, ...]
    load_fraction: float | None = None
    seed: int | None = None
    sample_index: int | None = None

    def __post_init__(self):
        pairs = {(d.source, d.destination) for d in self.demands}
        if len(pairs) != len(self.demands):
            raise ValueError("duplicate (source, destination) pair in demand set")

    def __len__(self) -> int:
        return len(self.demands)

    def __iter__(self):
        return iter(self.demands)


def generate_demands(
    topology: Topology, load_fraction: float, seed: int, sample_index: int = 0
) -> DemandSet:
    """Sample round(load_fraction * N * (N-1)) ordered node pairs without
    replacement, deterministically in (seed, sample_index).

    Uses numpy's PCG64 generator seeded with SeedSequence([seed, sample_index]),
    which is stable across platforms and numpy releases.
    """
    if not 0 < load_fraction <= 1:
        raise ValueError("load_fraction must be in (0, 1]")
    n = topology.n_nodes
    pairs = [(s, t) for s in range(n) for t in range(n) if s != t]
    count = round(load_fraction * n * (n - 1))
    rng = np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, sample_index])
    chosen = sorted(pairs[i] for i in rng.choice(len(pairs), size=count, replace=False))
    demands = tuple(Demand(i, s, t) for i, (s, t) in enumerate(chosen))
    return DemandSet(demands, load_fraction, seed, sample_index)


# ---------------------------------------------------------------------------
# file formats
#
# Topology: "node <id>" and "fiber <u> <v> [length]" lines, '#' comments.
# Demands:  "demand <id> <src> <dst>" lines.
# ---------------------------------------------------------------------------


def parse_topology(text: str, name: str = "topology") -> Topology:
    nodes: list[int] = []
    fibers: list[Fiber] = []
    lengths: dict[Fiber, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "node" and len(parts) == 2:
                nodes.append(int(parts[1]))
            elif parts[0] == "fiber" and len(parts) in (3, 4):
                u, v = int(parts[1]), int(parts[2])
                if u == v:
                    raise TopologyParseError(lineno, f"self-loop fiber {u} {v}")
                f = fiber_of(u, v)
                fibers.append(f)
                if len(parts) == 4:
                    lengths[f] = float(parts[3])
            else:
                raise TopologyParseError(lineno, f"unrecognized line: {raw!r}")
        except TopologyParseError:
            raise
        except ValueError as exc:
            raise TopologyParseError(lineno, str(exc)) from exc
    try:
        return Topology(name, nodes, fibers, lengths)
    except TopologyParseError:
        raise
    except TopologyError as exc:
        raise TopologyError(f"{name}: {exc}") from exc


def topology_to_text(topology: Topology) -> str:
    lines = [f"node {v}" for v in sorted(topology.nodes)]
    for u, v in sorted(topology.fibers):
        w = topology.arc_length[(u, v)]
        if w == 1.0:
            lines.append(f"fiber {u} {v}")
        else:
            lines.append(f"fiber {u} {v} {w:g}")
    return "\n".join(lines) + "\n"


def load_topology(path, name: str | None = None) -> Topology:
    from pathlib import Path as _P

    p = _P(path)
    return parse_topology(p.read_text(), name or p.stem)


def builtin_topology(name: str) -> Topology:
    """One of the bundled benchmark topologies: six_node, nsfnet, cost239."""
    if name not in BUILTIN_NAMES:
        raise ValueError(f"unknown topology {name!r}; choose from {BUILTIN_NAMES}")
    text = (
        importlib.resources.files("ncplan.data").joinpath(f"{name}.topo").read_text()
    )
    return parse_topology(text, name)


def parse_demands(text: str) -> DemandSet:
    demands: list[Demand] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "demand" or len(parts) != 4:
            raise TopologyParseError(lineno, f"unrecognized line: {raw!r}")
        try:
            demands.append(Demand(int(parts[1]), int(parts[2]), int(parts[3])))
        except ValueError as exc:
            raise TopologyParseError(lineno, str(exc)) from exc
    return DemandSet(tuple(demands))


def demands_to_text(demand_set: DemandSet) -> str:
    lines = [f"demand {d.id} {d.source} {d.destination}" for d in demand_set]
    return "\n".join(lines) + "\n"


def load_demands(path) -> DemandSet:
    from pathlib import Path as _P

    return parse_demands(_P(path).read_text())
