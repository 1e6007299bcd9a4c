"""Shortest paths, Yen's k-shortest paths, minimum-cost fiber-disjoint
path pairs (Bhandari/Suurballe), and k-shortest-cycle enumeration.

All tie-breaks are lexicographic on node sequences so that results are
deterministic across runs and platforms.  "Disjoint" always means
undirected-fiber-disjoint: a fiber cut fails both directed arcs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Sequence

from .topology import Arc, Fiber, Topology, fiber_of


@dataclass(frozen=True)
class Path:
    """A simple directed path as an ordered arc sequence."""

    arcs: tuple[Arc, ...]
    length: float
    arc_lengths: tuple[float, ...] = ()

    def tail(self, n_arcs: int) -> "Path":
        """The sub-path formed by the last n_arcs arcs."""
        arcs = self.arcs[len(self.arcs) - n_arcs :]
        lengths = self.arc_lengths[len(self.arcs) - n_arcs :]
        return Path(arcs, sum(lengths), lengths)

    @property
    def nodes(self) -> tuple[int, ...]:
        return (self.arcs[0][0],) + tuple(v for _, v in self.arcs)

    @property
    def source(self) -> int:
        return self.arcs[0][0]

    @property
    def destination(self) -> int:
        return self.arcs[-1][1]

    @property
    def fibers(self) -> FrozenSet[Fiber]:
        return frozenset(fiber_of(u, v) for u, v in self.arcs)

    def __len__(self) -> int:
        return len(self.arcs)


def make_path(topology: Topology, nodes: Sequence[int]) -> Path:
    """Build a Path from a node sequence, validating arcs and simplicity."""
    if len(nodes) < 2:
        raise ValueError("path needs at least two nodes")
    if len(set(nodes)) != len(nodes):
        raise ValueError(f"path repeats a node: {nodes}")
    arcs = []
    for u, v in zip(nodes, nodes[1:]):
        if not topology.has_arc(u, v):
            raise ValueError(f"no arc {u}->{v} in {topology.name}")
        arcs.append((u, v))
    lengths = tuple(topology.arc_length[a] for a in arcs)
    return Path(tuple(arcs), sum(lengths), lengths)


@dataclass(frozen=True)
class Cycle:
    """Working path plus fiber-disjoint protection path between the same
    endpoints (a dedicated 1+1 protection cycle)."""

    working: Path
    protection: Path
    total_length: float

    def __post_init__(self):
        if (
            self.working.source != self.protection.source
            or self.working.destination != self.protection.destination
        ):
            raise ValueError("working and protection must share endpoints")
        if self.working.fibers & self.protection.fibers:
            raise ValueError("working and protection share a fiber")


def _cycle(working: Path, protection: Path) -> Cycle:
    return Cycle(working, protection, working.length + protection.length)


def shortest_path(
    topology: Topology,
    s: int,
    t: int,
    excluded_fibers: Iterable[Fiber] = (),
    excluded_nodes: Iterable[int] = (),
) -> Path | None:
    """Dijkstra with (length, node-sequence) keys: among minimum-length
    simple paths, returns the lexicographically smallest node sequence.
    Returns None when s and t are disconnected after the exclusions.
    """
    if s == t:
        raise ValueError("source equals destination")
    banned_fibers = frozenset(excluded_fibers)
    banned_nodes = frozenset(excluded_nodes)
    if s in banned_nodes or t in banned_nodes:
        return None
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (s,))]
    done: set[int] = set()
    while heap:
        dist, nodes = heapq.heappop(heap)
        u = nodes[-1]
        if u in done:
            continue
        done.add(u)
        if u == t:
            return make_path(topology, nodes)
        for v in topology.adjacency[u]:
            if v in done or v in banned_nodes:
                continue
            if fiber_of(u, v) in banned_fibers:
                continue
            heapq.heappush(heap, (dist + topology.arc_length[(u, v)], nodes + (v,)))
    return None


def yen_k_shortest(topology: Topology, s: int, t: int, k: int) -> list[Path]:
    """Up to k distinct simple s->t paths in nondecreasing length."""
    if k < 1:
        raise ValueError("k must be >= 1")
    first = shortest_path(topology, s, t)
    if first is None:
        return []
    found = [first]
    candidates: list[tuple[float, tuple[int, ...]]] = []
    seen = {first.nodes}
    while len(found) < k:
        prev = found[-1].nodes
        for i in range(len(prev) - 1):
            root = prev[: i + 1]
            spur = prev[i]
            banned_fibers = {
                fiber_of(p[i], p[i + 1])
                for p in (path.nodes for path in found)
                if len(p) > i + 1 and p[: i + 1] == root
            }
            spur_path = shortest_path(
                topology, spur, t, banned_fibers, excluded_nodes=root[:-1]
            )
            if spur_path is None:
                continue
            nodes = root[:-1] + spur_path.nodes
            if nodes in seen:
                continue
            seen.add(nodes)
            length = sum(
                topology.arc_length[(u, v)] for u, v in zip(nodes, nodes[1:])
            )
            heapq.heappush(candidates, (length, nodes))
        if not candidates:
            break
        _, nodes = heapq.heappop(candidates)
        found.append(make_path(topology, nodes))
    return found


def _bellman_ford(
    arcs: dict[Arc, float], n: int, s: int, t: int
) -> tuple[int, ...] | None:
    """Shortest s->t path under possibly negative arc weights (no negative
    cycles by construction).  Deterministic via sorted arc relaxation."""
    dist = {v: float("inf") for v in range(n)}
    pred: dict[int, int] = {}
    dist[s] = 0.0
    ordered = sorted(arcs.items())
    for _ in range(n - 1):
        changed = False
        for (u, v), w in ordered:
            if dist[u] + w < dist[v] - 1e-12:
                dist[v] = dist[u] + w
                pred[v] = u
                changed = True
        if not changed:
            break
    if dist[t] == float("inf"):
        return None
    nodes = [t]
    while nodes[-1] != s:
        nodes.append(pred[nodes[-1]])
        if len(nodes) > n:
            raise RuntimeError("predecessor cycle in Bellman-Ford")
    return tuple(reversed(nodes))


def _strip_loops(nodes: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for v in nodes:
        if v in out:
            del out[out.index(v) + 1 :]
        else:
            out.append(v)
    return tuple(out)


def suurballe_pair(topology: Topology, s: int, t: int) -> Cycle | None:
    """Minimum-total-length pair of fiber-disjoint simple s->t paths
    (Bhandari's edge-disjoint variant), or None when no pair exists.

    The shorter path (ties by node sequence) is returned as working.
    """
    p1 = shortest_path(topology, s, t)
    if p1 is None:
        return None
    used = {a: True for a in p1.arcs}
    residual: dict[Arc, float] = {}
    for (u, v), w in topology.arc_length.items():
        if (u, v) in used:
            continue  # forbid re-use in the same direction
        if (v, u) in used:
            residual[(u, v)] = -w  # traversing backwards cancels the fiber
        else:
            residual[(u, v)] = w
    p2_nodes = _bellman_ford(residual, topology.n_nodes, s, t)
    if p2_nodes is None:
        return None

    # interlacing removal: cancel fibers traversed in opposite directions
    arcs = set(p1.arcs)
    for u, v in zip(p2_nodes, p2_nodes[1:]):
        if (v, u) in arcs:
            arcs.remove((v, u))
        else:
            arcs.add((u, v))

    paths = []
    for _ in range(2):
        out: dict[int, list[int]] = {}
        for u, v in arcs:
            out.setdefault(u, []).append(v)
        nodes = [s]
        while nodes[-1] != t:
            nxt = min(out[nodes[-1]])
            out[nodes[-1]].remove(nxt)
            nodes.append(nxt)
        for u, v in zip(nodes, nodes[1:]):
            arcs.remove((u, v))
        paths.append(make_path(topology, _strip_loops(nodes)))

    a, b = sorted(paths, key=lambda p: (p.length, p.nodes))
    return _cycle(a, b)


def k_shortest_cycles(topology: Topology, s: int, t: int, k: int = 8) -> list[Cycle]:
    """Up to k distinct cycles in nondecreasing total length.

    Candidates are built by pairing each of 3k Yen working paths with its
    shortest fiber-disjoint protection path; the Suurballe-optimal cycle is
    merged in and always returned first.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    best = suurballe_pair(topology, s, t)
    if best is None:
        return []
    cycles = {(best.working.nodes, best.protection.nodes): best}
    for working in yen_k_shortest(topology, s, t, 3 * k):
        protection = shortest_path(topology, s, t, excluded_fibers=working.fibers)
        if protection is None:
            continue
        key = (working.nodes, protection.nodes)
        cycles.setdefault(key, _cycle(working, protection))
    rest = [c for key, c in cycles.items() if c is not best]
    rest.sort(key=lambda c: (c.total_length, c.working.nodes, c.protection.nodes))
    return ([best] + rest)[:k]
