"""Shared fixtures and brute-force oracles for the test suite."""

from __future__ import annotations

import random

import pytest

from ncplan import Topology, WavelengthGrid, builtin_topology
from ncplan.topology import fiber_of


@pytest.fixture(scope="session")
def six_node() -> Topology:
    return builtin_topology("six_node")


@pytest.fixture(scope="session")
def nsfnet() -> Topology:
    return builtin_topology("nsfnet")


@pytest.fixture(scope="session")
def cost239() -> Topology:
    return builtin_topology("cost239")


@pytest.fixture(scope="session")
def grid() -> WavelengthGrid:
    return WavelengthGrid(40)


@pytest.fixture(scope="session")
def butterfly() -> Topology:
    """Classic coding scenario: sources 0 and 1, joint relay chain 2-3,
    destination 4 reachable directly from both sources."""
    fibers = [(0, 4), (1, 4), (0, 2), (1, 2), (2, 3), (3, 4)]
    return Topology("butterfly", range(5), fibers)


def random_topology(seed: int, max_nodes: int = 8) -> Topology:
    """Random 2-edge-connected graph: a Hamiltonian cycle plus chords."""
    rng = random.Random(seed)
    n = rng.randint(4, max_nodes)
    order = list(range(n))
    rng.shuffle(order)
    fibers = {fiber_of(order[i], order[(i + 1) % n]) for i in range(n)}
    chords = [
        fiber_of(u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if fiber_of(u, v) not in fibers
    ]
    extra = min(rng.randint(1, n), len(chords))
    fibers.update(rng.sample(chords, extra))
    lengths = {}
    if rng.random() < 0.5:
        lengths = {f: rng.randint(1, 5) for f in fibers}
    return Topology(f"random{seed}", range(n), sorted(fibers), lengths)


def all_simple_paths(topology: Topology, s: int, t: int):
    """Every simple s->t path as a node tuple (DFS enumeration)."""
    out = []
    stack = [(s, (s,))]
    while stack:
        u, nodes = stack.pop()
        if u == t:
            out.append(nodes)
            continue
        for v in topology.adjacency[u]:
            if v not in nodes:
                stack.append((v, nodes + (v,)))
    return out


def path_length(topology: Topology, nodes) -> float:
    return sum(topology.arc_length[(u, v)] for u, v in zip(nodes, nodes[1:]))


def path_fibers(nodes) -> frozenset:
    return frozenset(fiber_of(u, v) for u, v in zip(nodes, nodes[1:]))


def brute_force_disjoint_pair(topology: Topology, s: int, t: int) -> float | None:
    """Minimum total length over all fiber-disjoint simple path pairs."""
    paths = all_simple_paths(topology, s, t)
    best = None
    for i, p in enumerate(paths):
        fp = path_fibers(p)
        lp = path_length(topology, p)
        for q in paths[i:]:
            if fp & path_fibers(q):
                continue
            total = lp + path_length(topology, q)
            if best is None or total < best:
                best = total
    return best
