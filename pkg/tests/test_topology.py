"""Topology model, demand generation, and file formats."""

import pytest

from ncplan import Demand, DemandSet, Topology, WavelengthGrid, generate_demands
from ncplan.topology import (
    TopologyError,
    TopologyParseError,
    demands_to_text,
    fiber_of,
    parse_demands,
    parse_topology,
    topology_to_text,
)

RING = [(0, 1), (1, 2), (2, 3), (0, 3)]


def test_fiber_of_is_canonical():
    assert fiber_of(3, 1) == (1, 3)
    assert fiber_of(1, 3) == (1, 3)


def test_basic_construction():
    t = Topology("ring", range(4), RING)
    assert t.n_nodes == 4
    assert len(t.fibers) == 4
    assert len(t.arcs) == 8
    assert t.has_arc(1, 0) and t.has_arc(0, 1)
    assert t.adjacency[0] == (1, 3)


def test_node_ids_must_be_dense():
    with pytest.raises(TopologyError, match="dense"):
        Topology("bad", [0, 1, 3], [(0, 1), (1, 3), (0, 3)])


def test_rejects_self_loop_and_duplicate():
    with pytest.raises(TopologyError, match="self-loop"):
        Topology("bad", range(3), [(0, 0), (0, 1), (1, 2), (0, 2)])
    with pytest.raises(TopologyError, match="duplicate"):
        Topology("bad", range(3), [(0, 1), (1, 0), (1, 2), (0, 2)])


def test_rejects_unknown_endpoint_and_bad_length():
    with pytest.raises(TopologyError, match="unknown node"):
        Topology("bad", range(3), [(0, 1), (1, 2), (2, 5)])
    with pytest.raises(TopologyError, match="non-positive"):
        Topology("bad", range(3), [(0, 1), (1, 2), (0, 2)], {(0, 1): 0.0})


def test_rejects_disconnected_and_bridged():
    with pytest.raises(TopologyError, match="not connected"):
        Topology("bad", range(4), [(0, 1), (2, 3)])
    # a path graph has cut edges everywhere
    with pytest.raises(TopologyError, match="not 2-edge-connected"):
        Topology("bad", range(3), [(0, 1), (1, 2)])


def test_builtin_shapes(six_node, nsfnet, cost239):
    assert (six_node.n_nodes, len(six_node.fibers)) == (6, 9)
    assert (nsfnet.n_nodes, len(nsfnet.fibers)) == (14, 21)
    assert (cost239.n_nodes, len(cost239.fibers)) == (11, 26)
    # six_node is 3-regular
    assert all(len(six_node.adjacency[v]) == 3 for v in range(6))


def test_wavelength_grid_validation():
    assert WavelengthGrid().count == 40
    with pytest.raises(ValueError):
        WavelengthGrid(0)


def test_demand_validation():
    with pytest.raises(ValueError, match="source equals destination"):
        Demand(0, 2, 2)
    with pytest.raises(ValueError, match="duplicate"):
        DemandSet((Demand(0, 0, 1), Demand(1, 0, 1)))


def test_generate_demands_count_and_determinism(six_node):
    d1 = generate_demands(six_node, 0.5, seed=7, sample_index=3)
    d2 = generate_demands(six_node, 0.5, seed=7, sample_index=3)
    assert len(d1) == 15  # 0.5 * 6 * 5
    assert tuple(d1) == tuple(d2)
    assert d1.load_fraction == 0.5 and d1.seed == 7 and d1.sample_index == 3
    # ids are dense and pairs are sorted and unique
    assert [d.id for d in d1] == list(range(15))
    pairs = [(d.source, d.destination) for d in d1]
    assert pairs == sorted(pairs) and len(set(pairs)) == 15


def test_generate_demands_samples_differ(six_node):
    a = generate_demands(six_node, 0.3, seed=1, sample_index=0)
    b = generate_demands(six_node, 0.3, seed=1, sample_index=1)
    assert tuple(a) != tuple(b)


def test_generate_demands_full_mesh(six_node):
    d = generate_demands(six_node, 1.0, seed=1)
    assert len(d) == 30
    assert {(x.source, x.destination) for x in d} == {
        (s, t) for s in range(6) for t in range(6) if s != t
    }


def test_generate_demands_load_bounds(six_node):
    with pytest.raises(ValueError):
        generate_demands(six_node, 0.0, seed=1)
    with pytest.raises(ValueError):
        generate_demands(six_node, 1.5, seed=1)


def test_topology_text_roundtrip(cost239):
    text = topology_to_text(cost239)
    again = parse_topology(text, "cost239")
    assert again == cost239


def test_topology_text_roundtrip_with_lengths():
    t = Topology("w", range(3), [(0, 1), (1, 2), (0, 2)], {(0, 1): 2.5})
    assert parse_topology(topology_to_text(t), "w") == t


def test_parse_topology_errors_carry_line_numbers():
    with pytest.raises(TopologyParseError, match="line 2"):
        parse_topology("node 0\nfiber 0\n")
    with pytest.raises(TopologyParseError, match="line 1"):
        parse_topology("what 1 2\n")
    with pytest.raises(TopologyParseError, match="line 3"):
        parse_topology("node 0\nnode 1\nfiber 1 1\n")


def test_parse_topology_comments_and_blanks():
    t = parse_topology(
        "# ring\nnode 0\nnode 1\nnode 2\n\nfiber 0 1  # one\nfiber 1 2\nfiber 0 2\n"
    )
    assert t.n_nodes == 3 and len(t.fibers) == 3


def test_demand_text_roundtrip():
    ds = DemandSet((Demand(0, 1, 2), Demand(1, 2, 0)))
    assert tuple(parse_demands(demands_to_text(ds))) == tuple(ds)
    with pytest.raises(TopologyParseError, match="line 1"):
        parse_demands("demand 0 1\n")


def test_restricted_to_keeps_only_given_arcs(six_node):
    sub = Topology.restricted_to(six_node, [(0, 1), (1, 2)])
    assert set(sub.arc_length) == {(0, 1), (1, 2)}
    assert sub.adjacency[0] == (1,)
    assert sub.adjacency[2] == ()
