"""Routing primitives on the bundled six-node benchmark topology.

Walks through the building blocks every planner rests on: shortest paths,
k-shortest path enumeration, and minimum-cost fiber-disjoint path pairs
(the 1+1 protection cycles).
"""

from ncplan import builtin_topology, shortest_path, suurballe_pair, yen_k_shortest
from ncplan.paths import k_shortest_cycles


def fmt(path):
    return "-".join(str(v) for v in path.nodes)


def main():
    topology = builtin_topology("six_node")
    print(f"topology: {topology}")
    print(f"fibers:   {sorted(topology.fibers)}")
    print()

    s, t = 0, 4
    print(f"shortest path {s} -> {t}: {fmt(shortest_path(topology, s, t))}")
    print(f"avoiding fiber 0-1:    "
          f"{fmt(shortest_path(topology, s, t, excluded_fibers={(0, 1)}))}")
    print()

    print(f"four shortest simple paths {s} -> {t}:")
    for path in yen_k_shortest(topology, s, t, 4):
        print(f"  {fmt(path)}  (length {path.length:g})")
    print()

    cycle = suurballe_pair(topology, s, t)
    print(f"cheapest 1+1 protection cycle {s} -> {t}:")
    print(f"  working    {fmt(cycle.working)}")
    print(f"  protection {fmt(cycle.protection)}")
    print(f"  total length {cycle.total_length:g}")
    print()

    print("alternate cycles (total length, working / protection):")
    for c in k_shortest_cycles(topology, s, t, 5):
        print(f"  {c.total_length:g}: {fmt(c.working)} / {fmt(c.protection)}")


if __name__ == "__main__":
    main()
