"""Command line interface.

Subcommands: plan, experiment, export-ilp, verify.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiment import (
    ExperimentConfig,
    parse_config_file,
    rows_to_table,
    run_experiment,
)
from .ilp import NC, WNC, build_model, export_model
from .plan import plan_from_text, plan_to_text, validate_plan
from .planner import plan_nc, plan_wnc
from .survivability import sweep_to_csv, verify_all_failures
from .topology import (
    BUILTIN_NAMES,
    WavelengthGrid,
    builtin_topology,
    generate_demands,
    load_demands,
    load_topology,
)


def _topology(name: str):
    if name in BUILTIN_NAMES:
        return builtin_topology(name)
    return load_topology(name)


def _instance(args):
    topology = _topology(args.topology)
    if getattr(args, "demands", None):
        demands = load_demands(args.demands)
    else:
        demands = generate_demands(topology, args.load, args.seed, args.sample)
    return topology, demands, WavelengthGrid(args.wavelengths)


def _add_instance_flags(p):
    p.add_argument("--topology", required=True,
                   help="builtin name (six_node, nsfnet, cost239) or .topo file")
    p.add_argument("--load", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--sample", type=int, default=0)
    p.add_argument("--demands", help="demand file instead of generated traffic")
    p.add_argument("--wavelengths", type=int, default=40)
    p.add_argument("--k", type=int, default=8)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ncplan",
        description="Survivable WDM planning with XOR network-coded protection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="plan one instance and print the result")
    _add_instance_flags(p)
    p.add_argument("--mode", choices=("WNC", "NC"), default="NC")
    p.add_argument("--out", help="write the plan text here as well")

    p = sub.add_parser("experiment", help="run a batch experiment")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--topology")
    p.add_argument("--load", type=float, action="append", dest="loads")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--wavelengths", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--modes", help="comma-separated subset of WNC,NC,EXACT")
    p.add_argument("--time-limit", type=float, dest="time_limit")
    p.add_argument("--out", help="CSV output path")

    p = sub.add_parser("export-ilp", help="write the edge ILP in LP format")
    _add_instance_flags(p)
    p.add_argument("--mode", choices=("WNC", "NC"), default="WNC")
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="survivability sweep of a plan file")
    p.add_argument("--topology", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--out", help="CSV report path (default: stdout)")

    args = parser.parse_args(argv)

    if args.command == "plan":
        topology, demands, grid = _instance(args)
        planner = plan_nc if args.mode == "NC" else plan_wnc
        plan = planner(topology, demands, grid, args.k)
        text = plan_to_text(plan)
        print(text, end="")
        if args.out:
            Path(args.out).write_text(text)
        return 0

    if args.command == "experiment":
        if args.config:
            config = parse_config_file(args.config)
        else:
            kwargs = {}
            if args.topology:
                kwargs["topology"] = args.topology
            if args.loads:
                kwargs["loads"] = tuple(args.loads)
            for key in ("samples", "seed", "wavelengths", "k", "time_limit"):
                value = getattr(args, key)
                if value is not None:
                    kwargs[key] = value
            if args.modes:
                kwargs["modes"] = tuple(m.strip() for m in args.modes.split(","))
            config = ExperimentConfig(**kwargs)
        rows, csv_text = run_experiment(config, csv_path=args.out)
        print(rows_to_table(rows))
        if not args.out:
            print()
            print(csv_text, end="")
        return 0

    if args.command == "export-ilp":
        topology, demands, grid = _instance(args)
        model = build_model(topology, demands, grid, mode=args.mode)
        export_model(model, args.out)
        print(
            f"wrote {args.out}: {len(model.variables)} binaries, "
            f"{len(model.constraints)} rows"
        )
        return 0

    if args.command == "verify":
        topology = _topology(args.topology)
        plan = plan_from_text(topology, Path(args.plan).read_text())
        ok, report = verify_all_failures(topology, plan)
        csv = sweep_to_csv(topology, plan)
        if args.out:
            Path(args.out).write_text(csv)
        else:
            print(csv, end="")
        if not ok:
            print(
                f"FAIL: demands {report.lost} lost on fiber {report.failed_fiber}",
                file=sys.stderr,
            )
            return 1
        print("survivability: pass", file=sys.stderr)
        return 0

    return 2


if __name__ == "__main__":
    raise SystemExit(main())
