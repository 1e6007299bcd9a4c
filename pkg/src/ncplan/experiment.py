"""Batch evaluation: run WNC and NC (optionally the exact search) over
seeded traffic samples, verify every plan, and aggregate costs, gains,
and coding-operation counts into result rows and a CSV file.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path

from .ilp import NC, WNC, exact_solve
from .plan import Plan, validate_plan
from .planner import plan_nc, plan_wnc
from .survivability import verify_all_failures
from .topology import (
    BUILTIN_NAMES,
    DemandSet,
    Topology,
    WavelengthGrid,
    builtin_topology,
    generate_demands,
    load_topology,
)

MODES = ("WNC", "NC", "EXACT")


@dataclass(frozen=True)
class ExperimentConfig:
    topology: str = "six_node"  # builtin name or a .topo file path
    loads: tuple[float, ...] = (0.3, 0.7, 1.0)
    samples: int = 20
    seed: int = 1
    wavelengths: int = 40
    k: int = 8
    modes: tuple[str, ...] = ("WNC", "NC")
    time_limit: float = 60.0

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        for m in self.modes:
            if m not in MODES:
                raise ValueError(f"unknown mode {m!r}")
        for load in self.loads:
            if not 0 < load <= 1:
                raise ValueError("loads must be in (0, 1]")

    def resolve_topology(self) -> Topology:
        if self.topology in BUILTIN_NAMES:
            return builtin_topology(self.topology)
        return load_topology(self.topology)


@dataclass(frozen=True)
class ResultRow:
    topology: str
    load: float
    samples: int
    mean_cost_wnc: float
    mean_cost_nc: float
    gain_max: float
    gain_mean: float
    mean_coding_ops: float


def gain(cost_wnc: int, cost_nc: int) -> float:
    """Relative wavelength-link saving of NC over WNC, in percent (one
    decimal)."""
    if cost_wnc <= 0:
        raise ValueError("cost_wnc must be positive")
    if cost_nc > cost_wnc:
        raise ValueError("cost_nc must not exceed cost_wnc")
    return round(100.0 * (cost_wnc - cost_nc) / cost_wnc, 1)


def parse_config_file(path) -> ExperimentConfig:
    """key = value lines; '#' comments; loads/modes are comma-separated."""
    kwargs: dict = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "topology":
            kwargs["topology"] = value
        elif key == "loads":
            kwargs["loads"] = tuple(float(x) for x in value.split(","))
        elif key == "samples":
            kwargs["samples"] = int(value)
        elif key == "seed":
            kwargs["seed"] = int(value)
        elif key == "wavelengths":
            kwargs["wavelengths"] = int(value)
        elif key == "k":
            kwargs["k"] = int(value)
        elif key == "modes":
            kwargs["modes"] = tuple(m.strip() for m in value.split(","))
        elif key == "time_limit":
            kwargs["time_limit"] = float(value)
        else:
            raise ValueError(f"unknown config key {key!r}")
    return ExperimentConfig(**kwargs)


def _checked(topology, demands, grid, plan: Plan, context: str) -> Plan:
    violations = validate_plan(topology, demands, grid, plan)
    if violations:
        raise AssertionError(f"{context}: invalid plan: {violations[:3]}")
    ok, report = verify_all_failures(topology, plan)
    if not ok:
        raise AssertionError(
            f"{context}: demands {report.lost} lost on fiber {report.failed_fiber}"
        )
    return plan


def run_experiment(
    config: ExperimentConfig, csv_path=None
) -> tuple[list[ResultRow], str]:
    """Returns the aggregated rows and the per-sample CSV text.

    Every plan is validated and failure-swept before its numbers count.
    Full-mesh loads run a single sample (the demand set is deterministic).
    """
    topology = config.resolve_topology()
    grid = WavelengthGrid(config.wavelengths)
    csv = io.StringIO()
    csv.write("topology,load,sample,mode,cost,coding_ops,gain_pct\n")

    rows: list[ResultRow] = []
    for load in config.loads:
        n_samples = 1 if load == 1.0 else config.samples
        costs_wnc: list[int] = []
        costs_nc: list[int] = []
        gains: list[float] = []
        ops: list[int] = []
        for sample in range(n_samples):
            demands = generate_demands(topology, load, config.seed, sample)
            context = f"{topology.name} load={load} sample={sample}"
            per_mode: dict[str, Plan] = {}
            try:
                if "WNC" in config.modes:
                    per_mode["WNC"] = _checked(
                        topology, demands, grid,
                        plan_wnc(topology, demands, grid, config.k),
                        context + " WNC",
                    )
                if "NC" in config.modes:
                    per_mode["NC"] = _checked(
                        topology, demands, grid,
                        plan_nc(topology, demands, grid, config.k),
                        context + " NC",
                    )
                if "EXACT" in config.modes:
                    result = exact_solve(
                        topology, demands, grid,
                        mode=NC if "NC" in config.modes or len(config.modes) == 1
                        else WNC,
                        k=config.k, time_limit=config.time_limit,
                    )
                    per_mode["EXACT"] = _checked(
                        topology, demands, grid, result.plan, context + " EXACT"
                    )
            except Exception as exc:
                raise RuntimeError(f"{context}: {exc}") from exc

            sample_gain = None
            if "WNC" in per_mode and "NC" in per_mode:
                sample_gain = gain(per_mode["WNC"].cost, per_mode["NC"].cost)
                costs_wnc.append(per_mode["WNC"].cost)
                costs_nc.append(per_mode["NC"].cost)
                gains.append(sample_gain)
                ops.append(per_mode["NC"].coding_ops)
            for mode in config.modes:
                plan = per_mode.get(mode)
                if plan is None:
                    continue
                gain_txt = (
                    f"{sample_gain:.1f}" if mode == "NC" and sample_gain is not None
                    else ""
                )
                csv.write(
                    f"{topology.name},{load:g},{sample},{mode},"
                    f"{plan.cost},{plan.coding_ops},{gain_txt}\n"
                )
        if costs_wnc:
            rows.append(
                ResultRow(
                    topology=topology.name,
                    load=load,
                    samples=n_samples,
                    mean_cost_wnc=round(sum(costs_wnc) / len(costs_wnc), 1),
                    mean_cost_nc=round(sum(costs_nc) / len(costs_nc), 1),
                    gain_max=round(max(gains), 1),
                    gain_mean=round(sum(gains) / len(gains), 1),
                    mean_coding_ops=round(sum(ops) / len(ops), 1),
                )
            )

    text = csv.getvalue()
    if csv_path is not None:
        Path(csv_path).write_text(text)
    return rows, text


def rows_to_table(rows: list[ResultRow]) -> str:
    header = (
        f"{'topology':>10} {'load':>5} {'n':>3} {'WNC':>8} {'NC':>8} "
        f"{'gain max':>8} {'gain mean':>9} {'coding ops':>10}"
    )
    lines = [header]
    for r in rows:
        lines.append(
            f"{r.topology:>10} {r.load:>5g} {r.samples:>3} "
            f"{r.mean_cost_wnc:>8.1f} {r.mean_cost_nc:>8.1f} "
            f"{r.gain_max:>7.1f}% {r.gain_mean:>8.1f}% {r.mean_coding_ops:>10.1f}"
        )
    return "\n".join(lines)
