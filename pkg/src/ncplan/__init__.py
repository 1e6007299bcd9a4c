"""Planning toolkit for survivable WDM networks with XOR network-coded
dedicated protection."""

from .coding import CodingCandidate, check_codeable, common_suffix
from .experiment import ExperimentConfig, ResultRow, gain, run_experiment
from .ilp import ExactResult, build_model, exact_solve, export_model
from .paths import (
    Cycle,
    Path,
    k_shortest_cycles,
    shortest_path,
    suurballe_pair,
    yen_k_shortest,
)
from .plan import (
    CapacityError,
    Plan,
    Provision,
    plan_from_text,
    plan_to_text,
    validate_plan,
)
from .planner import plan_nc, plan_wnc
from .survivability import (
    FailureReport,
    Verdict,
    simulate_failure,
    verify_all_failures,
)
from .topology import (
    Demand,
    DemandSet,
    Topology,
    WavelengthGrid,
    builtin_topology,
    generate_demands,
    load_demands,
    load_topology,
)

__version__ = "0.1.0"
