"""Binary gravitational search algorithms with a benchmark suite and a
Jensen-wake windfarm layout application."""

from .archives import ArchiveSet, FdgParams, build_archives, fdg, naggsa_neighbour_gravity
from .benchmarks import BenchmarkProblem, catalog, get_problem
from .bits import DecodingSpec, bits_to_integer, decode_real, decode_vector, hamming_distance, run_rng
from .engine import (
    EngineConfig,
    ExponentialGravity,
    FitnessDistanceGravity,
    LinearGravity,
    ObjectiveSpec,
    RunResult,
    SwarmState,
    bgsa_config,
    bnaggsa_config,
    compute_masses,
    kbest_indices,
    kbest_size,
    run,
    scalar_gravity,
    step,
    transfer_flip,
    update_velocity,
)
from .harness import (
    ExperimentPlan,
    ExperimentReport,
    SweepRow,
    export_report,
    export_sweep_csv,
    nt_sweep,
    run_experiment,
)
from .windfarm import (
    FarmGrid,
    LayoutReport,
    RoseError,
    TurbineSpec,
    WindRose,
    WindfarmProblem,
    aggregate_objective,
    axial_induction,
    combined_wake_speed,
    downstream_rotor_radius,
    entrainment_constant,
    evaluate_layout,
    example_rose_path,
    local_free_speed,
    overlap_area,
    penalized_objective,
    power_output,
    single_wake_speed,
    wake_radius,
)

__version__ = "0.1.0"
