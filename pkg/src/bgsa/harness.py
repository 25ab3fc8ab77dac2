"""Multi-run experiment driver with deterministic seeding and CSV export.

A plan names a problem (benchmark id or windfarm task), an algorithm variant
and the run budget.  Run ``i`` draws its stream from
``(master_seed, spawn_key=i)``, so reports are identical whether runs execute
serially or across workers, and adding runs never changes earlier ones.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .benchmarks import BenchmarkProblem
from .bits import run_rng
from .engine import EngineConfig, bgsa_config, bnaggsa_config, run
from .windfarm import (
    FarmGrid,
    TurbineSpec,
    WindRose,
    WindfarmProblem,
    export_layout_csv,
    export_layout_svg,
)

ALGORITHMS = ("bgsa", "bnaggsa")

Problem = Union[BenchmarkProblem, WindfarmProblem]


def engine_config(algorithm: str, swarm_size: int, iterations: int) -> EngineConfig:
    if algorithm == "bgsa":
        return bgsa_config(swarm_size=swarm_size, max_iterations=iterations)
    if algorithm == "bnaggsa":
        return bnaggsa_config(swarm_size=swarm_size, max_iterations=iterations)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


@dataclass(frozen=True)
class ExperimentPlan:
    problem: Problem
    algorithm: str = "bgsa"
    swarm_size: int = 50
    iterations: int = 500
    runs: int = 30
    master_seed: int = 0

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        engine_config(self.algorithm, max(self.swarm_size, 2), max(self.iterations, 1))


@dataclass
class ExperimentReport:
    problem_id: str
    algorithm: str
    swarm_size: int
    iterations: int
    runs: int
    master_seed: int
    sense: str
    finals: np.ndarray        # (runs,) final best-so-far per run
    traces: np.ndarray        # (runs, iterations) best-so-far traces
    best_positions: np.ndarray  # (runs, dimension) uint8

    @property
    def absf(self) -> float:
        """Average best-so-far: mean of the per-run finals."""
        return float(self.finals.mean())

    @property
    def stdv(self) -> float:
        """Population (divisor n) standard deviation of the finals."""
        return float(self.finals.std(ddof=0))

    @property
    def best(self) -> float:
        return float(self.finals.min() if self.sense == "min" else self.finals.max())

    @property
    def best_run(self) -> int:
        return int(
            np.argmin(self.finals) if self.sense == "min" else np.argmax(self.finals)
        )


def _execute_run(plan: ExperimentPlan, run_index: int):
    objective = plan.problem.make_objective()
    config = engine_config(plan.algorithm, plan.swarm_size, plan.iterations)
    result = run(objective, config, run_rng(plan.master_seed, run_index))
    return result.best_fitness, result.trace, result.best_position


def run_experiment(plan: ExperimentPlan, workers: int = 1) -> ExperimentReport:
    """Execute all runs of a plan (optionally across worker processes)."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1:
        outcomes = [_execute_run(plan, i) for i in range(plan.runs)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_execute_run, [plan] * plan.runs, range(plan.runs)))
    finals = np.array([o[0] for o in outcomes])
    traces = np.stack([o[1] for o in outcomes])
    best_positions = np.stack([o[2] for o in outcomes]).astype(np.uint8)
    return ExperimentReport(
        problem_id=plan.problem.problem_id,
        algorithm=plan.algorithm,
        swarm_size=plan.swarm_size,
        iterations=plan.iterations,
        runs=plan.runs,
        master_seed=plan.master_seed,
        sense=plan.problem.sense,
        finals=finals,
        traces=traces,
        best_positions=best_positions,
    )


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def _metadata_lines(report: ExperimentReport):
    return [
        f"# problem={report.problem_id} algorithm={report.algorithm}",
        f"# swarm={report.swarm_size} iterations={report.iterations} "
        f"runs={report.runs} master_seed={report.master_seed} sense={report.sense}",
        "# stdv_divisor=n",
    ]


def export_report(report: ExperimentReport, outdir,
                  problem: Optional[Problem] = None) -> dict[str, Path]:
    """Write summary/trace/finals CSVs (plus layout CSV+SVG for windfarm runs).

    Returns the written paths keyed by artifact name.  For windfarm problems
    the best run's layout is exported only when it is feasible; an infeasible
    best (possible when every run ends penalized) is flagged in the summary
    metadata instead.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    windfarm = problem if isinstance(problem, WindfarmProblem) else None
    best_bits = report.best_positions[report.best_run]
    feasible = True
    if windfarm is not None:
        feasible = int(np.count_nonzero(best_bits)) == windfarm.n_turbines

    summary = _metadata_lines(report)
    if windfarm is not None:
        summary.append(f"# n_turbines={windfarm.n_turbines} feasible_best={feasible}")
    summary.append("run,final_best")
    for i, value in enumerate(report.finals):
        summary.append(f"{i},{float(value)!r}")
    summary += [
        f"# absf={report.absf!r}",
        f"# stdv={report.stdv!r}",
        f"# best={report.best!r}",
    ]
    paths["summary"] = outdir / "summary.csv"
    paths["summary"].write_text("\n".join(summary) + "\n")

    header = "iteration," + ",".join(f"run_{i}" for i in range(report.runs))
    trace_lines = [header]
    for t in range(report.iterations):
        row = ",".join(repr(float(v)) for v in report.traces[:, t])
        trace_lines.append(f"{t},{row}")
    paths["trace"] = outdir / "trace.csv"
    paths["trace"].write_text("\n".join(trace_lines) + "\n")

    finals_lines = ["final_best"] + [repr(float(v)) for v in report.finals]
    paths["finals"] = outdir / "finals.csv"
    paths["finals"].write_text("\n".join(finals_lines) + "\n")

    if windfarm is not None and feasible:
        paths["layout_csv"] = outdir / "layout.csv"
        export_layout_csv(best_bits, windfarm.farm, paths["layout_csv"])
        paths["layout_svg"] = outdir / "layout.svg"
        export_layout_svg(best_bits, windfarm.farm, paths["layout_svg"])
        layout = windfarm.report(best_bits)
        paths["layout_metrics"] = outdir / "layout_metrics.csv"
        paths["layout_metrics"].write_text(
            "n_turbines,power_mw,efficiency,capacity_factor\n"
            f"{layout.n_turbines},{layout.power_mw!r},"
            f"{layout.efficiency!r},{layout.capacity_factor!r}\n"
        )
    return paths


# ---------------------------------------------------------------------------
# turbine-count sweep
# ---------------------------------------------------------------------------

DEFAULT_NT_SWEEP = (10, 20, 30, 40, 50, 60)


@dataclass(frozen=True)
class SweepRow:
    n_turbines: int
    power_mw: float
    efficiency: float          # fraction
    capacity_factor: float     # fraction
    feasible: bool

    @property
    def efficiency_pct(self) -> float:
        return 100.0 * self.efficiency

    @property
    def capacity_factor_pct(self) -> float:
        return 100.0 * self.capacity_factor


def nt_sweep(rose: WindRose, n_turbines=DEFAULT_NT_SWEEP, algorithm: str = "bnaggsa",
             swarm_size: int = 500, iterations: int = 500, runs: int = 10,
             master_seed: int = 0, farm: FarmGrid = FarmGrid(),
             turbine: TurbineSpec = TurbineSpec(), wake_exponent: int = 2,
             workers: int = 1, on_report=None) -> list[SweepRow]:
    """One experiment per turbine count; rows report the best run's layout."""
    rows = []
    for nt in n_turbines:
        problem = WindfarmProblem(
            rose=rose, n_turbines=nt, farm=farm, turbine=turbine,
            wake_exponent=wake_exponent,
        )
        plan = ExperimentPlan(
            problem=problem, algorithm=algorithm, swarm_size=swarm_size,
            iterations=iterations, runs=runs, master_seed=master_seed,
        )
        report = run_experiment(plan, workers=workers)
        best_bits = report.best_positions[report.best_run]
        if int(np.count_nonzero(best_bits)) == nt:
            layout = problem.report(best_bits)
            rows.append(SweepRow(nt, layout.power_mw, layout.efficiency,
                                 layout.capacity_factor, True))
        else:
            rows.append(SweepRow(nt, math.nan, math.nan, math.nan, False))
        if on_report is not None:
            on_report(nt, report, problem)
    return rows


def export_sweep_csv(rows, path):
    lines = ["n_turbines,power_mw,efficiency_pct,capacity_factor_pct,feasible"]
    for row in rows:
        lines.append(
            f"{row.n_turbines},{row.power_mw!r},{row.efficiency_pct!r},"
            f"{row.capacity_factor_pct!r},{int(row.feasible)}"
        )
    Path(path).write_text("\n".join(lines) + "\n")
    return Path(path)
