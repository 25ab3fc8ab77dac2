"""Command-line interface: ``bench``, ``windfarm`` and ``validate``.

Option values resolve as built-in defaults < config file < command-line
flags.  The config file is a flat ``key = value`` text document (see
``config.example.cfg`` in the repository root); keys match option names.
All randomness flows from ``--seed``; when omitted, an entropy seed is drawn
and logged so the run can be replayed.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from .benchmarks import catalog
from .harness import (
    DEFAULT_NT_SWEEP,
    ExperimentPlan,
    export_report,
    export_sweep_csv,
    nt_sweep,
    run_experiment,
)
from .selfcheck import run_checks
from .windfarm import RoseError, WindRose, WindfarmProblem


def read_config(path) -> dict[str, str]:
    """Parse a flat ``key = value`` config document ('#' starts a comment)."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        values[key.strip().lower().replace("-", "_")] = value.strip()
    return values


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _resolve(flag_value, config: dict, key: str, default, cast):
    if flag_value is not None:
        return flag_value
    if key in config:
        raw = config[key]
        if cast is bool:
            low = raw.lower()
            if low in _BOOL_TRUE:
                return True
            if low in _BOOL_FALSE:
                return False
            raise click.UsageError(f"config key {key!r}: not a boolean: {raw!r}")
        try:
            return cast(raw)
        except ValueError as exc:
            raise click.UsageError(f"config key {key!r}: {exc}") from exc
    return default


def _resolve_seed(seed, config):
    seed = _resolve(seed, config, "seed", None, int)
    if seed is None:
        seed = int(np.random.SeedSequence().entropy % (2**63))
        click.echo(f"no --seed given; using entropy seed {seed} (pass it to replay)")
    return seed


def _echo_paths(paths: dict[str, Path]):
    for name, path in sorted(paths.items()):
        click.echo(f"wrote {name}: {path}")


@click.group()
def main():
    """Binary gravitational search optimizers and the windfarm layout study."""


@main.command()
@click.argument("problem_id")
@click.option("--algo", type=click.Choice(["bgsa", "bnaggsa"]), default=None,
              help="Algorithm variant (default bgsa).")
@click.option("--swarm", type=int, default=None, help="Swarm size (default 50).")
@click.option("--iters", type=int, default=None, help="Iterations (default 500).")
@click.option("--runs", type=int, default=None, help="Independent runs (default 30).")
@click.option("--seed", type=int, default=None, help="Master seed.")
@click.option("--workers", type=int, default=None, help="Parallel run workers.")
@click.option("--classic-f2", is_flag=True, default=False,
              help="Use the classical sum-of-absolute-values form of f2.")
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Output directory.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Flat key=value config file.")
def bench(problem_id, algo, swarm, iters, runs, seed, workers, classic_f2, out,
          config_path):
    """Run a benchmark experiment on one of the problems f1..f23."""
    config = read_config(config_path) if config_path else {}
    classic_f2 = classic_f2 or _resolve(None, config, "classic_f2", False, bool)
    problems = catalog(classic_f2=classic_f2)
    if problem_id not in problems:
        raise click.UsageError(
            f"unknown problem {problem_id!r}; expected one of f1..f23"
        )
    algo = _resolve(algo, config, "algo", "bgsa", str)
    swarm = _resolve(swarm, config, "swarm", 50, int)
    iters = _resolve(iters, config, "iters", 500, int)
    runs = _resolve(runs, config, "runs", 30, int)
    workers = _resolve(workers, config, "workers", 1, int)
    seed = _resolve_seed(seed, config)
    out = _resolve(out, config, "out", None, Path)
    if out is None:
        out = Path(f"bgsa-results/bench-{problem_id}-{algo}-s{seed}")

    plan = ExperimentPlan(
        problem=problems[problem_id], algorithm=algo, swarm_size=swarm,
        iterations=iters, runs=runs, master_seed=seed,
    )
    report = run_experiment(plan, workers=workers)
    click.echo(
        f"{problem_id} {algo}: absf={report.absf:.6g} stdv={report.stdv:.6g} "
        f"best={report.best:.6g} over {runs} runs"
    )
    _echo_paths(export_report(report, out))


@main.command()
@click.option("--rose", "rose_path", type=click.Path(path_type=Path), default=None,
              help="Wind-rose file (see the shipped *.rose examples).")
@click.option("--nt", type=int, default=None, help="Number of turbines to place.")
@click.option("--nt-sweep", "sweep", is_flag=True, default=False,
              help="Sweep the turbine counts 10,20,...,60.")
@click.option("--wake-exponent", type=click.Choice(["1", "2"]), default=None,
              help="Jensen decay exponent (default 2).")
@click.option("--algo", type=click.Choice(["bgsa", "bnaggsa"]), default=None,
              help="Algorithm variant (default bnaggsa).")
@click.option("--swarm", type=int, default=None, help="Swarm size (default 500).")
@click.option("--iters", type=int, default=None, help="Iterations (default 500).")
@click.option("--runs", type=int, default=None, help="Independent runs (default 10).")
@click.option("--seed", type=int, default=None, help="Master seed.")
@click.option("--workers", type=int, default=None, help="Parallel run workers.")
@click.option("--f2-unit", type=click.Choice(["kW", "MW"]), default=None,
              help="Unit of the power term inside the aggregate (default kW).")
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Output directory.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Flat key=value config file.")
def windfarm(rose_path, nt, sweep, wake_exponent, algo, swarm, iters, runs, seed,
             workers, f2_unit, out, config_path):
    """Optimize windfarm layouts under a wind rose."""
    config = read_config(config_path) if config_path else {}
    rose_path = _resolve(rose_path, config, "rose", None, Path)
    if rose_path is None:
        raise click.UsageError("a wind rose is required (--rose PATH)")
    try:
        rose = WindRose.from_file(rose_path)
    except FileNotFoundError as exc:
        raise click.UsageError(f"rose file not found: {exc}") from exc
    except RoseError as exc:
        raise click.UsageError(f"invalid wind rose: {exc}") from exc

    nt = _resolve(nt, config, "nt", None, int)
    sweep = sweep or _resolve(None, config, "nt_sweep", False, bool)
    wake_exponent = int(_resolve(wake_exponent, config, "wake_exponent", 2, int))
    algo = _resolve(algo, config, "algo", "bnaggsa", str)
    swarm = _resolve(swarm, config, "swarm", 500, int)
    iters = _resolve(iters, config, "iters", 500, int)
    runs = _resolve(runs, config, "runs", 10, int)
    workers = _resolve(workers, config, "workers", 1, int)
    f2_unit = _resolve(f2_unit, config, "f2_unit", "kW", str)
    seed = _resolve_seed(seed, config)
    out = _resolve(out, config, "out", None, Path)
    if sweep and nt is not None:
        raise click.UsageError("--nt and --nt-sweep are mutually exclusive")
    if not sweep and nt is None:
        raise click.UsageError("provide --nt N or --nt-sweep")

    if sweep:
        if out is None:
            out = Path(f"bgsa-results/windfarm-sweep-{algo}-s{seed}")
        out.mkdir(parents=True, exist_ok=True)
        paths: dict[str, Path] = {}

        def save(nt_value, report, problem):
            sub = export_report(report, out / f"nt{nt_value}", problem=problem)
            for key, path in sub.items():
                paths[f"nt{nt_value}/{key}"] = path

        rows = nt_sweep(
            rose, n_turbines=DEFAULT_NT_SWEEP, algorithm=algo, swarm_size=swarm,
            iterations=iters, runs=runs, master_seed=seed,
            wake_exponent=wake_exponent, workers=workers, on_report=save,
        )
        click.echo("n_turbines  power_MW  efficiency_%  capacity_factor_%")
        for row in rows:
            click.echo(
                f"{row.n_turbines:>10d}  {row.power_mw:8.4f}  "
                f"{row.efficiency_pct:12.2f}  {row.capacity_factor_pct:17.2f}"
            )
        paths["sweep"] = export_sweep_csv(rows, out / "sweep.csv")
        _echo_paths(paths)
        return

    if out is None:
        out = Path(f"bgsa-results/windfarm-nt{nt}-{algo}-s{seed}")
    problem = WindfarmProblem(rose=rose, n_turbines=nt, wake_exponent=wake_exponent,
                              f2_unit=f2_unit)
    plan = ExperimentPlan(
        problem=problem, algorithm=algo, swarm_size=swarm, iterations=iters,
        runs=runs, master_seed=seed,
    )
    report = run_experiment(plan, workers=workers)
    best_bits = report.best_positions[report.best_run]
    if int(np.count_nonzero(best_bits)) == nt:
        layout = problem.report(best_bits)
        click.echo(
            f"nt={nt} {algo}: power={layout.power_mw:.4f} MW "
            f"efficiency={100 * layout.efficiency:.2f}% "
            f"capacity_factor={100 * layout.capacity_factor:.2f}%"
        )
    else:
        click.echo(f"nt={nt} {algo}: best run ended infeasible (flagged in summary)")
    _echo_paths(export_report(report, out, problem=problem))


@main.command()
@click.option("--json", "as_json", is_flag=True, default=False,
              help="Emit machine-readable results.")
def validate(as_json):
    """Run the built-in oracle suite and report pass/fail per check."""
    results = run_checks()
    if as_json:
        click.echo(json.dumps(
            {
                "passed": all(r.passed for r in results),
                "checks": [
                    {"name": r.name, "passed": r.passed, "detail": r.detail}
                    for r in results
                ],
            },
            indent=2,
        ))
    else:
        for result in results:
            status = "PASS" if result.passed else "FAIL"
            click.echo(f"{result.name}: {status} ({result.detail})")
    if not all(r.passed for r in results):
        sys.exit(1)


if __name__ == "__main__":
    main()
