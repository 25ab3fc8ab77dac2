"""Built-in oracle suite behind ``bgsa validate``.

Each check re-derives a handful of known values through an independent route
(brute-force enumeration, hand-evaluated formulas, Monte-Carlo sampling) and
compares the library against them.  Tests reuse these functions directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .benchmarks import catalog
from .bits import DecodingSpec, decode_real
from .windfarm import (
    TurbineSpec,
    axial_induction,
    downstream_rotor_radius,
    entrainment_constant,
    overlap_area,
    power_output,
    single_wake_speed,
    wake_radius,
)

# Hand-evaluated wake chain for C_T=0.8, r=40 m, h=60 m, z0=0.3 m,
# u_ref=8.2 m/s at x=400 m (frozen before the model was implemented).
HAND_INDUCTION = 0.27639320225002106
HAND_DOWNSTREAM_RADIUS = 50.88078598056276
HAND_ENTRAINMENT = 0.09436958290887743
HAND_WAKE_RADIUS_400 = 88.62861914411374
HAND_WAKED_SPEED_EXP2 = 6.706067887485673
HAND_WAKED_SPEED_EXP1 = 5.597737914705675


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rel_err(value, reference):
    return abs(value - reference) / max(abs(reference), 1e-300)


def check_bit_decoder() -> CheckResult:
    failures = []
    spec4 = DecodingSpec(lower=-3.0, upper=5.0, n_vars=1, bits_per_var=4)
    for value in range(16):
        segment = [(value >> i) & 1 for i in range(4)]
        expected = -3.0 + value * (5.0 - (-3.0)) / 2**4
        got = decode_real(np.array(segment, dtype=np.uint8), spec4)
        if got != expected:
            failures.append(f"pattern {value}: {got} != {expected}")
    spec15 = DecodingSpec(lower=-100.0, upper=100.0, n_vars=1, bits_per_var=15)
    if decode_real(np.zeros(15, dtype=np.uint8), spec15) != -100.0:
        failures.append("all-zero segment did not decode to the lower bound")
    detail = "; ".join(failures) if failures else "L=4 full scan and lower bound exact"
    return CheckResult("bit_decoder", not failures, detail)


def check_benchmark_optima() -> CheckResult:
    failures = []
    for problem in catalog().values():
        value = problem.evaluate_real(np.array(problem.x_star))
        err = abs(value - problem.f_min_table)
        if err > problem.table_tol:
            failures.append(
                f"{problem.problem_id}: f(x*)={value:.6g} vs table "
                f"{problem.f_min_table:.6g} (err {err:.2e} > {problem.table_tol:g})"
            )
    detail = "; ".join(failures) if failures else "all 23 optima within tolerance"
    return CheckResult("benchmark_optima", not failures, detail)


def check_wake_hand_values() -> CheckResult:
    failures = []
    a = axial_induction(0.8)
    r1 = downstream_rotor_radius(40.0, a)
    alpha = entrainment_constant(60.0, 0.3)
    pairs = [
        ("induction", a, HAND_INDUCTION),
        ("downstream radius", r1, HAND_DOWNSTREAM_RADIUS),
        ("entrainment", alpha, HAND_ENTRAINMENT),
        ("wake radius @400m", wake_radius(alpha, 400.0, r1), HAND_WAKE_RADIUS_400),
        ("waked speed exp=2", single_wake_speed(8.2, a, alpha, 400.0, r1, 2),
         HAND_WAKED_SPEED_EXP2),
        ("waked speed exp=1", single_wake_speed(8.2, a, alpha, 400.0, r1, 1),
         HAND_WAKED_SPEED_EXP1),
    ]
    for label, got, want in pairs:
        if _rel_err(got, want) > 1e-4:
            failures.append(f"{label}: {got!r} vs {want!r}")
    detail = "; ".join(failures) if failures else "wake chain matches hand values"
    return CheckResult("wake_hand_values", not failures, detail)


def check_power_curve_continuity() -> CheckResult:
    turbine = TurbineSpec()
    knee = turbine.cut_in + 25.0 / 19.0
    failures = []
    if abs(power_output(turbine.cut_in)) > 1e-12:
        failures.append("cut-in does not start at zero")
    low = 60.0 * (knee - turbine.cut_in)
    high = 250.0 * (knee - turbine.cut_in - 1.0)
    if abs(low - high) > 1e-9 or abs(power_output(knee) - low) > 1e-9:
        failures.append(f"knee mismatch: {low} vs {high}")
    if power_output(13.0) != turbine.rated_power:
        failures.append("13 m/s does not reach rated power")
    if abs(power_output(13.0 - 1e-9) - turbine.rated_power) > 1e-5:
        failures.append("ramp does not meet the plateau at 13 m/s")
    detail = "; ".join(failures) if failures else (
        f"continuous at cut-in, knee ({low:.3f} kW) and rated transition"
    )
    return CheckResult("power_curve_continuity", not failures, detail)


def check_overlap_geometry(samples: int = 200_000, triples: int = 5) -> CheckResult:
    failures = []
    if overlap_area(0.0, 40.0, 50.0) != math.pi * 40.0**2:
        failures.append("full-wake case is not exactly pi*r^2")
    if overlap_area(95.0, 40.0, 50.0) != 0.0:
        failures.append("disjoint discs have nonzero overlap")
    closed_form = 2 * 40.0**2 * (math.pi / 3 - math.sqrt(3.0) / 4)
    if _rel_err(overlap_area(40.0, 40.0, 40.0), closed_form) > 1e-12:
        failures.append("equal-disc half-offset lens deviates from closed form")
    rng = np.random.default_rng(20240817)
    for _ in range(triples):
        r_i = rng.uniform(20.0, 80.0)
        r_w = rng.uniform(0.6 * r_i, 2.0 * r_i)
        d = rng.uniform(0.0, 0.6 * (r_i + r_w))
        analytic = overlap_area(d, r_i, r_w)
        theta = rng.uniform(0.0, 2 * np.pi, samples)
        radius = r_i * np.sqrt(rng.uniform(0.0, 1.0, samples))
        px = radius * np.cos(theta)
        py = radius * np.sin(theta)
        inside = (px - d) ** 2 + py**2 <= r_w**2
        mc = inside.mean() * math.pi * r_i**2
        if _rel_err(analytic, mc) > 0.01:
            failures.append(
                f"lens({d:.2f}, {r_i:.2f}, {r_w:.2f}): analytic {analytic:.2f} "
                f"vs MC {mc:.2f}"
            )
    detail = "; ".join(failures) if failures else (
        f"exact cases plus {triples} Monte-Carlo triples agree"
    )
    return CheckResult("overlap_geometry", not failures, detail)


def run_checks() -> list[CheckResult]:
    return [
        check_bit_decoder(),
        check_benchmark_optima(),
        check_wake_hand_values(),
        check_power_curve_continuity(),
        check_overlap_geometry(),
    ]
