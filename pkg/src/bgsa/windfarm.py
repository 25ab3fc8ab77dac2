"""Jensen-wake windfarm model: physics, wind-rose files, layout objective.

A rectangular farm is divided into a grid of cells with one candidate
turbine position at each cell center; a layout is the occupancy bit string
over cells (row-major, row 0 at the south edge, column 0 at the west edge).
For every wind-rose bin the turbine coordinates are projected onto the
downwind axis, upstream wakes grow linearly and overlap rotors partially,
deficits combine root-sum-square, and the turbine power curve maps the waked
speed to kW.  Wind directions are bearings the wind blows FROM (north = 0
degrees, clockwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import _kernels
from .engine import ObjectiveSpec

PENALTY_VALUE = 1e-10
SECTOR_DEG = 22.5

ROSE_HEADER = "direction_deg,speed_mps,probability"


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TurbineSpec:
    """Vestas V-80 class turbine; the power-curve coefficients in
    :func:`power_output` belong to this 2 MW machine."""

    rated_power: float = 2000.0        # kW
    rotor_diameter: float = 80.0       # m
    thrust_coefficient: float = 0.8
    hub_height: float = 60.0           # m
    cut_in: float = 4.0                # m/s
    cut_out: float = 25.0              # m/s

    def __post_init__(self):
        if not 0.0 < self.thrust_coefficient < 1.0:
            raise ValueError("thrust coefficient must be in (0, 1)")
        if not self.cut_in < self.cut_out:
            raise ValueError("cut-in speed must be below cut-out speed")

    @property
    def rotor_radius(self) -> float:
        return self.rotor_diameter / 2.0


@dataclass(frozen=True)
class FarmGrid:
    columns: int = 20
    rows: int = 5
    cell_w: float = 300.0              # m
    cell_h: float = 400.0              # m
    surface_roughness: float = 0.3     # m
    reference_height: float = 60.0     # m

    def __post_init__(self):
        if self.columns < 1 or self.rows < 1:
            raise ValueError("grid must have at least one cell")

    @property
    def cells(self) -> int:
        return self.columns * self.rows

    @property
    def width(self) -> float:
        return self.columns * self.cell_w

    @property
    def height(self) -> float:
        return self.rows * self.cell_h

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """(x, y) coordinates of every cell center, row-major from south-west."""
        cols = np.arange(self.cells) % self.columns
        rows = np.arange(self.cells) // self.columns
        x = cols * self.cell_w + self.cell_w / 2.0
        y = rows * self.cell_h + self.cell_h / 2.0
        return x, y


class RoseError(ValueError):
    """A wind-rose file or bin table failed validation."""


@dataclass(frozen=True)
class WindRose:
    """Discrete (direction, speed) probability bins.

    Directions are FROM-bearings on the 16-sector compass (multiples of
    22.5 degrees); probabilities must sum to one.
    """

    directions_deg: np.ndarray
    speeds_mps: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "directions_deg",
                           np.asarray(self.directions_deg, dtype=np.float64))
        object.__setattr__(self, "speeds_mps",
                           np.asarray(self.speeds_mps, dtype=np.float64))
        object.__setattr__(self, "probabilities",
                           np.asarray(self.probabilities, dtype=np.float64))
        self.validate()

    def validate(self):
        d, u, p = self.directions_deg, self.speeds_mps, self.probabilities
        if not (d.shape == u.shape == p.shape) or d.ndim != 1 or d.size == 0:
            raise RoseError("rose needs matching non-empty direction/speed/probability columns")
        if np.any(p < 0.0):
            raise RoseError("rose probabilities must be non-negative")
        total = float(p.sum())
        if abs(total - 1.0) > 1e-9:
            raise RoseError(
                f"rose probabilities sum to {total:.9f}, expected 1 within 1e-09"
            )
        if np.any((d < 0.0) | (d >= 360.0)):
            raise RoseError("rose directions must lie in [0, 360)")
        sector = d / SECTOR_DEG
        if np.any(np.abs(sector - np.round(sector)) > 1e-9):
            raise RoseError(
                "rose directions must be multiples of 22.5 degrees (16 sectors)"
            )
        if np.any(u <= 0.0):
            raise RoseError("rose speeds must be positive")

    @property
    def n_bins(self) -> int:
        return self.directions_deg.size

    @classmethod
    def single_bin(cls, direction_deg: float, speed_mps: float) -> "WindRose":
        return cls(np.array([direction_deg]), np.array([speed_mps]), np.array([1.0]))

    @classmethod
    def from_file(cls, path) -> "WindRose":
        path = Path(path)
        rows = []
        saw_header = False
        for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if not saw_header:
                if line.replace(" ", "") != ROSE_HEADER:
                    raise RoseError(
                        f"{path}:{lineno}: expected header '{ROSE_HEADER}', got {line!r}"
                    )
                saw_header = True
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 3:
                raise RoseError(f"{path}:{lineno}: expected 3 comma-separated values")
            try:
                rows.append(tuple(float(p) for p in parts))
            except ValueError as exc:
                raise RoseError(f"{path}:{lineno}: {exc}") from exc
        if not saw_header:
            raise RoseError(f"{path}: missing header line '{ROSE_HEADER}'")
        if not rows:
            raise RoseError(f"{path}: no data rows")
        data = np.array(rows)
        try:
            return cls(data[:, 0], data[:, 1], data[:, 2])
        except RoseError as exc:
            raise RoseError(f"{path}: {exc}") from exc

    def to_file(self, path, comment: str = ""):
        path = Path(path)
        lines = ["# wind rose: direction is the bearing the wind blows FROM,"
                 " degrees, north=0, clockwise"]
        if comment:
            lines += [f"# {c}" for c in comment.splitlines()]
        lines.append(ROSE_HEADER)
        for d, u, p in zip(self.directions_deg, self.speeds_mps, self.probabilities):
            lines.append(f"{float(d)!r},{float(u)!r},{float(p)!r}")
        path.write_text("\n".join(lines) + "\n")


def example_rose_path(name: str) -> Path:
    """Path of a wind-rose file shipped with the package."""
    from importlib.resources import files

    resource = files("bgsa.data").joinpath(name)
    if not resource.is_file():
        available = sorted(p.name for p in files("bgsa.data").iterdir()
                           if p.name.endswith(".rose"))
        raise FileNotFoundError(f"no shipped rose {name!r}; available: {available}")
    return Path(str(resource))


# ---------------------------------------------------------------------------
# wake physics
# ---------------------------------------------------------------------------

def axial_induction(thrust_coefficient: float) -> float:
    """a = (1 - sqrt(1 - C_T)) / 2."""
    if not 0.0 <= thrust_coefficient < 1.0:
        raise ValueError("thrust coefficient must be in [0, 1)")
    return (1.0 - math.sqrt(1.0 - thrust_coefficient)) / 2.0


def downstream_rotor_radius(rotor_radius: float, induction: float) -> float:
    """r1 = r * sqrt((1 - a) / (1 - 2a))."""
    if induction >= 0.5:
        raise ValueError("axial induction must be below 0.5")
    if rotor_radius < 0.0:
        raise ValueError("rotor radius must be non-negative")
    return rotor_radius * math.sqrt((1.0 - induction) / (1.0 - 2.0 * induction))


def entrainment_constant(hub_height: float, surface_roughness: float) -> float:
    """alpha = 0.5 / ln(h / z0)."""
    if surface_roughness <= 0.0 or hub_height <= surface_roughness:
        raise ValueError("hub height must exceed the (positive) surface roughness")
    return 0.5 / math.log(hub_height / surface_roughness)


def wake_radius(entrainment: float, downstream_distance: float,
                downstream_rotor_radius: float) -> float:
    """Linear wake growth: r_w = alpha * x + r1."""
    if downstream_distance < 0.0:
        raise ValueError("downstream distance must be non-negative")
    return entrainment * downstream_distance + downstream_rotor_radius


def local_free_speed(u_ref: float, hub_height: float, reference_height: float,
                     surface_roughness: float) -> float:
    """Log-profile speed at hub height from the reference measurement."""
    if hub_height <= surface_roughness:
        raise ValueError("hub height must exceed surface roughness")
    return u_ref * math.log(hub_height / surface_roughness) / math.log(
        reference_height / surface_roughness
    )


def single_wake_speed(u_free: float, induction: float, entrainment: float,
                      downstream_distance: float, downstream_rotor_radius: float,
                      exponent: int = 2) -> float:
    """Waked speed behind a single upstream turbine.

    ``exponent`` selects the wake-decay denominator power: 2 is the canonical
    Jensen form (default), 1 the form some sources print.
    """
    if exponent not in (1, 2):
        raise ValueError("wake exponent must be 1 or 2")
    if downstream_distance <= 0.0:
        raise ValueError("the waked turbine must be strictly downstream (x > 0)")
    growth = 1.0 + entrainment * downstream_distance / downstream_rotor_radius
    return u_free * (1.0 - 2.0 * induction / growth**exponent)


def overlap_area(offset, rotor_radius, wake_radius):
    """Lens area of a rotor disc versus a wake disc at crosswind ``offset``.

    Zero when the discs are disjoint; the full rotor area pi*r^2 when the
    rotor is contained in the wake.  Accepts scalars or broadcastable arrays.
    """
    d = np.asarray(offset, dtype=np.float64)
    r_a = np.asarray(rotor_radius, dtype=np.float64)
    r_b = np.asarray(wake_radius, dtype=np.float64)
    if np.any(d < 0.0):
        raise ValueError("offset must be non-negative")
    if np.any(r_a < 0.0) or np.any(r_b < 0.0):
        raise ValueError("radii must be non-negative")
    d, r_a, r_b = np.broadcast_arrays(d, r_a, r_b)
    out = np.zeros(d.shape)
    contained = d <= np.abs(r_a - r_b)
    out[contained] = np.pi * np.minimum(r_a, r_b)[contained] ** 2
    partial = (~contained) & (d < r_a + r_b)
    if np.any(partial):
        dd, ra, rb = d[partial], r_a[partial], r_b[partial]
        d1 = (ra**2 - rb**2 + dd**2) / (2.0 * dd)
        d2 = dd - d1
        a1 = ra**2 * np.arccos(np.clip(d1 / ra, -1.0, 1.0))
        a1 -= d1 * np.sqrt(np.maximum(ra**2 - d1**2, 0.0))
        a2 = rb**2 * np.arccos(np.clip(d2 / rb, -1.0, 1.0))
        a2 -= d2 * np.sqrt(np.maximum(rb**2 - d2**2, 0.0))
        out[partial] = a1 + a2
    return float(out) if out.ndim == 0 else out


def combined_wake_speed(influences, u_free: float, rotor_radius: float) -> float:
    """Root-sum-square combination of several upstream wake deficits.

    ``influences`` is a sequence of ``(u_ij, u_0j, overlap_area_ij)`` tuples,
    one per upstream turbine whose wake covers part of this rotor.
    """
    rotor_area = math.pi * rotor_radius**2
    acc = 0.0
    for u_ij, u_0j, area in influences:
        acc += (area / rotor_area) * (1.0 - u_ij / u_0j) ** 2
    return max(u_free * (1.0 - math.sqrt(acc)), 0.0)


def power_output(u, turbine: TurbineSpec = TurbineSpec()):
    """Turbine power curve in kW (V-80 shape: ramp, steep ramp, 2 MW plateau)."""
    u_arr = np.asarray(u, dtype=np.float64)
    knee = turbine.cut_in + 25.0 / 19.0
    out = np.zeros(u_arr.shape)
    seg1 = (u_arr >= turbine.cut_in) & (u_arr <= knee)
    seg2 = (u_arr > knee) & (u_arr < 13.0)
    seg3 = (u_arr >= 13.0) & (u_arr <= turbine.cut_out)
    out[seg1] = 60.0 * (u_arr[seg1] - turbine.cut_in)
    out[seg2] = 250.0 * (u_arr[seg2] - turbine.cut_in - 1.0)
    out[seg3] = turbine.rated_power
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# layout evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LayoutReport:
    efficiency: float              # F1, fraction in [0, 1]
    power_kw: float                # F2, expected total output
    capacity_factor: float
    per_turbine_kw: np.ndarray
    n_turbines: int

    @property
    def power_mw(self) -> float:
        return self.power_kw / 1000.0


def _wake_parameters(farm: FarmGrid, turbine: TurbineSpec):
    induction = axial_induction(turbine.thrust_coefficient)
    r1 = downstream_rotor_radius(turbine.rotor_radius, induction)
    alpha = entrainment_constant(turbine.hub_height, farm.surface_roughness)
    return induction, r1, alpha


def _rose_arrays(rose: WindRose, farm: FarmGrid, turbine: TurbineSpec):
    dirs_rad = np.radians(rose.directions_deg)
    u0 = np.array([
        local_free_speed(u, turbine.hub_height, farm.reference_height,
                         farm.surface_roughness)
        for u in rose.speeds_mps
    ])
    return dirs_rad, u0, rose.probabilities.astype(np.float64)


def evaluate_layout(occupancy, rose: WindRose, farm: FarmGrid = FarmGrid(),
                    turbine: TurbineSpec = TurbineSpec(),
                    wake_exponent: int = 2) -> LayoutReport:
    """Expected power, efficiency and capacity factor of one layout."""
    occ = np.asarray(occupancy, dtype=np.uint8)
    if occ.shape != (farm.cells,):
        raise ValueError(f"occupancy must have length {farm.cells}")
    if wake_exponent not in (1, 2):
        raise ValueError("wake exponent must be 1 or 2")
    n_turbines = int(np.count_nonzero(occ))
    if n_turbines == 0:
        raise ValueError("layout places no turbines")
    cx, cy = farm.cell_centers()
    mask = occ != 0
    induction, r1, alpha = _wake_parameters(farm, turbine)
    dirs_rad, u0, probs = _rose_arrays(rose, farm, turbine)
    wake, free = _kernels.farm_power(
        cx[mask], cy[mask], dirs_rad, u0, probs, turbine.rotor_radius,
        induction, alpha, r1, wake_exponent, turbine.rated_power,
        turbine.cut_in, turbine.cut_out,
    )
    power_kw = float(wake.sum())
    free_kw = float(free.sum())
    efficiency = power_kw / free_kw if free_kw > 0.0 else 0.0
    return LayoutReport(
        efficiency=efficiency,
        power_kw=power_kw,
        capacity_factor=power_kw / (n_turbines * turbine.rated_power),
        per_turbine_kw=wake,
        n_turbines=n_turbines,
    )


def aggregate_objective(efficiency: float, power_kw: float, w1: float = 0.5,
                        w2: float = 0.5, f2_unit: str = "kW") -> float:
    """Weighted aggregate of efficiency and total power.

    The tabulated aggregate mixes a fraction with a power figure; the unit
    used for the power term (kW default, or MW) is configurable because the
    two are never combined explicitly in the reference results.
    """
    if f2_unit not in ("kW", "MW"):
        raise ValueError("f2_unit must be 'kW' or 'MW'")
    scale = 1.0 if f2_unit == "kW" else 1e-3
    return w1 * efficiency + w2 * power_kw * scale


def penalized_objective(occupancy, n_turbines: int, rose: WindRose,
                        farm: FarmGrid = FarmGrid(),
                        turbine: TurbineSpec = TurbineSpec(),
                        wake_exponent: int = 2, w1: float = 0.5, w2: float = 0.5,
                        f2_unit: str = "kW") -> float:
    """Aggregate objective of one layout, or the penalty value when the
    number of placed turbines differs from ``n_turbines`` (maximization)."""
    occ = np.asarray(occupancy, dtype=np.uint8)
    if occ.shape != (farm.cells,):
        raise ValueError(f"occupancy must have length {farm.cells}")
    if int(np.count_nonzero(occ)) != n_turbines:
        return PENALTY_VALUE
    report = evaluate_layout(occ, rose, farm, turbine, wake_exponent)
    return aggregate_objective(report.efficiency, report.power_kw, w1, w2, f2_unit)


@dataclass(frozen=True)
class WindfarmProblem:
    """Layout optimization task: place exactly ``n_turbines`` on the grid."""

    rose: WindRose
    n_turbines: int
    farm: FarmGrid = field(default_factory=FarmGrid)
    turbine: TurbineSpec = field(default_factory=TurbineSpec)
    wake_exponent: int = 2
    w1: float = 0.5
    w2: float = 0.5
    f2_unit: str = "kW"

    def __post_init__(self):
        if not 1 <= self.n_turbines <= self.farm.cells:
            raise ValueError(
                f"n_turbines must be in [1, {self.farm.cells}], got {self.n_turbines}"
            )
        if self.wake_exponent not in (1, 2):
            raise ValueError("wake exponent must be 1 or 2")

    @property
    def problem_id(self) -> str:
        return f"windfarm-nt{self.n_turbines}"

    @property
    def sense(self) -> str:
        return "max"

    @property
    def bit_length(self) -> int:
        return self.farm.cells

    def report(self, occupancy) -> LayoutReport:
        return evaluate_layout(occupancy, self.rose, self.farm, self.turbine,
                               self.wake_exponent)

    def make_objective(self) -> ObjectiveSpec:
        cx, cy = self.farm.cell_centers()
        induction, r1, alpha = _wake_parameters(self.farm, self.turbine)
        dirs_rad, u0, probs = _rose_arrays(self.rose, self.farm, self.turbine)
        turbine, n_t = self.turbine, self.n_turbines
        f2_scale = 1.0 if self.f2_unit == "kW" else 1e-3
        w1, w2, exponent = self.w1, self.w2, self.wake_exponent

        def fn(bits, rng):
            return _kernels.farm_objective_batch(
                np.ascontiguousarray(bits, dtype=np.uint8), n_t, cx, cy,
                dirs_rad, u0, probs, turbine.rotor_radius, induction, alpha,
                r1, exponent, turbine.rated_power, turbine.cut_in,
                turbine.cut_out, w1, w2, f2_scale, PENALTY_VALUE,
            )

        cells = self.farm.cells

        def initializer(rng, n, d):
            # Feasible seeding: exactly n_turbines ones per particle.  A
            # uniform 0/1 start essentially never reaches low turbine counts
            # on 100 cells, and the flat penalty carries no gradient there.
            keys = rng.random((n, d))
            order = np.argsort(keys, axis=1)
            positions = np.zeros((n, d), dtype=np.uint8)
            np.put_along_axis(positions, order[:, :n_t], 1, axis=1)
            return positions

        return ObjectiveSpec(
            fn=fn,
            dimension=cells,
            sense="max",
            name=self.problem_id,
            initializer=initializer,
        )


# ---------------------------------------------------------------------------
# layout export
# ---------------------------------------------------------------------------

def export_layout_csv(occupancy, farm: FarmGrid, path):
    occ = np.asarray(occupancy, dtype=np.uint8)
    cx, cy = farm.cell_centers()
    lines = ["cell_index,x_m,y_m,occupied"]
    for i in range(farm.cells):
        lines.append(f"{i},{float(cx[i])!r},{float(cy[i])!r},{int(occ[i])}")
    Path(path).write_text("\n".join(lines) + "\n")


def export_layout_svg(occupancy, farm: FarmGrid, path, scale: float = 0.1):
    """Render the grid with occupied cells filled (one rect per cell)."""
    occ = np.asarray(occupancy, dtype=np.uint8)
    width = farm.width * scale
    height = farm.height * scale
    cw = farm.cell_w * scale
    ch = farm.cell_h * scale
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" '
        f'height="{height:g}" viewBox="0 0 {width:g} {height:g}">'
    ]
    for i in range(farm.cells):
        col = i % farm.columns
        row = i // farm.columns
        x = col * cw
        # row 0 is the south edge; SVG y grows downward
        y = height - (row + 1) * ch
        occupied = int(occ[i])
        fill = "#2b6cb0" if occupied else "#ffffff"
        parts.append(
            f'<rect class="cell" data-cell="{i}" data-occupied="{occupied}" '
            f'x="{x:g}" y="{y:g}" width="{cw:g}" height="{ch:g}" '
            f'fill="{fill}" stroke="#444444" stroke-width="0.5"/>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
