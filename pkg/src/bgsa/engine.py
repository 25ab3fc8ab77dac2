"""Binary gravitational search engine.

One iteration maps fitness values to masses, selects the interacting
neighbour set (the shrinking elite set, or per-particle archives from
:mod:`bgsa.archives`), accumulates attractions over Hamming distances
(mass-weighted under the scalar gravity schedules, fitness-distance-weighted
under the archive strategy), updates velocities with a random inertia weight
and a hard clamp, and finally flips bits with probability ``|tanh(v)|`` per
dimension.

Randomness contract (fixed draw order per iteration, one stream per run):

1. objective evaluation (noisy objectives draw here),
2. one uniform per (particle, neighbour slot) pair,
3. one inertia uniform per particle,
4. one flip uniform per bit.

Unused draws (e.g. the slot of a particle's own index inside the elite set)
are still consumed, which keeps runs bit-reproducible regardless of which
particles end up interacting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .archives import FdgParams, build_archives
from .bits import random_bits

V_MAX = 6.0


# ---------------------------------------------------------------------------
# gravity strategies
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentialGravity:
    """G(t) = g0 * exp(-alpha * t / T)."""

    g0: float = 100.0
    alpha: float = 20.0


@dataclass(frozen=True)
class LinearGravity:
    """G(t) = g0 * (1 - t / T)."""

    g0: float = 100.0


@dataclass(frozen=True)
class FitnessDistanceGravity:
    """Per-pair gravity (log1p(|fit_i - fit_j|) + delta) / (hamming_ij + gamma),
    consumed as the complete interaction coefficient (see bgsa.archives.fdg)."""

    delta: float = 1e-2
    gamma: float = 1e-5

    def params(self) -> FdgParams:
        return FdgParams(delta=self.delta, gamma=self.gamma)


GravityStrategy = ExponentialGravity | LinearGravity | FitnessDistanceGravity


def scalar_gravity(strategy: GravityStrategy, t: int, max_iterations: int) -> float:
    """Iteration-wide gravitational constant for the scalar strategies."""
    if isinstance(strategy, ExponentialGravity):
        return strategy.g0 * math.exp(-strategy.alpha * t / max_iterations)
    if isinstance(strategy, LinearGravity):
        return strategy.g0 * (1.0 - t / max_iterations)
    raise TypeError(
        "fitness-distance gravity is defined per particle pair; "
        "it has no iteration-wide scalar value"
    )


# ---------------------------------------------------------------------------
# configuration / state
# ---------------------------------------------------------------------------

@dataclass
class EngineConfig:
    swarm_size: int = 50
    max_iterations: int = 500
    epsilon: float = 1e-12
    v_max: float = V_MAX
    gravity: GravityStrategy = field(default_factory=LinearGravity)
    neighbour_source: str = "kbest"  # "kbest" | "archives"

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ValueError("swarm_size must be >= 2")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.neighbour_source not in ("kbest", "archives"):
            raise ValueError(f"unknown neighbour_source {self.neighbour_source!r}")
        per_pair = isinstance(self.gravity, FitnessDistanceGravity)
        if self.neighbour_source == "kbest" and per_pair:
            raise ValueError("kbest neighbours require a scalar gravity strategy")
        if self.neighbour_source == "archives" and not per_pair:
            raise ValueError("archive neighbours require fitness-distance gravity")


def bgsa_config(swarm_size: int = 50, max_iterations: int = 500, g0: float = 100.0,
                **kwargs) -> EngineConfig:
    """BGSA: shrinking elite neighbourhood with the linear gravity schedule."""
    return EngineConfig(
        swarm_size=swarm_size,
        max_iterations=max_iterations,
        gravity=LinearGravity(g0=g0),
        neighbour_source="kbest",
        **kwargs,
    )


def bnaggsa_config(swarm_size: int = 50, max_iterations: int = 500,
                   delta: float = 1e-2, gamma: float = 1e-5, **kwargs) -> EngineConfig:
    """BNAGGSA: neighbourhood archives with fitness-distance pair gravity."""
    return EngineConfig(
        swarm_size=swarm_size,
        max_iterations=max_iterations,
        gravity=FitnessDistanceGravity(delta=delta, gamma=gamma),
        neighbour_source="archives",
        **kwargs,
    )


@dataclass
class ObjectiveSpec:
    """Engine-facing problem description.

    ``fn`` evaluates a whole swarm at once: ``fn(bits, rng) -> fitness`` with
    ``bits`` of shape ``(n, dimension)`` (uint8) and fitness ``(n,)`` floats.
    ``initializer``, when given, replaces the default uniform random swarm
    initialization (used by constrained problems that seed feasible layouts).
    """

    fn: Callable[[np.ndarray, np.random.Generator], np.ndarray]
    dimension: int
    sense: str = "min"
    name: str = ""
    initializer: Optional[Callable[[np.random.Generator, int, int], np.ndarray]] = None

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")


@dataclass
class SwarmState:
    positions: np.ndarray        # (n, d) uint8
    velocities: np.ndarray       # (n, d) float64
    iteration: int
    max_iterations: int
    sense: str
    fitness: Optional[np.ndarray] = None
    masses: Optional[np.ndarray] = None
    best_position: Optional[np.ndarray] = None
    best_fitness: float = math.nan
    archive_sizes: Optional[np.ndarray] = None

    @property
    def swarm_size(self) -> int:
        return self.positions.shape[0]

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]


@dataclass
class RunResult:
    best_position: np.ndarray
    best_fitness: float
    trace: np.ndarray            # best-so-far after each iteration, length T


# ---------------------------------------------------------------------------
# elementary operations
# ---------------------------------------------------------------------------

def compute_masses(fitnesses, sense: str = "min") -> np.ndarray:
    """Normalized masses from fitness values (Σ = 1, best largest, worst 0).

    When every particle has the same fitness the mapping degenerates to 0/0
    and masses fall back to the uniform distribution 1/n.
    """
    f = np.asarray(fitnesses, dtype=np.float64)
    if sense == "min":
        best, worst = f.min(), f.max()
    else:
        best, worst = f.max(), f.min()
    if best == worst:
        return np.full(f.size, 1.0 / f.size)
    q = (f - worst) / (best - worst)
    return q / q.sum()


def kbest_size(t: int, max_iterations: int, swarm_size: int) -> int:
    """Elite-set size: linear from ``swarm_size`` at t=0 down to 1 at t=T-1.

    Round-half-up on the linear schedule; a single-iteration run keeps the
    whole swarm interacting.
    """
    if max_iterations <= 1:
        return swarm_size
    value = swarm_size - (swarm_size - 1) * t / (max_iterations - 1)
    return int(math.floor(value + 0.5))


def kbest_indices(fitnesses, k: int, sense: str = "min") -> np.ndarray:
    """Indices of the k best particles, fitness-sorted, ties to lower index."""
    f = np.asarray(fitnesses, dtype=np.float64)
    key = f if sense == "min" else -f
    return np.argsort(key, kind="stable")[:k]


def update_velocity(velocity, acceleration, rand_inertia, v_max: float = V_MAX):
    """v <- clamp(rand_i * v + a) with one inertia draw per particle."""
    rand_inertia = np.asarray(rand_inertia, dtype=np.float64)
    v = rand_inertia[:, None] * velocity + acceleration
    return np.clip(v, -v_max, v_max)


def transfer_flip(positions, velocities, rand_flip) -> np.ndarray:
    """Complement each bit with probability |tanh(v)| of its velocity."""
    flip = rand_flip < np.abs(np.tanh(velocities))
    return np.where(flip, 1 - positions, positions).astype(np.uint8)


# ---------------------------------------------------------------------------
# main loop
# ---------------------------------------------------------------------------

def init_swarm(objective: ObjectiveSpec, config: EngineConfig,
               rng: np.random.Generator) -> SwarmState:
    n, d = config.swarm_size, objective.dimension
    if objective.initializer is not None:
        positions = np.asarray(objective.initializer(rng, n, d), dtype=np.uint8)
        if positions.shape != (n, d):
            raise ValueError("initializer returned wrong shape")
    else:
        positions = random_bits(rng, (n, d))
    return SwarmState(
        positions=positions,
        velocities=np.zeros((n, d)),
        iteration=0,
        max_iterations=config.max_iterations,
        sense=objective.sense,
        best_fitness=math.inf if objective.sense == "min" else -math.inf,
    )


def step(state: SwarmState, objective: ObjectiveSpec, config: EngineConfig,
         rng: np.random.Generator) -> SwarmState:
    """Advance the swarm by one iteration (mutates and returns ``state``)."""
    n, d = state.positions.shape
    t, total = state.iteration, config.max_iterations

    fitness = np.asarray(objective.fn(state.positions, rng), dtype=np.float64)
    if fitness.shape != (n,):
        raise ValueError(f"objective returned shape {fitness.shape}, expected ({n},)")
    state.fitness = fitness

    i_best = int(np.argmin(fitness) if state.sense == "min" else np.argmax(fitness))
    improved = (
        fitness[i_best] < state.best_fitness
        if state.sense == "min"
        else fitness[i_best] > state.best_fitness
    )
    if state.best_position is None or improved:
        state.best_position = state.positions[i_best].copy()
        state.best_fitness = float(fitness[i_best])

    masses = compute_masses(fitness, state.sense)
    state.masses = masses
    elite = kbest_indices(fitness, kbest_size(t, total, n), state.sense)

    if config.neighbour_source == "kbest":
        dists = _kernels.hamming_to_subset(state.positions, elite)
        rand_pair = rng.random((n, elite.size))
        gravity = scalar_gravity(config.gravity, t, total)
        acceleration = _kernels.kbest_acceleration(
            state.positions, masses, elite, dists, rand_pair, gravity, config.epsilon
        )
        state.archive_sizes = None
    else:
        archive = build_archives(state.positions, fitness, elite, state.sense)
        rand_pair = rng.random((n, archive.members.shape[1]))
        params = config.gravity.params()
        acceleration = _kernels.archive_acceleration(
            state.positions, fitness, archive.members, archive.sizes,
            rand_pair, params.delta, params.gamma,
        )
        state.archive_sizes = archive.sizes

    rand_inertia = rng.random(n)
    state.velocities = update_velocity(
        state.velocities, acceleration, rand_inertia, config.v_max
    )
    rand_flip = rng.random((n, d))
    state.positions = transfer_flip(state.positions, state.velocities, rand_flip)
    state.iteration = t + 1
    return state


def run(objective: ObjectiveSpec, config: EngineConfig, seed,
        on_step: Optional[Callable[[SwarmState], None]] = None) -> RunResult:
    """Run the full loop from a fresh swarm.

    ``seed`` may be an integer or a ``numpy.random.Generator``.  The
    best-so-far trace has exactly ``max_iterations`` entries and is monotone
    in the optimization sense.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    state = init_swarm(objective, config, rng)
    trace = np.empty(config.max_iterations)
    for t in range(config.max_iterations):
        step(state, objective, config, rng)
        trace[t] = state.best_fitness
        if on_step is not None:
            on_step(state)
    return RunResult(
        best_position=state.best_position.copy(),
        best_fitness=state.best_fitness,
        trace=trace,
    )
