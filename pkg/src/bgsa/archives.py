"""Per-particle neighbourhood archives and fitness-distance pair gravity.

Each particle receives two archives rebuilt every iteration from the current
elite (kbest) set: an F archive holding the two fittest elite members and a
D archive holding up to three elite members nearest in Hamming distance.
Their deduplicated union (2 to 5 particles) is the particle's interaction
neighbourhood.  Pair gravity scales with the fitness gap and shrinks with
distance, so far-from-optimal particles take large steps while converged
ones refine locally.

The archive membership rules and the exact gravity formula are a documented
reconstruction: both pieces are exposed as plain functions so an alternative
definition can be swapped in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .bits import hamming_distance

F_MEMBERS = 2
D_MEMBERS = 3
MIN_SIZE = 2
MAX_SIZE = F_MEMBERS + D_MEMBERS


@dataclass(frozen=True)
class FdgParams:
    delta: float = 1e-2
    gamma: float = 1e-5

    def __post_init__(self):
        if self.delta <= 0.0 or self.gamma <= 0.0:
            raise ValueError("delta and gamma must be positive")


@dataclass
class ArchiveSet:
    """Merged neighbourhoods for a whole swarm.

    ``members[i, :sizes[i]]`` are particle i's neighbour indices; the padded
    tail of each row is unused.
    """

    members: np.ndarray   # (n, MAX_SIZE) int64
    sizes: np.ndarray     # (n,) int64

    def neighbours_of(self, i: int) -> np.ndarray:
        return self.members[i, : self.sizes[i]]


def fdg(i: int, j: int, fitnesses, positions, params: FdgParams = FdgParams()) -> float:
    """Pair gravity (log1p(|fit_i - fit_j|) + delta) / (hamming(x_i, x_j) + gamma).

    Symmetric, strictly increasing in the fitness gap and strictly decreasing
    in distance; delta keeps a minimum interaction between fitness-tied
    particles and gamma keeps the value finite for duplicates.  The gap is
    log-compressed so the pull stays in the useful range of the tanh flip
    map across objectives whose raw fitness scales differ by orders of
    magnitude; the value is consumed as the particle pair's complete
    interaction coefficient (it already encodes both the fitness weighting
    and the distance damping of the force law).
    """
    if i == j:
        raise ValueError("pair gravity is defined for distinct particles")
    gap = abs(float(fitnesses[i]) - float(fitnesses[j]))
    dist = hamming_distance(positions[i], positions[j])
    return (math.log1p(gap) + params.delta) / (dist + params.gamma)


def naggsa_neighbour_gravity(i: int, archive: ArchiveSet, fitnesses, positions,
                             params: FdgParams = FdgParams()):
    """(neighbour index, pair gravity) for each merged neighbour of particle i."""
    return [
        (int(j), fdg(i, int(j), fitnesses, positions, params))
        for j in archive.neighbours_of(i)
    ]


def build_archives(positions, fitnesses, kbest_idx, sense: str = "min") -> ArchiveSet:
    """Build merged F/D neighbourhoods for every particle.

    F members are the two fittest elite particles other than the owner; D
    members are the up-to-three elite particles nearest in Hamming distance
    (ties to the lower particle index).  If the deduplicated union is smaller
    than two (possible late in a run when the elite set has shrunk to one or
    two members), it is padded with the next-best particles by fitness rank,
    elite first.  Swarms with fewer than three particles fall back to
    all-other-particles neighbourhoods.
    """
    positions = np.asarray(positions, dtype=np.uint8)
    fitnesses = np.asarray(fitnesses, dtype=np.float64)
    n = positions.shape[0]

    if n < 3:
        members = np.zeros((n, max(n - 1, 1)), dtype=np.int64)
        sizes = np.full(n, n - 1, dtype=np.int64)
        for i in range(n):
            members[i, : n - 1] = [j for j in range(n) if j != i]
        return ArchiveSet(members=members, sizes=sizes)

    kbest_idx = np.asarray(kbest_idx, dtype=np.int64)
    dists = _kernels.hamming_to_subset(positions, kbest_idx)

    # per-row elite order by (distance, particle index)
    idx_matrix = np.broadcast_to(kbest_idx, dists.shape)
    d_order = np.lexsort((idx_matrix, dists), axis=1)

    key = fitnesses if sense == "min" else -fitnesses
    fitness_rank = np.argsort(key, kind="stable")
    in_elite = np.zeros(n, dtype=bool)
    in_elite[kbest_idx] = True
    # padding pool: elite by fitness first, then the rest of the swarm by fitness
    pad_order = np.concatenate(
        [kbest_idx, np.array([j for j in fitness_rank if not in_elite[j]], dtype=np.int64)]
    )

    members = np.zeros((n, MAX_SIZE), dtype=np.int64)
    sizes = np.zeros(n, dtype=np.int64)
    for i in range(n):
        merged: list[int] = []
        for j in kbest_idx:
            if j != i:
                merged.append(int(j))
                if len(merged) == F_MEMBERS:
                    break
        taken = 0
        for pos in d_order[i]:
            j = int(kbest_idx[pos])
            if j == i:
                continue
            if j not in merged:
                merged.append(j)
            taken += 1
            if taken == D_MEMBERS:
                break
        if len(merged) < MIN_SIZE:
            for j in pad_order:
                j = int(j)
                if j != i and j not in merged:
                    merged.append(j)
                    if len(merged) == MIN_SIZE:
                        break
        sizes[i] = len(merged)
        members[i, : len(merged)] = merged
    return ArchiveSet(members=members, sizes=sizes)
