"""Bit-string primitives shared by every module.

Candidate solutions are fixed-length 0/1 vectors stored as ``numpy`` arrays of
``uint8``.  Real-valued problems read them through a fixed-point decoder: the
bit string is split into ``n_vars`` segments of ``bits_per_var`` bits, each
segment is read least-significant-bit first and mapped affinely onto
``[lower, upper)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def hamming_distance(x, y) -> int:
    """Number of positions where two equal-length bit strings differ."""
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise ValueError(f"length mismatch: {x.shape} vs {y.shape}")
    return int(np.count_nonzero(x != y))


@dataclass(frozen=True)
class DecodingSpec:
    """Fixed-point decoding layout: ``n_vars`` segments of ``bits_per_var`` bits
    mapped onto ``[lower, upper)``."""

    lower: float
    upper: float
    n_vars: int
    bits_per_var: int = 15

    def __post_init__(self):
        if not self.upper > self.lower:
            raise ValueError(f"upper ({self.upper}) must exceed lower ({self.lower})")
        if self.bits_per_var < 1:
            raise ValueError("bits_per_var must be >= 1")
        if self.n_vars < 1:
            raise ValueError("n_vars must be >= 1")

    @property
    def total_bits(self) -> int:
        return self.n_vars * self.bits_per_var

    @property
    def resolution(self) -> float:
        """Width of one decoding step, ``(upper - lower) / 2**bits_per_var``."""
        return (self.upper - self.lower) / float(2 ** self.bits_per_var)


def bits_to_integer(segment) -> int:
    """Integer value of one segment, bit 0 carrying weight ``2**0``."""
    segment = np.asarray(segment)
    weights = 1 << np.arange(segment.size, dtype=np.int64)
    return int(segment.astype(np.int64) @ weights)


def decode_real(segment, spec: DecodingSpec) -> float:
    """Map one ``bits_per_var``-bit segment onto ``[lower, upper)``."""
    segment = np.asarray(segment)
    if segment.size != spec.bits_per_var:
        raise ValueError(
            f"segment has {segment.size} bits, spec expects {spec.bits_per_var}"
        )
    return spec.lower + bits_to_integer(segment) * spec.resolution


def decode_vector(bits, spec: DecodingSpec) -> np.ndarray:
    """Decode a full bit string (or a batch of them) to real vectors.

    Parameters
    ----------
    bits : array-like
        Shape ``(total_bits,)`` for a single string or ``(n, total_bits)``
        for a batch.
    spec : DecodingSpec

    Returns
    -------
    numpy.ndarray
        Shape ``(n_vars,)`` or ``(n, n_vars)``.
    """
    bits = np.asarray(bits)
    if bits.shape[-1] != spec.total_bits:
        raise ValueError(
            f"bit string has length {bits.shape[-1]}, spec expects {spec.total_bits}"
        )
    segments = bits.reshape(bits.shape[:-1] + (spec.n_vars, spec.bits_per_var))
    weights = (1 << np.arange(spec.bits_per_var, dtype=np.int64)).astype(np.float64)
    integers = segments.astype(np.float64) @ weights
    return spec.lower + integers * spec.resolution


def run_rng(master_seed: int, run_index: int = 0) -> np.random.Generator:
    """Per-run random stream derived from ``(master_seed, run_index)``.

    Uses numpy's ``SeedSequence`` spawn-key mechanism over PCG64, so streams
    for different run indices are independent and adding runs never changes
    earlier ones.
    """
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(run_index,))
    )


def random_bits(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniform random bit array (each bit 1 with probability 0.5)."""
    return rng.integers(0, 2, size=shape, dtype=np.uint8)
