"""Hot numeric kernels, compiled with numba when available.

Two interchangeable implementations exist for every kernel: a numba
``@njit`` version and a vectorized pure-numpy fallback.  The active backend
is chosen once at import time from the ``BGSA_BACKEND`` environment variable
(``"numba"`` or ``"numpy"``; default ``"numba"``, silently falling back to
numpy when numba is not importable).  Both backends compute the same
quantities; floating-point sums may differ in the last bits because of
summation order, so cross-backend comparisons are tolerance-based
(see ``tests/test_kernels.py`` and ``benchmarks/compare_backends.py``).
"""

from __future__ import annotations

import math
import os
import warnings

import numpy as np

ENV_VAR = "BGSA_BACKEND"


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def _hamming_to_subset_numpy(bits, idx):
    # popcount(x XOR x[j]) written as two 0/1 matmuls: exact integer counts.
    x = bits.astype(np.float64)
    xs = x[idx]
    return x @ (1.0 - xs.T) + (1.0 - x) @ xs.T


def _kbest_acceleration_numpy(bits, masses, kbest, dists, rand_pair, gravity, eps):
    x = bits.astype(np.float64)
    xk = x[kbest]
    self_pair = np.arange(x.shape[0])[:, None] == kbest[None, :]
    denom = np.where(self_pair, 1.0, dists + eps)
    coef = np.where(self_pair, 0.0, rand_pair * (gravity * masses[kbest][None, :] / denom))
    return coef @ xk - coef.sum(axis=1)[:, None] * x


def _archive_acceleration_numpy(bits, fitnesses, members, sizes, rand_pair,
                                delta, gamma):
    x = bits.astype(np.float64)
    n, width = members.shape
    valid = np.arange(width)[None, :] < sizes[:, None]
    idx = np.where(valid, members, 0)
    xn = x[idx]                                     # (n, width, d)
    diff = xn - x[:, None, :]
    dist = np.abs(diff).sum(axis=2)
    gap = np.abs(fitnesses[idx] - fitnesses[:, None])
    gij = (np.log1p(gap) + delta) / (dist + gamma)
    coef = np.where(valid, rand_pair * gij, 0.0)
    return (coef[:, :, None] * diff).sum(axis=1)


def _lens_area_numpy(d, r_a, r_b):
    """Intersection area of two discs (vectorized)."""
    d = np.asarray(d, dtype=np.float64)
    r_a = np.broadcast_to(np.asarray(r_a, dtype=np.float64), d.shape)
    r_b = np.broadcast_to(np.asarray(r_b, dtype=np.float64), d.shape)
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
    return out


def _power_numpy(u, rated, cut_in, cut_out):
    u = np.asarray(u, dtype=np.float64)
    knee = cut_in + 25.0 / 19.0
    out = np.zeros(u.shape)
    seg1 = (u >= cut_in) & (u <= knee)
    seg2 = (u > knee) & (u < 13.0)
    seg3 = (u >= 13.0) & (u <= cut_out)
    out[seg1] = 60.0 * (u[seg1] - cut_in)
    out[seg2] = 250.0 * (u[seg2] - cut_in - 1.0)
    out[seg3] = rated
    return out


def _farm_power_numpy(
    x, y, dirs_rad, u0, probs, rotor_r, induction, alpha, r1,
    exponent, rated, cut_in, cut_out,
):
    n = x.shape[0]
    wake = np.zeros(n)
    free = np.zeros(n)
    rotor_area = np.pi * rotor_r**2
    for b in range(dirs_rad.shape[0]):
        sin_t, cos_t = math.sin(dirs_rad[b]), math.cos(dirs_rad[b])
        s = -(x * sin_t + y * cos_t)        # downwind coordinate
        c = x * cos_t - y * sin_t           # crosswind coordinate
        dx = s[:, None] - s[None, :]        # > 0 where column j is upstream of row i
        dc = np.abs(c[:, None] - c[None, :])
        upstream = dx > 0.0
        dxu = np.where(upstream, dx, 1.0)
        rw = alpha * dxu + r1
        area = np.where(upstream, _lens_area_numpy(dc, np.full_like(dc, rotor_r), rw), 0.0)
        deficit = 2.0 * induction / (1.0 + alpha * dxu / r1) ** exponent
        acc = (area / rotor_area * np.where(upstream, deficit, 0.0) ** 2).sum(axis=1)
        u = np.maximum(u0[b] * (1.0 - np.sqrt(acc)), 0.0)
        wake += probs[b] * _power_numpy(u, rated, cut_in, cut_out)
        free += probs[b] * float(_power_numpy(u0[b], rated, cut_in, cut_out))
    return wake, free


def _farm_objective_batch_numpy(
    bits, n_turbines, cx, cy, dirs_rad, u0, probs, rotor_r, induction, alpha, r1,
    exponent, rated, cut_in, cut_out, w1, w2, f2_scale, penalty,
):
    n = bits.shape[0]
    out = np.full(n, penalty)
    for p in range(n):
        occupied = bits[p] != 0
        if int(occupied.sum()) != n_turbines:
            continue
        wake, free = _farm_power_numpy(
            cx[occupied], cy[occupied], dirs_rad, u0, probs, rotor_r,
            induction, alpha, r1, exponent, rated, cut_in, cut_out,
        )
        f2 = wake.sum()
        total_free = free.sum()
        f1 = f2 / total_free if total_free > 0.0 else 0.0
        out[p] = w1 * f1 + w2 * f2 * f2_scale
    return out


_NUMPY_IMPLS = {
    "hamming_to_subset": _hamming_to_subset_numpy,
    "kbest_acceleration": _kbest_acceleration_numpy,
    "archive_acceleration": _archive_acceleration_numpy,
    "farm_power": _farm_power_numpy,
    "farm_objective_batch": _farm_objective_batch_numpy,
}


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

def _build_numba_impls():
    from numba import njit

    @njit(cache=True)
    def hamming_to_subset(bits, idx):
        n, d = bits.shape
        k = idx.shape[0]
        out = np.empty((n, k))
        for i in range(n):
            for kk in range(k):
                j = idx[kk]
                count = 0
                for dd in range(d):
                    if bits[i, dd] != bits[j, dd]:
                        count += 1
                out[i, kk] = count
        return out

    @njit(cache=True)
    def kbest_acceleration(bits, masses, kbest, dists, rand_pair, gravity, eps):
        n, d = bits.shape
        k = kbest.shape[0]
        acc = np.zeros((n, d))
        for i in range(n):
            for kk in range(k):
                j = kbest[kk]
                if j == i:
                    continue
                w = rand_pair[i, kk] * gravity * masses[j] / (dists[i, kk] + eps)
                if w == 0.0:
                    continue
                for dd in range(d):
                    acc[i, dd] += w * (float(bits[j, dd]) - float(bits[i, dd]))
        return acc

    @njit(cache=True)
    def archive_acceleration(bits, fitnesses, members, sizes, rand_pair,
                             delta, gamma):
        n, d = bits.shape
        acc = np.zeros((n, d))
        for i in range(n):
            for kk in range(sizes[i]):
                j = members[i, kk]
                dist = 0.0
                for dd in range(d):
                    if bits[i, dd] != bits[j, dd]:
                        dist += 1.0
                gij = (math.log1p(abs(fitnesses[i] - fitnesses[j])) + delta) / (dist + gamma)
                w = rand_pair[i, kk] * gij
                if w == 0.0:
                    continue
                for dd in range(d):
                    acc[i, dd] += w * (float(bits[j, dd]) - float(bits[i, dd]))
        return acc

    @njit(cache=True)
    def _lens_area_scalar(dist, r_a, r_b):
        if dist >= r_a + r_b:
            return 0.0
        r_min = min(r_a, r_b)
        if dist <= abs(r_a - r_b):
            return math.pi * r_min * r_min
        d1 = (r_a * r_a - r_b * r_b + dist * dist) / (2.0 * dist)
        d2 = dist - d1
        t1 = min(max(d1 / r_a, -1.0), 1.0)
        t2 = min(max(d2 / r_b, -1.0), 1.0)
        a1 = r_a * r_a * math.acos(t1) - d1 * math.sqrt(max(r_a * r_a - d1 * d1, 0.0))
        a2 = r_b * r_b * math.acos(t2) - d2 * math.sqrt(max(r_b * r_b - d2 * d2, 0.0))
        return a1 + a2

    @njit(cache=True)
    def _power_scalar(u, rated, cut_in, cut_out):
        if u < cut_in or u > cut_out:
            return 0.0
        if u <= cut_in + 25.0 / 19.0:
            return 60.0 * (u - cut_in)
        if u < 13.0:
            return 250.0 * (u - cut_in - 1.0)
        return rated

    @njit(cache=True)
    def farm_power(
        x, y, dirs_rad, u0, probs, rotor_r, induction, alpha, r1,
        exponent, rated, cut_in, cut_out,
    ):
        n = x.shape[0]
        wake = np.zeros(n)
        free = np.zeros(n)
        rotor_area = math.pi * rotor_r * rotor_r
        for b in range(dirs_rad.shape[0]):
            sin_t = math.sin(dirs_rad[b])
            cos_t = math.cos(dirs_rad[b])
            free_power = probs[b] * _power_scalar(u0[b], rated, cut_in, cut_out)
            for i in range(n):
                s_i = -(x[i] * sin_t + y[i] * cos_t)
                c_i = x[i] * cos_t - y[i] * sin_t
                acc = 0.0
                for j in range(n):
                    if j == i:
                        continue
                    s_j = -(x[j] * sin_t + y[j] * cos_t)
                    dx = s_i - s_j
                    if dx <= 0.0:
                        continue
                    c_j = x[j] * cos_t - y[j] * sin_t
                    dc = abs(c_i - c_j)
                    rw = alpha * dx + r1
                    if dc >= rotor_r + rw:
                        continue
                    area = _lens_area_scalar(dc, rotor_r, rw)
                    deficit = 2.0 * induction / (1.0 + alpha * dx / r1) ** exponent
                    acc += area / rotor_area * deficit * deficit
                u = u0[b] * (1.0 - math.sqrt(acc))
                if u < 0.0:
                    u = 0.0
                wake[i] += probs[b] * _power_scalar(u, rated, cut_in, cut_out)
                free[i] += free_power
        return wake, free

    @njit(cache=True)
    def farm_objective_batch(
        bits, n_turbines, cx, cy, dirs_rad, u0, probs, rotor_r, induction, alpha,
        r1, exponent, rated, cut_in, cut_out, w1, w2, f2_scale, penalty,
    ):
        n = bits.shape[0]
        cells = bits.shape[1]
        out = np.full(n, penalty)
        x = np.empty(n_turbines)
        y = np.empty(n_turbines)
        for p in range(n):
            count = 0
            for c in range(cells):
                if bits[p, c] != 0:
                    count += 1
            if count != n_turbines:
                continue
            k = 0
            for c in range(cells):
                if bits[p, c] != 0:
                    x[k] = cx[c]
                    y[k] = cy[c]
                    k += 1
            wake, free = farm_power(
                x, y, dirs_rad, u0, probs, rotor_r, induction, alpha, r1,
                exponent, rated, cut_in, cut_out,
            )
            f2 = wake.sum()
            total_free = free.sum()
            f1 = f2 / total_free if total_free > 0.0 else 0.0
            out[p] = w1 * f1 + w2 * f2 * f2_scale
        return out

    return {
        "hamming_to_subset": hamming_to_subset,
        "kbest_acceleration": kbest_acceleration,
        "archive_acceleration": archive_acceleration,
        "farm_power": farm_power,
        "farm_objective_batch": farm_objective_batch,
    }


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

def _select_backend() -> str:
    choice = os.environ.get(ENV_VAR, "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(
            f"{ENV_VAR} must be 'numba' or 'numpy', got {choice!r}"
        )
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        warnings.warn("numba is not importable; using pure-numpy kernels")
        return "numpy"
    return "numba"


_IMPLS_BY_BACKEND = {"numpy": _NUMPY_IMPLS}


def available_backends():
    """Names of backends importable in this environment."""
    names = ["numpy"]
    try:
        import numba  # noqa: F401
        names.insert(0, "numba")
    except ImportError:
        pass
    return names


def get_impls(backend: str) -> dict:
    """Kernel table for an explicit backend (used by parity tests/benchmarks)."""
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend not in _IMPLS_BY_BACKEND:
        _IMPLS_BY_BACKEND["numba"] = _build_numba_impls()
    return _IMPLS_BY_BACKEND[backend]


BACKEND = _select_backend()
_active = get_impls(BACKEND)

hamming_to_subset = _active["hamming_to_subset"]
kbest_acceleration = _active["kbest_acceleration"]
archive_acceleration = _active["archive_acceleration"]
farm_power = _active["farm_power"]
farm_objective_batch = _active["farm_objective_batch"]
