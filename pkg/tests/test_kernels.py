import numpy as np
import pytest

from bgsa import _kernels

HAS_NUMBA = "numba" in _kernels.available_backends()

pytestmark = pytest.mark.skipif(not HAS_NUMBA, reason="numba not importable")


@pytest.fixture(scope="module")
def impls():
    return _kernels.get_impls("numba"), _kernels.get_impls("numpy")


def random_inputs(seed, n=24, d=40, k=9):
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, (n, d)).astype(np.uint8)
    fits = rng.random(n) * 100.0
    masses = rng.random(n)
    masses /= masses.sum()
    elite = rng.choice(n, size=k, replace=False).astype(np.int64)
    return rng, bits, fits, masses, elite


class TestParity:
    def test_hamming_exact_match(self, impls):
        nb, np_ = impls
        _, bits, _, _, elite = random_inputs(0)
        assert np.array_equal(nb["hamming_to_subset"](bits, elite),
                              np_["hamming_to_subset"](bits, elite))

    def test_kbest_acceleration(self, impls):
        nb, np_ = impls
        rng, bits, fits, masses, elite = random_inputs(1)
        dists = np_["hamming_to_subset"](bits, elite)
        rand_pair = rng.random((bits.shape[0], elite.size))
        a = nb["kbest_acceleration"](bits, masses, elite, dists, rand_pair, 55.0, 1e-12)
        b = np_["kbest_acceleration"](bits, masses, elite, dists, rand_pair, 55.0, 1e-12)
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-12)

    def test_archive_acceleration(self, impls):
        nb, np_ = impls
        rng, bits, fits, _, _ = random_inputs(2)
        n = bits.shape[0]
        sizes = rng.integers(2, 6, n).astype(np.int64)
        members = np.zeros((n, 5), dtype=np.int64)
        for i in range(n):
            choices = [j for j in range(n) if j != i]
            members[i, : sizes[i]] = rng.choice(choices, size=sizes[i], replace=False)
        rand_pair = rng.random((n, 5))
        a = nb["archive_acceleration"](bits, fits, members, sizes, rand_pair, 1e-2, 1e-5)
        b = np_["archive_acceleration"](bits, fits, members, sizes, rand_pair, 1e-2, 1e-5)
        np.testing.assert_allclose(a, b, rtol=1e-10, atol=1e-12)

    def test_farm_power(self, impls):
        nb, np_ = impls
        rng = np.random.default_rng(3)
        n = 14
        x = rng.uniform(0, 6000, n)
        y = rng.uniform(0, 2000, n)
        dirs = np.radians(np.arange(16) * 22.5)
        u0 = np.tile([3.9, 8.2, 10.8, 14.4], 4)
        probs = np.full(16, 1 / 16)
        args = (x, y, dirs, u0, probs, 40.0, 0.2763932022500211,
                0.09436958290887743, 50.88078598056276, 2, 2000.0, 4.0, 25.0)
        wake_a, free_a = nb["farm_power"](*args)
        wake_b, free_b = np_["farm_power"](*args)
        np.testing.assert_allclose(wake_a, wake_b, rtol=1e-10)
        np.testing.assert_allclose(free_a, free_b, rtol=1e-12)

    def test_farm_objective_batch(self, impls):
        nb, np_ = impls
        rng = np.random.default_rng(4)
        cells = 100
        cols = np.arange(cells) % 20
        rows = np.arange(cells) // 20
        cx = cols * 300.0 + 150.0
        cy = rows * 400.0 + 200.0
        bits = np.zeros((8, cells), dtype=np.uint8)
        for i in range(7):
            bits[i, rng.choice(cells, size=10, replace=False)] = 1
        bits[7, :4] = 1  # infeasible row
        dirs = np.radians(np.array([0.0, 90.0, 202.5]))
        u0 = np.array([8.2, 10.8, 14.4])
        probs = np.array([0.5, 0.25, 0.25])
        args = (bits, 10, cx, cy, dirs, u0, probs, 40.0, 0.2763932022500211,
                0.09436958290887743, 50.88078598056276, 2, 2000.0, 4.0, 25.0,
                0.5, 0.5, 1.0, 1e-10)
        a = nb["farm_objective_batch"](*args)
        b = np_["farm_objective_batch"](*args)
        np.testing.assert_allclose(a, b, rtol=1e-10)
        assert a[7] == b[7] == 1e-10


class TestBackendSelection:
    def test_env_values(self, monkeypatch):
        monkeypatch.setenv(_kernels.ENV_VAR, "numpy")
        assert _kernels._select_backend() == "numpy"
        monkeypatch.setenv(_kernels.ENV_VAR, "numba")
        assert _kernels._select_backend() == "numba"
        monkeypatch.delenv(_kernels.ENV_VAR)
        assert _kernels._select_backend() == "numba"

    def test_invalid_env_rejected(self, monkeypatch):
        monkeypatch.setenv(_kernels.ENV_VAR, "cython")
        with pytest.raises(ValueError):
            _kernels._select_backend()

    def test_active_backend_exposed(self):
        assert _kernels.BACKEND in ("numba", "numpy")
        assert set(_kernels.get_impls("numpy")) == set(_kernels.get_impls("numba"))
