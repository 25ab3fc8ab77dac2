import numpy as np
import pytest

from bgsa.benchmarks import catalog, get_problem
from bgsa.bits import run_rng

EXPECTED_BIT_LENGTHS = {
    **{f"f{i}": 75 for i in range(1, 14)},
    "f14": 30, "f15": 60, "f16": 30, "f17": 30, "f18": 30,
    "f19": 45, "f20": 90, "f21": 60, "f22": 60, "f23": 60,
}

EXPECTED_CATEGORIES = {
    **{f"f{i}": "U" for i in range(1, 8)},
    **{f"f{i}": "M" for i in range(8, 14)},
    **{f"f{i}": "MFD" for i in range(14, 24)},
}


class TestCatalog:
    def test_twenty_three_problems(self):
        problems = catalog()
        assert len(problems) == 23
        assert list(problems) == [f"f{i}" for i in range(1, 24)]

    def test_bit_lengths(self):
        for pid, problem in catalog().items():
            assert problem.bit_length == EXPECTED_BIT_LENGTHS[pid], pid
            assert problem.bits_per_var == 15

    def test_categories(self):
        for pid, problem in catalog().items():
            assert problem.category == EXPECTED_CATEGORIES[pid], pid

    def test_selected_bounds(self):
        problems = catalog()
        assert problems["f5"].bounds == (-30.0, 30.0)
        assert problems["f7"].bounds == (-1.28, 1.28)
        assert problems["f9"].bounds == (-5.12, 5.12)
        assert problems["f14"].bounds == (-65.0, 65.0)
        assert problems["f20"].bounds == (0.0, 1.0)
        assert problems["f23"].bounds == (0.0, 10.0)

    def test_unknown_id(self):
        with pytest.raises(KeyError):
            get_problem("f99")


class TestOptimaOracle:
    @pytest.mark.parametrize("pid", [f"f{i}" for i in range(1, 24)])
    def test_table_value_at_literature_optimizer(self, pid):
        problem = get_problem(pid)
        value = problem.evaluate_real(np.array(problem.x_star))
        assert abs(value - problem.f_min_table) <= problem.table_tol

    @pytest.mark.parametrize("pid", [f"f{i}" for i in range(1, 24)])
    def test_precise_optimum_invariant(self, pid):
        problem = get_problem(pid)
        value = problem.evaluate_real(np.array(problem.x_star))
        assert value == pytest.approx(problem.f_min, abs=1e-6)


class TestSpotValues:
    def test_sphere_batch(self):
        p = get_problem("f1")
        x = np.array([[1.0, 2.0, 3.0, 0.0, 0.0], [0.0] * 5])
        assert p.evaluate_real(x) == pytest.approx([14.0, 0.0])

    def test_f2_printed_vs_classic(self):
        x = np.array([1.0, -2.0, 0.5, 1.0, 1.0])
        printed = get_problem("f2").evaluate_real(x)
        classic = get_problem("f2", classic_f2=True).evaluate_real(x)
        assert printed == pytest.approx((x**2).sum() + np.prod(np.abs(x)))
        assert classic == pytest.approx(np.abs(x).sum() + np.prod(np.abs(x)))

    def test_step_function_floor(self):
        p = get_problem("f6")
        assert p.evaluate_real(np.array([0.4, 0.0, 0.0, 0.0, 0.0])) == 0.0
        assert p.evaluate_real(np.array([0.6, 0.0, 0.0, 0.0, 0.0])) == 1.0
        assert p.evaluate_real(np.array([-0.4, 0.0, 0.0, 0.0, 0.0])) == 0.0
        assert p.evaluate_real(np.array([-0.6, 0.0, 0.0, 0.0, 0.0])) == 1.0

    def test_rosenbrock_at_ones(self):
        assert get_problem("f5").evaluate_real(np.ones(5)) == 0.0

    def test_schwefel_226_table_row(self):
        value = get_problem("f8").evaluate_real(np.full(5, 420.9687))
        assert value == pytest.approx(-418.9829 * 5, abs=1e-3)

    def test_penalty_branches(self):
        p = get_problem("f12")
        inside = p.evaluate_real(np.full(5, -1.0))
        assert inside == pytest.approx(0.0, abs=1e-12)
        # one coordinate past the +10 barrier picks up 100*(x-10)^4
        x = np.array([-1.0, -1.0, -1.0, -1.0, 11.0])
        value = p.evaluate_real(x)
        assert value > 100.0 * (11.0 - 10.0) ** 4 - 1.0

    def test_f13_optimum_at_ones(self):
        assert get_problem("f13").evaluate_real(np.ones(5)) == pytest.approx(0.0, abs=1e-12)


class TestNoise:
    def test_f7_noise_adds_uniform(self):
        p = get_problem("f7")
        x = np.zeros(5)
        rng = run_rng(0, 0)
        a = p.evaluate_real(x, rng)
        b = p.evaluate_real(x, rng)
        assert a != b
        assert 0.0 <= a < 1.0 and 0.0 <= b < 1.0

    def test_f7_core_deterministic_without_rng(self):
        p = get_problem("f7")
        x = np.full(5, 0.5)
        assert p.evaluate_real(x) == p.evaluate_real(x)

    def test_other_problems_ignore_rng(self):
        p = get_problem("f1")
        x = np.full(5, 2.0)
        assert p.evaluate_real(x, run_rng(0, 0)) == p.evaluate_real(x)


class TestBitEvaluation:
    def test_decoded_domain(self):
        rng = np.random.default_rng(0)
        for pid in ("f1", "f14", "f19", "f23"):
            problem = get_problem(pid)
            bits = rng.integers(0, 2, (20, problem.bit_length)).astype(np.uint8)
            from bgsa.bits import decode_vector
            decoded = decode_vector(bits, problem.decoding_spec())
            assert np.all(decoded >= problem.lower)
            assert np.all(decoded < problem.upper)

    def test_all_evaluations_finite(self):
        rng = np.random.default_rng(1)
        eval_rng = run_rng(1, 0)
        for problem in catalog().values():
            bits = rng.integers(0, 2, (50, problem.bit_length)).astype(np.uint8)
            values = problem.evaluate_bits(bits, eval_rng)
            assert np.all(np.isfinite(values)), problem.problem_id

    def test_wrong_length_rejected(self):
        problem = get_problem("f1")
        with pytest.raises(ValueError):
            problem.evaluate_bits(np.zeros(74, dtype=np.uint8))

    def test_objective_spec_wiring(self):
        problem = get_problem("f9")
        spec = problem.make_objective()
        assert spec.dimension == 75
        assert spec.sense == "min"
        bits = np.zeros((3, 75), dtype=np.uint8)
        values = spec.fn(bits, run_rng(0, 0))
        assert values.shape == (3,)
