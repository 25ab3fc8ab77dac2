"""The 23-problem benchmark suite evaluated through the bit decoder.

Problems f1-f7 are unimodal (category ``U``), f8-f13 multimodal (``M``) and
f14-f23 multimodal with fixed dimension (``MFD``).  f1-f13 use 5 decoded
variables of 15 bits each (75-bit strings); the fixed-dimension problems
keep their native 2/3/4/6 variables.  Each problem records the tabulated
optimum ``f_min_table`` together with a high-precision literature optimizer
``x_star`` used by the self-check oracles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bits import DecodingSpec, decode_vector
from .engine import ObjectiveSpec

# -- constant tables (Dixon-Szego / De Jong literature values) --------------

FOXHOLES_A = np.array(
    [
        [-32, -16, 0, 16, 32] * 5,
        [v for v in (-32, -16, 0, 16, 32) for _ in range(5)],
    ],
    dtype=np.float64,
)

KOWALIK_A = np.array(
    [0.1957, 0.1947, 0.1735, 0.1600, 0.0844, 0.0627,
     0.0456, 0.0342, 0.0323, 0.0235, 0.0246]
)
KOWALIK_B = 1.0 / np.array([0.25, 0.5, 1, 2, 4, 6, 8, 10, 12, 14, 16])

HARTMANN_C = np.array([1.0, 1.2, 3.0, 3.2])
HARTMANN3_A = np.array([[3, 10, 30], [0.1, 10, 35], [3, 10, 30], [0.1, 10, 35]],
                       dtype=np.float64)
HARTMANN3_P = np.array(
    [[0.3689, 0.1170, 0.2673],
     [0.4699, 0.4387, 0.7470],
     [0.1091, 0.8732, 0.5547],
     [0.03815, 0.5743, 0.8828]]
)
HARTMANN6_A = np.array(
    [[10, 3, 17, 3.5, 1.7, 8],
     [0.05, 10, 17, 0.1, 8, 14],
     [3, 3.5, 1.7, 10, 17, 8],
     [17, 8, 0.05, 10, 0.1, 14]],
    dtype=np.float64,
)
HARTMANN6_P = np.array(
    [[0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
     [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
     [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
     [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381]]
)

SHEKEL_A = np.array(
    [[4, 4, 4, 4], [1, 1, 1, 1], [8, 8, 8, 8], [6, 6, 6, 6], [3, 7, 3, 7],
     [2, 9, 2, 9], [5, 5, 3, 3], [8, 1, 8, 1], [6, 2, 6, 2], [7, 3.6, 7, 3.6]],
    dtype=np.float64,
)
SHEKEL_C = np.array([0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5])


# -- objective functions, vectorized over (n, m) arrays ---------------------

def sphere(x):
    return np.sum(x**2, axis=1)


def sum_square_product(x):
    """f2 as tabulated: sum of |x_i^2| plus product of |x_i|."""
    return np.sum(np.abs(x**2), axis=1) + np.prod(np.abs(x), axis=1)


def sum_abs_product(x):
    """Classical Schwefel 2.22 form of f2: sum of |x_i| plus product of |x_i|."""
    return np.sum(np.abs(x), axis=1) + np.prod(np.abs(x), axis=1)


def rotated_hyper_ellipsoid(x):
    return np.sum(np.cumsum(x, axis=1) ** 2, axis=1)


def max_abs(x):
    return np.max(np.abs(x), axis=1)


def rosenbrock(x):
    return np.sum(
        100.0 * (x[:, 1:] - x[:, :-1] ** 2) ** 2 + (x[:, :-1] - 1.0) ** 2, axis=1
    )


def step_function(x):
    return np.sum(np.floor(x + 0.5) ** 2, axis=1)


def quartic(x):
    """Deterministic core of f7; the uniform noise term is added at
    evaluation time from the caller's random stream."""
    coeff = np.arange(1, x.shape[1] + 1, dtype=np.float64)
    return np.sum(coeff * x**4, axis=1)


def schwefel_226(x):
    return np.sum(-x * np.sin(np.sqrt(np.abs(x))), axis=1)


def rastrigin(x):
    return np.sum(x**2 - 10.0 * np.cos(2.0 * np.pi * x) + 10.0, axis=1)


def ackley(x):
    n = x.shape[1]
    return (
        -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x**2, axis=1) / n))
        - np.exp(np.sum(np.cos(2.0 * np.pi * x), axis=1) / n)
        + 20.0
        + math.e
    )


def griewank(x):
    idx = np.sqrt(np.arange(1, x.shape[1] + 1, dtype=np.float64))
    return (
        np.sum(x**2, axis=1) / 4000.0 - np.prod(np.cos(x / idx), axis=1) + 1.0
    )


def boundary_penalty(x, a, k, m):
    """u(x, a, k, m): polynomial penalty outside [-a, a], summed over dims."""
    return np.sum(
        np.where(
            x > a,
            k * (x - a) ** m,
            np.where(x < -a, k * (-x - a) ** m, 0.0),
        ),
        axis=1,
    )


def penalized_1(x):
    n = x.shape[1]
    y = 1.0 + (x + 1.0) / 4.0
    core = 10.0 * np.sin(np.pi * y[:, 0]) ** 2
    core += np.sum(
        (y[:, :-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * y[:, 1:]) ** 2), axis=1
    )
    core += (y[:, -1] - 1.0) ** 2
    return np.pi / n * core + boundary_penalty(x, 10.0, 100.0, 4)


def penalized_2(x):
    core = np.sin(3.0 * np.pi * x[:, 0]) ** 2
    core += np.sum(
        (x[:, :-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * np.pi * x[:, 1:]) ** 2), axis=1
    )
    core += (x[:, -1] - 1.0) ** 2 * (1.0 + np.sin(2.0 * np.pi * x[:, -1]) ** 2)
    return 0.1 * core + boundary_penalty(x, 5.0, 100.0, 4)


def foxholes(x):
    diff = x[:, None, :] - FOXHOLES_A.T[None, :, :]
    denom = np.arange(1, 26, dtype=np.float64) + np.sum(diff**6, axis=2)
    return 1.0 / (1.0 / 500.0 + np.sum(1.0 / denom, axis=1))


def kowalik(x):
    b = KOWALIK_B
    model = x[:, 0:1] * (b**2 + b * x[:, 1:2]) / (b**2 + b * x[:, 2:3] + x[:, 3:4])
    return np.sum((KOWALIK_A - model) ** 2, axis=1)


def six_hump_camel(x):
    x1, x2 = x[:, 0], x[:, 1]
    return (
        4.0 * x1**2 - 2.1 * x1**4 + x1**6 / 3.0 + x1 * x2 - 4.0 * x2**2 + 4.0 * x2**4
    )


def branin(x):
    x1, x2 = x[:, 0], x[:, 1]
    return (
        (x2 - 5.1 / (4.0 * np.pi**2) * x1**2 + 5.0 / np.pi * x1 - 6.0) ** 2
        + 10.0 * (1.0 - 1.0 / (8.0 * np.pi)) * np.cos(x1)
        + 10.0
    )


def goldstein_price(x):
    x1, x2 = x[:, 0], x[:, 1]
    t1 = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1**2 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2**2
    )
    t2 = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1**2 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2**2
    )
    return t1 * t2


def hartmann_3(x):
    diff = x[:, None, :] - HARTMANN3_P[None, :, :]
    inner = np.sum(HARTMANN3_A[None, :, :] * diff**2, axis=2)
    return -np.sum(HARTMANN_C * np.exp(-inner), axis=1)


def hartmann_6(x):
    diff = x[:, None, :] - HARTMANN6_P[None, :, :]
    inner = np.sum(HARTMANN6_A[None, :, :] * diff**2, axis=2)
    return -np.sum(HARTMANN_C * np.exp(-inner), axis=1)


def _shekel(x, m):
    diff = x[:, None, :] - SHEKEL_A[None, :m, :]
    return -np.sum(1.0 / (np.sum(diff**2, axis=2) + SHEKEL_C[:m]), axis=1)


def shekel_5(x):
    return _shekel(x, 5)


def shekel_7(x):
    return _shekel(x, 7)


def shekel_10(x):
    return _shekel(x, 10)


# -- problem catalog ---------------------------------------------------------

@dataclass(frozen=True)
class BenchmarkProblem:
    problem_id: str
    category: str                 # "U" | "M" | "MFD"
    lower: float
    upper: float
    n_vars: int
    f_min: float                  # value at x_star (high-precision)
    f_min_table: float            # optimum as tabulated
    table_tol: float              # oracle tolerance against f_min_table
    x_star: tuple
    fn: Callable[[np.ndarray], np.ndarray]
    noisy: bool = False
    bits_per_var: int = 15
    sense: str = "min"

    @property
    def bit_length(self) -> int:
        return self.n_vars * self.bits_per_var

    @property
    def bounds(self) -> tuple[float, float]:
        return (self.lower, self.upper)

    def decoding_spec(self) -> DecodingSpec:
        return DecodingSpec(self.lower, self.upper, self.n_vars, self.bits_per_var)

    def evaluate_real(self, x, rng: Optional[np.random.Generator] = None):
        """Evaluate on real vectors ``(m,)`` or ``(n, m)``.

        For the noisy problem the uniform [0,1) term is drawn from ``rng``;
        with ``rng=None`` only the deterministic core is returned.
        """
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        values = self.fn(np.atleast_2d(x))
        if self.noisy and rng is not None:
            values = values + rng.random(values.shape)
        return float(values[0]) if single else values

    def evaluate_bits(self, bits, rng: Optional[np.random.Generator] = None):
        decoded = decode_vector(bits, self.decoding_spec())
        return self.evaluate_real(decoded, rng)

    def make_objective(self) -> ObjectiveSpec:
        return ObjectiveSpec(
            fn=self.evaluate_bits,
            dimension=self.bit_length,
            sense=self.sense,
            name=self.problem_id,
        )


def _problem_rows(classic_f2: bool):
    f2_fn = sum_abs_product if classic_f2 else sum_square_product
    z5 = (0.0,) * 5
    return [
        # id, cat, lower, upper, m, fn, noisy, x_star, f_min, f_min_table, tol
        ("f1", "U", -100, 100, 5, sphere, False, z5, 0.0, 0.0, 1e-4),
        ("f2", "U", -10, 10, 5, f2_fn, False, z5, 0.0, 0.0, 1e-4),
        ("f3", "U", -100, 100, 5, rotated_hyper_ellipsoid, False, z5, 0.0, 0.0, 1e-4),
        ("f4", "U", -100, 100, 5, max_abs, False, z5, 0.0, 0.0, 1e-4),
        ("f5", "U", -30, 30, 5, rosenbrock, False, (1.0,) * 5, 0.0, 0.0, 1e-4),
        ("f6", "U", -100, 100, 5, step_function, False, z5, 0.0, 0.0, 1e-4),
        ("f7", "U", -1.28, 1.28, 5, quartic, True, z5, 0.0, 0.0, 1e-4),
        ("f8", "M", -500, 500, 5, schwefel_226, False,
         (420.9687462275036,) * 5, -2094.9144363621685, -418.9829 * 5, 1e-4),
        ("f9", "M", -5.12, 5.12, 5, rastrigin, False, z5, 0.0, 0.0, 1e-4),
        ("f10", "M", -32, 32, 5, ackley, False, z5, 0.0, 0.0, 1e-4),
        ("f11", "M", -600, 600, 5, griewank, False, z5, 0.0, 0.0, 1e-4),
        ("f12", "M", -50, 50, 5, penalized_1, False, (-1.0,) * 5, 0.0, 0.0, 1e-4),
        ("f13", "M", -50, 50, 5, penalized_2, False, (1.0,) * 5, 0.0, 0.0, 1e-4),
        ("f14", "MFD", -65, 65, 2, foxholes, False,
         (-31.97833338, -31.97833401), 0.9980038377944498, 0.998, 1e-2),
        ("f15", "MFD", -5, 5, 4, kowalik, False,
         (0.192833453, 0.1908362403, 0.1231172991, 0.1357659903),
         0.00030748598780560557, 0.00030, 1e-4),
        ("f16", "MFD", -5, 5, 2, six_hump_camel, False,
         (0.089842019, -0.7126564042), -1.0316284534898776, -1.0316, 1e-4),
        ("f17", "MFD", -5, 5, 2, branin, False,
         (math.pi, 2.275), 0.39788735772973816, 0.398, 1e-2),
        ("f18", "MFD", -2, 2, 2, goldstein_price, False, (0.0, -1.0), 3.0, 3.0, 1e-4),
        ("f19", "MFD", 1, 3, 3, hartmann_3, False,
         (0.1146143279, 0.5556488504, 0.8525469547),
         -3.8627821478207554, -3.86, 1e-2),
        ("f20", "MFD", 0, 1, 6, hartmann_6, False,
         (0.2016895104, 0.1500106915, 0.4768739734,
          0.2753324289, 0.3116516166, 0.6573005308),
         -3.3223680114155147, -3.32, 1e-2),
        ("f21", "MFD", 0, 10, 4, shekel_5, False,
         (4.0000371524, 4.0001332787, 4.0000371511, 4.0001332771),
         -10.153199679058229, -10.1532, 1e-2),
        ("f22", "MFD", 0, 10, 4, shekel_7, False,
         (4.0005729143, 4.000689366, 3.9994897108, 3.99960616),
         -10.402940566818662, -10.4028, 1e-2),
        ("f23", "MFD", 0, 10, 4, shekel_10, False,
         (4.0007465303, 4.0005929368, 3.9996633958, 3.9995097993),
         -10.536409816692045, -10.5363, 1e-2),
    ]


def catalog(classic_f2: bool = False) -> dict[str, BenchmarkProblem]:
    """All 23 problems keyed by id, in table order.

    ``classic_f2`` swaps f2's tabulated sum-of-squares form for the classical
    Schwefel 2.22 sum of absolute values (both share the same optimum).
    """
    problems = {}
    for (pid, cat, lo, hi, m, fn, noisy, x_star, f_min, f_table, tol) in _problem_rows(
        classic_f2
    ):
        problems[pid] = BenchmarkProblem(
            problem_id=pid,
            category=cat,
            lower=float(lo),
            upper=float(hi),
            n_vars=m,
            f_min=f_min,
            f_min_table=f_table,
            table_tol=tol,
            x_star=tuple(float(v) for v in x_star),
            fn=fn,
            noisy=noisy,
        )
    return problems


def get_problem(problem_id: str, classic_f2: bool = False) -> BenchmarkProblem:
    problems = catalog(classic_f2)
    if problem_id not in problems:
        raise KeyError(
            f"unknown benchmark problem {problem_id!r}; expected f1..f23"
        )
    return problems[problem_id]
