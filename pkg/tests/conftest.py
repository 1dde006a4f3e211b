import random

import pytest
from gmpy2 import mpq

from paircanon import ExactMatrix, GaussianRational, gq


def rand_scalar(rng: random.Random, bound: int = 3) -> GaussianRational:
    def part():
        return mpq(rng.randint(-bound, bound), rng.randint(1, bound))

    return GaussianRational(part(), part())


def rand_matrix(rng: random.Random, rows: int, cols: int,
                bound: int = 3) -> ExactMatrix:
    return ExactMatrix(
        [[rand_scalar(rng, bound) for _ in range(cols)] for _ in range(rows)],
        rows, cols,
    )


def rand_nonsingular(rng: random.Random, n: int, bound: int = 3) -> ExactMatrix:
    while True:
        M = rand_matrix(rng, n, n, bound)
        if M.is_nonsingular():
            return M


@pytest.fixture
def rng():
    return random.Random(20260826)
