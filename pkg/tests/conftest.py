import math

import numpy as np
import pytest

from isodeform.family import BASE_PARAMS, family_pencil
from isodeform.nilalg import SkewPencil


def displayed_ricci(u: float) -> np.ndarray:
    """Ricci v-block for a = (1, 2, 3), b = (0, 1, 0), transcribed entry by entry."""
    s1 = math.sqrt(5 * u - 40 * u * u)
    s2 = math.sqrt(3 * u - 24 * u * u)
    r15 = math.sqrt(15) * u
    M = np.array(
        [
            [2 - 5 * u, 0, s1, 0, -r15, 0],
            [0, 1, 0, 0, 0, 0],
            [s1, 0, 4 + 8 * u, 0, s2, 0],
            [0, 0, 0, 4, 0, 0],
            [-r15, 0, s2, 0, 10 - 3 * u, 0],
            [0, 0, 0, 0, 0, 9],
        ]
    )
    return -0.5 * M


def random_pencil(rng: np.random.Generator, m: int, k: int, size: float = 1.0) -> SkewPencil:
    J = rng.normal(size=(k, m, m)) * size
    return SkewPencil(J - J.transpose(0, 2, 1))


def random_orthogonal(rng: np.random.Generator, m: int) -> np.ndarray:
    Q, R = np.linalg.qr(rng.normal(size=(m, m)))
    return Q * np.sign(np.diag(R))


def unit(rng: np.random.Generator, m: int) -> np.ndarray:
    x = rng.normal(size=m)
    return x / np.linalg.norm(x)


def orthonormal_pair(rng: np.random.Generator, m: int):
    Q = random_orthogonal(rng, m)
    return Q[:, 0].copy(), Q[:, 1].copy()


U_GRID = np.linspace(0.0, 0.125, 65)
U_GRID[-1] = 0.125


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def base_params():
    return BASE_PARAMS


@pytest.fixture
def base_pencil():
    return family_pencil(BASE_PARAMS, 0.0)


@pytest.fixture
def mid_pencil():
    return family_pencil(BASE_PARAMS, 1 / 16)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
