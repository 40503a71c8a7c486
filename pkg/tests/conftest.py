import math
from pathlib import Path

import numpy as np
import pytest

from orthocipher.linalg import Permutation

DATA = Path(__file__).parent / 'data'
R2 = 1 / math.sqrt(2)
E = math.exp

# 4x4 key used throughout the worked example: two 45 degree plane rotations
EXAMPLE_C = R2 * np.array([[1, -1, 0, 0],
                         [1, 1, 0, 0],
                         [0, 0, 1, -1],
                         [0, 0, 1, 1]], dtype=float)
# cyclic shift with (P y)_i = y_{i+1}
EXAMPLE_P = Permutation([3, 0, 1, 2])

CRYPTOGRAPHY_BLOCKS = [(3, 18, 25, 16), (20, 15, 7, 18), (1, 16, 8, 25)]

Y1 = 0.5 * np.array([21 * E(18) - 15 * E(3), 21 * E(18) + 15 * E(3),
                     41 * E(16) + 9 * E(25), 41 * E(16) - 9 * E(25)])
Y2 = np.array([20 * E(15), 15 * E(20), 7 * E(18), 18 * E(7)])
Y3 = 0.5 * np.array([17 * E(1) - 15 * E(16), 17 * E(1) + 15 * E(16),
                     33 * E(8) - 17 * E(25), 33 * E(8) + 17 * E(25)])
Y1P = 0.5 * np.array([21 * E(18) + 15 * E(3), 41 * E(16) + 9 * E(25),
                      41 * E(16) - 9 * E(25), 21 * E(18) - 15 * E(3)])
Y2P = np.array([7 * E(18), 18 * E(7), 20 * E(15), 15 * E(20)])
Y3P = 0.5 * np.array([33 * E(8) + 17 * E(25), 17 * E(1) - 15 * E(16),
                      17 * E(1) + 15 * E(16), 33 * E(8) - 17 * E(25)])


def max_rel(a, b):
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b) / np.abs(b)))


def load_printed_table():
    """{(f, c): printed string} for the published f*e^c grid."""
    cells = {}
    lines = (DATA / 'printed_exp_table.tsv').read_text().splitlines()[1:]
    for line in lines:
        f, c, s = line.split('\t')
        cells[int(f), int(c)] = s
    return cells


def printed_value(s: str) -> float:
    return float(s.replace(',', '.'))


def printed_half_ulp(s: str) -> float:
    """Half a unit in the last printed digit."""
    mant, _, exp = s.partition('E')
    decimals = len(mant.split(',')[1]) if ',' in mant else 0
    return 0.5 * 10.0 ** (-decimals) * (10.0 ** int(exp) if exp else 1.0)


@pytest.fixture
def example_c():
    return EXAMPLE_C.copy()
