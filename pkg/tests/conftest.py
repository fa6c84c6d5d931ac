import numpy as np
import pytest

from sweepanova import BlockDesign, Tolerance, incidence, is_connected

# 4 treatments in 4 blocks of size 2 (not balanced)
TABLE_29 = [[1, 3], [2, 4], [2, 3], [1, 4]]
# cyclic BIB: v = b = 7, k = r = 3, lambda = 1
TABLE_310 = [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 1], [6, 7, 2], [7, 1, 3]]

A_TABLE_29 = np.array(
    [[2, 0, -1, -1], [0, 2, -1, -1], [-1, -1, 2, 0], [-1, -1, 0, 2]], dtype=float
) / 4.0


@pytest.fixture
def tol():
    return Tolerance()


@pytest.fixture
def design29():
    return BlockDesign.from_block_contents(TABLE_29)


@pytest.fixture
def design310():
    return BlockDesign.from_block_contents(TABLE_310)


@pytest.fixture
def rcbd():
    # v = 3 treatments, b = r = 2 complete blocks
    return BlockDesign.from_block_contents([[1, 2, 3], [1, 2, 3]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_block_design(rng, max_v=8, max_b=10, binary=True):
    """Random connected equi-replicate design with equal block sizes."""
    while True:
        v = int(rng.integers(3, max_v + 1))
        k = int(rng.integers(2, v + 1))
        candidates = [r for r in range(1, 8) if (v * r) % k == 0 and 2 <= v * r // k <= max_b]
        if not candidates:
            continue
        r = int(rng.choice(candidates))
        b = v * r // k
        units = rng.permutation(np.repeat(np.arange(v), r))
        blocks = np.repeat(np.arange(b), k)
        try:
            d = BlockDesign(blocks, units, v, b)
        except ValueError:
            continue
        n = incidence(d)
        if binary and np.any(n > 1):
            continue
        if is_connected(n):
            return d
