import numpy as np
import pytest

# (alpha, beta) pairs used across suites; together they cover both theta branches
PAIRS = [(-0.3, 0.4), (-0.5, 0.1), (0.2, 0.6), (-0.8, -0.2), (0.1, 0.95)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
