import numpy as np
import pytest


def iter_pairs(max_total):
    """All photon pairs (s1, s2) with 1 <= s1 + s2 <= max_total."""
    for s1 in range(max_total + 1):
        for s2 in range(max_total + 1 - s1):
            if s1 + s2 >= 1:
                yield s1, s2


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
