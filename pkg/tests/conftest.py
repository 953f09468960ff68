import numpy as np
import pytest


def walk(rng, n, d=2):
    return np.cumsum(rng.normal(size=(n, d)), axis=0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


SEG_A = np.array([[0.0, 0.0], [2.0, 0.0]])
SEG_B = np.array([[0.0, 1.0], [2.0, 1.0]])
