import math

import numpy as np
import pytest

from ldgrd.mesh import MeshParams, build_shishkin_1d, build_tensor_2d


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def uniform_mesh(N: int):
    """Graded mesh degenerated to uniform cells by placing tau exactly at 1/4."""
    eps = (0.25 / math.log(N)) ** 2
    return build_shishkin_1d(MeshParams(eps=eps, beta=1.0, sigma=1.0, N=N))


def uniform_mesh_2d(N: int):
    m = uniform_mesh(N)
    return build_tensor_2d(m, m)
