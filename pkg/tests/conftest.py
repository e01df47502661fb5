import numpy as np
import pytest

from sbphodge.grid import Grid1D
from sbphodge.operators1d import build_operator_1d
from sbphodge.tensor import square_tensor_ops

MIN_NODES = {2: 2, 4: 8, 6: 12, 8: 16}


@pytest.fixture
def rng():
    return np.random.default_rng(20230219)


@pytest.fixture(params=[2, 4, 6, 8])
def order(request):
    return request.param


@pytest.fixture
def op_1d(order):
    return build_operator_1d(order, Grid1D(-1.0, 1.0, 33))


@pytest.fixture
def ops_2d():
    return square_tensor_ops(4, 12, 2)


@pytest.fixture
def ops_3d():
    return square_tensor_ops(2, 7, 3)
