import numpy as np
import pytest

from heleshaw import HodographParams, solve_hodograph, solved_curve


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240613)


@pytest.fixture(scope="session")
def base_params():
    return HodographParams(p=2.0, q=-3.0, mu=0.1, T=1.0)


@pytest.fixture(scope="session")
def base_branch_points(base_params):
    return solve_hodograph(base_params)


@pytest.fixture(scope="session")
def base_curve(base_params, base_branch_points):
    return solved_curve(base_params, base_branch_points)
