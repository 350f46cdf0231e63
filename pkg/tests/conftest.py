import numpy as np
import pytest

import logcrit as lc

# the two reference instances used across solver, inequality and CLI tests:
# one with nu < 0 (interval-geometry branch) and one with nu > 0
INSTANCE_A = dict(N=3, q=2.5, mu=1.0, nu=-0.5, lam=0.0, theta=-2.0, R=1.0)
INSTANCE_B = dict(N=4, q=3.0, mu=1.0, nu=8.0, lam=-20.0, theta=-1.0, R=1.0)


@pytest.fixture(scope="session")
def params_a():
    return lc.ProblemParams(**INSTANCE_A)


@pytest.fixture(scope="session")
def params_b():
    return lc.ProblemParams(**INSTANCE_B)


@pytest.fixture(scope="session")
def solved_a(params_a):
    report, path, grid = lc.solve_problem(params_a, M=1024, n=64, P=33)
    return report, path, grid


@pytest.fixture(scope="session")
def solved_b(params_b):
    report, path, grid = lc.solve_problem(params_b, M=1024, n=64, P=33)
    return report, path, grid


def random_dirichlet_profile(g, rng, floor=0.0):
    """Random positive profile vanishing at the boundary like 1 - (r/R)^2."""
    bump = 1.0 - (g.r / g.R) ** 2
    return floor + np.abs(rng.standard_normal(g.M)) * bump
