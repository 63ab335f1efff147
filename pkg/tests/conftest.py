import math

import pytest

from pentaheesch import corona, geom, solver


@pytest.fixture(scope="session")
def cat1():
    return solver.solve_category(1, {})


@pytest.fixture(scope="session")
def cat1_census(cat1):
    return corona.first_corona_census(cat1)


@pytest.fixture(scope="session")
def cat1_report(cat1):
    return corona.heesch_bound(cat1)


def regular_pentagon() -> solver.Pentagon:
    """Hand-built control tile: no full-turn spot exists at 108 degrees."""
    ang = (math.radians(108.0),) * 5
    vs = []
    x = y = 0.0
    phi = 0.0
    for i in range(5):
        vs.append((x, y))
        x += math.cos(phi)
        y += math.sin(phi)
        phi += math.pi - ang[(i + 1) % 5]
    return solver.Pentagon(category=0, params={}, angles=ang,
                           edges=(1.0,) * 5, vertices=tuple(vs), trace=None)


@pytest.fixture(scope="session")
def unit_square_pts():
    import numpy as np
    return np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
