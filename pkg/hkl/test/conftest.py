import math

import numpy as np
import pytest

from hkl.core import ALPHA, PhaseState


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help="run the long acceptance tests")


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long acceptance run, enabled by --runslow')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow', default=False):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip)


def random_state(rng, scale=2.):
    """A state with the configuration away from the origin"""
    y = rng.uniform(-scale, scale, 6)
    while math.hypot(y[0], y[1]) < .5:
        y = rng.uniform(-scale, scale, 6)
    return PhaseState.from_array(y)


def zero_energy_state(rng, alpha=ALPHA):
    """A state of zero energy far from the origin, where the motion is slow"""
    r, theta = rng.uniform(5., 7.), rng.uniform(0., 2 * math.pi)
    x, y, z = r * math.cos(theta), r * math.sin(theta), rng.uniform(-1., 1.)
    speed = math.sqrt(2 * alpha / math.sqrt(r ** 4 + z * z / 16))
    phi, pz = rng.uniform(0., 2 * math.pi), rng.uniform(-.1, .1)
    big_px, big_py = speed * math.cos(phi), speed * math.sin(phi)
    return PhaseState.of(x, y, z, big_px + .5 * y * pz, big_py - .5 * x * pz, pz)


def negative_energy_state(rng, alpha=ALPHA):
    """A state with H < 0: the kinetic energy is a fraction of the potential"""
    s = zero_energy_state(rng, alpha)
    f = rng.uniform(.2, .8)
    x, y, z, px, py, pz = s.as_tuple()
    big_px, big_py = px - .5 * y * pz, py + .5 * x * pz
    return PhaseState.of(x, y, z, f * big_px + .5 * y * pz, f * big_py - .5 * x * pz, pz)


@pytest.fixture
def rng():
    return np.random.default_rng(20181214)
