import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hkl.core import ALPHA, Params, PhaseState, hamiltonian, kinetic
from hkl.errors import DomainExceeded, InvalidParameter, NonPositiveTime, ZeroK
from hkl.flow import IntegratorSpec, integrate
from hkl.oracles import (ConicSpec, conic_kind, conic_on_N, conic_oracle, conic_state, geodesic,
                         geodesic_difference_demo, geodesic_oracle, geodesic_path, line_oracle, line_solution,
                         residual, stationary_energy, stationary_oracle, stationary_solution)

PARAMS = Params()
GRID = np.linspace(.1, 3., 30)


def test_line_oracle():
    line = line_oracle(1., 2., PARAMS)
    assert residual(line, GRID) < 1e-12
    s = line.state(1.)
    assert math.hypot(s.x, s.y) == pytest.approx((8 * ALPHA) ** .25)
    assert s.y / s.x == pytest.approx(2.)
    assert hamiltonian(s, PARAMS) == pytest.approx(0., abs=1e-12)
    assert residual(line_oracle(1., 2., PARAMS, calibrate=False), GRID) > 1e-3


def test_line_solution_domain():
    with pytest.raises(NonPositiveTime):
        line_solution(1., 0., 0.)
    with pytest.raises(NonPositiveTime):
        line_solution(1., 0., -1.)
    with pytest.raises(InvalidParameter):
        line_oracle(0., 0.)


def test_line_is_followed_by_the_integrator():
    s0 = line_solution(1., 0., 1., PARAMS)
    traj = integrate(s0, 1., IntegratorSpec('adaptive-rk', tolerance=1e-12), PARAMS)
    assert_allclose(traj.final.as_array(), line_solution(1., 0., 2., PARAMS).as_array(), atol=1e-8)


@pytest.mark.parametrize('k', [1., -2., .5])
def test_stationary(k):
    oracle = stationary_oracle(k, PARAMS)
    assert residual(oracle, GRID) < 1e-12
    s = stationary_solution(k, 1.5, PARAMS)
    assert (s.x, s.y, s.z) == (0., 0., k)
    assert s.pz == pytest.approx(-4 * ALPHA * math.copysign(1., k) * 1.5 / k ** 2)
    assert hamiltonian(s, PARAMS) == pytest.approx(stationary_energy(k))
    assert stationary_energy(k) == pytest.approx(-4 * ALPHA / abs(k))
    traj = integrate(stationary_solution(k, 0., PARAMS), 1., IntegratorSpec(step=1e-2), PARAMS)
    assert_allclose(traj.final.as_array(), stationary_solution(k, 1., PARAMS).as_array(), atol=1e-12)


def test_stationary_zero_k():
    with pytest.raises(ZeroK):
        stationary_oracle(0.)
    with pytest.raises(ZeroK):
        stationary_energy(0.)


@pytest.mark.parametrize('h, kind, window', [(-1., 'ellipse', (0., .5)), (0., 'parabola', (1., 3.)),
                                              (1., 'hyperbola', (1., 3.))])
def test_conics(h, kind, window):
    spec = ConicSpec(h)
    assert conic_kind(spec) == kind
    grid = np.linspace(*window, 21)
    oracle = conic_oracle(spec)
    assert oracle.name == kind
    assert residual(oracle, grid) < 1e-12
    for t in grid:
        s = conic_state(spec, t)
        assert hamiltonian(s, PARAMS) == pytest.approx(h, abs=1e-12)
        assert s.x == pytest.approx(conic_on_N(spec, t))

    s0 = conic_state(spec, window[0])
    traj = integrate(s0, window[1] - window[0], IntegratorSpec(step=1e-3), PARAMS)
    assert_allclose(traj.final.as_array(), conic_state(spec, window[1]).as_array(), atol=1e-5)


def test_conic_domain():
    with pytest.raises(DomainExceeded):
        conic_on_N(ConicSpec(-1.), 1.)
    with pytest.raises(DomainExceeded):
        conic_on_N(ConicSpec(0.), 0.)
    with pytest.raises(DomainExceeded):
        conic_on_N(ConicSpec(1.), 0.)
    assert conic_on_N(ConicSpec(-1.), 0.) == pytest.approx(math.sqrt(ALPHA))
    with pytest.raises(InvalidParameter):
        ConicSpec(float('nan'))
    with pytest.raises(InvalidParameter):
        ConicSpec(1., alpha=0.)


@pytest.mark.parametrize('pz', [0., .7, -2.])
def test_geodesics(pz):
    s0 = PhaseState.of(.3, -.2, .1, .5, 1., pz)
    assert residual(geodesic_oracle(s0), GRID) < 1e-12
    t = np.linspace(0., 5., 11)
    path = geodesic_path(s0, t)
    assert_allclose(path[0], s0.as_array(), atol=1e-15)
    energies = [kinetic(PhaseState.from_array(y)) for y in path]
    assert_allclose(energies, kinetic(s0), rtol=1e-12)
    assert_allclose(geodesic(s0, 5.).as_array(), path[-1])


def test_geodesic_circle():
    s0 = PhaseState.of(0., 0., 0., 1., 0., 1.)
    period = 2 * math.pi
    end = geodesic(s0, period)
    assert_allclose((end.x, end.y), (0., 0.), atol=1e-12)
    assert end.z == pytest.approx(math.pi, rel=1e-12)


def test_geodesic_difference():
    s1 = PhaseState.of(0., 0., 0., 0., 0., 0.)
    s2 = PhaseState.of(.5, .2, -.3, 1., .4, .8)
    report = geodesic_difference_demo(s1, s2)
    assert report.max_deviation < 1e-12
    assert report.fitted_pz == pytest.approx(.8)
    assert report.difference.shape == (101, 3)

    same = geodesic_difference_demo(s2, s2, order='right')
    assert same.max_deviation < 1e-12
    assert_allclose(same.difference, 0., atol=1e-12)
    with pytest.raises(InvalidParameter):
        geodesic_difference_demo(s1, s2, order='middle')
