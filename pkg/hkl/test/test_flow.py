import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hkl.core import Params, PhaseState, hamiltonian, state_from_reduced
from hkl.errors import CollisionEvent, InvalidParameter, SingularOrigin
from hkl.flow import (CSV_HEADER, IntegratorSpec, Trajectory, check_dilation_equivariance, helix_deviation,
                      integrate, march, reduced_projection, reduction_check, step_implicit_midpoint,
                      time_reversal_check)
from .conftest import negative_energy_state, zero_energy_state

PARAMS = Params()
MIDPOINT = IntegratorSpec('implicit-midpoint', step=1e-2)


def test_integrator_spec():
    assert IntegratorSpec('adaptive-rk').adaptive
    assert not IntegratorSpec().adaptive
    with pytest.raises(InvalidParameter):
        IntegratorSpec('euler')
    with pytest.raises(InvalidParameter):
        IntegratorSpec(step=0.)
    with pytest.raises(InvalidParameter):
        IntegratorSpec(rho_min=-1.)


def test_integrate_arguments():
    with pytest.raises(SingularOrigin):
        integrate(PhaseState.of(0., 0., 0., 1., 0., 0.), 1., MIDPOINT, PARAMS)
    with pytest.raises(InvalidParameter):
        integrate(PhaseState.of(1., 0., 0., 0., 1., 0.), -1., MIDPOINT, PARAMS)
    traj = integrate(PhaseState.of(1., 0., 0., 0., 1., 0.), 0., MIDPOINT, PARAMS)
    assert len(traj) == 1


def test_midpoint_first_integrals(rng):
    for s0 in (zero_energy_state(rng), negative_energy_state(rng)):
        traj = integrate(s0, 10., MIDPOINT, PARAMS)
        assert len(traj) == 1001
        assert traj.t[-1] == 10.
        drifts = traj.drifts()
        assert drifts['H'] < 1e-6
        assert drifts['ptheta'] < 1e-9
        assert drifts['Jres'] < 1e-5


@pytest.mark.parametrize('method', ['midpoint4', 'rk4', 'adaptive-rk'])
def test_other_methods(rng, method):
    s0 = zero_energy_state(rng)
    reference = integrate(s0, 5., IntegratorSpec('implicit-midpoint', step=1e-3), PARAMS)
    traj = integrate(s0, 5., IntegratorSpec(method, step=1e-2, tolerance=1e-11), PARAMS)
    assert traj.t[-1] == 5.
    assert traj.drifts()['H'] < 1e-7
    assert_allclose(traj.final.as_array(), reference.final.as_array(), atol=1e-5)


def test_step_implicit_midpoint(rng):
    s0 = zero_energy_state(rng)
    traj = integrate(s0, 1e-2, MIDPOINT, PARAMS)
    assert_allclose(step_implicit_midpoint(s0, 1e-2, PARAMS).as_array(), traj.final.as_array(), atol=1e-14)


def test_time_reversal(rng):
    s0 = zero_energy_state(rng)
    assert time_reversal_check(s0, 5., MIDPOINT, PARAMS) < 1e-8


def test_dilation_equivariance(rng):
    s0 = negative_energy_state(rng)
    for lam in (.5, 2.):
        report = check_dilation_equivariance(s0, lam, 2., MIDPOINT, PARAMS)
        assert report.max_deviation < 1e-9
        assert report.energy_error < 1e-12
        assert report.energy_dilated == pytest.approx(report.energy_base / lam ** 2)


def test_reduction_on_zero_energy(rng):
    traj = integrate(zero_energy_state(rng), 10., MIDPOINT, PARAMS)
    report = reduction_check(traj)
    assert report.htilde_error < 1e-5
    assert report.ptheta_drift < 1e-9
    assert report.J_drift < 1e-5
    assert reduced_projection(traj).shape == (len(traj), 2)


def test_reduction_of_generated_state():
    s0 = state_from_reduced(3., 1., PARAMS, scale=4.)
    assert hamiltonian(s0, PARAMS) == pytest.approx(0., abs=1e-12)
    traj = integrate(s0, 2., MIDPOINT, PARAMS)
    assert reduction_check(traj).htilde_error < 1e-4


def test_radial_collision():
    s0 = PhaseState.of(1., 0., 0., 0., 0., 0.)
    spec = IntegratorSpec('adaptive-rk', tolerance=1e-10, rho_min=1e-3)
    with pytest.raises(CollisionEvent) as info:
        integrate(s0, 2., spec, PARAMS)
    collision = info.value
    assert collision.rho < 1e-3
    assert collision.t == pytest.approx(1 / math.sqrt(2 * PARAMS.alpha), abs=1e-3)
    assert collision.trajectory.t[-1] == collision.t
    assert collision.to_dict()['error'] == 'collision'


def test_march_backward(rng):
    s0 = zero_energy_state(rng)
    t, y, collision = march(s0.as_array(), 1., 0., MIDPOINT, PARAMS)
    assert collision is None
    assert t[0] == 1. and t[-1] == 0.
    assert np.all(np.diff(t) < 0)


def test_trajectory_records(tmp_path, rng):
    traj = integrate(zero_energy_state(rng), .5, MIDPOINT, PARAMS)
    path = str(tmp_path / 'trajectory.csv')
    traj.to_csv(path)
    with open(path) as file:
        assert file.readline().strip() == CSV_HEADER
    back = Trajectory.read_csv(path, PARAMS)
    assert_allclose(back.y, traj.y, rtol=1e-15)
    assert_allclose(back.t, traj.t, rtol=1e-15)

    other = tmp_path / 'other.csv'
    other.write_text('a,b\n1,2\n')
    with pytest.raises(InvalidParameter):
        Trajectory.read_csv(str(other))


def test_trajectory_validation():
    with pytest.raises(InvalidParameter):
        Trajectory([0., 0.], np.zeros((2, 6)), PARAMS)
    with pytest.raises(InvalidParameter):
        Trajectory([0., 1.], np.zeros((3, 6)), PARAMS)
    traj = Trajectory([0., 1.], np.ones((2, 6)), PARAMS)
    with pytest.raises(ValueError):
        traj.y[0, 0] = 2.


def test_helix_fit():
    t = np.linspace(0., 1., 21)
    y = np.column_stack((t, 3 * t, 1 + 2 * t, np.zeros((t.size, 3))))
    report = helix_deviation(Trajectory(t, y, PARAMS), fraction=.5)
    assert report.z_slope == pytest.approx(2.)
    assert report.z_intercept == pytest.approx(1.)
    assert report.z_residual < 1e-12
    assert_allclose(report.xy_drift, (1., 3.))
    assert report.t_start == pytest.approx(.5)
