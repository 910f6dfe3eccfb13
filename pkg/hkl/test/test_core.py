import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hkl.core import (ALPHA, ConfigPoint, CylState, ORIGIN, Params, PhaseState, ReducedState, angular_momentum,
                      cylindrical_hamiltonian, dilate, dilate_config, dilation_moment, from_cylindrical,
                      gradient_numeric, group_inv, group_mul, hamiltonian, hamiltonian_gradient,
                      hamiltonian_hessian, horizontal_momenta, htilde, htilde_reduced, jacobian, kinetic,
                      left_translate, poisson_bracket_numeric, potential, reduced_curve, rho, rotate,
                      state_from_reduced, to_cylindrical, to_reduced, vector_field)
from hkl.core.hamiltonian import _field
from hkl.errors import AxisSingular, InvalidParameter, NonPositiveLambda, SingularOrigin
from .conftest import random_state, zero_energy_state

PARAMS = Params()


def random_point(rng):
    return ConfigPoint(*rng.uniform(-2, 2, 3))


def test_group_law(rng):
    for _ in range(20):
        a, b, c = random_point(rng), random_point(rng), random_point(rng)
        assert_allclose(tuple((a * b) * c), tuple(a * (b * c)), atol=1e-12)
        assert_allclose(tuple(group_mul(a, group_inv(a))), (0, 0, 0), atol=1e-15)
        assert_allclose(tuple(group_mul(ORIGIN, a)), tuple(a))


def test_gauge(rng):
    assert rho(ORIGIN) == 0
    assert rho(ConfigPoint(0., 0., 16.)) == pytest.approx(2.)
    for _ in range(20):
        a, b = random_point(rng), random_point(rng)
        lam = rng.uniform(.1, 10)
        assert rho(dilate_config(a, lam)) == pytest.approx(lam * rho(a), rel=1e-12)
        assert rho(group_inv(a) * b) == pytest.approx(rho(group_inv(b) * a), rel=1e-12)
    with pytest.raises(NonPositiveLambda):
        dilate_config(ConfigPoint(1., 0., 0.), 0.)


def test_params():
    assert Params().alpha == pytest.approx(2 / math.pi)
    for alpha in (0., -1., float('nan')):
        with pytest.raises(InvalidParameter):
            Params(alpha)
    with pytest.raises(InvalidParameter):
        PhaseState.of(1., 0., 0., float('inf'), 0., 0.)
    with pytest.raises(InvalidParameter):
        PhaseState.from_array([1., 2., 3.])


def test_singular_origin():
    s = PhaseState.of(0., 0., 0., 1., 0., 0.)
    with pytest.raises(SingularOrigin):
        hamiltonian(s, PARAMS)
    with pytest.raises(SingularOrigin):
        vector_field(s, PARAMS)
    assert kinetic(s) == pytest.approx(.5)


def test_geodesic_field():
    assert_allclose(_field((1., 0., 0., 0., 1., 0.), 0.), (0., 1., .5, 0., 0., 0.))


def test_gradient_matches_differences(rng):
    for _ in range(10):
        s = random_state(rng)
        expected = gradient_numeric(lambda u: hamiltonian(u, PARAMS), s)
        assert_allclose(hamiltonian_gradient(s, PARAMS), expected, rtol=1e-6, atol=1e-6)


def test_hessian_and_jacobian(rng):
    h = 1e-6
    for _ in range(5):
        s = random_state(rng)
        y = s.as_array()
        hess = np.zeros((6, 6))
        jac = np.zeros((6, 6))
        for i in range(6):
            yp, ym = y.copy(), y.copy()
            yp[i] += h
            ym[i] -= h
            sp, sm = PhaseState.from_array(yp), PhaseState.from_array(ym)
            hess[:, i] = (hamiltonian_gradient(sp, PARAMS) - hamiltonian_gradient(sm, PARAMS)) / (2 * h)
            jac[:, i] = (vector_field(sp, PARAMS) - vector_field(sm, PARAMS)) / (2 * h)
        assert_allclose(hamiltonian_hessian(s, PARAMS), hess, rtol=1e-5, atol=1e-5)
        assert_allclose(jacobian(s, PARAMS), jac, rtol=1e-5, atol=1e-5)
        assert_allclose(hamiltonian_hessian(s, PARAMS), hamiltonian_hessian(s, PARAMS).T)


def test_brackets(rng):
    H = lambda u: hamiltonian(u, PARAMS)
    Ht = lambda u: htilde(u, PARAMS)
    for _ in range(10):
        s = random_state(rng)
        assert poisson_bracket_numeric(dilation_moment, H, s) == pytest.approx(2 * H(s), rel=1e-6, abs=1e-6)
        assert poisson_bracket_numeric(angular_momentum, H, s) == pytest.approx(0., abs=1e-6)
        assert poisson_bracket_numeric(Ht, dilation_moment, s) == pytest.approx(0., abs=1e-5)
        assert poisson_bracket_numeric(Ht, angular_momentum, s) == pytest.approx(0., abs=1e-5)


def test_dilation(rng):
    for _ in range(10):
        s = random_state(rng)
        lam = rng.uniform(.2, 5.)
        d = dilate(s, lam)
        assert hamiltonian(d, PARAMS) == pytest.approx(hamiltonian(s, PARAMS) / lam ** 2, rel=1e-10, abs=1e-12)
        assert dilation_moment(d) == pytest.approx(dilation_moment(s), rel=1e-12, abs=1e-12)
        assert angular_momentum(d) == pytest.approx(angular_momentum(s), rel=1e-12, abs=1e-12)
        assert htilde(d, PARAMS) == pytest.approx(htilde(s, PARAMS), rel=1e-10)
    for lam in (0., -2.):
        with pytest.raises(NonPositiveLambda):
            dilate(s, lam)


def test_rotation_and_translation(rng):
    for _ in range(10):
        s = random_state(rng)
        r = rotate(s, rng.uniform(0, 2 * math.pi))
        assert hamiltonian(r, PARAMS) == pytest.approx(hamiltonian(s, PARAMS), rel=1e-10, abs=1e-12)
        assert angular_momentum(r) == pytest.approx(angular_momentum(s), rel=1e-10, abs=1e-12)

        g = random_point(rng)
        t = left_translate(s, g)
        assert_allclose(horizontal_momenta(t), horizontal_momenta(s), atol=1e-12)
        assert potential(t.q, PARAMS, sun=g) == pytest.approx(potential(s.q, PARAMS), rel=1e-10)


def test_zero_energy_states(rng):
    for _ in range(10):
        s = zero_energy_state(rng)
        assert hamiltonian(s, PARAMS) == pytest.approx(0., abs=1e-12)
        assert htilde(s, PARAMS) == pytest.approx(1., rel=1e-12)


def test_cylindrical(rng):
    for _ in range(10):
        s = random_state(rng)
        c = to_cylindrical(s)
        assert cylindrical_hamiltonian(c, PARAMS) == pytest.approx(hamiltonian(s, PARAMS), rel=1e-10, abs=1e-12)
        assert_allclose(from_cylindrical(c).as_array(), s.as_array(), atol=1e-12)
        assert htilde_reduced(to_reduced(c), PARAMS) == pytest.approx(htilde(s, PARAMS), rel=1e-10)
    with pytest.raises(AxisSingular):
        to_cylindrical(PhaseState.of(0., 0., 1., 0., 0., 0.))
    with pytest.raises(AxisSingular):
        CylState(0., 0., 0., 0., 0., 0.)


def test_to_reduced():
    rs = to_reduced(CylState(2., 0., 4., 0., 1., 1.))
    assert rs.v == pytest.approx(1.)
    assert rs.p_v == pytest.approx(4.)
    assert rs.J == pytest.approx(8.)
    assert rs.p_theta == pytest.approx(1.)


@pytest.mark.parametrize('J, p_theta', [(3., 1.), (0., 1.), (-2., .5)])
def test_state_from_reduced(J, p_theta):
    for scale in (1., 3.):
        s = state_from_reduced(J, p_theta, PARAMS, scale=scale)
        assert hamiltonian(s, PARAMS) == pytest.approx(0., abs=1e-12)
        assert dilation_moment(s) == pytest.approx(J, abs=1e-12)
        assert angular_momentum(s) == pytest.approx(p_theta, abs=1e-12)
    rs = to_reduced(to_cylindrical(state_from_reduced(J, p_theta, PARAMS)))
    lower, upper = reduced_curve(J, p_theta, [rs.v], PARAMS)
    assert upper[0] == pytest.approx(rs.p_v, rel=1e-10, abs=1e-12)
    assert lower[0] <= upper[0]


def test_reduced_curve_is_the_level_set():
    v = np.linspace(-3, 3, 61)
    lower, upper = reduced_curve(3., 1., v, PARAMS)
    for vi, lo, up in zip(v, lower, upper):
        for p_v in (lo, up):
            if np.isfinite(p_v):
                assert htilde_reduced(ReducedState(vi, p_v, 3., 1.), PARAMS) == pytest.approx(1., rel=1e-9)
    assert ALPHA == PARAMS.alpha
