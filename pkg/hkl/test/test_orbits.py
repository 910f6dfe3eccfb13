import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hkl.core import Params
from hkl.errors import InvalidParameter, NonClosingZ, NonPositiveLambda, UnresolvedOrbit
from hkl.orbits import (Certificate, LoopPath, SearchOptions, SymmetryClass, action, action_and_gradient,
                        action_parts, action_quad, advance_parameter, angle_advance, certificate,
                        closure_coefficient, dilate_loop, half_period, half_period_defect, horizontality_defect,
                        initial_loop, load_orbit, minimize_action, multi_start, orbit_from_dict, orbit_to_dict,
                        oval_extent, project, reconstruct_z, rotate_loop, s2_defect, save_orbit, seed_loop, shifted,
                        size, spectral_antiderivative, third_law_check, z_coefficients, zero_energy_orbit)
from hkl.orbits.search import _Layout

PARAMS = Params()
SYM = SymmetryClass()


@pytest.fixture
def loop():
    return seed_loop(PARAMS, SYM, modes=8, perturbation=.05, seed=3)


@pytest.fixture(scope='module')
def orbit():
    return zero_energy_orbit(PARAMS)


def test_symmetry_support():
    assert SYM.support(8).tolist() == [-8, -5, -2, 1, 4, 7]
    assert SymmetryClass(False, True).support(2).tolist() == [-2, -1, 0, 1, 2]
    with pytest.raises(InvalidParameter):
        SYM.support(0)


def test_loop_validation():
    with pytest.raises(InvalidParameter):
        LoopPath(0., [1], [1.])
    with pytest.raises(InvalidParameter):
        LoopPath(1., [1, 1], [1., 2.])
    with pytest.raises(InvalidParameter):
        LoopPath(1., [1, 2], [1.])


def test_closure():
    with pytest.raises(NonClosingZ):
        reconstruct_z(LoopPath(2 * math.pi, [1], [1.]))
    z = reconstruct_z(LoopPath(2 * math.pi, [1], [1.]), project=True)
    assert z(0.) == pytest.approx(0.)
    assert closure_coefficient(np.array([-2]), np.array([1.])) == pytest.approx(math.sqrt(2))
    assert math.isnan(closure_coefficient(np.array([4]), np.array([1.])))


def test_seed_is_closed_and_horizontal(loop):
    m, d = z_coefficients(loop)
    assert abs(d[m == 0][0]) < 1e-12
    t = np.linspace(0., loop.period, 97)
    assert np.max(np.abs(horizontality_defect(loop, t))) < 1e-12
    x, y, z = loop.evaluate(t)
    assert z[0] == pytest.approx(0.)
    assert z[-1] == pytest.approx(z[0], abs=1e-12)

    # the horizontal lift integrated by the trapezoidal rule
    fine = np.linspace(0., loop.period, 20001)
    w, dw = loop.planar(fine), loop.velocity(fine)
    dz = .5 * (w.real * dw.imag - w.imag * dw.real)
    z_trapz = np.concatenate(([0.], np.cumsum(.5 * (dz[1:] + dz[:-1]) * np.diff(fine))))
    assert_allclose(reconstruct_z(loop)(fine), z_trapz, atol=1e-6)


def test_threefold_symmetry(loop):
    t = np.linspace(0., loop.period, 50)
    rotated = np.array(rotate_loop(loop).evaluate(t))
    moved = np.array(shifted(loop, loop.period / 3).evaluate(t))
    assert_allclose(moved, rotated, atol=1e-12)


def test_reflection_symmetry(loop):
    t = np.linspace(0., loop.period, 50)
    x, y, z = loop.evaluate(t)
    xm, ym, zm = loop.evaluate(-t)
    assert_allclose(xm, x, atol=1e-12)
    assert_allclose(ym, -y, atol=1e-12)
    assert_allclose(zm, -z, atol=1e-12)


def test_spectral_antiderivative():
    nodes = 16
    t = 2 * math.pi * np.arange(nodes) / nodes
    big_l = spectral_antiderivative(nodes)
    assert_allclose(big_l @ np.cos(t), np.sin(t), atol=1e-13)
    assert_allclose(big_l @ np.sin(3 * t), (1 - np.cos(3 * t)) / 3, atol=1e-13)


def test_action_quadratures_agree(loop):
    assert action(loop, PARAMS) == pytest.approx(action_quad(loop, PARAMS, rtol=1e-10), rel=1e-8)
    assert action(loop, PARAMS, nodes=256) == pytest.approx(action(loop, PARAMS, nodes=512), rel=1e-10)
    kinetic_part, potential_part = action_parts(loop, PARAMS)
    assert kinetic_part > 0 and potential_part > 0


def test_seed_balances_the_action_parts():
    kinetic_part, potential_part = action_parts(seed_loop(PARAMS, SYM, modes=8), PARAMS)
    assert kinetic_part == pytest.approx(potential_part, rel=1e-12)


def test_action_gradient(loop):
    value, grad_c, grad_z0, rho_min = action_and_gradient(loop, PARAMS, 128)
    assert value == pytest.approx(action(loop, PARAMS, 128))
    assert rho_min > 0
    eps = 1e-6
    for j in range(loop.k.size):
        for direction, part in ((1., grad_c[j].real), (1j, grad_c[j].imag)):
            c_plus, c_minus = loop.c.copy(), loop.c.copy()
            c_plus[j] += eps * direction
            c_minus[j] -= eps * direction
            up = action_and_gradient(LoopPath(loop.period, loop.k, c_plus, loop.z0), PARAMS, 128)[0]
            down = action_and_gradient(LoopPath(loop.period, loop.k, c_minus, loop.z0), PARAMS, 128)[0]
            assert (up - down) / (2 * eps) == pytest.approx(part, rel=1e-5, abs=1e-6)
    up = action_and_gradient(LoopPath(loop.period, loop.k, loop.c, eps), PARAMS, 128)[0]
    down = action_and_gradient(LoopPath(loop.period, loop.k, loop.c, -eps), PARAMS, 128)[0]
    assert (up - down) / (2 * eps) == pytest.approx(grad_z0, rel=1e-5, abs=1e-6)


@pytest.mark.parametrize('sym', [SymmetryClass(), SymmetryClass(True, True, True), SymmetryClass(True, False, False),
                                 SymmetryClass(False, False, False)])
def test_reduced_gradient(sym):
    layout = _Layout(sym, 5, 2 * math.pi)
    theta = layout.pack(seed_loop(PARAMS, SymmetryClass(True, False, sym.reflection), modes=5, perturbation=.05,
                                  seed=1))
    rng = np.random.default_rng(0)
    theta = theta + 1e-3 * rng.standard_normal(theta.size)
    multiplier = rng.standard_normal(64)

    def value(th):
        return action_and_gradient(layout.loop(th), PARAMS, 64, 0., .5, multiplier)[0]

    _, grad_c, grad_z0, _ = action_and_gradient(layout.loop(theta), PARAMS, 64, 0., .5, multiplier)
    grad = layout.gradient(theta, grad_c, grad_z0)
    eps = 1e-6
    numeric = np.array([(value(theta + eps * e) - value(theta - eps * e)) / (2 * eps) for e in np.eye(theta.size)])
    assert_allclose(grad, numeric, rtol=1e-5, atol=1e-6)


def test_projection():
    loop = LoopPath(2 * math.pi, [-2, -1, 1, 2], [1., .3 + .1j, 0., .2j], .4)
    p = project(loop, SYM, modes=4)
    assert p.k.tolist() == [-2, 1, 4]
    assert np.all(p.c.imag == 0)
    assert p.z0 == 0.
    reconstruct_z(p)


def test_dilation_of_loops(loop):
    for lam in (.5, 3.):
        member = dilate_loop(loop, lam)
        assert member.period == pytest.approx(lam ** 2 * loop.period)
        assert size(member) == pytest.approx(lam * size(loop), rel=1e-12)
        assert action(member, PARAMS) == pytest.approx(action(loop, PARAMS), rel=1e-12)
    with pytest.raises(NonPositiveLambda):
        dilate_loop(loop, -1.)


def test_third_law_along_dilations(loop):
    with pytest.raises(InvalidParameter):
        third_law_check(loop, (1.,), PARAMS)
    loop = loop.with_certificate(certificate(loop, PARAMS, 256))
    report = third_law_check(loop, (.5, 1., 2., 4.), PARAMS, nodes=256)
    assert len(report.rows) == 4
    assert report.ratio_spread < 1e-10
    assert report.rows[1].period == pytest.approx(loop.period)
    ratios = [row.ratio for row in report.rows]
    assert_allclose(ratios, ratios[1], rtol=1e-10)


def test_certificate_of_a_seed(loop):
    cert = certificate(loop, PARAMS, 256)
    assert cert.horizontality < 1e-12
    assert cert.rho_min > 0
    assert not cert.barrier_active
    assert cert.action == pytest.approx(action(loop, PARAMS, 256))
    assert math.isnan(cert.gnorm)
    assert set(cert.to_dict()) == {'action', 'gnorm', 'h_sup', 'el_residual', 'horizontality', 's2_defect',
                                   'rho_min', 'barrier_active', 'lambda0'}


def test_orbit_records(tmp_path, loop):
    cert = Certificate(1., 1e-9, 1e-8, 1e-7, 0., 0., .5, False, .1)
    loop = loop.with_certificate(cert)
    path = str(tmp_path / 'orbit.json')
    save_orbit(loop, path, PARAMS, SYM)
    back = load_orbit(path)
    assert back.period == loop.period
    assert back.k.tolist() == loop.k.tolist()
    assert_allclose(back.c, loop.c, rtol=0, atol=0)
    assert back.certificate == cert
    record = orbit_to_dict(loop, PARAMS, SYM)
    assert record['symmetry'] == {'S1': True, 'S2': False, 'reflection': True}
    with pytest.raises(InvalidParameter):
        orbit_from_dict({'format': 'other'})
    with pytest.raises(InvalidParameter):
        orbit_from_dict({'format': 'hkl-orbit', 'period': 1.})


def test_search_options():
    with pytest.raises(InvalidParameter):
        SearchOptions(modes=1)
    with pytest.raises(InvalidParameter):
        SearchOptions(modes=12, nodes=40)
    with pytest.raises(InvalidParameter):
        SearchOptions(nodes=513)
    with pytest.raises(InvalidParameter):
        SearchOptions(method='cg')
    with pytest.raises(InvalidParameter):
        SearchOptions(start='circle')
    with pytest.raises(InvalidParameter):
        SearchOptions(mu_s2=0.)
    assert SearchOptions(el_tol=math.inf).el_tol == math.inf


def test_angle_advance():
    assert angle_advance(20.) == pytest.approx(math.pi * PARAMS.alpha / 400, rel=1e-2)
    assert oval_extent(1.5) > 0
    t_half, theta_half, _ = half_period(1.5, PARAMS)
    assert t_half > 0
    assert 2 * theta_half == pytest.approx(angle_advance(1.5), abs=1e-6)
    p_theta = advance_parameter(2 * math.pi / 3, PARAMS)
    assert 2 * half_period(p_theta, PARAMS)[1] == pytest.approx(2 * math.pi / 3, abs=1e-10)
    with pytest.raises(InvalidParameter):
        oval_extent(0.)


def test_zero_energy_orbit_is_certified(orbit):
    assert orbit.period == pytest.approx(2 * math.pi)
    assert orbit.k.tolist() == SYM.support(orbit.modes).tolist()
    cert = certificate(orbit, PARAMS, 1024)
    assert cert.el_residual < 1e-6
    assert cert.h_sup < 1e-6
    assert cert.horizontality < 1e-10
    assert cert.rho_min > 0

    opts = SearchOptions(modes=orbit.modes, nodes=1024, gtol=1e-6, method='newton')
    found = minimize_action(orbit, SYM, opts, PARAMS)
    cert = found.certificate
    assert cert.gnorm <= 1e-6
    assert cert.el_residual < 1e-6
    assert cert.h_sup < 1e-6
    assert not cert.barrier_active
    assert cert.action == pytest.approx(action(orbit, PARAMS, 1024), rel=1e-8)


def test_third_law_of_the_zero_energy_orbit(orbit):
    report = third_law_check(orbit.with_certificate(certificate(orbit, PARAMS, 1024)), (.5, 1., 2.), PARAMS, 1024)
    assert report.ratio_spread < 1e-10
    for row in report.rows:
        assert row.el_residual < 2e-6 * row.lam ** -3
        assert row.h_sup < 2e-6 * row.lam ** -2


def test_initial_loops(orbit):
    opts = SearchOptions(modes=orbit.modes, nodes=1024)
    assert_allclose(initial_loop(PARAMS, SYM, opts).c, orbit.c, atol=1e-14)
    perturbed = initial_loop(PARAMS, SYM, SearchOptions(modes=orbit.modes, nodes=1024, perturbation=.01), seed=4)
    assert np.max(np.abs(perturbed.c - orbit.c)) > 0
    assert certificate(perturbed, PARAMS, 1024).horizontality < 1e-10
    epicycle = initial_loop(PARAMS, SYM, SearchOptions(modes=6, start='epicycle'))
    assert_allclose(epicycle.c, seed_loop(PARAMS, SYM, 6).c)


def test_critical_loops_that_are_not_orbits_are_refused():
    opts = SearchOptions(modes=6, nodes=128, gtol=1e-7, start='epicycle', el_tol=1e-12)
    with pytest.raises(UnresolvedOrbit) as info:
        minimize_action(seed_loop(PARAMS, SYM, modes=6), SYM, opts, PARAMS)
    cert = info.value.loop.certificate
    assert cert.gnorm <= 1e-7
    assert max(cert.el_residual, cert.h_sup) > 1e-12
    assert info.value.to_dict()['error'] == 'unresolved_orbit'


def test_half_period_constraint():
    sym = SymmetryClass(True, True, True)
    loop0 = seed_loop(PARAMS, sym, modes=6, perturbation=.05, seed=2)
    assert np.max(np.abs(half_period_defect(loop0, 128))) > 1e-6
    opts = SearchOptions(modes=6, nodes=128, gtol=1e-7, start='epicycle', el_tol=math.inf)
    found = minimize_action(loop0, sym, opts, PARAMS)
    assert found.certificate.s2_defect < 1e-8
    assert found.certificate.gnorm <= 1e-7
    assert s2_defect(found, 512) < 1e-8
    assert found.certificate.horizontality < 1e-12


def test_minimize_from_a_single_seed():
    opts = SearchOptions(modes=6, nodes=128, gtol=1e-7, start='epicycle', el_tol=math.inf)
    orbit = minimize_action(seed_loop(PARAMS, SYM, modes=6), SYM, opts, PARAMS)
    assert orbit.certificate.gnorm <= 1e-7
    assert orbit.certificate.action <= action(seed_loop(PARAMS, SYM, modes=6), PARAMS, 128) + 1e-12


@pytest.mark.slow
def test_search_from_perturbed_zero_energy_orbits():
    opts = SearchOptions(gtol=1e-8, perturbation=1e-3)
    orbit = multi_start(PARAMS, SYM, opts, seeds=range(4), workers=2)
    cert = orbit.certificate
    assert cert.gnorm <= 1e-8
    assert cert.el_residual < 1e-6
    assert cert.h_sup < 1e-6
    assert cert.horizontality < 1e-12
    assert not cert.barrier_active
    report = third_law_check(orbit, (.5, 1., 2., 4.), PARAMS)
    assert report.ratio_spread < 1e-10
    for row in report.rows:
        assert row.el_residual < 1e-5 * row.lam ** -3
