import math
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from hkl.errors import Infeasible, InvalidParameter, NoRecurrence, RadiusExceeded
from hkl.lattice import (DIRECTIONS, GreenTable, LatticePath, LatticeState, brute_force_min_action,
                         claimed_path_count, dp_min_action, dV, energy, green2d, green_csv, green_exact,
                         green_quadrature, green_table, inverse_pi, kernel_bound, laplacian2d, lattice_potential,
                         newton_difference_step, path_action, projection, round_half_toward_zero,
                         shortest_path_count, sgn, z_fundamental_check, z_grid_scan, z_inverse_step, z_orbit,
                         z_step)


def test_drift_kick_cycle():
    s = LatticeState(1, 0)
    visited = [s]
    for _ in range(4):
        s = z_step(s)
        visited.append(s)
    assert [(v.n, v.p) for v in visited] == [(1, 0), (1, -1), (0, 0), (0, 1), (1, 0)]
    orbit = z_orbit(LatticeState(1, 0), 100)
    assert orbit.period == 4
    assert orbit.extent == (0, 1, -1, 1)
    assert orbit.energies() == [Fraction(1), Fraction(3, 2), Fraction(0), Fraction(1, 2)]


def test_sign_convention():
    assert sgn(3) == 1
    assert sgn(0) == -1
    assert sgn(-2) == -1
    assert energy(LatticeState(-3, 1)) == Fraction(7, 2)
    with pytest.raises(InvalidParameter):
        LatticeState(1.5, 0)


def test_explicit_variant_grows():
    with pytest.raises(NoRecurrence) as info:
        z_orbit(LatticeState(1, 0), 1000, 'explicit')
    assert max(abs(s.p) for s in info.value.orbit) > 20
    orbit = z_orbit(LatticeState(1, 0), 1000, 'explicit', strict=False)
    assert orbit.period is None
    assert len(orbit.states) == 1001


@pytest.mark.parametrize('variant', ['drift-kick', 'explicit'])
def test_inverse_step(variant):
    for n in range(-6, 7):
        for p in range(-6, 7):
            s = LatticeState(n, p)
            assert z_inverse_step(z_step(s, variant), variant) == s
    with pytest.raises(InvalidParameter):
        z_step(LatticeState(0, 0), 'implicit')


def test_explicit_map_is_not_onto():
    images = {z_step(LatticeState(n, p), 'explicit') for n in range(-10, 11) for p in range(-10, 11)}
    missing = [LatticeState(n, p) for n in range(-3, 4) for p in range(-3, 4) if LatticeState(n, p) not in images]
    assert missing
    with pytest.raises(InvalidParameter):
        z_inverse_step(missing[0], 'explicit')


def test_grid_scan():
    scan = z_grid_scan(5, max_steps=10 ** 5)
    assert scan.total == 121
    assert scan.recurrent == 121
    assert scan.failures == ()
    assert scan.max_period >= 4
    assert z_grid_scan(5, max_steps=10 ** 5, workers=2) == scan


@pytest.mark.slow
def test_grid_scan_full():
    scan = z_grid_scan(20, max_steps=10 ** 6, workers=4)
    assert scan.recurrent == scan.total == 41 ** 2


def test_orbit_csv(tmp_path):
    path = tmp_path / 'z_orbit.csv'
    z_orbit(LatticeState(1, 0), 10).to_csv(str(path))
    assert path.read_text().splitlines() == ['j,n,p', '0,1,0', '1,1,-1', '2,0,0', '3,0,1']


def test_fundamental_solution_on_the_line():
    check = z_fundamental_check(1000)
    assert check.ok
    assert check.laplacian[0] == -1
    assert len(check.laplacian) == 2001
    with pytest.raises(InvalidParameter):
        z_fundamental_check(0)


def test_green_values():
    assert green_exact(0, 0) == (0, 0)
    assert green_exact(1, 0) == (1, 0)
    assert green_exact(1, 1) == (0, 4)
    assert green_exact(2, 0) == (4, -8)
    assert green_exact(2, 1) == (-1, 8)
    expected = {(1, 0): 1., (1, 1): 4 / math.pi, (2, 0): 4 - 8 / math.pi, (2, 1): 8 / math.pi - 1}
    for (m, n), value in expected.items():
        for method in ('recursion', 'quadrature'):
            assert green2d(m, n, method) == pytest.approx(value, abs=1e-11)
    assert float(inverse_pi(30)) == pytest.approx(1 / math.pi, rel=1e-15)


def test_green_symmetry_and_growth():
    table = green_table(8)
    values = table.values
    assert_allclose(values, values.T, atol=0)
    assert_allclose(values, values[::-1], atol=0)
    assert_allclose(values, values[:, ::-1], atol=0)
    assert np.all(values >= 0)
    assert all(table(m + 1, 0) > table(m, 0) for m in range(8))
    # logarithmic growth
    assert table(8, 0) - table(4, 0) == pytest.approx(2 / math.pi * math.log(2), abs=1e-2)


def test_green_laplacian():
    table = green_table(10)
    assert laplacian2d(table, (0, 0)) == pytest.approx(4., abs=1e-9)
    for m in range(-9, 10):
        for n in range(-9, 10):
            if (m, n) != (0, 0):
                assert laplacian2d(table, (m, n)) == pytest.approx(0., abs=1e-9)


def test_green_methods_agree():
    for m in range(11):
        for n in range(m + 1):
            assert green2d(m, n, 'quadrature') == pytest.approx(green2d(m, n), abs=1e-9)


def test_green_errors(tmp_path):
    with pytest.raises(RadiusExceeded):
        green_exact(65, 0)
    with pytest.raises(RadiusExceeded):
        green_table(3)(4, 0)
    with pytest.raises(InvalidParameter):
        green2d(1, 0, 'series')
    with pytest.raises(InvalidParameter):
        GreenTable(2, np.zeros((3, 3)))
    assert (3, -3) in green_table(3)
    table = green_csv(2, str(tmp_path / 'green2d.csv'))
    lines = (tmp_path / 'green2d.csv').read_text().splitlines()
    assert lines[0] == 'm,n,a'
    assert len(lines) == 26
    assert table(1, 0) == 1.
    assert green_quadrature(0, 0) == pytest.approx(0., abs=1e-12)


def test_shortest_paths():
    result = dp_min_action((0, 0), (2, 1), 3)
    assert result.min_action == Fraction(3, 2)
    assert result.count == 3
    assert result.witness.vertices[0] == (0, 0)
    assert result.witness.vertices[-1] == (2, 1)
    assert path_action(result.witness) == result.min_action

    assert dp_min_action((0, 0), (2, 1), 4).count == 12
    assert dp_min_action((0, 0), (2, 1), 4).min_action == Fraction(3, 2)


def test_count_against_closed_forms():
    result = dp_min_action((0, 0), (3, 2), 5)
    assert result.count == 10 == shortest_path_count(3, 2)
    assert claimed_path_count(3, 2) == 8


@pytest.mark.parametrize('end', [(n, m) for n in range(-4, 5) for m in range(-4, 5) if 0 < abs(n) + abs(m) <= 8])
def test_binomial_counts(end):
    d = abs(end[0]) + abs(end[1])
    result = dp_min_action((0, 0), end, d)
    assert result.count == math.comb(d, abs(end[0]))
    assert result.min_action == Fraction(d, 2)


def test_dp_matches_enumeration():
    for version in ('v1', 'v2'):
        for end, steps in (((2, 1), 3), ((1, 1), 3), ((2, 0), 4)):
            dp = dp_min_action((0, 0), end, steps, version=version)
            brute = brute_force_min_action((0, 0), end, steps, version=version)
            assert (dp.min_action, dp.count) == (brute.min_action, brute.count)


def test_long_jumps():
    result = dp_min_action((0, 0), (2, 1), 2, version='v1')
    assert result.min_action == Fraction(5, 2)
    assert result.count == 4
    assert result.witness.version == 'v1'


def test_potential_paths():
    table = green_table(8)
    for version, max_jump in (('v2', None), ('v1', 2)):
        dp = dp_min_action((0, 0), (1, 1), 3, alpha=1., version=version, table=table)
        brute = brute_force_min_action((0, 0), (1, 1), 3, alpha=1., version=version, table=table, max_jump=max_jump)
        assert dp.min_action == pytest.approx(brute.min_action, rel=1e-12)
        assert dp.count == brute.count == 2
        assert path_action(dp.witness, 1., table) == pytest.approx(dp.min_action, rel=1e-12)
    expected = 1 - (1 + 2 * 4 / math.pi) / 4
    assert dp.min_action == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize('alpha, enumerated', [(20., -18.1408), (40., -43.5023), (80., -100.3512)])
def test_long_jumps_under_a_strong_coupling(alpha, enumerated):
    dp = dp_min_action((0, 0), (0, 0), 4, alpha=alpha, version='v1')
    brute = brute_force_min_action((0, 0), (0, 0), 4, alpha=alpha, version='v1', max_jump=4)
    assert brute.min_action == pytest.approx(enumerated, abs=1e-4)
    assert dp.min_action <= brute.min_action + 1e-9 * abs(brute.min_action)
    assert path_action(dp.witness, alpha) == pytest.approx(dp.min_action, rel=1e-12)
    vertices = dp.witness.vertices
    if max(abs(a[0] - b[0]) + abs(a[1] - b[1]) for a, b in zip(vertices, vertices[1:])) <= 4:
        assert dp.min_action == pytest.approx(brute.min_action, rel=1e-12)


def test_kernel_bound():
    table = green_table(20)
    for radius in (0, 1, 5, 20):
        ball = [table(m, n) for m in range(-radius, radius + 1) for n in range(-radius, radius + 1)
                if abs(m) + abs(n) <= radius]
        assert kernel_bound(radius) == pytest.approx(max(ball), rel=1e-12)
    values = [kernel_bound(r) for r in range(0, 200, 7)]
    assert values == sorted(values)
    assert kernel_bound(1000) > 2 / math.pi * math.log(1000)


def test_infeasible():
    with pytest.raises(Infeasible):
        dp_min_action((0, 0), (2, 1), 2)
    with pytest.raises(Infeasible):
        dp_min_action((0, 0), (2, 1), 0, version='v1')
    with pytest.raises(InvalidParameter):
        dp_min_action((0, 0), (2, 1), 3, alpha=-1.)
    with pytest.raises(InvalidParameter):
        dp_min_action((0, 0), (2, 1), 3, version='v3')
    still = dp_min_action((1, 1), (1, 1), 0)
    assert still.min_action == 0
    assert still.count == 1
    assert still.witness.vertices == ((1, 1),)


def test_lattice_path_validation():
    with pytest.raises(InvalidParameter):
        LatticePath(((0, 0), (2, 0)))
    assert LatticePath(((0, 0), (2, 0)), 'v1').duration == 1
    with pytest.raises(InvalidParameter):
        LatticePath(())


def test_result_text():
    text = dp_min_action((0, 0), (2, 1), 3).to_text()
    lines = text.splitlines()
    assert lines[0] == 'min_action = 1.5'
    assert lines[1] == 'count = 3'
    assert lines[2].startswith('witness = (0,0) ')
    assert lines[3] == 'version = v2'


def test_rounding():
    values = {.5: 0, -.5: 0, 1.5: 1, -1.5: -1, .6: 1, -2.7: -3, .4: 0, 0.: 0}
    for v, expected in values.items():
        assert round_half_toward_zero(v) == expected


def test_newton_difference_step():
    assert projection((1., 3., 2., -4.)) == (2., -1.)
    with pytest.raises(InvalidParameter):
        projection((1., 2.))

    flat = lambda m, n: 0.
    point, p = newton_difference_step((2, 1), (3., 1., -1., -2.), flat)
    assert point == (4, 0)
    assert_allclose(p, (3., 1., -1., -2.))
    assert projection((2., 0., 0., 0.)) == (1., 0.)
    assert projection(dV(lambda m, n: 3. * n - m, (5, -2))) == (0., 0.)

    table = green_table(4)
    V = lattice_potential(table, 1.)
    assert V(1, 0) == pytest.approx(.25)
    point, p = newton_difference_step((1, 0), np.zeros(4), V)
    assert point == (1, 0)
    expected = [-(V(1 + dm, dn) - V(1, 0)) for dm, dn in DIRECTIONS]
    assert_allclose(p, expected)
    assert_allclose(dV(V, (0, 0)), .25)
