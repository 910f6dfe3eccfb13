"""
The commands of the front end. Each one reads a :class:`hkl.cli.config.RunConfig`, writes its products in the
output directory and returns a JSON-serializable summary.
"""

import json
import logging
import os
from dataclasses import asdict
from fractions import Fraction

import numpy as np

from ..core import (ALPHA, Params, PhaseState, angular_momentum, dilation_moment, reduced_curve,
                    state_from_reduced)
from ..errors import CollisionEvent, InvalidParameter
from ..flow import IntegratorSpec, helix_deviation, integrate, reduced_projection, reduction_check
from ..lattice import (LatticeState, claimed_path_count, dp_min_action, green_quadrature, green_table, laplacian2d,
                       shortest_path_count, z_fundamental_check, z_grid_scan, z_orbit)
from ..lattice.paths import l1
from ..oracles import (ConicSpec, conic_kind, conic_on_N, conic_oracle, conic_state, geodesic_difference_demo,
                       geodesic_oracle, line_oracle, residual, stationary_oracle)
from ..orbits import SearchOptions, SymmetryClass, load_orbit, multi_start, save_orbit, third_law_check
from ..plot import plot_green, plot_lattice_path, plot_loop, plot_reduced, plot_trajectory, plot_z_orbit

logger = logging.getLogger(__name__)

ORACLE_GRID = 101
"""The number of times the residuals of the closed form families are evaluated at"""

CONIC_WINDOWS = {-1.: (0., .5), 0.: (1., 3.), 1.: (1., 3.)}
"""Integration window of the conic check for each energy, inside the domain of the closed form"""


def _params(cfg):
    return Params(ALPHA if cfg.alpha is None else cfg.alpha)


def _spec(cfg):
    return IntegratorSpec(cfg.method, step=cfg.dt, tolerance=cfg.tolerance)


def _verbose(cfg, label):
    return label if cfg.progress else False


def _path(cfg, name):
    os.makedirs(cfg.out, exist_ok=True)
    return os.path.join(cfg.out, name)


def _require_state(cfg):
    if cfg.state is None:
        raise InvalidParameter('the {0} command needs an initial state'.format(cfg.command))
    return PhaseState.from_array(cfg.state)


def _integrate(cfg, s0, params, name):
    """Integrate and write the samples, the partial trajectory too when a collision stops the run"""
    path = _path(cfg, name)
    try:
        traj = integrate(s0, cfg.t_final, _spec(cfg), params, verbose=_verbose(cfg, cfg.command))
    except CollisionEvent as e:
        e.trajectory.to_csv(path)
        raise
    traj.to_csv(path)
    return traj, path


def cmd_simulate(cfg):
    """
    Trajectory CSV, xy-projection and height figure, drifts of the first integrals
    """
    params = _params(cfg)
    traj, csv_path = _integrate(cfg, _require_state(cfg), params, 'trajectory.csv')
    files = [csv_path]
    if cfg.plot:
        files.append(_path(cfg, 'trajectory.svg'))
        plot_trajectory(traj, files[-1], 'H = {0:.6g}'.format(traj.diagnostics()[0][0]))
    h = traj.diagnostics()[0]
    return {'command': cfg.command, 'samples': len(traj), 't_final': float(traj.t[-1]), 'H0': float(h[0]),
            'rho_min': float(np.min(traj.rho())), 'drifts': traj.drifts(), 'files': files}


def cmd_reduce(cfg):
    """
    Projection of a zero energy trajectory to the :math:`(v, p_v)` plane, with the residual :math:`|\\tilde{H} - 1|`
    """
    params = _params(cfg)
    s0 = PhaseState.from_array(cfg.state) if cfg.state is not None else \
        state_from_reduced(cfg.J, cfg.p_theta, params)
    traj, trajectory_path = _integrate(cfg, s0, params, 'trajectory.csv')
    points = reduced_projection(traj)
    h = traj.diagnostics()[0]
    # K / U - 1 = H / U
    htilde_residual = np.abs(h) * traj.rho() ** 2 / params.alpha
    csv_path = _path(cfg, 'reduced.csv')
    np.savetxt(csv_path, np.column_stack((points, htilde_residual)), fmt='%.17g', delimiter=',',
               header='v,p_v,htilde_residual', comments='')
    files = [trajectory_path, csv_path]
    j, p_theta = dilation_moment(s0), angular_momentum(s0)
    if cfg.plot:
        v_min, v_max = float(np.min(points[:, 0])), float(np.max(points[:, 0]))
        margin = max(.25 * (v_max - v_min), 1.)
        v = np.linspace(v_min - margin, v_max + margin, 801)
        files.append(_path(cfg, 'reduced.svg'))
        plot_reduced(points, files[-1], (v,) + reduced_curve(j, p_theta, v, params),
                     'J = {0:.6g}, p_theta = {1:.6g}'.format(j, p_theta))
    report = reduction_check(traj)
    return {'command': cfg.command, 'J': j, 'p_theta': p_theta, 'H0': float(h[0]),
            'htilde_residual': float(np.max(htilde_residual)), 'J_drift': report.J_drift,
            'ptheta_drift': report.ptheta_drift, 'files': files}


def _symmetry(cfg):
    return SymmetryClass(cfg.s1, cfg.s2, cfg.reflection)


def _search(cfg, params, sym):
    opts = SearchOptions(modes=cfg.modes, nodes=cfg.nodes, gtol=cfg.gtol, max_iter=cfg.max_iter,
                         perturbation=cfg.perturbation, method=cfg.search_method, start=cfg.search_start,
                         el_tol=cfg.el_tol)
    return multi_start(params, sym, opts, range(cfg.seed, cfg.seed + cfg.starts), cfg.workers)


def cmd_find_orbit(cfg):
    """
    Periodic orbit search, the orbit record, its certificate as text and a figure
    """
    params, sym = _params(cfg), _symmetry(cfg)
    loop = _search(cfg, params, sym)
    orbit_path, certificate_path = _path(cfg, 'orbit.json'), _path(cfg, 'certificate.txt')
    save_orbit(loop, orbit_path, params, sym)
    certificate = loop.certificate.to_dict()
    with open(certificate_path, 'w') as file:
        file.write('period = {0:.17g}\n'.format(loop.period))
        for key, value in certificate.items():
            file.write('{0} = {1}\n'.format(key, value if isinstance(value, bool) else '{0:.17g}'.format(value)))
    files = [orbit_path, certificate_path]
    if cfg.plot:
        files.append(_path(cfg, 'orbit.svg'))
        plot_loop(loop, files[-1], title='action = {0:.12g}'.format(certificate['action']))
    return {'command': cfg.command, 'period': loop.period, 'certificate': certificate, 'files': files}


def cmd_third_law(cfg):
    """
    :math:`T^2/a^4` along the dilations of a certified orbit, read from a record or searched first
    """
    params = _params(cfg)
    if cfg.orbit:
        loop = load_orbit(cfg.orbit)
        if loop.certificate is None:
            raise InvalidParameter('the orbit record {0} has no certificate'.format(cfg.orbit))
    else:
        loop = _search(cfg, params, _symmetry(cfg))
    report = third_law_check(loop, cfg.lambda_list, params, cfg.nodes)
    csv_path = _path(cfg, 'third_law.csv')
    rows = np.array([[row.lam, row.period, row.size, row.ratio, row.el_residual, row.h_sup, row.action]
                     for row in report.rows]).reshape(-1, 7)
    np.savetxt(csv_path, rows, fmt='%.17g', delimiter=',', header='lambda,T,a,ratio,el_residual,h_sup,action',
               comments='')
    return {'command': cfg.command, 'ratio_spread': report.ratio_spread,
            'rows': [asdict(row) for row in report.rows], 'files': [csv_path]}


def _conic_check(h, cfg, params):
    spec = ConicSpec(h, params.alpha)
    t0, t1 = CONIC_WINDOWS[h]
    traj = integrate(conic_state(spec, t0), t1 - t0, _spec(cfg), params)
    r = np.hypot(traj.y[:, 0], traj.y[:, 1])
    exact = np.array([conic_on_N(spec, t0 + t) for t in traj.t])
    return {'kind': conic_kind(spec), 'residual': residual(conic_oracle(spec), np.linspace(t0, t1, ORACLE_GRID)),
            'integration_error': float(np.max(np.abs(r * r - exact * exact)))}


def cmd_oracles(cfg):
    """
    Residuals of the closed form families, integration against the conics and the geodesic difference
    """
    params = _params(cfg)
    positive = np.linspace(.1, 10., ORACLE_GRID)
    grid = np.linspace(0., 10., ORACLE_GRID)
    geodesic = PhaseState.of(1., 0., 0., 0., 1., 1.)
    demo = geodesic_difference_demo(PhaseState.of(0., 0., 0., 1., 0., 0.), PhaseState.of(0., 0., 0., 0., 1., 0.))
    summary = {'command': cfg.command, 'alpha': params.alpha,
               'line': residual(line_oracle(1., 0., params), positive),
               'stationary': residual(stationary_oracle(1., params), grid),
               'geodesic': residual(geodesic_oracle(geodesic), grid),
               'geodesic_difference': {'max_deviation': demo.max_deviation, 'fitted_pz': demo.fitted_pz},
               'conics': {str(h): _conic_check(h, cfg, params) for h in sorted(CONIC_WINDOWS)}}
    path = _path(cfg, 'oracles.json')
    summary['files'] = [path]
    with open(path, 'w') as file:
        json.dump(summary, file, indent=2, sort_keys=True)
        file.write('\n')
    return summary


def cmd_lattice_z(cfg):
    """
    Orbit of the integer Kepler map from ``start``, recurrence census and the fundamental solution check
    """
    orbit = z_orbit(LatticeState(*cfg.start), cfg.max_steps, cfg.variant, strict=False)
    csv_path = _path(cfg, 'z_orbit.csv')
    orbit.to_csv(csv_path)
    files = [csv_path]
    if cfg.plot:
        files.append(_path(cfg, 'z_orbit.svg'))
        plot_z_orbit(orbit, files[-1], '{0}, period {1}'.format(cfg.variant, orbit.period))
    scan = z_grid_scan(cfg.grid, cfg.max_steps, cfg.variant, cfg.workers, _verbose(cfg, 'Z scan'))
    fundamental = z_fundamental_check(1000)
    energies = orbit.energies()
    return {'command': cfg.command, 'variant': cfg.variant, 'start': list(cfg.start), 'period': orbit.period,
            'extent': list(orbit.extent), 'energy_range': [float(min(energies)), float(max(energies))],
            'scan': {'radius': scan.radius, 'total': scan.total, 'recurrent': scan.recurrent,
                     'max_period': scan.max_period, 'failures': [[s.n, s.p] for s in scan.failures[:10]]},
            'fundamental_ok': fundamental.ok, 'files': files}


def cmd_green2d(cfg):
    """
    The kernel table, the Laplacian check and the agreement with the quadrature on the first octant
    """
    table = green_table(cfg.radius, cfg.green_method)
    csv_path = _path(cfg, 'green2d.csv')
    table.to_csv(csv_path)
    r = cfg.radius - 1
    laplacian_error = max((abs(laplacian2d(table, (m, n)) - (4 if m == n == 0 else 0))
                           for m in range(-r, r + 1) for n in range(-r, r + 1)), default=0.)
    checked = min(cfg.radius, 10)
    agreement = max(abs(table(m, n) - green_quadrature(m, n)) for m in range(checked + 1) for n in range(m + 1))
    files = [csv_path]
    if cfg.plot:
        files.append(_path(cfg, 'green2d.svg'))
        plot_green(table, files[-1], 'a(m, n), {0}'.format(table.method))
    return {'command': cfg.command, 'method': table.method, 'normalization': table.normalization,
            'rows': (2 * cfg.radius + 1) ** 2, 'laplacian_error': laplacian_error,
            'quadrature_agreement': agreement, 'files': files}


def cmd_lattice_path(cfg):
    """
    Minimal discrete action between two lattice points, with the number of minimizers and a witness
    """
    alpha = 0. if cfg.alpha is None else cfg.alpha
    result = dp_min_action(cfg.start, cfg.end, cfg.steps, alpha, cfg.version, verbose=_verbose(cfg, 'DP'))
    text_path = _path(cfg, 'lattice_path.txt')
    with open(text_path, 'w') as file:
        file.write(result.to_text())
    files = [text_path]
    if cfg.plot:
        files.append(_path(cfg, 'lattice_path.svg'))
        plot_lattice_path(result.witness, files[-1], 'count = {0}'.format(result.count))
    summary = {'command': cfg.command, 'version': cfg.version, 'min_action': float(result.min_action),
               'count': result.count, 'witness': [list(v) for v in result.witness.vertices], 'files': files}
    if isinstance(result.min_action, Fraction):
        summary['min_action_exact'] = str(result.min_action)
    n, m = cfg.end[0] - cfg.start[0], cfg.end[1] - cfg.start[1]
    if alpha == 0 and cfg.version == 'v2' and cfg.steps == l1(cfg.start, cfg.end):
        summary['shortest_path_count'] = shortest_path_count(n, m)
        summary['claimed_path_count'] = claimed_path_count(abs(n), abs(m))
    return summary


def cmd_helix(cfg):
    """
    Exploratory fit of the late part of a trajectory by a vertical helix
    """
    params = _params(cfg)
    traj, csv_path = _integrate(cfg, _require_state(cfg), params, 'trajectory.csv')
    report = helix_deviation(traj)
    return {'command': cfg.command, 'report': asdict(report), 'files': [csv_path]}


COMMANDS = {'simulate': cmd_simulate, 'reduce': cmd_reduce, 'find-orbit': cmd_find_orbit,
            'third-law': cmd_third_law, 'oracles': cmd_oracles, 'lattice-z': cmd_lattice_z,
            'green2d': cmd_green2d, 'lattice-path': cmd_lattice_path, 'helix': cmd_helix}
"""Command name to implementation"""


def run(cfg):
    """
    :param hkl.cli.config.RunConfig cfg:
    :return: dict - The summary of the command
    """
    logger.info('running %s in %s', cfg.command, cfg.out)
    return COMMANDS[cfg.command](cfg)
