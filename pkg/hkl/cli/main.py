"""
Entry point of the ``hkl`` command.

The summary of a successful run is printed as JSON on the standard output and the exit code is 0. A numerical
failure prints the error as JSON and exits with 1, a usage error exits with 2.
"""

import argparse
import json
import logging
import sys

from .commands import run
from .config import read_config_file, resolve, write_manifest
from .. import __version__
from ..errors import HKLError, InvalidParameter
from ..misc.log import configure_logging

logger = logging.getLogger(__name__)

STATE_COMMANDS = ('simulate', 'helix')
"""The commands without a default initial state"""


def _reals(size):
    def parse(text):
        try:
            values = tuple(float(v) for v in text.split(','))
        except ValueError:
            raise argparse.ArgumentTypeError('expected {0} comma separated numbers, got {1!r}'.format(size, text))
        if size is not None and len(values) != size:
            raise argparse.ArgumentTypeError('expected {0} comma separated numbers, got {1!r}'.format(size, text))
        return values

    return parse


def _point(text):
    try:
        m, n = (int(v) for v in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError('expected a lattice point m,n, got {0!r}'.format(text))
    return m, n


def _common_parser():
    parser = argparse.ArgumentParser(add_help=False)
    group = parser.add_argument_group('common options')
    group.add_argument('--config', help="JSON file of parameters, or the manifest of a previous run", metavar='FILE')
    group.add_argument('--out', help="Output directory", metavar='DIR')
    group.add_argument('--alpha', help="Kepler coupling, 2/pi by default (0 for lattice-path)", type=float)
    group.add_argument('--seed', help="Seed of the random perturbations", type=int)
    group.add_argument('--workers', help="Number of processes of the scans and searches", type=int)
    group.add_argument('--progress', help="Display progress bars on the standard error", action='store_true',
                       default=None)
    group.add_argument('--no-plot', help="Do not write the SVG figures", dest='plot', action='store_false',
                       default=None)
    group.add_argument('--log-level', help="Logging level", dest='log_level',
                       choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'))
    return parser


def _integration_options(parser):
    parser.add_argument('--state', help="Initial state x,y,z,px,py,pz", type=_reals(6))
    parser.add_argument('--dt', help="Time step of the fixed step methods", type=float)
    parser.add_argument('--t-final', help="Duration of the integration", dest='t_final', type=float)
    parser.add_argument('--method', choices=('implicit-midpoint', 'midpoint4', 'rk4', 'adaptive-rk'))
    parser.add_argument('--tolerance', help="Tolerance of the adaptive method", type=float)


def _orbit_options(parser):
    parser.add_argument('--modes', help="Largest Fourier mode", type=int)
    parser.add_argument('--nodes', help="Number of quadrature nodes", type=int)
    parser.add_argument('--no-s1', help="Do not enforce the 3-fold symmetry", dest='s1', action='store_false',
                        default=None)
    parser.add_argument('--s2', help="Impose z(t + T/2) = -z(t)", action='store_true', default=None)
    parser.add_argument('--no-reflection', help="Do not enforce the reflection symmetry", dest='reflection',
                        action='store_false', default=None)
    parser.add_argument('--search-method', dest='search_method', choices=('auto', 'bfgs', 'newton'))
    parser.add_argument('--search-start', help="Initial loop of the search", dest='search_start',
                        choices=('reduced', 'epicycle'))
    parser.add_argument('--el-tol', help="Largest Euler-Lagrange residual and |H| accepted", dest='el_tol',
                        type=float)
    parser.add_argument('--gtol', help="Gradient tolerance", type=float)
    parser.add_argument('--max-iter', dest='max_iter', type=int)
    parser.add_argument('--starts', help="Number of seeds, from --seed on", type=int)
    parser.add_argument('--perturbation', help="Relative size of the perturbation of the initial loops", type=float)


def build_parser():
    """
    :return: argparse.ArgumentParser
    """
    common = _common_parser()
    parser = argparse.ArgumentParser(prog='hkl', description="Kepler problem on the Heisenberg group and on lattices")
    parser.add_argument('--version', action='version', version='%(prog)s {0}'.format(__version__))
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True

    p = subparsers.add_parser('simulate', parents=[common], help="Integrate a trajectory")
    _integration_options(p)

    p = subparsers.add_parser('reduce', parents=[common], help="Project a zero energy trajectory to (v, p_v)")
    _integration_options(p)
    p.add_argument('--J', help="Dilation moment of the generated initial state", dest='J', type=float)
    p.add_argument('--p-theta', help="Angular momentum of the generated initial state", dest='p_theta', type=float)

    p = subparsers.add_parser('find-orbit', parents=[common], help="Search a periodic orbit")
    _orbit_options(p)

    p = subparsers.add_parser('third-law', parents=[common], help="Check T^2/a^4 along the dilations of an orbit")
    _orbit_options(p)
    p.add_argument('--orbit', help="Orbit record written by find-orbit, searched when missing",
                   metavar='FILE')
    p.add_argument('--lambda-list', help="Dilation factors", dest='lambda_list', type=_reals(None))

    p = subparsers.add_parser('oracles', parents=[common], help="Check the closed form solutions")
    _integration_options(p)

    p = subparsers.add_parser('lattice-z', parents=[common], help="Kepler map on the integers")
    p.add_argument('--from', help="Initial state n,p", dest='start', type=_point)
    p.add_argument('--grid', help="Radius of the recurrence census", type=int)
    p.add_argument('--max-steps', dest='max_steps', type=int)
    p.add_argument('--variant', choices=('drift-kick', 'explicit'))

    p = subparsers.add_parser('green2d', parents=[common], help="Potential kernel of the square lattice")
    p.add_argument('--radius', type=int)
    p.add_argument('--method', dest='green_method', choices=('recursion', 'quadrature'))

    p = subparsers.add_parser('lattice-path', parents=[common], help="Minimal discrete action on the square lattice")
    p.add_argument('--from', dest='start', type=_point)
    p.add_argument('--to', dest='end', type=_point)
    p.add_argument('--steps', help="Number of time steps T", type=int)
    p.add_argument('--version', dest='version', choices=('v1', 'v2'))

    p = subparsers.add_parser('helix', parents=[common], help="Exploratory helix fit of a trajectory")
    _integration_options(p)
    return parser


def main(argv=None):
    """
    :param argv: The arguments, ``sys.argv[1:]`` when None
    :type argv: list, optional
    :return: int - The exit code
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = {key: value for key, value in vars(args).items() if key not in ('command', 'config')}
    try:
        file_values = read_config_file(args.config) if args.config else {}
        cfg = resolve(args.command, file_values, flags)
    except (InvalidParameter, TypeError) as e:
        parser.error(str(e))
    if args.command in STATE_COMMANDS and cfg.state is None:
        parser.error('the {0} command requires --state'.format(args.command))

    configure_logging(cfg.log_level)
    write_manifest(cfg, __version__, argv)
    try:
        summary = run(cfg)
    except HKLError as e:
        logger.error('%s failed: %s', cfg.command, e)
        print(json.dumps(e.to_dict(), sort_keys=True))
        return 1
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


if __name__ == '__main__':
    sys.exit(main())
