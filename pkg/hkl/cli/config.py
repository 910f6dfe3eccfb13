"""
Run configuration of the command line front end.

A :class:`RunConfig` is resolved from three layers, the later overriding the earlier: the dataclass defaults, a flat
JSON object read from ``--config FILE`` and the flags given on the command line.
"""

import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields, replace

from ..errors import InvalidParameter

COMMANDS = ('simulate', 'reduce', 'find-orbit', 'third-law', 'oracles', 'lattice-z', 'green2d', 'lattice-path',
            'helix')

MANIFEST = 'manifest.json'


@dataclass(frozen=True)
class RunConfig:
    """
    Every parameter of every command, the commands read the ones they need

    :param str command: One of :data:`COMMANDS`
    :param str out: The output directory
    :param alpha: The coupling, 2/pi for the continuous problem and 0 for the lattice paths when None
    :type alpha: float or None
    :param state: ``(x, y, z, px, py, pz)``
    :type state: tuple or None
    """
    command: str
    out: str = '.'
    alpha: object = None
    state: object = None
    dt: float = 1e-3
    t_final: float = 10.
    method: str = 'implicit-midpoint'
    tolerance: float = 1e-10
    J: float = 3.
    p_theta: float = 1.
    lambda_list: tuple = (.5, 1., 2., 4.)
    modes: int = 120
    gtol: float = 1e-8
    max_iter: int = 5000
    nodes: int = 512
    s1: bool = True
    s2: bool = False
    reflection: bool = True
    search_method: str = 'auto'
    search_start: str = 'reduced'
    el_tol: float = 1e-4
    orbit: object = None
    seed: int = 0
    starts: int = 1
    perturbation: float = 0.
    grid: int = 20
    max_steps: int = 10 ** 6
    variant: str = 'drift-kick'
    radius: int = 10
    green_method: str = 'recursion'
    start: tuple = (0, 0)
    end: tuple = (2, 1)
    steps: int = 3
    version: str = 'v2'
    workers: int = 1
    plot: bool = True
    progress: bool = False
    log_level: str = 'WARNING'

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidParameter('unknown command {0!r}, expected one of {1}'.format(self.command, COMMANDS))
        if self.state is not None:
            state = tuple(float(v) for v in self.state)
            if len(state) != 6 or not all(math.isfinite(v) for v in state):
                raise InvalidParameter('a state has 6 finite coordinates, got {0!r}'.format(self.state))
            object.__setattr__(self, 'state', state)
        for name in ('start', 'end'):
            point = tuple(int(v) for v in getattr(self, name))
            if len(point) != 2:
                raise InvalidParameter('{0} is a lattice point (m, n), got {1!r}'.format(name, point))
            object.__setattr__(self, name, point)
        object.__setattr__(self, 'lambda_list', tuple(float(v) for v in self.lambda_list))
        if self.workers < 1:
            raise InvalidParameter('workers must be at least 1, got {0!r}'.format(self.workers))


FIELDS = tuple(f.name for f in fields(RunConfig) if f.name != 'command')


def read_config_file(path):
    """
    :param str path: A JSON file holding a flat object whose keys are :class:`RunConfig` fields, or a manifest
    :return: dict
    """
    try:
        with open(path) as file:
            values = json.load(file)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidParameter('cannot read the configuration {0}: {1}'.format(path, e)) from e
    if not isinstance(values, dict):
        raise InvalidParameter('the configuration {0} must hold a JSON object'.format(path))
    if 'hkl_version' in values and isinstance(values.get('config'), dict):
        values = {key: value for key, value in values['config'].items() if key != 'command'}
    unknown = sorted(set(values) - set(FIELDS))
    if unknown:
        raise InvalidParameter('unknown configuration keys {0}'.format(unknown))
    return values


def resolve(command, file_values=None, flag_values=None):
    """
    :param str command:
    :param file_values: Values read from the configuration file
    :type file_values: dict, optional
    :param flag_values: Values given on the command line, the None values are ignored
    :type flag_values: dict, optional
    :return: RunConfig
    """
    cfg = RunConfig(command)
    for values in (file_values or {}, flag_values or {}):
        updates = {key: value for key, value in values.items() if key in FIELDS and value is not None}
        cfg = replace(cfg, **updates)
    return cfg


def write_manifest(cfg, version, argv=None):
    """
    Write the resolved configuration in the output directory

    :param RunConfig cfg:
    :param str version: The package version
    :param argv: The command line, ``sys.argv[1:]`` when None
    :type argv: list, optional
    :return: str - The path of the manifest
    """
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, MANIFEST)
    config = asdict(cfg)
    manifest = {'hkl_version': version, 'command': cfg.command,
                'argv': list(sys.argv[1:] if argv is None else argv), 'config': config}
    with open(path, 'w') as file:
        json.dump(manifest, file, indent=2, sort_keys=True)
        file.write('\n')
    return path
