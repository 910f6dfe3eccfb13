"""
Orbit records, JSON text with the period, the coefficients and the certificate.
"""

import json

import numpy as np

from .loop import LoopPath
from .search import Certificate
from ..errors import InvalidParameter

FORMAT = 'hkl-orbit'
VERSION = 1


def orbit_to_dict(loop, params=None, symmetry=None):
    """
    :param hkl.orbits.loop.LoopPath loop:
    :param params: Recorded when given
    :type params: hkl.core.hamiltonian.Params, optional
    :param symmetry: Recorded when given
    :type symmetry: hkl.orbits.loop.SymmetryClass, optional
    :return: dict
    """
    record = {'format': FORMAT, 'version': VERSION, 'period': loop.period, 'z0': loop.z0,
              'modes': loop.k.tolist(), 're': loop.c.real.tolist(), 'im': loop.c.imag.tolist()}
    if params is not None:
        record['alpha'] = params.alpha
    if symmetry is not None:
        record['symmetry'] = symmetry.to_dict()
    if loop.certificate is not None:
        record['certificate'] = loop.certificate.to_dict()
    return record


def orbit_from_dict(record):
    """
    :param dict record:
    :return: hkl.orbits.loop.LoopPath
    """
    if record.get('format') != FORMAT:
        raise InvalidParameter('not an orbit record')
    try:
        c = np.array(record['re']) + 1j * np.array(record['im'])
        loop = LoopPath(record['period'], np.array(record['modes']), c, record.get('z0', 0.))
    except KeyError as e:
        raise InvalidParameter('orbit record without {0}'.format(e)) from e
    if 'certificate' in record:
        loop = loop.with_certificate(Certificate(**record['certificate']))
    return loop


def save_orbit(loop, path, params=None, symmetry=None):
    """
    :param hkl.orbits.loop.LoopPath loop:
    :param str path:
    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :param symmetry:
    :type symmetry: hkl.orbits.loop.SymmetryClass, optional
    """
    with open(path, 'w') as file:
        json.dump(orbit_to_dict(loop, params, symmetry), file, indent=2)
        file.write('\n')


def load_orbit(path):
    """
    :param str path:
    :return: hkl.orbits.loop.LoopPath
    """
    with open(path) as file:
        try:
            record = json.load(file)
        except json.JSONDecodeError as e:
            raise InvalidParameter('{0} is not a JSON file: {1}'.format(path, e)) from e
    return orbit_from_dict(record)
