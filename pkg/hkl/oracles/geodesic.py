r"""
Heisenberg geodesics, the :math:`\alpha = 0` flow.

With :math:`w = x + iy`, :math:`P = P_X + iP_Y` and :math:`c = p_z` constant, :math:`\dot{P} = icP` so that

.. math::
   P(t) = P_0e^{ict}, \qquad w(t) = C + Ae^{ict}, \quad A = \frac{P_0}{ic}, \quad C = w_0 - A

and the height is the horizontal lift :math:`\dot{z} = \frac{1}{2}\mathrm{Im}(\bar{w}\dot{w})`:

.. math::
   z(t) = z_0 + \frac{1}{2}\left(c|A|^2t + \mathrm{Im}\left(\bar{C}A(e^{ict} - 1)\right)\right)

The projection is a circle of radius :math:`|P_0|/|c|` or, for :math:`c = 0`, a line.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .solutions import ExactSolution
from ..core.hamiltonian import PhaseState, horizontal_momenta
from ..errors import InvalidParameter

logger = logging.getLogger(__name__)

LINE_THRESHOLD = 1e-12
"""Below this :math:`|p_z|` the closed form of the straight lines is used"""


def _geodesic_arrays(s0, t):
    t = np.asarray(t, dtype=float)
    big_px, big_py = horizontal_momenta(s0)
    p0, w0, c = complex(big_px, big_py), complex(s0.x, s0.y), s0.pz
    if abs(c) < LINE_THRESHOLD:
        big_p = np.full(t.shape, p0)
        w = w0 + p0 * t
        z = s0.z + .5 * (w0.conjugate() * p0).imag * t
    else:
        rotation = np.exp(1j * c * t)
        a = p0 / (1j * c)
        c0 = w0 - a
        big_p = p0 * rotation
        w = c0 + a * rotation
        z = s0.z + .5 * (c * abs(a) ** 2 * t + (c0.conjugate() * a * (rotation - 1)).imag)
    px = big_p.real + .5 * w.imag * c
    py = big_p.imag - .5 * w.real * c
    return np.stack([w.real, w.imag, z, px, py, np.full(t.shape, c)], axis=-1), big_p, w


def geodesic(s0, t):
    """
    Closed form flow of the kinetic Hamiltonian

    :param hkl.core.hamiltonian.PhaseState s0: Initial state
    :param float t:
    :return: hkl.core.hamiltonian.PhaseState
    """
    return PhaseState.from_array(_geodesic_arrays(s0, t)[0])


def geodesic_path(s0, t):
    """
    :param hkl.core.hamiltonian.PhaseState s0: Initial state
    :param 1D_array t: Times
    :return: numpy.ndarray - The states, of shape (n, 6)
    """
    return _geodesic_arrays(s0, t)[0]


def geodesic_oracle(s0):
    """
    :param hkl.core.hamiltonian.PhaseState s0:
    :return: hkl.oracles.solutions.ExactSolution - With :math:`\\alpha = 0`
    """
    c = s0.pz

    def dy(t):
        _, big_p, w = _geodesic_arrays(s0, t)
        dp = 1j * c * big_p
        dz = .5 * (w.conjugate() * big_p).imag
        return np.array([big_p.real, big_p.imag, dz, dp.real + .5 * big_p.imag * c, dp.imag - .5 * big_p.real * c, 0.])

    return ExactSolution(lambda t: geodesic_path(s0, t), dy, 0., 'geodesic')


@dataclass(frozen=True)
class GeodesicDifferenceReport:
    """
    :param float max_deviation: Sup norm over the grid between the difference curve and the fitted geodesic
    :param float fitted_pz: The :math:`p_z` of the fitted geodesic
    :param str order: ``left`` for :math:`g_1^{-1}g_2`, ``right`` for :math:`g_1g_2^{-1}`
    :param numpy.ndarray t: The grid
    :param numpy.ndarray difference: The difference curve, of shape (n, 3)
    :param numpy.ndarray fitted: The fitted geodesic, of shape (n, 3)
    """
    max_deviation: float
    fitted_pz: float
    order: str
    t: np.ndarray
    difference: np.ndarray
    fitted: np.ndarray


def _difference(q1, q2, order):
    x1, y1, z1 = q1.T
    x2, y2, z2 = q2.T
    if order == 'left':
        return np.column_stack((x2 - x1, y2 - y1, z2 - z1 - .5 * (x1 * y2 - x2 * y1)))
    return np.column_stack((x1 - x2, y1 - y2, z1 - z2 - .5 * (x1 * y2 - x2 * y1)))


def geodesic_difference_demo(s1, s2, t_grid=None, order='left'):
    """
    Fit the geodesic through the start of :math:`c(t) = g_1(t)^{-1}g_2(t)` with the same initial horizontal velocity
    and the best :math:`p_z`, and report how far :math:`c` is from it

    :param hkl.core.hamiltonian.PhaseState s1: Start of the first geodesic
    :param hkl.core.hamiltonian.PhaseState s2: Start of the second geodesic
    :param t_grid: Defaults to 101 points on [0, 1]
    :type t_grid: array_like, optional
    :param order: ``left`` or ``right``
    :type order: str, optional
    :return: GeodesicDifferenceReport
    """
    if order not in ('left', 'right'):
        raise InvalidParameter('order must be left or right, got {0!r}'.format(order))
    t = np.linspace(0., 1., 101) if t_grid is None else np.asarray(t_grid, dtype=float)
    path1, path2 = geodesic_path(s1, t), geodesic_path(s2, t)
    diff = _difference(path1[:, :3], path2[:, :3], order)
    sign = 1. if order == 'left' else -1.
    v1 = horizontal_momenta(PhaseState.from_array(path1[0]))
    v2 = horizontal_momenta(PhaseState.from_array(path2[0]))
    velocity = sign * (v2[0] - v1[0]), sign * (v2[1] - v1[1])
    x0, y0, z0 = diff[0]

    def fitted(pz):
        start = PhaseState.of(x0, y0, z0, velocity[0] + .5 * y0 * pz, velocity[1] - .5 * x0 * pz, pz)
        return geodesic_path(start, t - t[0])[:, :3]

    def deviation(pz):
        return float(np.max(np.abs(fitted(pz) - diff)))

    bound = 10 * (1 + abs(s1.pz) + abs(s2.pz))
    result = scipy.optimize.minimize_scalar(deviation, bounds=(-bound, bound), method='bounded',
                                            options={'xatol': 1e-10})
    candidates = [(deviation(0.), 0.), (deviation(s2.pz - s1.pz), s2.pz - s1.pz), (result.fun, result.x)]
    best, pz = min(candidates)
    logger.info('geodesic difference deviation %.3e with pz = %g', best, pz)
    return GeodesicDifferenceReport(best, float(pz), order, t, diff, fitted(pz))
