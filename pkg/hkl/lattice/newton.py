r"""
Experimental Newton difference equations on :math:`\mathbb{Z}^2`.

The momentum is a function on the four unit directions, :math:`p = (p_{up}, p_{down}, p_{right}, p_{left})`, and
one step reads

.. math::
   \ell' = \ell + M(p), \qquad p'(e) = p(e) - dV(\ell)(e), \qquad dV(\ell)(e) = V(\ell + e) - V(\ell)

where the mass map :math:`M` rounds the projection :math:`\Pi(p) = \frac{1}{2}(p_{up} + p_{down},
p_{right} + p_{left})` to the nearest lattice point. The map is a toy: it is not known to define a sensible
dynamics.
"""

import math

import numpy as np

from ..errors import InvalidParameter

DIRECTIONS = ((0, 1), (0, -1), (1, 0), (-1, 0))
"""The unit directions up, down, right and left, in the order of the momentum components"""


def round_half_toward_zero(v):
    """
    Nearest integer, ties broken toward zero

    :param float v:
    :return: int
    """
    return int(math.copysign(math.ceil(abs(v) - .5), v)) if v else 0


def projection(p):
    """
    :param p: The four components (up, down, right, left)
    :type p: numpy.ndarray or tuple
    :return: tuple - :math:`\\Pi(p)`
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (4,):
        raise InvalidParameter('the lattice momentum has 4 components, got shape {0}'.format(p.shape))
    return (p[0] + p[1]) / 2, (p[2] + p[3]) / 2


def dV(V, point):
    """
    :param func V: Maps ``(m, n)`` to the potential energy
    :param tuple point: :math:`\\ell`
    :return: numpy.ndarray - :math:`dV(\\ell)(e)` for the four directions
    """
    m, n = point
    centre = V(m, n)
    return np.array([V(m + dm, n + dn) - centre for dm, dn in DIRECTIONS])


def lattice_potential(table, alpha):
    """
    :param hkl.lattice.green.GreenTable table: The kernel :math:`a`
    :param float alpha:
    :return: func - :math:`V = \\alpha a/4`
    """
    def V(m, n):
        return alpha * table(m, n) / 4

    return V


def newton_difference_step(point, p, V, rounding=round_half_toward_zero):
    """
    One step of the discrete Newton law: the point moves by the rounded projection of the momentum, then the
    momentum is kicked by the potential differences towards the four neighbors.

    The first component of :math:`\\Pi(p)` averages ``up`` and ``down`` and moves the first coordinate :math:`m`, the
    second averages ``right`` and ``left`` and moves :math:`n`:
    :math:`\\Pi(p) = ((p_{up} + p_{down})/2, (p_{right} + p_{left})/2)`. The pairing does not follow
    :data:`DIRECTIONS`, where ``up`` and ``down`` point along :math:`n`; it is kept as the documented convention of
    the experimental dynamics and :func:`projection` is the single place that defines it. Opposite components cancel,
    so the antisymmetric :math:`dV` of a potential linear along an axis projects to zero.

    :param tuple point: :math:`\\ell`
    :param p: The four momentum components (up, down, right, left)
    :type p: numpy.ndarray or tuple
    :param func V: Maps ``(m, n)`` to the potential energy, defined on the neighbors of ``point``
    :param rounding: The rounding of each component of the projection
    :type rounding: func, optional
    :return: tuple - ``(point', p')``
    """
    pi_m, pi_n = projection(p)
    moved = (point[0] + rounding(pi_m), point[1] + rounding(pi_n))
    return moved, np.asarray(p, dtype=float) - dV(V, point)
