r"""
Cylindrical and reduced coordinates.

In cylindrical coordinates :math:`(r, \theta, z)` with :math:`p_r = (xp_x + yp_y)/r` and :math:`p_\theta = xp_y - yp_x`,

.. math::
   H = \frac{1}{2}p_r^2 + \frac{1}{2}\left(\frac{p_\theta}{r} + \frac{1}{2}rp_z\right)^2 - \alpha\rho^{-2}

The reduced coordinate :math:`v = z / r^2` is a point transformation, its conjugate momenta are obtained from
:math:`p_{old} = (\partial Q / \partial q)^T P`:

.. math::
   p_v = r^2 p_z, \qquad P_r = p_r + \frac{2zp_z}{r}, \qquad J = rP_r

and :math:`\tilde{H} = K / U` does not depend on :math:`r`:

.. math::
   \tilde{H} = \frac{\left((J - 2vp_v)^2 + (p_\theta + \frac{1}{2}p_v)^2\right)\sqrt{1 + v^2/16}}{2\alpha}

On :math:`\{\tilde{H} = 1\}` with :math:`J, p_\theta` frozen, :math:`(v, p_v)` lies on an algebraic curve, which is
a quadratic equation in :math:`p_v` for each :math:`v`.
"""

import math
from dataclasses import dataclass

import numpy as np

from .hamiltonian import PhaseState, dilate
from ..errors import AxisSingular, InvalidParameter


@dataclass(frozen=True)
class CylState:
    """
    Phase state in cylindrical coordinates, ``theta`` is not reduced modulo :math:`2\\pi`

    :param float r: Positive
    :param float theta:
    :param float z:
    :param float p_r:
    :param float p_theta:
    :param float p_z:
    """
    r: float
    theta: float
    z: float
    p_r: float
    p_theta: float
    p_z: float

    def __post_init__(self):
        if not self.r > 0:
            raise AxisSingular('cylindrical coordinates need r > 0, got {0!r}'.format(self.r))


@dataclass(frozen=True)
class ReducedState:
    """
    Scale invariant coordinates of the zero energy dynamics

    :param float v: :math:`z / r^2`
    :param float p_v: :math:`r^2 p_z`
    :param float J: The dilation moment
    :param float p_theta: The angular momentum
    """
    v: float
    p_v: float
    J: float
    p_theta: float


def to_cylindrical(s):
    """
    :param hkl.core.hamiltonian.PhaseState s:
    :return: CylState
    """
    r = math.hypot(s.x, s.y)
    if r == 0:
        raise AxisSingular('cylindrical coordinates are singular on the z-axis')
    return CylState(r, math.atan2(s.y, s.x), s.z, (s.x * s.px + s.y * s.py) / r, s.x * s.py - s.y * s.px, s.pz)


def from_cylindrical(c):
    """
    :param CylState c:
    :return: hkl.core.hamiltonian.PhaseState
    """
    cos, sin = math.cos(c.theta), math.sin(c.theta)
    return PhaseState.of(c.r * cos, c.r * sin, c.z,
                         c.p_r * cos - c.p_theta * sin / c.r,
                         c.p_r * sin + c.p_theta * cos / c.r,
                         c.p_z)


def cylindrical_hamiltonian(c, params):
    """
    :param CylState c:
    :param hkl.core.hamiltonian.Params params:
    :return: float - The Hamiltonian evaluated in its cylindrical form
    """
    tangential = c.p_theta / c.r + .5 * c.r * c.p_z
    rho2 = math.sqrt(c.r ** 4 + c.z * c.z / 16)
    return .5 * c.p_r * c.p_r + .5 * tangential * tangential - params.alpha / rho2


def to_reduced(c):
    """
    :param CylState c:
    :return: ReducedState
    """
    r2 = c.r * c.r
    return ReducedState(c.z / r2, r2 * c.p_z, c.r * c.p_r + 2 * c.z * c.p_z, c.p_theta)


def htilde_reduced(rs, params):
    """
    :param ReducedState rs:
    :param hkl.core.hamiltonian.Params params:
    :return: float - :math:`\\tilde{H}` written in reduced coordinates
    """
    radial = rs.J - 2 * rs.v * rs.p_v
    tangential = rs.p_theta + .5 * rs.p_v
    return (radial * radial + tangential * tangential) * math.sqrt(1 + rs.v * rs.v / 16) / (2 * params.alpha)


def _curve_coefficients(v, J, p_theta, alpha):
    a = 4 * v * v + .25
    b = p_theta - 4 * v * J
    c = J * J + p_theta * p_theta - 2 * alpha / np.sqrt(1 + v * v / 16)
    return a, b, c


def reduced_curve(J, p_theta, v, params):
    r"""
    Sample the curve :math:`\{\tilde{H} = 1\}` of the :math:`(v, p_v)` plane

    :param float J:
    :param float p_theta:
    :param array_like v: The abscissae
    :param hkl.core.hamiltonian.Params params:
    :return: tuple - ``(lower, upper)`` branches of :math:`p_v`, NaN where the curve has no point
    """
    v = np.asarray(v, dtype=float)
    a, b, c = _curve_coefficients(v, J, p_theta, params.alpha)
    disc = b * b - 4 * a * c
    root = np.sqrt(np.where(disc >= 0, disc, np.nan))
    return (-b - root) / (2 * a), (-b + root) / (2 * a)


def state_from_reduced(J, p_theta, params, scale=1.):
    r"""
    Build a zero energy state with prescribed first integrals

    The state has :math:`r = 1` and :math:`\theta = 0` before the dilation by ``scale``, which leaves
    :math:`J`, :math:`p_\theta` and :math:`H = 0` unchanged. The height :math:`v = -J / (4p_\theta)` makes the
    minimum over :math:`p_v` of the kinetic quadratic vanish, so the curve always has a point there.

    :param float J:
    :param float p_theta:
    :param hkl.core.hamiltonian.Params params:
    :param scale: The dilation factor applied to the state
    :type scale: float, optional
    :return: hkl.core.hamiltonian.PhaseState
    """
    if p_theta != 0:
        v = -J / (4 * p_theta)
    elif J == 0:
        v = 0.
    else:
        for v in np.geomspace(1., 1e8, 161):
            a, b, c = _curve_coefficients(v, J, p_theta, params.alpha)
            if b * b - 4 * a * c >= 0:
                break
        else:
            raise InvalidParameter('no zero energy state with J = {0!r} and p_theta = 0'.format(J))
    a, b, c = _curve_coefficients(v, J, p_theta, params.alpha)
    p_v = (-b + math.sqrt(max(b * b - 4 * a * c, 0.))) / (2 * a)
    s = from_cylindrical(CylState(1., 0., v, J - 2 * v * p_v, p_theta, p_v))
    return dilate(s, scale) if scale != 1 else s
