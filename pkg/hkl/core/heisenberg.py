r"""
Geometry of the Heisenberg group :math:`\mathbb{H} \cong \mathbb{R}^3`.

The group law is

.. math::
   (x_1, y_1, z_1)\cdot(x_2, y_2, z_2) = \left(x_1 + x_2, y_1 + y_2, z_1 + z_2 + \frac{1}{2}(x_1y_2 - x_2y_1)\right)

the horizontal frame is :math:`X = \partial_x - \frac{y}{2}\partial_z`, :math:`Y = \partial_y + \frac{x}{2}\partial_z`
and the Folland gauge is :math:`\rho = \left((x^2 + y^2)^2 + z^2/16\right)^{1/4}`.
"""

import math
from dataclasses import dataclass

from ..errors import InvalidParameter, NonPositiveLambda


@dataclass(frozen=True)
class ConfigPoint:
    """
    A point of the Heisenberg group

    :param float x:
    :param float y:
    :param float z:
    """
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise InvalidParameter('non finite configuration {0!r}'.format((self.x, self.y, self.z)))

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __mul__(self, other):
        return group_mul(self, other)


ORIGIN = ConfigPoint(0., 0., 0.)
"""The identity element of the group, where the sun sits"""


def gauge(x, y, z):
    r"""
    Folland gauge on raw coordinates, works on scalars or arrays

    :return: :math:`\left((x^2 + y^2)^2 + z^2/16\right)^{1/4}`
    """
    r2 = x * x + y * y
    return (r2 * r2 + z * z / 16) ** .25


def rho(q):
    """
    Folland gauge of a configuration, homogeneous of degree 1 under the dilations

    :param ConfigPoint q:
    :return: float - The gauge, 0 only at the origin
    """
    return gauge(q.x, q.y, q.z)


def group_mul(a, b):
    """
    Heisenberg product ``a . b``

    :param ConfigPoint a:
    :param ConfigPoint b:
    :return: ConfigPoint
    """
    return ConfigPoint(a.x + b.x, a.y + b.y, a.z + b.z + .5 * (a.x * b.y - b.x * a.y))


def group_inv(a):
    """
    Heisenberg inverse, ``group_mul(a, group_inv(a))`` is the origin

    :param ConfigPoint a:
    :return: ConfigPoint
    """
    return ConfigPoint(-a.x, -a.y, -a.z)


def dilate_config(q, lam):
    r"""
    Group dilation :math:`\delta_\lambda(x, y, z) = (\lambda x, \lambda y, \lambda^2 z)`

    :param ConfigPoint q:
    :param float lam: The dilation factor, positive
    :return: ConfigPoint
    """
    if not lam > 0:
        raise NonPositiveLambda('dilation factor must be positive, got {0!r}'.format(lam))
    return ConfigPoint(lam * q.x, lam * q.y, lam * lam * q.z)
