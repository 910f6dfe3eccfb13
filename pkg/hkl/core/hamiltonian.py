r"""
The Kepler Hamiltonian on :math:`T^*\mathbb{H}`.

In canonical coordinates :math:`(x, y, z, p_x, p_y, p_z)`, with the horizontal momenta
:math:`P_X = p_x - \frac{1}{2}yp_z` and :math:`P_Y = p_y + \frac{1}{2}xp_z`,

.. math::
   H = \frac{1}{2}\left(P_X^2 + P_Y^2\right) - \frac{\alpha}{\rho^2}

The functions with a leading underscore work on raw 6-sequences and are the ones fed to the integrators,
the other ones take :class:`PhaseState` records.
"""

import math
from dataclasses import dataclass

import numpy as np

from .heisenberg import ConfigPoint, ORIGIN, gauge, group_inv, group_mul
from ..errors import InvalidParameter, NonPositiveLambda, SingularOrigin

ALPHA = 2 / np.pi
"""The Kepler coupling making :math:`\\alpha / \\rho^2` the fundamental solution of the sub-Laplacian"""


@dataclass(frozen=True)
class Params:
    """
    Physical parameters

    :param float alpha: The Kepler coupling, positive
    """
    alpha: float = ALPHA

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise InvalidParameter('alpha must be positive, got {0!r}'.format(self.alpha))


@dataclass(frozen=True)
class PhaseState:
    """
    A point of the phase space

    :param ConfigPoint q: The configuration
    :param float px: Momentum dual to x
    :param float py: Momentum dual to y
    :param float pz: Momentum dual to z
    """
    q: ConfigPoint
    px: float
    py: float
    pz: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.px, self.py, self.pz)):
            raise InvalidParameter('non finite momenta {0!r}'.format((self.px, self.py, self.pz)))

    @classmethod
    def of(cls, x, y, z, px, py, pz):
        return cls(ConfigPoint(float(x), float(y), float(z)), float(px), float(py), float(pz))

    @classmethod
    def from_array(cls, a):
        """
        :param array_like a: The coordinates ``(x, y, z, px, py, pz)``
        :return: PhaseState
        """
        if len(a) != 6:
            raise InvalidParameter('a phase state has 6 coordinates, got {0}'.format(len(a)))
        return cls.of(*a)

    def as_array(self):
        """
        :return: numpy.ndarray - The coordinates ``(x, y, z, px, py, pz)``
        """
        return np.array([self.q.x, self.q.y, self.q.z, self.px, self.py, self.pz])

    def as_tuple(self):
        return self.q.x, self.q.y, self.q.z, self.px, self.py, self.pz

    @property
    def x(self):
        return self.q.x

    @property
    def y(self):
        return self.q.y

    @property
    def z(self):
        return self.q.z


def _momenta(y):
    x, yy, _, px, py, pz = y
    return px - .5 * yy * pz, py + .5 * x * pz


def _q(x, yy, z):
    r2 = x * x + yy * yy
    q = r2 * r2 + z * z / 16
    if q == 0:
        raise SingularOrigin('the potential is singular at the origin')
    return r2, q


def _hamiltonian(y, alpha):
    x, yy, z = y[0], y[1], y[2]
    big_px, big_py = _momenta(y)
    _, q = _q(x, yy, z)
    return .5 * (big_px * big_px + big_py * big_py) - alpha / math.sqrt(q)


def _field(y, alpha):
    """
    Hamilton's equations on a raw 6-sequence

    :param array_like y: The state
    :param float alpha: The Kepler coupling, 0 gives the geodesic flow, defined at the origin too
    :return: tuple - The time derivative of the state
    """
    x, yy, z, _, _, pz = y
    big_px, big_py = _momenta(y)
    if alpha == 0:
        r2, q6 = 0., 0.
    else:
        r2, q = _q(x, yy, z)
        q6 = q ** -1.5
    return (big_px,
            big_py,
            .5 * (x * big_py - yy * big_px),
            -.5 * pz * big_py - 2 * alpha * x * r2 * q6,
            .5 * pz * big_px - 2 * alpha * yy * r2 * q6,
            -alpha * z * q6 / 16)


def _gradient(y, alpha):
    dx, dy, dz, dpx, dpy, dpz = _field(y, alpha)
    return np.array([-dpx, -dpy, -dpz, dx, dy, dz])


def _hessian(y, alpha):
    r"""
    Exact Hessian of H on a raw 6-sequence

    The kinetic part is :math:`\nabla P_X \nabla P_X^T + \nabla P_Y \nabla P_Y^T + P_X \nabla^2 P_X + P_Y \nabla^2 P_Y`
    and the potential part, with :math:`Q = \rho^4`, is
    :math:`\partial_{ab} U = \alpha\left(\frac{3}{4}Q^{-5/2}Q_aQ_b - \frac{1}{2}Q^{-3/2}Q_{ab}\right)`.

    :return: numpy.ndarray - Of shape (6, 6)
    """
    x, yy, z, _, _, pz = y
    big_px, big_py = _momenta(y)
    r2, q = _q(x, yy, z)
    grad_x = np.array([0., -.5 * pz, 0., 1., 0., -.5 * yy])
    grad_y = np.array([.5 * pz, 0., 0., 0., 1., .5 * x])
    hess = np.outer(grad_x, grad_x) + np.outer(grad_y, grad_y)
    hess[1, 5] -= .5 * big_px
    hess[5, 1] -= .5 * big_px
    hess[0, 5] += .5 * big_py
    hess[5, 0] += .5 * big_py

    dq = np.array([4 * x * r2, 4 * yy * r2, z / 8])
    d2q = np.array([[12 * x * x + 4 * yy * yy, 8 * x * yy, 0.],
                    [8 * x * yy, 4 * x * x + 12 * yy * yy, 0.],
                    [0., 0., 1 / 8]])
    hess[:3, :3] -= alpha * (.75 * q ** -2.5 * np.outer(dq, dq) - .5 * q ** -1.5 * d2q)
    return hess


def _jacobian(y, alpha):
    r"""
    Jacobian of the vector field, :math:`\Omega \nabla^2 H`

    :return: numpy.ndarray - Of shape (6, 6)
    """
    hess = _hessian(y, alpha)
    return np.vstack((hess[3:], -hess[:3]))


def kepler_field(params):
    """
    The right hand side in the ``f(y, t)`` form used by the integrators

    :param Params params:
    :return: func
    """
    alpha = params.alpha
    return lambda y, t=0.: np.array(_field(y, alpha))


def kepler_jacobian(params):
    """
    The Jacobian of :func:`kepler_field` in the ``jac(y, t)`` form

    :param Params params:
    :return: func
    """
    alpha = params.alpha
    return lambda y, t=0.: _jacobian(y, alpha)


def horizontal_momenta(s):
    """
    :param PhaseState s:
    :return: tuple - :math:`(P_X, P_Y)`
    """
    return _momenta(s.as_tuple())


def kinetic(s):
    """
    :param PhaseState s:
    :return: float - :math:`\\frac{1}{2}(P_X^2 + P_Y^2)`
    """
    big_px, big_py = horizontal_momenta(s)
    return .5 * (big_px * big_px + big_py * big_py)


def potential(q, params, sun=ORIGIN):
    r"""
    The potential :math:`U = \alpha / \rho^2`, strictly positive

    :param ConfigPoint q:
    :param Params params:
    :param sun: Where the attracting center sits, the potential is evaluated at :math:`sun^{-1} q`
    :type sun: ConfigPoint, optional
    :return: float
    """
    if sun is not ORIGIN:
        q = group_mul(group_inv(sun), q)
    r = gauge(q.x, q.y, q.z)
    if r == 0:
        raise SingularOrigin('the potential is singular at the origin')
    return params.alpha / (r * r)


def hamiltonian(s, params, sun=ORIGIN):
    """
    :param PhaseState s:
    :param Params params:
    :param sun: Where the attracting center sits
    :type sun: ConfigPoint, optional
    :return: float - :math:`H = K - U`
    """
    return kinetic(s) - potential(s.q, params, sun)


def vector_field(s, params):
    """
    Hamilton's equations, from the exact partial derivatives of H

    :param PhaseState s:
    :param Params params:
    :return: numpy.ndarray - :math:`(\\dot{x}, \\dot{y}, \\dot{z}, \\dot{p}_x, \\dot{p}_y, \\dot{p}_z)`
    """
    return np.array(_field(s.as_tuple(), params.alpha))


def hamiltonian_gradient(s, params):
    """
    :param PhaseState s:
    :param Params params:
    :return: numpy.ndarray - The gradient of H, of shape (6,)
    """
    return _gradient(s.as_tuple(), params.alpha)


def hamiltonian_hessian(s, params):
    """
    :param PhaseState s:
    :param Params params:
    :return: numpy.ndarray - The Hessian of H, of shape (6, 6)
    """
    return _hessian(s.as_tuple(), params.alpha)


def jacobian(s, params):
    """
    :param PhaseState s:
    :param Params params:
    :return: numpy.ndarray - The Jacobian of :func:`vector_field`, of shape (6, 6)
    """
    return _jacobian(s.as_tuple(), params.alpha)


def dilate(s, lam):
    r"""
    Phase space dilation
    :math:`(x, y, z, p_x, p_y, p_z) \mapsto (\lambda x, \lambda y, \lambda^2 z, p_x / \lambda, p_y / \lambda, p_z / \lambda^2)`

    :param PhaseState s:
    :param float lam: The dilation factor, positive
    :return: PhaseState
    """
    if not lam > 0:
        raise NonPositiveLambda('dilation factor must be positive, got {0!r}'.format(lam))
    lam2 = lam * lam
    return PhaseState.of(lam * s.x, lam * s.y, lam2 * s.z, s.px / lam, s.py / lam, s.pz / lam2)


def dilation_moment(s):
    """
    The generator of the dilations, satisfies :math:`\\dot{J} = 2H`

    :param PhaseState s:
    :return: float - :math:`J = xp_x + yp_y + 2zp_z`
    """
    return s.x * s.px + s.y * s.py + 2 * s.z * s.pz


def angular_momentum(s):
    """
    :param PhaseState s:
    :return: float - :math:`p_\\theta = xp_y - yp_x`
    """
    return s.x * s.py - s.y * s.px


def htilde(s, params):
    """
    The scale invariant Hamiltonian :math:`\\tilde{H} = K / U`, equal to 1 on the zero energy surface

    :param PhaseState s:
    :param Params params:
    :return: float
    """
    return kinetic(s) / potential(s.q, params)


def rotate(s, phi):
    """
    Rotation of angle ``phi`` about the z-axis, acting on positions and momenta

    :param PhaseState s:
    :param float phi:
    :return: PhaseState
    """
    c, d = math.cos(phi), math.sin(phi)
    return PhaseState.of(c * s.x - d * s.y, d * s.x + c * s.y, s.z, c * s.px - d * s.py, d * s.px + c * s.py, s.pz)


def left_translate(s, g):
    """
    Left translation of the configuration by ``g`` with the cotangent lift of the momenta, which keeps
    :math:`(P_X, P_Y)` unchanged

    :param PhaseState s:
    :param ConfigPoint g:
    :return: PhaseState
    """
    q = group_mul(g, s.q)
    return PhaseState(q, s.px + .5 * g.y * s.pz, s.py - .5 * g.x * s.pz, s.pz)
