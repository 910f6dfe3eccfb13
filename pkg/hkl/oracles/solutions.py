r"""
Closed form solutions of the Kepler flow, used as ground truth.

An :class:`ExactSolution` carries the solution and its time derivative computed independently, by differentiating
the closed form, so that :func:`residual` measures how well the family satisfies Hamilton's equations.
"""

import math

import numpy as np

from ..core.hamiltonian import ALPHA, Params, PhaseState, _field
from ..errors import InvalidParameter, NonPositiveTime, ZeroK


class ExactSolution:
    r"""
    Exact solution of the Kepler flow

    :param func y: Solution, maps a time to the state ``(x, y, z, px, py, pz)``
    :param func dy: Its time derivative
    :param float alpha: The coupling it solves the equations for, 0 for the geodesic flow
    :param str name: A label
    :param t_min: Lower bound of the domain of definition, excluded
    :type t_min: float, optional
    """

    def __init__(self, y, dy, alpha, name, t_min=-np.inf):
        self.y = y
        self.dy = dy
        self.alpha = alpha
        self.name = name
        self.t_min = t_min

    def state(self, t):
        """
        :param float t:
        :return: hkl.core.hamiltonian.PhaseState
        """
        return PhaseState.from_array(self.y(t))


def residual(solution, t_grid, params=None):
    """
    Sup norm of :math:`\\dot{y} - f(y)` over a time grid

    :param ExactSolution solution:
    :param array_like t_grid:
    :param params: Overrides the coupling of the solution
    :type params: hkl.core.hamiltonian.Params, optional
    :return: float
    """
    alpha = solution.alpha if params is None else params.alpha
    return max(float(np.max(np.abs(solution.dy(t) - np.array(_field(solution.y(t), alpha))))) for t in t_grid)


def _line_constants(c1, c2, alpha, calibrate):
    norm = math.hypot(c1, c2)
    if norm == 0:
        raise InvalidParameter('(c1, c2) must not vanish')
    if calibrate:
        scale = (8 * alpha) ** .25 / norm
        c1, c2 = c1 * scale, c2 * scale
    return c1, c2


def line_oracle(c1, c2, params=Params(), calibrate=True):
    r"""
    The radial solutions :math:`(c_1t^{1/2}, c_2t^{1/2}, 0, \frac{1}{2}c_1t^{-1/2}, \frac{1}{2}c_2t^{-1/2}, 0)`.
    They solve the equations with :math:`H = 0` only when :math:`|c| = (8\alpha)^{1/4}`, the direction of
    :math:`(c_1, c_2)` is kept and its norm is set to that value unless ``calibrate`` is False.

    :param float c1:
    :param float c2:
    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :param calibrate: Whether to rescale :math:`(c_1, c_2)`
    :type calibrate: bool, optional
    :return: ExactSolution - Defined for t > 0
    """
    c1, c2 = _line_constants(c1, c2, params.alpha, calibrate)

    def y(t):
        s = math.sqrt(t)
        return np.array([c1 * s, c2 * s, 0., .5 * c1 / s, .5 * c2 / s, 0.])

    def dy(t):
        s = math.sqrt(t)
        return np.array([.5 * c1 / s, .5 * c2 / s, 0., -.25 * c1 / (s * t), -.25 * c2 / (s * t), 0.])

    return ExactSolution(y, dy, params.alpha, 'line', t_min=0.)


def line_solution(c1, c2, t, params=Params(), calibrate=True):
    """
    :param float c1:
    :param float c2:
    :param float t: Positive
    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :param calibrate: See :func:`line_oracle`
    :type calibrate: bool, optional
    :return: hkl.core.hamiltonian.PhaseState
    """
    if not t > 0:
        raise NonPositiveTime('the line solutions are defined for t > 0, got {0!r}'.format(t))
    return line_oracle(c1, c2, params, calibrate).state(t)


def stationary_oracle(k, params=Params()):
    r"""
    The solutions :math:`(0, 0, k, 0, 0, p_z^0 - 4\alpha\,\mathrm{sgn}(k)t/k^2)`, constant in configuration space,
    with :math:`H = -4\alpha/|k|`

    :param float k: Non zero height
    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :return: ExactSolution
    """
    if k == 0 or not math.isfinite(k):
        raise ZeroK('the stationary solutions need k != 0, got {0!r}'.format(k))
    slope = -4 * params.alpha * math.copysign(1., k) / (k * k)
    return ExactSolution(lambda t: np.array([0., 0., k, 0., 0., slope * t]),
                         lambda t: np.array([0., 0., 0., 0., 0., slope]),
                         params.alpha, 'stationary')


def stationary_solution(k, t, params=Params()):
    """
    :param float k: Non zero height
    :param float t:
    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :return: hkl.core.hamiltonian.PhaseState
    """
    return stationary_oracle(k, params).state(t)


def stationary_energy(k, alpha=ALPHA):
    """
    :return: float - :math:`-4\\alpha/|k|`
    """
    if k == 0:
        raise ZeroK('the stationary solutions need k != 0')
    return -4 * alpha / abs(k)
