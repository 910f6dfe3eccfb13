r"""
Solutions on the invariant submanifold :math:`N = \{z = p_z = p_\theta = 0\}`.

There :math:`H = \frac{1}{2}p_r^2 - \alpha/r^2`, so :math:`u = r^2` satisfies :math:`\ddot{u} = 4H` and

.. math::
   r^2 - 2ht^2 = -\frac{\alpha}{h} \quad (h \neq 0), \qquad r^2 = \sqrt{8\alpha}\,t \quad (h = 0)

with the time origin at the turning point (or at the collision for :math:`h = 0`). The curve
:math:`(t, r)` is an ellipse, a hyperbola or a parabola.
"""

import math
from dataclasses import dataclass

import numpy as np

from .solutions import ExactSolution
from ..core.hamiltonian import ALPHA, PhaseState
from ..errors import DomainExceeded, InvalidParameter


@dataclass(frozen=True)
class ConicSpec:
    """
    :param float h: The energy on N
    :param float alpha: The Kepler coupling, positive
    """
    h: float
    alpha: float = ALPHA

    def __post_init__(self):
        if not math.isfinite(self.h):
            raise InvalidParameter('h must be finite, got {0!r}'.format(self.h))
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise InvalidParameter('alpha must be positive, got {0!r}'.format(self.alpha))


def conic_kind(spec):
    """
    :param ConicSpec spec:
    :return: str - ``ellipse`` if h < 0, ``parabola`` if h = 0, ``hyperbola`` if h > 0
    """
    if spec.h < 0:
        return 'ellipse'
    if spec.h == 0:
        return 'parabola'
    return 'hyperbola'


def _r2(spec, t):
    if spec.h == 0:
        return math.sqrt(8 * spec.alpha) * t
    return 2 * spec.h * t * t - spec.alpha / spec.h


def conic_on_N(spec, t):
    """
    :param ConicSpec spec:
    :param float t:
    :return: float - r(t)
    """
    r2 = _r2(spec, t)
    if not r2 > 0:
        raise DomainExceeded('t = {0!r} is outside of the {1} branch'.format(t, conic_kind(spec)))
    return math.sqrt(r2)


def _p_r(spec, t, r):
    if spec.h == 0:
        return math.sqrt(8 * spec.alpha) / (2 * r)
    return 2 * spec.h * t / r


def conic_state(spec, t):
    """
    The state on the positive x-axis following the conic

    :param ConicSpec spec:
    :param float t:
    :return: hkl.core.hamiltonian.PhaseState
    """
    r = conic_on_N(spec, t)
    return PhaseState.of(r, 0., 0., _p_r(spec, t, r), 0., 0.)


def conic_oracle(spec):
    """
    :param ConicSpec spec:
    :return: hkl.oracles.solutions.ExactSolution
    """

    def y(t):
        r = conic_on_N(spec, t)
        return np.array([r, 0., 0., _p_r(spec, t, r), 0., 0.])

    def dy(t):
        r = conic_on_N(spec, t)
        p_r = _p_r(spec, t, r)
        if spec.h == 0:
            dp_r = -math.sqrt(8 * spec.alpha) * p_r / (2 * r * r)
        else:
            dp_r = 2 * spec.h / r - 2 * spec.h * t * p_r / (r * r)
        return np.array([p_r, 0., 0., dp_r, 0., 0.])

    return ExactSolution(y, dy, spec.alpha, conic_kind(spec), t_min=0. if spec.h == 0 else -np.inf)
