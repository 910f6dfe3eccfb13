r"""
Numerical Poisson brackets

.. math::
   \{f, g\} = \sum_i \frac{\partial f}{\partial q_i}\frac{\partial g}{\partial p_i}
   - \frac{\partial f}{\partial p_i}\frac{\partial g}{\partial q_i}

with central differences, used to check the first integrals: :math:`\{J, H\} = 2H`,
:math:`\{p_\theta, H\} = 0` and :math:`\{\tilde{H}, J\} = \{\tilde{H}, p_\theta\} = 0`.
"""

import numpy as np

from .hamiltonian import PhaseState
from ..errors import SingularOrigin

STEP = 1e-6
"""The relative step of the central differences"""


def gradient_numeric(f, s, step=STEP):
    """
    Central difference gradient of a scalar function of the phase space

    :param func f: Takes a PhaseState and returns a float
    :param hkl.core.hamiltonian.PhaseState s:
    :param step: The relative step
    :type step: float, optional
    :return: numpy.ndarray - Of shape (6,)
    """
    y = s.as_array()
    grad = np.zeros(6)
    for i in range(6):
        h = step * max(1., abs(y[i]))
        yp, ym = y.copy(), y.copy()
        yp[i] += h
        ym[i] -= h
        try:
            grad[i] = (f(PhaseState.from_array(yp)) - f(PhaseState.from_array(ym))) / (2 * h)
        except SingularOrigin as e:
            raise SingularOrigin('the difference stencil touches the origin') from e
    return grad


def poisson_bracket_numeric(f, g, s, step=STEP):
    """
    :param func f: Takes a PhaseState and returns a float
    :param func g: Takes a PhaseState and returns a float
    :param hkl.core.hamiltonian.PhaseState s: Where to evaluate the bracket
    :param step: The relative step
    :type step: float, optional
    :return: float - :math:`\\{f, g\\}(s)`
    """
    df = gradient_numeric(f, s, step)
    dg = gradient_numeric(g, s, step)
    return float(df[:3] @ dg[3:] - df[3:] @ dg[:3])
