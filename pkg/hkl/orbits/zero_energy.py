r"""
Zero energy orbits of the threefold class from the reduced dynamics.

On :math:`H = 0` the reduced coordinates :math:`v = z/r^2` and :math:`p_v` move on the curve :math:`\tilde{H} = 1`.
For :math:`J = 0` the curve is an oval symmetric under :math:`v \mapsto -v`, run through once per reduced period,
during which the polar angle advances by

.. math::
   \Delta\theta(p_\theta) = \int_{-v_m}^{v_m}\frac{64v^2p_\theta}{(16v^2 + 1)\sqrt{D}}dv, \qquad
   D = \frac{2\alpha(16v^2 + 1)}{\sqrt{1 + v^2/16}} - 16v^2p_\theta^2

with :math:`v_m` the first positive root of :math:`D`. The radius comes back after a reduced period, so the orbit
with :math:`\Delta\theta = 2\pi(1/3 + j)` closes after three of them. It starts at :math:`r = 1` and :math:`z = 0`
with :math:`p_r = 0`, which gives it the reflection symmetry :math:`\gamma(-t) = (x, -y, -z)(t)`, and it crosses
:math:`z = 0` downward after half a reduced period on the mirror line of angle :math:`\Delta\theta/2`. Only that half
is integrated: the reflection and the rotations by :math:`\Delta\theta` give the rest, and the samples are projected
on the modes :math:`k \equiv 1 \pmod 3`.
"""

import logging
import math
import warnings

import numpy as np
import scipy.integrate
import scipy.optimize

from .loop import LoopPath, SymmetryClass, closure_coefficient, dilate_loop
from ..core.coordinates import _curve_coefficients, state_from_reduced
from ..core.hamiltonian import Params, _field
from ..errors import InvalidParameter
from ..misc.counter import Evaluations

logger = logging.getLogger(__name__)

RTOL = 1e-13
"""Tolerance of the integration of the half reduced period"""

HORIZON = 1e6
"""Longest half reduced period searched for, at r = 1"""

SAMPLES = 4096
"""Number of samples of the orbit projected on the modes"""

TAIL_TOL = 1e-13
"""Relative size of the dropped coefficients when the number of modes is chosen automatically"""

MAX_MODES = 240
"""Largest number of modes chosen automatically"""

P_THETA_SCAN = np.geomspace(16., .05, 97)
"""Values of p_theta scanned, decreasing, for the first one reaching the advance"""


def _discriminant(v, p_theta, alpha):
    a, b, c = _curve_coefficients(v, 0., p_theta, alpha)
    return b * b - 4 * a * c


def oval_extent(p_theta, params=Params()):
    """
    :param float p_theta: Positive
    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :return: float - :math:`v_m`, the largest :math:`|v|` on the oval of :math:`J = 0`
    """
    if not p_theta > 0:
        raise InvalidParameter('p_theta must be positive, got {0!r}'.format(p_theta))
    grid = np.geomspace(1e-3, 1e4, 141)
    negative = np.flatnonzero(_discriminant(grid, p_theta, params.alpha) < 0)
    if not negative.size:
        raise InvalidParameter('the zero energy curve of p_theta = {0!r} is not bounded'.format(p_theta))
    i = negative[0]
    return scipy.optimize.brentq(_discriminant, grid[i - 1] if i else 0., grid[i], args=(p_theta, params.alpha),
                                 xtol=1e-15, rtol=4 * np.finfo(float).eps)


def angle_advance(p_theta, params=Params()):
    """
    Polar angle swept during a reduced period of the zero energy orbit with :math:`J = 0`, by quadrature, with
    :math:`v = v_m\\sin\\varphi` removing the square root singularity at the turning points

    :param float p_theta: Positive
    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :return: float
    """
    alpha, v_m = params.alpha, oval_extent(p_theta, params)

    def integrand(phi):
        v = v_m * math.sin(phi)
        d = _discriminant(v, p_theta, alpha)
        if d <= 0:
            return 0.
        return 64 * v * v * p_theta * v_m * math.cos(phi) / ((16 * v * v + 1) * math.sqrt(d))

    with warnings.catch_warnings():
        warnings.simplefilter('ignore', scipy.integrate.IntegrationWarning)
        value, _ = scipy.integrate.quad(integrand, 0., math.pi / 2, epsabs=0., epsrel=1e-12, limit=200)
    return 2 * value


def _flow(alpha):
    def f(t, y):
        x, yy = y[0], y[1]
        derivative = _field(y[:6], alpha)
        return np.array(derivative + ((x * derivative[1] - yy * derivative[0]) / (x * x + yy * yy),))

    return f


def half_period(p_theta, params=Params(), rtol=RTOL):
    """
    Integrate from :math:`r = 1`, :math:`z = 0` to the first downward crossing of :math:`z = 0`

    :param float p_theta: Positive
    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :param rtol: Relative and absolute tolerance of DOP853
    :type rtol: float, optional
    :return: tuple - ``(t_half, theta_half, solution)``, ``solution.sol`` interpolates the state and the unwrapped
        polar angle, in this order
    """
    if not p_theta > 0:
        raise InvalidParameter('p_theta must be positive, got {0!r}'.format(p_theta))

    def downward(t, y):
        return y[2]

    downward.terminal, downward.direction = True, -1
    field = Evaluations(_flow(params.alpha), 'reduced half period')
    y0 = np.append(state_from_reduced(0., p_theta, params).as_array(), 0.)
    solution = scipy.integrate.solve_ivp(field, (0., HORIZON), y0, method='DOP853', rtol=rtol, atol=rtol,
                                         events=downward, dense_output=True)
    field.report(detail='p_theta = {0:.17g}'.format(p_theta))
    if solution.status != 1:
        raise InvalidParameter('no downward crossing of z = 0 for p_theta = {0!r}: {1}'.format(p_theta,
                                                                                           solution.message))
    return float(solution.t_events[0][0]), float(solution.y_events[0][0][6]), solution


def advance_parameter(advance=2 * math.pi / 3, params=Params()):
    """
    The :math:`p_\\theta` whose reduced period advances the polar angle by ``advance``, the first one met when
    :data:`P_THETA_SCAN` is run through downward. It is bracketed with :func:`angle_advance` and refined on the
    integrated flow.

    :param advance: Positive
    :type advance: float, optional
    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :return: float
    """
    if not advance > 0:
        raise InvalidParameter('the advance must be positive, got {0!r}'.format(advance))
    previous = P_THETA_SCAN[0]
    for p_theta in P_THETA_SCAN[1:]:
        if angle_advance(p_theta, params) >= advance:
            break
        previous = p_theta
    else:
        raise InvalidParameter('no zero energy orbit advances the angle by {0:.6g}'.format(advance))
    guess = scipy.optimize.brentq(lambda p: angle_advance(p, params) - advance, p_theta, previous, xtol=1e-13)

    def residual(p):
        return 2 * half_period(p, params)[1] - advance

    low, high = guess * (1 - 1e-6), guess * (1 + 1e-6)
    if residual(low) * residual(high) > 0:
        low, high = p_theta, previous
    result = scipy.optimize.brentq(residual, low, high, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    logger.debug('advance %.15g reached at p_theta = %.17g, quadrature guess %.17g', advance, result, guess)
    return result


def zero_energy_orbit(params=Params(), period=2 * math.pi, modes=None, winding=0):
    """
    Zero energy orbit with the threefold and the reflection symmetries, as a loop of the given period

    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :param period: The period after the dilation
    :type period: float, optional
    :param modes: The largest :math:`|k|`, chosen so that the dropped coefficients are below :data:`TAIL_TOL` when
        None
    :type modes: int, optional
    :param winding: The number of extra turns per reduced period
    :type winding: int, optional
    :return: hkl.orbits.loop.LoopPath - Without certificate, see :func:`hkl.orbits.search.certificate`
    """
    if not period > 0:
        raise InvalidParameter('the period must be positive, got {0!r}'.format(period))
    if winding < 0:
        raise InvalidParameter('the winding must be non negative, got {0!r}'.format(winding))
    advance = 2 * math.pi * (1 / 3 + winding)
    p_theta = advance_parameter(advance, params)
    t_half, _, solution = half_period(p_theta, params)
    reduced = 2 * t_half
    t = np.arange(SAMPLES) * 3 * reduced / SAMPLES
    turn = np.floor((t + t_half) / reduced)
    s = t - turn * reduced
    states = solution.sol(np.abs(s))
    w = states[0] + 1j * states[1]
    w = np.where(s < 0, w.conj(), w) * np.exp(1j * advance * turn)

    c = np.fft.fft(w) / SAMPLES
    k_all = np.fft.fftfreq(SAMPLES, 1. / SAMPLES).astype(int)
    trusted = (k_all % 3 == 1) & (np.abs(k_all) < SAMPLES // 4)
    if modes is None:
        kept = np.abs(c) >= TAIL_TOL * np.max(np.abs(c))
        modes = max(2, int(np.max(np.abs(k_all[trusted & kept]))))
        if modes > MAX_MODES:
            raise InvalidParameter('the orbit needs {0} modes, more than {1}'.format(modes, MAX_MODES))
    k = SymmetryClass().support(modes)
    dropped = float(np.max(np.abs(c[trusted & (np.abs(k_all) > modes)]), initial=0.))
    coefficients = c[k % SAMPLES].real
    coefficients[k == 1] = closure_coefficient(k[k != 1], coefficients[k != 1])
    loop = LoopPath(3 * reduced, k, coefficients)
    logger.info('zero energy orbit: p_theta %.15g, period %.15g at r(0) = 1, %d modes, largest dropped '
                'coefficient %.3e', p_theta, loop.period, modes, dropped)
    return dilate_loop(loop, math.sqrt(period / loop.period))
