r"""
Explicit Runge-Kutta methods of the Kepler-Heisenberg flow.

A :class:`ButcherTableau` holds the coefficients and computes the stage slopes. The fixed step methods are built by
:func:`rk_butcher`, the adaptive one is the embedded
`Dormand-Prince 5(4) pair <https://en.wikipedia.org/wiki/Dormand%E2%80%93Prince_method>`_ with the step size
controller :math:`h_{new} = h \min(5, \max(0.2, 0.9\,err^{-1/5}))`. Every method logs its number of field
evaluations at debug level.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameter, StepUnderflow
from ..misc.counter import Counter, Evaluations

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ButcherTableau:
    """
    Explicit tableau, only the strictly lower triangular part of ``a`` is used and
    :math:`c_{i}=\\sum _{k=0}^{i-1}a_{ik}` makes the method consistent

    :param numpy.ndarray a: Of shape (s, s)
    :param numpy.ndarray b: Of shape (s,)
    :param error: The difference between ``b`` and the weights of an embedded lower order solution
    :type error: numpy.ndarray, optional
    :param name: The label of the progress bar and of the log records
    :type name: str, optional
    """
    a: np.ndarray
    b: np.ndarray
    error: np.ndarray = None
    name: str = 'RK'

    def __post_init__(self):
        a, b = np.tril(np.asarray(self.a, dtype=float), -1), np.asarray(self.b, dtype=float)
        if a.shape != (b.size, b.size):
            raise InvalidParameter('a tableau of {0} stages needs a square a array, got {1}'.format(b.size, a.shape))
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'c', a.sum(axis=1))

    @property
    def stages(self):
        return self.b.size

    def slopes(self, f, y, t, h, k, first=0):
        """
        Fill the stage slopes ``k[first:]`` in place

        :param func f: The field ``f(y, t)``
        :param numpy.ndarray y: The state at the start of the step
        :param float t:
        :param float h: The signed step
        :param numpy.ndarray k: Of shape (s, d), the rows before ``first`` are already known
        :return: numpy.ndarray - ``k``
        """
        for j in range(first, self.stages):
            k[j] = f(y + h * (self.a[j, :j] @ k[:j]), t + h * self.c[j])
        return k


def rk_butcher(a, b, name='RK_butcher'):
    """
    Fixed step explicit method of a Butcher tableau

    :param 2D_array a: The *a* array of the tableau, of shape (s, s)
    :param 1D_array b: The *b* array of the tableau, of shape (s,)
    :param name: The label of the progress bar
    :type name: str, optional
    :return: func - The temporal method ``method(y0, t, f, verbose=True)``
    """
    tableau = ButcherTableau(a, b, name=name)

    def rk_method(y0, t, f, verbose=True, **_):
        """
        :param array_like y0: Initial value, of size d
        :param 1D_array t: Array of time steps, of size n
        :param func f: Function with well shaped input and output
        :param verbose: If True or a string, displays a progress bar
        :type verbose: bool or str, optional
        :return: numpy.ndarray - The solution, of shape (n, d)
        """
        field = Evaluations(f, tableau.name)
        y = np.zeros((len(t), len(y0)))
        k = np.zeros((tableau.stages, len(y0)))
        count = Counter.from_verbose(verbose, tableau.name, len(t))
        y[0] = y0
        for i in range(len(t) - 1):
            h = t[i + 1] - t[i]
            y[i + 1] = y[i] + h * (tableau.b @ tableau.slopes(field, y[i], t[i], h, k))
            count(i + 1)
        field.report(detail='{0} steps'.format(len(t) - 1))
        return y

    rk_method.tableau = tableau
    return rk_method


A_RK4 = np.array([[0., 0., 0, 0],
                  [.5, 0., 0, 0],
                  [.0, .5, 0, 0],
                  [.0, 0., 1, 0]])
"""The *a* array for the RK4 Butcher tableau"""

B_RK4 = np.array([1. / 6, 1. / 3, 1. / 3, 1. / 6])
"""The *b* array for the RK4 Butcher tableau"""

rk_4 = rk_butcher(A_RK4, B_RK4, 'RK4')
"""The classical RK4 method"""

A_DOPRI = np.array([[0., 0., 0., 0., 0., 0., 0.],
                    [1 / 5, 0., 0., 0., 0., 0., 0.],
                    [3 / 40, 9 / 40, 0., 0., 0., 0., 0.],
                    [44 / 45, -56 / 15, 32 / 9, 0., 0., 0., 0.],
                    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0., 0., 0.],
                    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0., 0.],
                    [35 / 384, 0., 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.]])
"""The *a* array of the Dormand-Prince tableau, its last row is the 5th order solution (first same as last)"""

B_DOPRI = A_DOPRI[-1]
"""The 5th order *b* array"""

E_DOPRI = B_DOPRI - np.array([5179 / 57600, 0., 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
"""Difference between the 5th and the embedded 4th order *b* arrays"""

DOPRI5 = ButcherTableau(A_DOPRI, B_DOPRI, E_DOPRI, 'DOPRI5')


def _initial_step(y, slope, rtol, atol):
    scale = atol + rtol * np.abs(y)
    d0, d1 = np.sqrt(np.mean((y / scale) ** 2)), np.sqrt(np.mean((slope / scale) ** 2))
    return 1e-6 if d0 < 1e-5 or d1 < 1e-5 else .01 * d0 / d1


def dopri5_steps(y0, t0, t_final, f, rtol=1e-10, atol=1e-12, h0=None, max_steps=10 ** 7):
    """
    Generator over the accepted steps of the adaptive Dormand-Prince 5(4) method. The last step lands exactly on
    ``t_final``, which may be smaller than ``t0`` to integrate backward.

    :param array_like y0: Initial value, of size d
    :param float t0: Initial time
    :param float t_final: Final time
    :param func f: Function with well shaped input and output
    :param rtol: Relative tolerance
    :type rtol: float, optional
    :param atol: Absolute tolerance
    :type atol: float, optional
    :param h0: Initial step size, guessed from the derivative when None
    :type h0: float or None, optional
    :param max_steps: Maximum number of attempted steps
    :type max_steps: int, optional
    :return: generator - Of ``(t, y)`` pairs, the initial point excluded
    """
    field = Evaluations(f, DOPRI5.name)
    y, t = np.array(y0, dtype=float), float(t0)
    direction = 1. if t_final >= t0 else -1.
    k = np.zeros((DOPRI5.stages, y.size))
    k[0] = field(y, t)
    h = min(abs(h0 if h0 is not None else _initial_step(y, k[0], rtol, atol)), abs(t_final - t0))
    rejected = 0
    for attempt in range(max_steps):
        if direction * (t_final - t) <= 0:
            field.report(detail='{0} steps rejected out of {1}'.format(rejected, attempt))
            return
        if h <= 16 * np.finfo(float).eps * max(1., abs(t)):
            raise StepUnderflow('step size {0:.3e} is negligible at t = {1:.17g}'.format(h, t))
        last = h >= abs(t_final - t)
        step = direction * (abs(t_final - t) if last else h)
        DOPRI5.slopes(field, y, t, step, k, first=1)
        new = y + step * (DOPRI5.b @ k)
        scaled = step * (DOPRI5.error @ k) / (atol + rtol * np.maximum(np.abs(y), np.abs(new)))
        err = np.sqrt(np.mean(scaled * scaled))
        if err <= 1:
            t, y = (t_final if last else t + step), new
            k[0] = k[-1]
            yield t, y.copy()
            h = abs(step) * (5. if err == 0 else min(5., max(.2, .9 * err ** -.2)))
        else:
            rejected += 1
            h = abs(step) * max(.2, .9 * err ** -.2)
    field.report(logging.WARNING, '{0} steps rejected'.format(rejected))
    raise StepUnderflow('maximum number of steps reached at t = {0:.17g}'.format(t))


def dopri5(y0, t, f, verbose=True, rtol=1e-10, atol=1e-12, **_):
    """
    Adaptive Dormand-Prince 5(4) method, reporting the solution at the requested times

    :param array_like y0: Initial value, of size d
    :param 1D_array t: Array of output times, of size n
    :param func f: Function with well shaped input and output
    :param verbose: If True or a string, displays a progress bar
    :type verbose: bool or str, optional
    :param rtol: Relative tolerance
    :type rtol: float, optional
    :param atol: Absolute tolerance
    :type atol: float, optional
    :return: numpy.ndarray - The solution, of shape (n, d)
    """
    y = np.zeros((len(t), len(y0)))
    count = Counter.from_verbose(verbose, DOPRI5.name, len(t))
    y[0] = y0
    h = None
    for i in range(len(t) - 1):
        y[i + 1] = y[i]
        previous = t[i]
        for t_step, y_step in dopri5_steps(y[i], t[i], t[i + 1], f, rtol, atol, h0=h):
            y[i + 1], h, previous = y_step, abs(t_step - previous), t_step
        count(i + 1)
    return y
