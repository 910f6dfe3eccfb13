r"""
`Implicit midpoint rule <https://en.wikipedia.org/wiki/Midpoint_method>`_ and its symmetric composition.

One step solves

.. math::
   y_{n+1} = y_n + h f\left(\frac{y_n + y_{n+1}}{2}, t_n + \frac{h}{2}\right)

by Newton's method on :math:`G(u) = u - y_n - hf(\frac{y_n + u}{2})`, whose Jacobian is
:math:`I - \frac{h}{2}J_f`. A plain fixed-point iteration takes over when no Jacobian is given or when Newton stalls.

The rule is symplectic, symmetric and preserves quadratic invariants. The triple jump
:math:`\gamma_1 = \gamma_3 = 1 / (2 - 2^{1/3})`, :math:`\gamma_2 = -2^{1/3} / (2 - 2^{1/3})` raises the order to 4.
"""

import numpy as np

from ..errors import NewtonDivergence
from ..misc.counter import Counter

NEWTON_TOL = 1e-13
"""Relative increment below which the implicit solve is converged"""

MAX_NEWTON_ITERS = 50
"""Maximum number of iterations of the implicit solve, for Newton and for the fixed-point fallback"""

_CBRT2 = 2 ** (1 / 3)
GAMMA_1 = 1 / (2 - _CBRT2)
"""Outer sub-step of the order 4 composition"""
GAMMA_2 = -_CBRT2 / (2 - _CBRT2)
"""Inner, backward, sub-step of the order 4 composition"""


def _fixed_point(y, u, t, h, f, tol, max_iter):
    delta = np.inf
    for _ in range(max_iter):
        new = y + h * f(.5 * (y + u), t + .5 * h)
        if not np.all(np.isfinite(new)):
            break
        delta = np.max(np.abs(new - u))
        u = new
        if delta <= tol * max(1., np.max(np.abs(u))):
            return u, delta
    raise NewtonDivergence(h, delta)


def midpoint_step(y, t, h, f, jac=None, tol=NEWTON_TOL, max_iter=MAX_NEWTON_ITERS):
    """
    One step of the implicit midpoint rule

    :param numpy.ndarray y: The current state
    :param float t: The current time
    :param float h: The time step, may be negative or zero
    :param func f: Function with well shaped input and output
    :param jac: If given, the Jacobian of f, must return an array
    :type jac: func or None, optional
    :param tol: Relative tolerance on the Newton increment
    :type tol: float, optional
    :param max_iter: Maximum number of iterations
    :type max_iter: int, optional
    :return: numpy.ndarray - The next state
    """
    y = np.asarray(y, dtype=float)
    if h == 0:
        return y.copy()
    u = y + h * f(y, t)
    if jac is None:
        return _fixed_point(y, u, t, h, f, tol, max_iter)[0]
    eye = np.eye(y.size)
    for _ in range(max_iter):
        mid = .5 * (y + u)
        g = u - y - h * f(mid, t + .5 * h)
        delta = np.linalg.solve(eye - .5 * h * jac(mid, t + .5 * h), -g)
        u = u + delta
        if not np.all(np.isfinite(u)):
            break
        if np.max(np.abs(delta)) <= tol * max(1., np.max(np.abs(u))):
            return u
    return _fixed_point(y, y + h * f(y, t), t, h, f, tol, max_iter)[0]


def midpoint4_step(y, t, h, f, jac=None, tol=NEWTON_TOL, max_iter=MAX_NEWTON_ITERS):
    """
    One step of the order 4 triple jump composition of :func:`midpoint_step`, same arguments

    :return: numpy.ndarray - The next state
    """
    y = midpoint_step(y, t, GAMMA_1 * h, f, jac, tol, max_iter)
    y = midpoint_step(y, t + GAMMA_1 * h, GAMMA_2 * h, f, jac, tol, max_iter)
    return midpoint_step(y, t + (GAMMA_1 + GAMMA_2) * h, GAMMA_1 * h, f, jac, tol, max_iter)


def _one_step_method(step, name, y0, t, f, verbose, jac, tol, max_iter):
    n = len(t)
    y = np.zeros((n, len(y0)))
    count = Counter.from_verbose(verbose, name, n)
    y[0] = y0
    for i in range(n - 1):
        y[i + 1] = step(y[i], t[i], t[i + 1] - t[i], f, jac, tol, max_iter)
        count(i + 1)
    return y


def implicit_midpoint(y0, t, f, verbose=True, jac=None, tol=NEWTON_TOL, max_iter=MAX_NEWTON_ITERS, **_):
    """
    Implicit midpoint method

    :param array_like y0: Initial value, of size d
    :param 1D_array t: Array of time steps, of size n
    :param func f: Function with well shaped input and output
    :param verbose: If True or a string, displays a progress bar
    :type verbose: bool or str, optional
    :param jac: If given, the Jacobian of f, must return an array
    :type jac: func or None, optional
    :param tol: Relative tolerance on the Newton increment
    :type tol: float, optional
    :param max_iter: Maximum number of iterations per step
    :type max_iter: int, optional
    :return: numpy.ndarray - The solution, of shape (n, d)
    """
    return _one_step_method(midpoint_step, 'Midpoint', y0, t, f, verbose, jac, tol, max_iter)


def implicit_midpoint_4(y0, t, f, verbose=True, jac=None, tol=NEWTON_TOL, max_iter=MAX_NEWTON_ITERS, **_):
    """
    Order 4 composition of the implicit midpoint method, same arguments as :func:`implicit_midpoint`

    :return: numpy.ndarray - The solution, of shape (n, d)
    """
    return _one_step_method(midpoint4_step, 'Midpoint4', y0, t, f, verbose, jac, tol, max_iter)
