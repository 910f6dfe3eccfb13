"""
Time integration of the Kepler flow and the sampled trajectories it produces.

The diagnostics of a :class:`Trajectory` are always recomputed from the stored states.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..core.hamiltonian import Params, PhaseState, _field, _jacobian, kepler_field, kepler_jacobian
from ..core.heisenberg import gauge
from ..errors import CollisionEvent, InvalidParameter
from ..misc.counter import Counter, Evaluations
from ..temporal.midpoint import MAX_NEWTON_ITERS, NEWTON_TOL, midpoint4_step, midpoint_step
from ..temporal.rk import dopri5_steps, rk_4

logger = logging.getLogger(__name__)

RHO_MIN = 1e-8
"""Default collision floor on the gauge"""

CSV_HEADER = 't,x,y,z,px,py,pz,H,ptheta,J,Jres'
"""Header of the trajectory CSV files"""

FIXED_STEP_METHODS = ('implicit-midpoint', 'midpoint4', 'rk4')
METHODS = FIXED_STEP_METHODS + ('adaptive-rk',)


@dataclass(frozen=True)
class IntegratorSpec:
    """
    How to integrate

    :param str method: One of ``implicit-midpoint``, ``midpoint4``, ``rk4`` (fixed step) or ``adaptive-rk``
    :param float step: The time step of the fixed step methods
    :param float tolerance: The relative and absolute tolerance of ``adaptive-rk``
    :param int max_newton_iters: Maximum number of iterations of the implicit solve
    :param float newton_tol: Relative tolerance of the implicit solve
    :param float rho_min: The collision floor
    """
    method: str = 'implicit-midpoint'
    step: float = 1e-3
    tolerance: float = 1e-10
    max_newton_iters: int = MAX_NEWTON_ITERS
    newton_tol: float = NEWTON_TOL
    rho_min: float = RHO_MIN

    def __post_init__(self):
        if self.method not in METHODS:
            raise InvalidParameter('unknown method {0!r}, expected one of {1}'.format(self.method, METHODS))
        for name in ('step', 'tolerance', 'newton_tol'):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameter('{0} must be positive, got {1!r}'.format(name, value))
        if self.max_newton_iters < 1:
            raise InvalidParameter('max_newton_iters must be at least 1')
        if not self.rho_min >= 0:
            raise InvalidParameter('rho_min must be non negative, got {0!r}'.format(self.rho_min))

    @property
    def adaptive(self):
        return self.method == 'adaptive-rk'


def _diagnostics(t, y, alpha):
    x, yy, z, px, py, pz = y.T
    big_px, big_py = px - .5 * yy * pz, py + .5 * x * pz
    h = .5 * (big_px ** 2 + big_py ** 2) - alpha / gauge(x, yy, z) ** 2
    j = x * px + yy * py + 2 * z * pz
    return h, x * py - yy * px, j, j - j[0] - 2 * h[0] * (t - t[0])


class Trajectory:
    """
    Immutable sampled solution

    :param 1D_array t: Strictly increasing sample times, of size n
    :param 2D_array y: The states ``(x, y, z, px, py, pz)``, of shape (n, 6)
    :param Params params: The parameters the diagnostics are computed with
    """

    def __init__(self, t, y, params):
        t = np.array(t, dtype=float)
        y = np.array(y, dtype=float).reshape(-1, 6)
        if t.ndim != 1 or t.size != y.shape[0] or t.size == 0:
            raise InvalidParameter('a trajectory needs as many times as states')
        if np.any(np.diff(t) <= 0):
            raise InvalidParameter('trajectory times must be strictly increasing')
        t.flags.writeable = False
        y.flags.writeable = False
        self.t, self.y, self.params = t, y, params

    def __len__(self):
        return self.t.size

    def state(self, i):
        """
        :param int i: Sample index, negative values count from the end
        :return: PhaseState
        """
        return PhaseState.from_array(self.y[i])

    @property
    def final(self):
        return self.state(-1)

    def diagnostics(self):
        """
        :return: tuple - The arrays ``(H, ptheta, J, Jres)`` with :math:`Jres = J(t) - J(0) - 2H(0)t`
        """
        return _diagnostics(self.t, self.y, self.params.alpha)

    def rho(self):
        """
        :return: numpy.ndarray - The gauge along the trajectory
        """
        return gauge(self.y[:, 0], self.y[:, 1], self.y[:, 2])

    def drifts(self):
        """
        :return: dict - Maximum deviations of H, ptheta and of the J-residual from their initial values
        """
        h, ptheta, _, jres = self.diagnostics()
        return {'H': float(np.max(np.abs(h - h[0]))),
                'ptheta': float(np.max(np.abs(ptheta - ptheta[0]))),
                'Jres': float(np.max(np.abs(jres)))}

    def to_csv(self, path):
        """
        Write the samples with 17 significant digits

        :param str path:
        """
        columns = np.column_stack((self.t, self.y) + self.diagnostics())
        np.savetxt(path, columns, fmt='%.17g', delimiter=',', header=CSV_HEADER, comments='')

    @classmethod
    def read_csv(cls, path, params=None):
        """
        Read back a file written by :meth:`to_csv`, the diagnostic columns are recomputed

        :param str path:
        :param params: The parameters of the run
        :type params: Params, optional
        :return: Trajectory
        """
        with open(path) as file:
            header = file.readline().strip()
        if header != CSV_HEADER:
            raise InvalidParameter('{0} is not a trajectory file'.format(path))
        data = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
        return cls(data[:, 0], data[:, 1:7], Params() if params is None else params)


def _fixed_stepper(spec, f, params):
    jac = kepler_jacobian(params)
    tol, max_iter = spec.newton_tol, spec.max_newton_iters
    if spec.method == 'implicit-midpoint':
        return lambda y, t, h: midpoint_step(y, t, h, f, jac, tol, max_iter)
    if spec.method == 'midpoint4':
        return lambda y, t, h: midpoint4_step(y, t, h, f, jac, tol, max_iter)
    tableau = rk_4.tableau
    k = np.zeros((tableau.stages, 6))
    return lambda y, t, h: y + h * (tableau.b @ tableau.slopes(f, y, t, h, k))


def march(y0, t0, t_final, spec, params, verbose=False):
    """
    Integrate from ``t0`` to ``t_final`` (possibly backward) and stop at the collision floor

    :param array_like y0: Initial state
    :param float t0: Initial time
    :param float t_final: Final time
    :param IntegratorSpec spec:
    :param Params params:
    :param verbose: If True or a string, displays a progress bar
    :type verbose: bool or str, optional
    :return: tuple - ``(times, states, collision)``, ``collision`` is None or ``(t, rho)``
    """
    times, states = [float(t0)], [np.array(y0, dtype=float)]
    span = t_final - t0
    field = Evaluations(kepler_field(params), 'Kepler field')
    if spec.adaptive:
        steps = dopri5_steps(y0, t0, t_final, field, spec.tolerance, spec.tolerance)
        count = Counter.from_verbose(verbose, 'DOPRI5', 100)
    else:
        n = int(math.ceil(abs(span) / spec.step - 1e-9)) if span else 0
        step = _fixed_stepper(spec, field, params)
        h = math.copysign(spec.step, span)

        def fixed_steps():
            y = states[0]
            for i in range(n):
                t_i = t0 + i * h
                t_next = t_final if i == n - 1 else t0 + (i + 1) * h
                y = step(y, t_i, t_next - t_i)
                yield t_next, y

        steps = fixed_steps()
        count = Counter.from_verbose(verbose, spec.method, n)
    for t, y in steps:
        times.append(t)
        states.append(y)
        r = gauge(y[0], y[1], y[2])
        if not r >= spec.rho_min:
            logger.warning('collision at t = %.17g, rho = %.3e', t, r)
            field.report(detail='{0} steps'.format(len(times) - 1))
            return np.array(times), np.array(states), (t, r)
        if spec.adaptive:
            count(int(99 * (t - t0) / span))
        else:
            count(len(times) - 2)
    field.report(detail='{0} steps'.format(len(times) - 1))
    return np.array(times), np.array(states), None


def integrate(s0, t_final, spec, params, verbose=False):
    """
    Integrate the flow from time 0, sampling at every accepted step

    :param PhaseState s0: Initial state, away from the origin
    :param float t_final: Final time, non negative
    :param IntegratorSpec spec:
    :param Params params:
    :param verbose: If True or a string, displays a progress bar
    :type verbose: bool or str, optional
    :return: Trajectory
    """
    if not (math.isfinite(t_final) and t_final >= 0):
        raise InvalidParameter('t_final must be non negative, got {0!r}'.format(t_final))
    y0 = s0.as_array()
    _field(y0, params.alpha)  # SingularOrigin at the origin
    logger.info('integrating with %s up to t = %g', spec.method, t_final)
    t, y, collision = march(y0, 0., t_final, spec, params, verbose)
    trajectory = Trajectory(t, y, params)
    if collision is not None:
        raise CollisionEvent(trajectory, *collision)
    logger.info('%d samples, drifts %s', len(trajectory), trajectory.drifts())
    return trajectory


def step_implicit_midpoint(s, dt, params, spec=None):
    """
    One step of the implicit midpoint rule with Newton's method on the exact Jacobian

    :param PhaseState s: The current state
    :param float dt: The time step
    :param Params params:
    :param spec: Where the Newton tolerances are taken from
    :type spec: IntegratorSpec, optional
    :return: PhaseState
    """
    spec = IntegratorSpec() if spec is None else spec
    alpha = params.alpha
    y = midpoint_step(s.as_array(), 0., dt, lambda u, _t: np.array(_field(u, alpha)),
                      lambda u, _t: _jacobian(u, alpha), spec.newton_tol, spec.max_newton_iters)
    return PhaseState.from_array(y)
