r"""
Direct method search of symmetric periodic orbits.

The unknowns are the coefficients of the planar part, restricted by the symmetry class and by two gauges:

  - :math:`c_1` is real and eliminated by the closure :math:`c_1 = \sqrt{-\sum_{k \neq 1}k|c_k|^2}` (rotations),
  - :math:`c_{-2}` is real (time shifts).

With the reflection symmetry every coefficient is real and :math:`z_0 = 0`, otherwise :math:`z_0` is free. The
``bfgs`` method minimizes the action by BFGS, then polishes the minimum with Newton steps on a finite difference
Hessian of the exact gradient that never increase the action. The ``newton`` method looks for a critical point of any
index with the Newton steps only, starting from a resolved orbit such as :func:`~hkl.orbits.zero_energy.
zero_energy_orbit`. The half period condition :math:`z(t + T/2) = -z(t)` is imposed by an augmented Lagrangian on its
nodal defect, with the multipliers updated until the defect is below ``s2_tol``.

The multiplier of the horizontality constraint is :math:`\lambda = p_z`, recovered from
:math:`\dot{\lambda} = -\frac{\alpha}{16}z\rho^{-6}` and a least squares fit of :math:`\lambda(0)`, and the
certificate reports the residual of

.. math::
   \ddot{x} + \lambda\dot{y} + \frac{1}{2}\dot{\lambda}y + 2\alpha xr^2\rho^{-6} = 0, \qquad
   \ddot{y} - \lambda\dot{x} - \frac{1}{2}\dot{\lambda}x + 2\alpha yr^2\rho^{-6} = 0

A critical loop whose residual or energy exceeds ``el_tol`` is not returned: :class:`~hkl.errors.UnresolvedOrbit`
carries it instead.
"""

import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass

import numpy as np
import scipy.optimize

from .action import NODES, action, action_and_gradient, half_period_defect, spectral_antiderivative
from .loop import LoopPath, SymmetryClass, closure_coefficient, horizontality_defect, reconstruct_z, s2_defect, \
    seed_loop
from .zero_energy import zero_energy_orbit
from ..core.hamiltonian import Params
from ..errors import CollapseToSingularity, HKLError, InvalidParameter, MaxIterations, UnresolvedOrbit
from ..misc.counter import Counter, Evaluations

logger = logging.getLogger(__name__)

METHODS = ('auto', 'bfgs', 'newton')

STARTS = ('reduced', 'epicycle')

S2_ROUNDS = 12
"""Largest number of multiplier updates of the half period constraint"""


@dataclass(frozen=True)
class SearchOptions:
    """
    :param int modes: The largest :math:`|k|`
    :param float period: The period of the initial loops
    :param int nodes: The number of quadrature nodes, even
    :param float gtol: Sup norm of the preconditioned gradient to reach
    :param int max_iter: Maximum number of BFGS iterations
    :param int newton_steps: Maximum number of Newton steps
    :param float rho_barrier: Radius of the collision barrier
    :param float mu_s2: Initial weight of the quadratic term of the half period constraint
    :param float s2_tol: Largest nodal defect of :math:`z(t + T/2) = -z(t)` accepted
    :param float perturbation: Relative size of the random perturbation of the initial loops
    :param str method: ``bfgs``, ``newton`` or ``auto``, which is ``newton`` from the zero energy orbit and
        ``bfgs`` from the epicycle
    :param str start: ``reduced`` for the zero energy orbit of :mod:`~hkl.orbits.zero_energy`, ``epicycle`` for
        :func:`~hkl.orbits.loop.seed_loop`
    :param float el_tol: Largest Euler-Lagrange residual and :math:`|H|` accepted, ``math.inf`` accepts any critical
        loop
    """
    modes: int = 120
    period: float = 2 * math.pi
    nodes: int = NODES
    gtol: float = 1e-8
    max_iter: int = 5000
    newton_steps: int = 20
    rho_barrier: float = 1e-3
    mu_s2: float = 10.
    s2_tol: float = 1e-10
    perturbation: float = 0.
    method: str = 'auto'
    start: str = 'reduced'
    el_tol: float = 1e-4

    def __post_init__(self):
        if self.modes < 2:
            raise InvalidParameter('modes must be at least 2, got {0!r}'.format(self.modes))
        if self.nodes < 4 * self.modes + 2 or self.nodes % 2:
            raise InvalidParameter('nodes must be even and larger than 4 * modes, got {0!r}'.format(self.nodes))
        for name in ('period', 'gtol', 'mu_s2', 's2_tol', 'el_tol'):
            if not getattr(self, name) > 0:
                raise InvalidParameter('{0} must be positive'.format(name))
        if self.rho_barrier < 0 or self.perturbation < 0:
            raise InvalidParameter('rho_barrier and perturbation must be non negative')
        if self.method not in METHODS:
            raise InvalidParameter('unknown method {0!r}, expected one of {1}'.format(self.method, METHODS))
        if self.start not in STARTS:
            raise InvalidParameter('unknown start {0!r}, expected one of {1}'.format(self.start, STARTS))


@dataclass(frozen=True)
class Certificate:
    """
    Numerical evidence that a loop is a periodic orbit

    :param float action:
    :param float gnorm: Sup norm of the preconditioned gradient, NaN when unknown
    :param float h_sup: Sup of :math:`|H|` over the nodes
    :param float el_residual: Sup of the Euler-Lagrange residual over the nodes
    :param float horizontality: Sup of :math:`|\\frac{1}{2}(x\\dot{y} - y\\dot{x}) - \\dot{z}|`
    :param float s2_defect: Sup of :math:`|z(t + T/2) + z(t)|`
    :param float rho_min: Smallest gauge over the nodes
    :param bool barrier_active: Whether the collision barrier contributes to the action
    :param float lambda0: The multiplier :math:`p_z` at :math:`t = 0`
    """
    action: float
    gnorm: float
    h_sup: float
    el_residual: float
    horizontality: float
    s2_defect: float
    rho_min: float
    barrier_active: bool
    lambda0: float

    def to_dict(self):
        return asdict(self)


class _Layout:
    """Map between a symmetric loop and the preconditioned real unknowns"""

    def __init__(self, sym, modes, period):
        self.sym, self.period = sym, period
        self.k = sym.support(modes)
        if 1 not in self.k:
            raise InvalidParameter('the mode 1 is needed for the closure')
        self.free = self.k[self.k != 1]
        self.real_only = np.full(self.free.size, sym.reflection) | (self.free == -2)
        self.has_z0 = not sym.reflection
        omega = 2 * math.pi / period
        self.scale = math.sqrt(period) * omega * np.maximum(np.abs(self.free), 1)
        self.size = self.free.size + np.count_nonzero(~self.real_only) + self.has_z0

    def unpack(self, theta):
        values = theta[:self.free.size] / self.scale
        imag = np.zeros(self.free.size)
        imag[~self.real_only] = theta[self.free.size:self.free.size + np.count_nonzero(~self.real_only)] / \
            self.scale[~self.real_only]
        free_c = values + 1j * imag
        c = np.zeros(self.k.size, dtype=complex)
        c[self.k != 1] = free_c
        c[self.k == 1] = closure_coefficient(self.free, free_c)
        z0 = theta[-1] if self.has_z0 else 0.
        return c, z0

    def loop(self, theta):
        c, z0 = self.unpack(theta)
        return LoopPath(self.period, self.k, c, z0)

    def pack(self, loop):
        """Symmetric projection of ``loop`` in the unknowns, the modes outside of the class are dropped"""
        coefficients = dict(zip(loop.k.tolist(), loop.c.tolist()))
        free_c = np.array([coefficients.get(k, 0.) for k in self.free.tolist()], dtype=complex)
        parts = [free_c.real * self.scale, free_c.imag[~self.real_only] * self.scale[~self.real_only]]
        if self.has_z0:
            parts.append([loop.z0])
        return np.concatenate(parts)

    def gradient(self, theta, grad_c, grad_z0):
        c, _ = self.unpack(theta)
        one = self.k == 1
        c1, g1 = c[one][0].real, grad_c[one][0].real
        free_c, free_g = c[~one], grad_c[~one]
        d_real = free_g.real - g1 * self.free * free_c.real / c1
        d_imag = free_g.imag - g1 * self.free * free_c.imag / c1
        parts = [d_real / self.scale, d_imag[~self.real_only] / self.scale[~self.real_only]]
        if self.has_z0:
            parts.append([grad_z0])
        return np.concatenate(parts)


def project(loop, sym, modes=None):
    """
    Projection on a symmetry class: drops the modes outside of the class, keeps the real parts and sets
    :math:`z_0 = 0` under the reflection symmetry, and closes the loop with :math:`c_1`. The half period condition
    is not a linear one and is left to :func:`minimize_action`.

    :param hkl.orbits.loop.LoopPath loop:
    :param hkl.orbits.loop.SymmetryClass sym:
    :param modes: Defaults to the modes of the loop
    :type modes: int, optional
    :return: hkl.orbits.loop.LoopPath
    """
    layout = _Layout(sym, loop.modes if modes is None else modes, loop.period)
    return layout.loop(layout.pack(loop))


def certificate(loop, params, nodes=NODES, gnorm=math.nan, rho_barrier=0.):
    """
    Reconstruct the multiplier and evaluate the residuals of a candidate orbit

    :param hkl.orbits.loop.LoopPath loop:
    :param hkl.core.hamiltonian.Params params:
    :param nodes: The number of nodes
    :type nodes: int, optional
    :param gnorm: The gradient norm reached by the minimization
    :type gnorm: float, optional
    :param rho_barrier: Radius of the collision barrier
    :type rho_barrier: float, optional
    :return: Certificate
    """
    alpha = params.alpha
    t = np.arange(nodes) * loop.period / nodes
    w, dw, ddw = loop.planar(t), loop.velocity(t), loop.acceleration(t)
    x, y, dx, dy = w.real, w.imag, dw.real, dw.imag
    z = reconstruct_z(loop, project=True)(t)
    r2 = x * x + y * y
    q = r2 * r2 + z * z / 16
    rho6 = q ** 1.5
    dlam = -alpha * z / (16 * rho6)
    lam = (loop.period / (2 * math.pi)) * (spectral_antiderivative(nodes) @ dlam)
    r0x = ddw.real + lam * dy + .5 * dlam * y + 2 * alpha * x * r2 / rho6
    r0y = ddw.imag - lam * dx - .5 * dlam * x + 2 * alpha * y * r2 / rho6
    lambda0 = -np.sum(r0x * dy - r0y * dx) / np.sum(dx * dx + dy * dy)
    el = max(np.max(np.abs(r0x + lambda0 * dy)), np.max(np.abs(r0y - lambda0 * dx)))
    energy = .5 * np.abs(dw) ** 2 - alpha / np.sqrt(q)
    rho_min = float(np.min(q ** .25))
    return Certificate(action(loop, params, nodes), gnorm, float(np.max(np.abs(energy))), float(el),
                       float(np.max(np.abs(horizontality_defect(loop, t)))), s2_defect(loop, nodes), rho_min,
                       bool(rho_barrier and rho_min < rho_barrier), float(lambda0))


def _finite_difference_hessian(grad, theta):
    n = theta.size
    hess = np.zeros((n, n))
    for i in range(n):
        eps = 1e-6 * max(1., abs(theta[i]))
        step = np.zeros(n)
        step[i] = eps
        hess[:, i] = (grad(theta + step) - grad(theta - step)) / (2 * eps)
    return .5 * (hess + hess.T)


def _sup(g):
    return float(np.max(np.abs(g)))


def _polish(fun, theta, opts, descent, verbose=False):
    """
    Newton steps on the finite difference Hessian, halved until the gradient norm decreases, and the value too when
    ``descent`` is set

    :return: tuple - ``(theta, value, gradient)``
    """
    value, g = fun(theta)
    gnorm = _sup(g)
    count = Counter.from_verbose(verbose, 'Newton', opts.newton_steps)
    for i in range(opts.newton_steps):
        if gnorm <= opts.gtol:
            break
        hessian = _finite_difference_hessian(lambda th: fun(th)[1], theta)
        step = np.linalg.lstsq(hessian, -g, rcond=None)[0]
        for _ in range(30):
            trial_value, trial_g = fun(theta + step)
            trial_norm = _sup(trial_g)
            if trial_norm < gnorm and (not descent or trial_value <= value + 1e-12 * max(1., abs(value))):
                theta, value, g, gnorm = theta + step, trial_value, trial_g, trial_norm
                break
            step = .5 * step
        else:
            break
        logger.debug('Newton step %d: action %.15g, gradient %.3e', i, value, gnorm)
        count(i)
    count(opts.newton_steps - 1)
    return theta, value, g


def _bfgs(fun, theta, opts):
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', RuntimeWarning)
        result = scipy.optimize.minimize(fun, theta, jac=True, method='BFGS',
                                         options={'gtol': opts.gtol, 'maxiter': opts.max_iter})
    logger.debug('BFGS: %s after %d iterations', result.message, result.nit)
    return result.x


def _reduced_start(sym, opts):
    return opts.start == 'reduced' and sym.enforce_S1 and not sym.enforce_S2


def _critical_point(fun, theta, method, opts, verbose):
    if method == 'bfgs':
        return _polish(fun, _bfgs(fun, theta, opts), opts, True, verbose)
    return _polish(fun, theta, opts, False, verbose)


def minimize_action(loop0, sym=SymmetryClass(), opts=SearchOptions(), params=Params(), verbose=False):
    """
    Critical loop of the action in the symmetry class of ``loop0``. With ``sym.enforce_S2`` the half period defect
    is driven below ``opts.s2_tol`` by the multiplier updates, the weight of its square being multiplied by 10 each
    time the defect is not divided by 4.

    :param hkl.orbits.loop.LoopPath loop0: The initial guess, projected on the class first
    :param sym:
    :type sym: hkl.orbits.loop.SymmetryClass, optional
    :param opts:
    :type opts: SearchOptions, optional
    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :param verbose: If True or a string, displays a progress bar over the Newton steps
    :type verbose: bool or str, optional
    :return: hkl.orbits.loop.LoopPath - With its certificate attached
    :raises MaxIterations: When the gradient norm or the half period defect are not reached
    :raises CollapseToSingularity: When the collision barrier is active at the critical loop
    :raises UnresolvedOrbit: When the Euler-Lagrange residual or :math:`|H|` exceed ``opts.el_tol``
    """
    layout = _Layout(sym, opts.modes, loop0.period)
    theta = layout.pack(loop0)
    if not np.isfinite(layout.unpack(theta)[0]).all():
        raise InvalidParameter('the initial loop cannot be closed in its symmetry class')

    def gradient(theta, multiplier=None, mu=0.):
        c, z0 = layout.unpack(theta)
        if not np.all(np.isfinite(c)):
            return np.inf, np.zeros_like(theta)
        value, grad_c, grad_z0, _ = action_and_gradient(LoopPath(layout.period, layout.k, c, z0), params,
                                                        opts.nodes, opts.rho_barrier, mu, multiplier)
        return value, layout.gradient(theta, grad_c, grad_z0)

    method = opts.method
    if method == 'auto':
        method = 'newton' if _reduced_start(sym, opts) else 'bfgs'
    evaluations = Evaluations(gradient, 'action gradient')
    logger.info('%s search over %d unknowns', method, layout.size)
    if sym.enforce_S2:
        multiplier, mu, previous = np.zeros(opts.nodes), opts.mu_s2, math.inf
        for round_ in range(S2_ROUNDS):
            theta, value, g = _critical_point(lambda th: evaluations(th, multiplier, mu), theta, method, opts,
                                             verbose)
            defect = half_period_defect(layout.loop(theta), opts.nodes)
            sup_defect = _sup(defect)
            logger.debug('half period round %d: defect %.3e, weight %.3g, gradient %.3e', round_, sup_defect, mu,
                         _sup(g))
            if sup_defect <= opts.s2_tol and _sup(g) <= opts.gtol:
                break
            multiplier = multiplier + 2 * mu * defect
            if sup_defect > previous / 4:
                mu *= 10
            previous = sup_defect
        else:
            evaluations.report(logging.WARNING, 'half period defect {0:.3e}'.format(sup_defect))
            raise MaxIterations(layout.loop(theta), _sup(g))
    else:
        theta, value, g = _critical_point(evaluations, theta, method, opts, verbose)
    gnorm = _sup(g)
    evaluations.report(detail='action {0:.15g}, gradient {1:.3e}'.format(value, gnorm))
    loop = layout.loop(theta)
    if gnorm > opts.gtol:
        raise MaxIterations(loop, gnorm)
    cert = certificate(loop, params, opts.nodes, gnorm, opts.rho_barrier)
    if cert.barrier_active:
        raise CollapseToSingularity('the minimizing loop reaches rho = {0:.3e}'.format(cert.rho_min))
    loop = loop.with_certificate(cert)
    if max(cert.el_residual, cert.h_sup) > opts.el_tol:
        raise UnresolvedOrbit(loop, opts.el_tol)
    logger.info('converged: action %.15g, EL residual %.3e, sup |H| %.3e, half period defect %.3e', cert.action,
                cert.el_residual, cert.h_sup, cert.s2_defect)
    return loop


def initial_loop(params=Params(), sym=SymmetryClass(), opts=SearchOptions(), seed=None):
    """
    The zero energy orbit of :mod:`~hkl.orbits.zero_energy` when ``opts.start`` is ``reduced`` and the class
    contains it, the epicycle of :func:`~hkl.orbits.loop.seed_loop` otherwise, perturbed by ``opts.perturbation``

    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :param sym:
    :type sym: hkl.orbits.loop.SymmetryClass, optional
    :param opts:
    :type opts: SearchOptions, optional
    :param seed: Seed of ``numpy.random.default_rng``
    :type seed: int or None, optional
    :return: hkl.orbits.loop.LoopPath
    """
    if not _reduced_start(sym, opts):
        return seed_loop(params, sym, opts.modes, opts.period, opts.perturbation, seed)
    loop = project(zero_energy_orbit(params, opts.period, opts.modes), sym, opts.modes)
    if not opts.perturbation:
        return loop
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(loop.k.size)
    if not sym.reflection:
        noise = noise + 1j * rng.standard_normal(loop.k.size)
    others = (loop.k != 1) & (loop.k != -2)
    c = loop.c.copy()
    c[others] += opts.perturbation * np.abs(c[loop.k == 1][0]) * noise[others] / np.abs(loop.k[others]) ** 2
    c[loop.k == 1] = closure_coefficient(loop.k[loop.k != 1], c[loop.k != 1])
    if not np.all(np.isfinite(c)):
        raise InvalidParameter('the perturbation is too large to close the initial loop')
    return LoopPath(loop.period, loop.k, c, loop.z0)


def _search_seed(params, sym, opts, seed):
    return minimize_action(initial_loop(params, sym, opts, seed), sym, opts, params)


def multi_start(params=Params(), sym=SymmetryClass(), opts=SearchOptions(), seeds=(0,), workers=1):
    """
    Search from several perturbed initial loops, concurrently when ``workers > 1``, and keep the lowest action

    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :param sym:
    :type sym: hkl.orbits.loop.SymmetryClass, optional
    :param opts:
    :type opts: SearchOptions, optional
    :param seeds: Seeds of the perturbations
    :type seeds: sequence of int, optional
    :param workers: The number of processes
    :type workers: int, optional
    :return: hkl.orbits.loop.LoopPath
    """
    seeds = list(seeds)
    if not seeds:
        raise InvalidParameter('at least one seed is needed')
    found, errors = [], []
    if workers > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(_search_seed, params, sym, opts, seed): seed for seed in seeds}
            for future in as_completed(futures):
                try:
                    found.append((futures[future], future.result()))
                except HKLError as e:
                    logger.warning('seed %d failed: %s', futures[future], e)
                    errors.append(e)
    else:
        for seed in seeds:
            try:
                found.append((seed, _search_seed(params, sym, opts, seed)))
            except HKLError as e:
                logger.warning('seed %d failed: %s', seed, e)
                errors.append(e)
    if not found:
        raise errors[-1]
    seed, best = min(found, key=lambda item: (item[1].certificate.action, item[0]))
    logger.info('best seed %d with action %.15g', seed, best.certificate.action)
    return best
