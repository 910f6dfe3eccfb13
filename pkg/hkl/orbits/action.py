r"""
Discrete action of a horizontal loop and its exact gradient.

.. math::
   A(\gamma) = \int_0^T \frac{1}{2}\left(\dot{x}^2 + \dot{y}^2\right) + \frac{\alpha}{\rho^2}\,dt

The integral is the trapezoidal rule on equispaced nodes, spectrally accurate for periodic integrands. At the nodes
the height is :math:`Z = z_0 + L\dot{z}`, with :math:`L` the spectral antiderivative vanishing at :math:`t = 0`, so
the gradient with respect to the coefficients is obtained by the chain rule through :math:`L^T`.

During the minimization a barrier :math:`(\rho_b/\rho - 1)^2` is added where :math:`\rho < \rho_b`, and optionally the
augmented Lagrangian terms :math:`h\sum_i\lambda_iD_i + \mu h\sum_iD_i^2` of the defect
:math:`D_i = Z_i + Z_{i + M/2}` of :math:`z(t + T/2) = -z(t)`. With :math:`M > 4N` the nodal defect vanishes iff
the loop satisfies the condition exactly.
"""

import math
from functools import lru_cache

import numpy as np
import scipy.integrate

from .loop import reconstruct_z
from ..errors import InvalidParameter, QuadratureNonconvergence, SingularOrigin

NODES = 512
"""Default number of quadrature nodes"""

RHO_SINGULAR = 1e-8
"""Nodes closer to the origin make the action singular"""


@lru_cache(maxsize=8)
def spectral_antiderivative(nodes):
    """
    :param int nodes: The number of equispaced nodes on a period of length :math:`2\\pi`
    :return: numpy.ndarray - The matrix mapping the nodal values of a zero mean function to those of its antiderivative
        vanishing at the first node, of shape (nodes, nodes)
    """
    m = np.fft.fftfreq(nodes, 1. / nodes)
    g = np.zeros(nodes, dtype=complex)
    keep = (m != 0) & (np.abs(m) != nodes / 2)
    g[keep] = 1 / (1j * m[keep])
    raw = np.fft.ifft(g[:, None] * np.fft.fft(np.eye(nodes), axis=0), axis=0).real
    return raw - raw[0]


def _check_nodes(nodes):
    if nodes < 8 or nodes % 2:
        raise InvalidParameter('the number of nodes must be even and at least 8, got {0!r}'.format(nodes))


def _nodal(loop, nodes):
    _check_nodes(nodes)
    h = loop.period / nodes
    t = np.arange(nodes) * h
    e = np.exp(1j * loop.omega * np.outer(t, loop.k))
    w = e @ loop.c
    dw = e @ (1j * loop.omega * loop.k * loop.c)
    x, y, dx, dy = w.real, w.imag, dw.real, dw.imag
    dz = .5 * (x * dy - y * dx)
    z = loop.z0 + (loop.period / (2 * math.pi)) * (spectral_antiderivative(nodes) @ dz)
    return h, e, x, y, z, dx, dy


def action_parts(loop, params, nodes=NODES):
    """
    :param hkl.orbits.loop.LoopPath loop:
    :param hkl.core.hamiltonian.Params params:
    :param nodes: The number of quadrature nodes
    :type nodes: int, optional
    :return: tuple - The kinetic and the potential parts of the action
    """
    h, _, x, y, z, dx, dy = _nodal(loop, nodes)
    r2 = x * x + y * y
    rho2 = np.sqrt(r2 * r2 + z * z / 16)
    if np.min(rho2) < RHO_SINGULAR ** 2:
        raise SingularOrigin('a quadrature node is at distance {0:.3e} of the origin'.format(np.sqrt(np.min(rho2))))
    return .5 * h * np.sum(dx * dx + dy * dy), h * np.sum(params.alpha / rho2)


def action(loop, params, nodes=NODES):
    """
    :param hkl.orbits.loop.LoopPath loop: A closed loop
    :param hkl.core.hamiltonian.Params params:
    :param nodes: The number of quadrature nodes
    :type nodes: int, optional
    :return: float - :math:`\\int_0^T K + U\\,dt`
    """
    return float(sum(action_parts(loop, params, nodes)))


def action_quad(loop, params, rtol=1e-12):
    """
    Independent evaluation of the action by adaptive quadrature on the exact height

    :param hkl.orbits.loop.LoopPath loop:
    :param hkl.core.hamiltonian.Params params:
    :param rtol: Relative tolerance
    :type rtol: float, optional
    :return: float
    """
    z = reconstruct_z(loop)

    def integrand(t):
        w, dw = loop.planar(t), loop.velocity(t)
        r2 = abs(w) ** 2
        return .5 * abs(dw) ** 2 + params.alpha / math.sqrt(r2 * r2 + z(t) ** 2 / 16)

    value, error, *rest = scipy.integrate.quad(integrand, 0., loop.period, epsabs=0., epsrel=rtol, limit=500,
                                               full_output=True)
    if len(rest) > 1:
        raise QuadratureNonconvergence(rest[1])
    return value


def half_period_defect(loop, nodes=NODES):
    """
    :param hkl.orbits.loop.LoopPath loop:
    :param nodes: The number of nodes, even
    :type nodes: int, optional
    :return: numpy.ndarray - :math:`z(t_i) + z(t_i + T/2)` at the nodes
    """
    z = _nodal(loop, nodes)[4]
    return z + np.roll(z, -nodes // 2)


def action_and_gradient(loop, params, nodes=NODES, rho_barrier=0., mu_s2=0., s2_multiplier=None):
    """
    Action with the optional barrier and half period terms, and its gradient

    :param hkl.orbits.loop.LoopPath loop:
    :param hkl.core.hamiltonian.Params params:
    :param nodes: The number of quadrature nodes, even
    :type nodes: int, optional
    :param rho_barrier: Radius below which the barrier is active, 0 to disable
    :type rho_barrier: float, optional
    :param mu_s2: Weight of the quadratic half period term
    :type mu_s2: float, optional
    :param s2_multiplier: The nodal multipliers of the half period defect
    :type s2_multiplier: numpy.ndarray, optional
    :return: tuple - ``(value, grad_c, grad_z0, rho_min)``, ``grad_c[j]`` is
        :math:`\\partial A / \\partial \\mathrm{Re}\\,c_j + i\\,\\partial A / \\partial \\mathrm{Im}\\,c_j`
    """
    h, e, x, y, z, dx, dy = _nodal(loop, nodes)
    alpha = params.alpha
    r2 = x * x + y * y
    q = r2 * r2 + z * z / 16
    rho = q ** .25
    rho_min = float(np.min(rho))
    if rho_min < RHO_SINGULAR and not rho_barrier:
        raise SingularOrigin('a quadrature node is at distance {0:.3e} of the origin'.format(rho_min))
    q32 = q ** -1.5
    value = h * np.sum(.5 * (dx * dx + dy * dy) + alpha / np.sqrt(q))
    fx, fy, fz = -2 * alpha * x * r2 * q32, -2 * alpha * y * r2 * q32, -alpha * z * q32 / 16
    if rho_barrier and rho_min < rho_barrier:
        active = rho < rho_barrier
        ratio = np.where(active, rho_barrier / rho, 1.)
        value += h * np.sum((ratio - 1) ** 2)
        db = np.where(active, -2 * (ratio - 1) * ratio / rho, 0.)
        rho3 = rho ** 3
        fx, fy, fz = fx + db * x * r2 / rho3, fy + db * y * r2 / rho3, fz + db * z / (32 * rho3)
    gz = h * fz
    if mu_s2 or s2_multiplier is not None:
        defect = z + np.roll(z, -nodes // 2)
        value += mu_s2 * h * np.sum(defect * defect)
        gz = gz + 4 * mu_s2 * h * defect
        if s2_multiplier is not None:
            value += h * np.sum(s2_multiplier * defect)
            gz = gz + h * (s2_multiplier + np.roll(s2_multiplier, nodes // 2))
    big_g = (loop.period / (2 * math.pi)) * (spectral_antiderivative(nodes).T @ gz)
    ax, ay = h * fx + .5 * dy * big_g, h * fy - .5 * dx * big_g
    adx, ady = h * dx - .5 * y * big_g, h * dy + .5 * x * big_g
    conj = e.conj().T
    grad_c = conj @ (ax + 1j * ay) - 1j * loop.omega * loop.k * (conj @ (adx + 1j * ady))
    return float(value), grad_c, float(np.sum(gz)), rho_min
