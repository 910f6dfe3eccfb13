r"""
Horizontal loops in the Heisenberg group.

The planar part is a trigonometric polynomial :math:`w(t) = x + iy = \sum_k c_ke^{i\omega kt}`,
:math:`\omega = 2\pi / T`, and the height is its horizontal lift :math:`\dot{z} = \frac{1}{2}(x\dot{y} - y\dot{x})`.
Its Fourier coefficients are

.. math::
   d_m = \frac{\omega}{4}\sum_{k - j = m}(k + j)\bar{c}_jc_k, \qquad d_0 = \frac{\omega}{2}\sum_k k|c_k|^2

and the loop closes iff :math:`d_0 = 0`.

The symmetry :math:`\gamma(t + T/3) = R_{2\pi/3}\gamma(t)` holds iff only the modes :math:`k \equiv 1 \pmod 3` are
present. Real coefficients with :math:`z(0) = 0` give the reflection symmetry
:math:`\gamma(-t) = (x, -y, -z)(t)`, which makes :math:`z` odd. The half period antisymmetry
:math:`z(t + T/2) = -z(t)` holds iff :math:`d_m = 0` for the even :math:`m` and :math:`z` has zero mean. Under the
threefold symmetry it keeps the harmonics :math:`m \equiv 3 \pmod 6` of :math:`\dot{z}` only, a quadratic condition
on the :math:`c_k`: the two mode loops :math:`\{1, -2\}` satisfy it, the zero energy orbits of the class do not.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..core.hamiltonian import Params
from ..core.heisenberg import gauge
from ..errors import InvalidParameter, NonClosingZ, NonPositiveLambda

CLOSURE_TOL = 1e-12
"""Largest mean of :math:`\\dot{z}` accepted as closed"""

R_2PI_3 = np.array([[-.5, -math.sqrt(3) / 2, 0.],
                    [math.sqrt(3) / 2, -.5, 0.],
                    [0., 0., 1.]])
"""Rotation of angle :math:`2\\pi/3` about the z-axis"""


@dataclass(frozen=True)
class SymmetryClass:
    """
    :param bool enforce_S1: :math:`\\gamma(t + T/3) = R_{2\\pi/3}\\gamma(t)`, only the modes :math:`k \\equiv 1
        \\pmod 3`
    :param bool enforce_S2: :math:`z(t + T/2) = -z(t)`, the even harmonics of :math:`\\dot{z}` vanish and so does
        the mean of :math:`z`. The condition is quadratic in the coefficients and is imposed as a constraint of the
        minimization
    :param bool reflection: :math:`\\gamma(-t) = (x, -y, -z)(t)`, real coefficients and :math:`z(0) = 0`
    """
    enforce_S1: bool = True
    enforce_S2: bool = False
    reflection: bool = True

    def support(self, modes):
        """
        :param int modes: The largest :math:`|k|`
        :return: numpy.ndarray - The allowed modes, sorted
        """
        if modes < 1:
            raise InvalidParameter('modes must be at least 1, got {0!r}'.format(modes))
        k = np.arange(-modes, modes + 1)
        return k[k % 3 == 1] if self.enforce_S1 else k

    def to_dict(self):
        return {'S1': self.enforce_S1, 'S2': self.enforce_S2, 'reflection': self.reflection}


@dataclass(frozen=True, eq=False)
class LoopPath:
    """
    A closed horizontal curve

    :param float period: Positive
    :param numpy.ndarray k: The modes, distinct integers
    :param numpy.ndarray c: The complex coefficients of :math:`x + iy`
    :param float z0: :math:`z(0)`
    :param certificate: Set by the minimization
    :type certificate: hkl.orbits.search.Certificate or None, optional
    """
    period: float
    k: np.ndarray
    c: np.ndarray
    z0: float = 0.
    certificate: object = field(default=None, compare=False)

    def __post_init__(self):
        k = np.asarray(self.k, dtype=int)
        c = np.asarray(self.c, dtype=complex)
        if not (math.isfinite(self.period) and self.period > 0):
            raise InvalidParameter('the period must be positive, got {0!r}'.format(self.period))
        if k.ndim != 1 or k.shape != c.shape or np.unique(k).size != k.size:
            raise InvalidParameter('one coefficient per distinct mode is expected')
        if not (np.all(np.isfinite(c)) and math.isfinite(self.z0)):
            raise InvalidParameter('non finite coefficients')
        object.__setattr__(self, 'k', k)
        object.__setattr__(self, 'c', c)

    @property
    def omega(self):
        return 2 * math.pi / self.period

    @property
    def modes(self):
        return int(np.max(np.abs(self.k)))

    def _phases(self, t):
        return np.exp(1j * self.omega * np.multiply.outer(np.asarray(t, dtype=float), self.k))

    def planar(self, t):
        """
        :param array_like t:
        :return: numpy.ndarray - :math:`x + iy`
        """
        return self._phases(t) @ self.c

    def velocity(self, t):
        """
        :return: numpy.ndarray - :math:`\\dot{x} + i\\dot{y}`
        """
        return self._phases(t) @ (1j * self.omega * self.k * self.c)

    def acceleration(self, t):
        return self._phases(t) @ (-(self.omega * self.k) ** 2 * self.c)

    def evaluate(self, t, project=False):
        """
        :param array_like t:
        :param project: See :func:`reconstruct_z`
        :type project: bool, optional
        :return: tuple - ``(x, y, z)`` arrays
        """
        w = self.planar(t)
        return w.real, w.imag, reconstruct_z(self, project)(t)

    def with_certificate(self, certificate):
        return replace(self, certificate=certificate)


def z_coefficients(loop):
    """
    :param LoopPath loop:
    :return: tuple - ``(m, d)`` the modes and the coefficients of :math:`\\dot{z}`, ``m`` from ``-2N`` to ``2N``
    """
    n = loop.modes
    m = np.arange(-2 * n, 2 * n + 1)
    d = np.zeros(m.size, dtype=complex)
    weights = .25 * loop.omega * np.add.outer(loop.k, loop.k) * np.outer(loop.c.conj(), loop.c)
    np.add.at(d, np.subtract.outer(loop.k, loop.k).T + 2 * n, weights)
    return m, d


def reconstruct_z(loop, project=False):
    """
    Height of the horizontal lift by exact term-wise integration

    :param LoopPath loop:
    :param project: If True, the mean of :math:`\\dot{z}` is dropped instead of raising
    :type project: bool, optional
    :return: func - :math:`t \\mapsto z(t)`, works on arrays
    """
    m, d = z_coefficients(loop)
    zero = m.size // 2
    mean = d[zero].real
    if abs(mean) > CLOSURE_TOL and not project:
        raise NonClosingZ('the mean of dz/dt is {0:.3e}, the loop does not close'.format(mean))
    nonzero = m != 0
    m, d = m[nonzero], d[nonzero] / (1j * loop.omega * m[nonzero])
    omega, z0 = loop.omega, loop.z0

    def z(t):
        t = np.asarray(t, dtype=float)
        return z0 + (np.exp(1j * omega * np.multiply.outer(t, m)) @ d - np.sum(d)).real

    return z


def horizontality_defect(loop, t):
    """
    :param LoopPath loop:
    :param array_like t:
    :return: numpy.ndarray - :math:`\\frac{1}{2}(x\\dot{y} - y\\dot{x}) - \\dot{z}`, with :math:`\\dot{z}` from the
        coefficients of the reconstructed height
    """
    m, d = z_coefficients(loop)
    w, dw = loop.planar(t), loop.velocity(t)
    dz = (np.exp(1j * loop.omega * np.multiply.outer(np.asarray(t, dtype=float), m)) @ d).real
    return .5 * (w.real * dw.imag - w.imag * dw.real) - dz


def s2_defect(loop, nodes=512):
    """
    :return: float - Sup over the nodes of :math:`|z(t + T/2) + z(t)|`
    """
    t = np.arange(nodes) * loop.period / nodes
    z = reconstruct_z(loop, project=True)
    return float(np.max(np.abs(z(t + loop.period / 2) + z(t))))


def rotate_loop(loop, rotation=R_2PI_3):
    """
    Apply a rotation about the z-axis to the curve

    :param LoopPath loop:
    :param rotation: A 3 by 3 rotation matrix about the z-axis
    :type rotation: numpy.ndarray, optional
    :return: LoopPath
    """
    factor = complex(rotation[0, 0], rotation[1, 0])
    return LoopPath(loop.period, loop.k, factor * loop.c, loop.z0)


def shifted(loop, shift):
    """
    Time shifted loop :math:`t \\mapsto \\gamma(t + shift)`

    :param LoopPath loop:
    :param float shift:
    :return: LoopPath
    """
    z0 = float(reconstruct_z(loop, project=True)(shift))
    return LoopPath(loop.period, loop.k, loop.c * np.exp(1j * loop.omega * loop.k * shift), z0)


def dilate_loop(loop, lam):
    """
    The dilated loop :math:`\\gamma_\\lambda(t) = \\delta_\\lambda(\\gamma(\\lambda^{-2}t))`, of period
    :math:`\\lambda^2T`

    :param LoopPath loop:
    :param float lam: Positive
    :return: LoopPath
    """
    if not lam > 0:
        raise NonPositiveLambda('dilation factor must be positive, got {0!r}'.format(lam))
    lam2 = lam * lam
    return LoopPath(lam2 * loop.period, loop.k, lam * loop.c, lam2 * loop.z0)


def size(loop, nodes=512):
    """
    Size of the loop, the maximum of the gauge over the nodes, homogeneous of degree 1 under dilation

    :return: float
    """
    t = np.arange(nodes) * loop.period / nodes
    x, y, z = loop.evaluate(t, project=True)
    return float(np.max(gauge(x, y, z)))


def closure_coefficient(k, c):
    """
    The real :math:`c_1` making :math:`\\sum_k k|c_k|^2 = 0`

    :param numpy.ndarray k: The other modes
    :param numpy.ndarray c: Their coefficients
    :return: float - NaN when no real solution exists
    """
    s = -np.sum(k * np.abs(c) ** 2)
    return math.sqrt(s) if s > 0 else math.nan


def seed_loop(params=Params(), sym=SymmetryClass(), modes=12, period=2 * math.pi, perturbation=0., seed=None):
    r"""
    Three-fold symmetric initial guess :math:`w = b(\sqrt{2}e^{i\omega t} + e^{-2i\omega t})`, closed, with the scale
    minimizing the action of the family: since the kinetic and the potential parts scale as :math:`b^2` and
    :math:`b^{-2}`, the best scale is :math:`b^4 = A_U / A_K` for the unit shape.

    :param params:
    :type params: hkl.core.hamiltonian.Params, optional
    :param sym:
    :type sym: SymmetryClass, optional
    :param modes: The largest :math:`|k|`
    :type modes: int, optional
    :param period:
    :type period: float, optional
    :param perturbation: Relative size of the random perturbation of the other modes
    :type perturbation: float, optional
    :param seed: Seed of ``numpy.random.default_rng``
    :type seed: int or None, optional
    :return: LoopPath
    """
    from .action import action_parts

    k = sym.support(modes)
    if 1 not in k or -2 not in k:
        raise InvalidParameter('the seed needs the modes 1 and -2, got modes = {0}'.format(modes))
    c = np.zeros(k.size, dtype=complex)
    c[k == -2] = 1.
    if perturbation:
        rng = np.random.default_rng(seed)
        others = (k != 1) & (k != -2)
        noise = rng.standard_normal(k.size)
        if not sym.reflection:
            noise = noise + 1j * rng.standard_normal(k.size)
        c[others] = perturbation * noise[others] / np.abs(k[others]).clip(1)
    c[k == 1] = closure_coefficient(k[k != 1], c[k != 1])
    if not np.all(np.isfinite(c)):
        raise InvalidParameter('the perturbation is too large to close the seed loop')
    unit = LoopPath(period, k, c)
    kinetic_part, potential_part = action_parts(unit, params)
    b = (potential_part / kinetic_part) ** .25
    return LoopPath(period, k, b * c)
