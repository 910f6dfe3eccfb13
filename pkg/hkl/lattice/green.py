r"""
Potential kernel of the square lattice.

The kernel :math:`a` is normalized by :math:`a(0, 0) = 0` and :math:`\Delta a = 4\delta_0` for the graph Laplacian
:math:`\Delta f(\ell) = \sum_{d(\ell, \ell') = 1}(f(\ell') - f(\ell))`, so that :math:`a(1, 0) = 1` and
:math:`a \geq 0`. The fundamental solution used in the lattice Lagrangian is :math:`U = -a/4`, with
:math:`\Delta U = -\delta_0` like :math:`U(n) = -\frac{1}{2}|n|` on :math:`\mathbb{Z}`.

Every value is :math:`r + s/\pi` with rational :math:`r, s`. The recursion starts from the diagonal

.. math::
   a(k, k) = \frac{4}{\pi}\sum_{j=1}^{k}\frac{1}{2j - 1}

and sweeps the stencil :math:`\Delta a = 0` away from it in exact arithmetic. The independent quadrature is

.. math::
   a(m, n) = \frac{2}{\pi}\int_0^\pi \frac{1 - \beta^{|n|}\cos(m\theta)}{\sqrt{c^2 - 1}}d\theta, \qquad
   c = 2 - \cos\theta, \quad \beta = c - \sqrt{c^2 - 1}

`Lattice Green's function <https://en.wikipedia.org/wiki/Lattice_Green_function>`_ on Wikipedia.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.integrate

from ..errors import InvalidParameter, QuadratureNonconvergence, RadiusExceeded

RECURSION_MAX_RADIUS = 64
"""Largest radius of the exact recursion"""

QUADRATURE_TOL = 1e-10
"""Largest error estimate accepted from the quadrature"""

METHODS = ('recursion', 'quadrature')


def _arctan_inverse(x, unity):
    """arctan(1/x) scaled by ``unity``, in integer arithmetic"""
    total = term = unity // x
    x2, k, sign = x * x, 1, -1
    while term:
        term //= x2
        k += 2
        total += sign * (term // k)
        sign = -sign
    return total


@lru_cache(maxsize=4)
def inverse_pi(digits):
    """
    :param int digits: The number of decimal digits
    :return: fractions.Fraction - :math:`1/\\pi` to the given precision, from Machin's formula
    """
    unity = 10 ** (digits + 10)
    pi = 4 * (4 * _arctan_inverse(5, unity) - _arctan_inverse(239, unity))
    return Fraction(unity, pi)


@lru_cache(maxsize=4)
def _exact_octant(radius):
    """Exact pairs (r, s) for 0 <= n <= m <= radius"""
    a = {(0, 0): (Fraction(0), Fraction(0))}
    harmonic = Fraction(0)
    for k in range(1, radius + 1):
        harmonic += Fraction(1, 2 * k - 1)
        a[k, k] = (Fraction(0), 4 * harmonic)

    def get(m, n):
        m, n = abs(m), abs(n)
        return a[max(m, n), min(m, n)]

    for d in range(1, radius + 1):
        for k in range(0, radius - d + 1):
            if d == 1:
                if k == 0:
                    a[1, 0] = (Fraction(1), Fraction(0))
                    continue
                diagonal, below = get(k, k), get(k, k - 1)
                a[k + 1, k] = (2 * diagonal[0] - below[0], 2 * diagonal[1] - below[1])
                continue
            terms = (get(k + d - 1, k), get(k + d - 2, k), get(k + d - 1, k + 1), get(k + d - 1, k - 1))
            a[k + d, k] = tuple(4 * terms[0][i] - terms[1][i] - terms[2][i] - terms[3][i] for i in range(2))
    return a


def green_exact(m, n):
    """
    :param int m:
    :param int n:
    :return: tuple - The exact rationals ``(r, s)`` with :math:`a(m, n) = r + s/\\pi`
    """
    m, n = abs(m), abs(n)
    radius = max(m, n)
    if radius > RECURSION_MAX_RADIUS:
        raise RadiusExceeded('the recursion is limited to radius {0}, got {1}'.format(RECURSION_MAX_RADIUS, radius))
    return _exact_octant(max(radius, 1))[max(m, n), min(m, n)]


def _to_float(pair, digits):
    return float(pair[0] + pair[1] * inverse_pi(digits))


def green_quadrature(m, n):
    """
    :param int m:
    :param int n:
    :return: float - :math:`a(m, n)` by adaptive quadrature
    """
    n = abs(n)

    def integrand(theta):
        c = 2 - math.cos(theta)
        s = math.sqrt((c - 1) * (c + 1))
        if s == 0:
            return float(n)
        log_beta = -math.log1p(c - 1 + s)
        return (-math.expm1(n * log_beta) + math.exp(n * log_beta) * 2 * math.sin(m * theta / 2) ** 2) / s

    value, error, *rest = scipy.integrate.quad(integrand, 0., math.pi, epsabs=1e-13, epsrel=1e-13,
                                               limit=500, full_output=True)
    if len(rest) > 1 or error > QUADRATURE_TOL:
        raise QuadratureNonconvergence('quadrature of a({0}, {1}) failed, error {2:.3e}'.format(m, n, error))
    return 2 * value / math.pi


def green2d(m, n, method='recursion'):
    """
    :param int m:
    :param int n:
    :param method: ``recursion`` or ``quadrature``
    :type method: str, optional
    :return: float - :math:`a(m, n)`
    """
    if method == 'recursion':
        return _to_float(green_exact(m, n), 30 + max(abs(m), abs(n)))
    if method == 'quadrature':
        return green_quadrature(m, n)
    raise InvalidParameter('unknown method {0!r}, expected one of {1}'.format(method, METHODS))


@dataclass(frozen=True, eq=False)
class GreenTable:
    """
    Values on the square :math:`|m|, |n| \\leq R`

    :param int radius: R
    :param numpy.ndarray values: ``values[m + R, n + R] = a(m, n)``, of shape (2R + 1, 2R + 1)
    :param str method: How the values were computed
    :param str normalization: The normalization of the kernel
    """
    radius: int
    values: np.ndarray
    method: str = 'recursion'
    normalization: str = 'a(0,0)=0, Laplacian 4 delta'

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (2 * self.radius + 1,) * 2:
            raise InvalidParameter('a table of radius {0} has {1} values per side'.format(self.radius,
                                                                                           2 * self.radius + 1))
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)

    @classmethod
    def from_function(cls, f, radius, method='function', normalization=''):
        """
        :param func f: Maps ``(m, n)`` to a float
        :param int radius:
        :return: GreenTable
        """
        r = range(-radius, radius + 1)
        return cls(radius, np.array([[f(m, n) for n in r] for m in r]), method, normalization)

    def __contains__(self, point):
        return abs(point[0]) <= self.radius and abs(point[1]) <= self.radius

    def __call__(self, m, n):
        if (m, n) not in self:
            raise RadiusExceeded('({0}, {1}) is outside of the table of radius {2}'.format(m, n, self.radius))
        return float(self.values[m + self.radius, n + self.radius])

    def to_csv(self, path):
        """
        Write the ``m,n,a`` rows

        :param str path:
        """
        r = np.arange(-self.radius, self.radius + 1)
        m, n = np.meshgrid(r, r, indexing='ij')
        rows = np.column_stack((m.ravel(), n.ravel(), self.values.ravel()))
        np.savetxt(path, rows, fmt=['%d', '%d', '%.17g'], delimiter=',', header='m,n,a', comments='')


def green_table(radius, method='recursion'):
    """
    :param int radius:
    :param method: ``recursion`` or ``quadrature``
    :type method: str, optional
    :return: GreenTable
    """
    if radius < 0:
        raise InvalidParameter('the radius must be non negative, got {0!r}'.format(radius))
    if method == 'recursion':
        if radius > RECURSION_MAX_RADIUS:
            raise RadiusExceeded('the recursion is limited to radius {0}'.format(RECURSION_MAX_RADIUS))
        octant, digits = _exact_octant(max(radius, 1)), 30 + radius
        values = {key: _to_float(pair, digits) for key, pair in octant.items()}

        def f(m, n):
            return values[max(abs(m), abs(n)), min(abs(m), abs(n))]
    elif method == 'quadrature':
        cache = {}

        def f(m, n):
            key = max(abs(m), abs(n)), min(abs(m), abs(n))
            if key not in cache:
                cache[key] = green_quadrature(*key)
            return cache[key]
    else:
        raise InvalidParameter('unknown method {0!r}, expected one of {1}'.format(method, METHODS))
    return GreenTable.from_function(f, radius, method, GreenTable.normalization)


def green_csv(radius, path, method='recursion'):
    """
    :param int radius:
    :param str path:
    :param method: ``recursion`` or ``quadrature``
    :type method: str, optional
    :return: GreenTable - The table written
    """
    table = green_table(radius, method)
    table.to_csv(path)
    return table


def laplacian2d(table, point):
    """
    Four neighbors graph Laplacian

    :param GreenTable table:
    :param tuple point: ``(m, n)``
    :return: float
    """
    m, n = point
    centre = table(m, n)
    return sum(table(m + dm, n + dn) for dm, dn in ((1, 0), (-1, 0), (0, 1), (0, -1))) - 4 * centre
