r"""
Kepler dynamics on the integer line.

The Hamiltonian :math:`H(n, p) = \frac{1}{2}p^2 + |n|` gives the difference equations

.. math::
   n_{j+1} = n_j + p_j, \qquad p_{j+1} = p_j - \mathrm{sgn}(n)

with :math:`\mathrm{sgn}(0) = -1`. In the ``drift-kick`` variant the kick uses the new position, which makes the map
an area preserving bijection of :math:`\mathbb{Z}^2`; the ``explicit`` variant uses the old one.
"""

import logging
import operator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import InvalidParameter, NoRecurrence
from ..misc.counter import Counter

logger = logging.getLogger(__name__)

VARIANTS = ('drift-kick', 'explicit')


@dataclass(frozen=True)
class LatticeState:
    """
    :param int n: Position
    :param int p: Momentum
    """
    n: int
    p: int

    def __post_init__(self):
        try:
            object.__setattr__(self, 'n', operator.index(self.n))
            object.__setattr__(self, 'p', operator.index(self.p))
        except TypeError as e:
            raise InvalidParameter('lattice states are integers, got {0!r}'.format((self.n, self.p))) from e


def sgn(n):
    """
    :return: int - 1 if n > 0, else -1
    """
    return 1 if n > 0 else -1


def energy(s):
    """
    :param LatticeState s:
    :return: fractions.Fraction - :math:`\\frac{1}{2}p^2 + |n|`
    """
    return Fraction(s.p * s.p, 2) + abs(s.n)


def _check_variant(variant):
    if variant not in VARIANTS:
        raise InvalidParameter('unknown variant {0!r}, expected one of {1}'.format(variant, VARIANTS))


def z_step(s, variant='drift-kick'):
    """
    :param LatticeState s:
    :param variant: ``drift-kick`` or ``explicit``
    :type variant: str, optional
    :return: LatticeState
    """
    _check_variant(variant)
    n = s.n + s.p
    return LatticeState(n, s.p - sgn(n if variant == 'drift-kick' else s.n))


def z_inverse_step(s, variant='drift-kick'):
    """
    Exact inverse of :func:`z_step`. The explicit map is injective but not onto, some states have no preimage.

    :param LatticeState s:
    :param variant: ``drift-kick`` or ``explicit``
    :type variant: str, optional
    :return: LatticeState
    """
    _check_variant(variant)
    if variant == 'drift-kick':
        p = s.p + sgn(s.n)
        return LatticeState(s.n - p, p)
    for sign in (1, -1):
        p = s.p + sign
        if sgn(s.n - p) == sign:
            return LatticeState(s.n - p, p)
    raise InvalidParameter('{0} has no preimage under the explicit map'.format(s))


@dataclass(frozen=True)
class ZOrbit:
    """
    :param tuple states: The visited states, the initial one first
    :param period: The recurrence time, None if the initial state did not recur
    :type period: int or None
    :param tuple extent: ``(n_min, n_max, p_min, p_max)``
    """
    states: tuple
    period: object
    extent: tuple

    def energies(self):
        """
        :return: list - The energy trace, exact fractions
        """
        return [energy(s) for s in self.states]

    def to_csv(self, path):
        """
        Write the ``j,n,p`` rows

        :param str path:
        """
        rows = np.array([(j, s.n, s.p) for j, s in enumerate(self.states)], dtype=np.int64).reshape(-1, 3)
        np.savetxt(path, rows, fmt='%d', delimiter=',', header='j,n,p', comments='')


def z_orbit(s0, max_steps, variant='drift-kick', strict=True):
    """
    Iterate until the initial state recurs

    :param LatticeState s0:
    :param int max_steps: At least 1
    :param variant: ``drift-kick`` or ``explicit``
    :type variant: str, optional
    :param strict: If True, a missing recurrence raises NoRecurrence, else the orbit is returned with no period
    :type strict: bool, optional
    :return: ZOrbit
    """
    if max_steps < 1:
        raise InvalidParameter('max_steps must be at least 1, got {0!r}'.format(max_steps))
    states, s, period = [s0], s0, None
    for j in range(1, max_steps + 1):
        s = z_step(s, variant)
        if s == s0:
            period = j
            break
        states.append(s)
    ns, ps = [s.n for s in states], [s.p for s in states]
    orbit = ZOrbit(tuple(states), period, (min(ns), max(ns), min(ps), max(ps)))
    if period is None and strict:
        raise NoRecurrence(list(states))
    return orbit


def _scan_row(n, radius, max_steps, variant):
    periods = []
    for p in range(-radius, radius + 1):
        periods.append(z_orbit(LatticeState(n, p), max_steps, variant, strict=False).period)
    return n, periods


@dataclass(frozen=True)
class ZGridScan:
    """
    :param int radius: The scanned states have :math:`|n|, |p| \\leq radius`
    :param int total:
    :param int recurrent:
    :param int max_period:
    :param tuple failures: The states without recurrence
    """
    radius: int
    total: int
    recurrent: int
    max_period: int
    failures: tuple


def z_grid_scan(radius, max_steps=10 ** 6, variant='drift-kick', workers=1, verbose=False):
    """
    Recurrence census over the square of initial states :math:`|n|, |p| \\leq radius`

    :param int radius:
    :param max_steps: Maximum number of iterations per orbit
    :type max_steps: int, optional
    :param variant: ``drift-kick`` or ``explicit``
    :type variant: str, optional
    :param workers: The number of processes, the rows of the grid are distributed among them
    :type workers: int, optional
    :param verbose: If True or a string, displays a progress bar
    :type verbose: bool or str, optional
    :return: ZGridScan
    """
    _check_variant(variant)
    rows = range(-radius, radius + 1)
    count = Counter.from_verbose(verbose, 'Z scan', len(rows))
    results = {}
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for i, (n, periods) in enumerate(executor.map(_scan_row, rows, [radius] * len(rows),
                                                          [max_steps] * len(rows), [variant] * len(rows))):
                results[n] = periods
                count(i)
    else:
        for i, n in enumerate(rows):
            results[n] = _scan_row(n, radius, max_steps, variant)[1]
            count(i)
    failures = tuple(LatticeState(n, p) for n in rows for p, period in zip(range(-radius, radius + 1), results[n])
                     if period is None)
    found = [period for n in rows for period in results[n] if period is not None]
    scan = ZGridScan(radius, len(rows) ** 2, len(found), max(found, default=0), failures)
    logger.info('%d / %d recurrent orbits, longest period %d', scan.recurrent, scan.total, scan.max_period)
    return scan


@dataclass(frozen=True)
class FundamentalCheck:
    """
    :param dict laplacian: :math:`\\Delta U(n)` for :math:`|n| \\leq N`, exact fractions
    :param bool ok: Whether :math:`\\Delta U = -\\delta_0`
    """
    laplacian: dict
    ok: bool


def z_fundamental_check(big_n):
    """
    Check that :math:`U(n) = -\\frac{1}{2}|n|` satisfies :math:`U(n + 1) - 2U(n) + U(n - 1) = -\\delta_0(n)`

    :param int big_n: At least 1
    :return: FundamentalCheck
    """
    if big_n < 1:
        raise InvalidParameter('N must be at least 1, got {0!r}'.format(big_n))

    def u(n):
        return -Fraction(abs(n), 2)

    laplacian = {n: u(n + 1) - 2 * u(n) + u(n - 1) for n in range(-big_n, big_n + 1)}
    return FundamentalCheck(laplacian, all(v == (-1 if n == 0 else 0) for n, v in laplacian.items()))
