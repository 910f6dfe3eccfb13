r"""
Discrete action minimization on :math:`\mathbb{Z}^2`.

A path :math:`\gamma: \{0, \dots, T\} \to \mathbb{Z}^2` has the action

.. math::
   A(\gamma) = \sum_{t=0}^{T-1}\frac{1}{2}|\gamma(t + 1) - \gamma(t)|_1^2 + \alpha\sum_{t=0}^{T}U(\gamma(t)),
   \qquad U = -\frac{a}{4}

Version 1 allows any jump, version 2 only the continuous paths, whose steps have length 0 or 1. The minimum, the
exact number of minimizers and one of them are computed by dynamic programming over (time, vertex) on a finite
window: the reachable diamond for version 2. In version 1 a path of total length :math:`L` has a kinetic part of at
least :math:`L^2/2T`, and the potential of its interior vertices is bounded below by the largest kernel value on the
:math:`\ell^1` ball it stays in. Any path cheaper than an incumbent then fits in the set
:math:`|p - \gamma(0)|_1 + |p - \gamma(T)|_1 \leq L_{max}` and jumps by at most :math:`\sqrt{2K_{max}}`.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .green import RECURSION_MAX_RADIUS, green_table
from ..errors import Infeasible, InvalidParameter, RadiusExceeded
from ..misc.counter import Counter

logger = logging.getLogger(__name__)

TIE_TOL = 1e-12
"""Relative tolerance of the action ties when the potential is irrational"""

VERSIONS = ('v1', 'v2')

EULER_GAMMA = 0.5772156649015329

ASYMPTOTIC_SLACK = 1e-3
"""Added to the asymptotic expansion of the kernel beyond the exact recursion"""


def l1(a, b):
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


@dataclass(frozen=True)
class LatticePath:
    """
    :param tuple vertices: The points :math:`\\gamma(0), \\dots, \\gamma(T)`
    :param str version: ``v1`` or ``v2``
    """
    vertices: tuple
    version: str = 'v2'

    def __post_init__(self):
        vertices = tuple((int(m), int(n)) for m, n in self.vertices)
        if not vertices:
            raise InvalidParameter('a path has at least one vertex')
        if self.version not in VERSIONS:
            raise InvalidParameter('unknown version {0!r}, expected one of {1}'.format(self.version, VERSIONS))
        if self.version == 'v2' and any(l1(a, b) > 1 for a, b in zip(vertices, vertices[1:])):
            raise InvalidParameter('a continuous path moves by at most one edge per step')
        object.__setattr__(self, 'vertices', vertices)

    @property
    def duration(self):
        return len(self.vertices) - 1


def _potential(alpha, table):
    if alpha == 0:
        return lambda point: 0
    return lambda point: -alpha * table(*point) / 4


def path_action(path, alpha=0., table=None):
    """
    :param LatticePath path:
    :param alpha: The coupling, non negative
    :type alpha: float, optional
    :param table: The potential kernel, built to the needed radius when None
    :type table: hkl.lattice.green.GreenTable, optional
    :return: fractions.Fraction or float - Exact when :math:`\\alpha = 0`
    """
    if alpha and table is None:
        table = green_table(max(max(abs(m), abs(n)) for m, n in path.vertices))
    u = _potential(alpha, table)
    kinetic = sum(Fraction(l1(a, b) ** 2, 2) for a, b in zip(path.vertices, path.vertices[1:]))
    return kinetic + sum(u(v) for v in path.vertices) if alpha else kinetic


@dataclass(frozen=True)
class DPResult:
    """
    :param min_action: Exact fraction when :math:`\\alpha = 0`, float otherwise
    :param int count: The number of minimizing paths
    :param LatticePath witness: One of them
    """
    min_action: object
    count: int
    witness: LatticePath

    def to_text(self):
        """
        :return: str - ``min_action``, ``count`` and ``witness`` lines
        """
        vertices = ' '.join('({0},{1})'.format(m, n) for m, n in self.witness.vertices)
        return 'min_action = {0:.17g}\ncount = {1:d}\nwitness = {2}\nversion = {3}\n'.format(
            float(self.min_action), self.count, vertices, self.witness.version)


@lru_cache(maxsize=8)
def _ball_maxima(radius):
    """Largest kernel value on the l1 ball of each radius up to ``radius``"""
    table = green_table(radius)
    maxima = [0.] * (radius + 1)
    for m in range(-radius, radius + 1):
        for n in range(-radius, radius + 1):
            r = abs(m) + abs(n)
            if r <= radius:
                maxima[r] = max(maxima[r], table(m, n))
    for r in range(1, radius + 1):
        maxima[r] = max(maxima[r], maxima[r - 1])
    return tuple(maxima)


def kernel_bound(radius):
    """
    :param int radius:
    :return: float - An upper bound of :math:`a` on the :math:`\\ell^1` ball of the given radius, exact up to
        :data:`~hkl.lattice.green.RECURSION_MAX_RADIUS` and from the asymptotic expansion beyond
    """
    if radius <= RECURSION_MAX_RADIUS:
        return _ball_maxima(min(RECURSION_MAX_RADIUS, max(16, 1 << max(radius - 1, 0).bit_length())))[radius]
    asymptotic = 2 / math.pi * (math.log(radius) + EULER_GAMMA + 1.5 * math.log(2)) + ASYMPTOTIC_SLACK
    return max(_ball_maxima(RECURSION_MAX_RADIUS)[-1], asymptotic)


def v1_budget(v0, v1, big_t, alpha, incumbent, u):
    """
    Bounds on the paths of version 1 whose action does not exceed ``incumbent``

    :param tuple v0:
    :param tuple v1:
    :param int big_t:
    :param float alpha:
    :param incumbent: The action of any path joining the endpoints
    :param func u: The potential
    :return: tuple - ``(kinetic, length)``, the largest kinetic part and total length of such a path
    """
    norms = abs(v0[0]) + abs(v0[1]), abs(v1[0]) + abs(v1[1])
    fixed = float(incumbent) - u(v0) - (u(v1) if big_t else 0)

    def kinetic(radius):
        return fixed + max(big_t - 1, 0) * alpha * kernel_bound(radius) / 4 if alpha else fixed

    def reach(radius):
        return (sum(norms) + math.sqrt(2 * big_t * max(kinetic(radius), 0.))) / 2

    # a path staying in the ball of radius r has length at most 2 reach(r) - |v0| - |v1|
    radius = feasible = max(norms)
    while radius <= reach(radius) or reach(radius + 1) - reach(radius) >= 1:
        if radius <= reach(radius):
            feasible = radius
        radius += 1
    budget = max(kinetic(feasible), 0.)
    return budget, math.isqrt(int(2 * big_t * budget * (1 + TIE_TOL) + TIE_TOL))


def _check(v0, v1, big_t, alpha, version):
    if big_t < 0:
        raise InvalidParameter('T must be non negative, got {0!r}'.format(big_t))
    if not alpha >= 0:
        raise InvalidParameter('alpha must be non negative, got {0!r}'.format(alpha))
    if version not in VERSIONS:
        raise InvalidParameter('unknown version {0!r}, expected one of {1}'.format(version, VERSIONS))
    d = l1(v0, v1)
    if version == 'v2' and big_t < d or big_t == 0 and d:
        raise Infeasible('no {0} path joins {1} and {2} in {3} steps'.format(version, v0, v1, big_t))
    return d


def _balanced_path(v0, v1, big_t):
    """Jumps of nearly equal lengths along the x then the y direction"""
    d = l1(v0, v1)
    lengths = [d // big_t + (1 if i < d % big_t else 0) for i in range(big_t)]
    sx, sy = (1 if v1[0] >= v0[0] else -1), (1 if v1[1] >= v0[1] else -1)
    x_left, vertices, (m, n) = abs(v1[0] - v0[0]), [tuple(v0)], v0
    for length in lengths:
        along_x = min(length, x_left)
        x_left -= along_x
        m, n = m + sx * along_x, n + sy * (length - along_x)
        vertices.append((m, n))
    return LatticePath(vertices, 'v1')


def dp_min_action(v0, v1, big_t, alpha=0., version='v2', table=None, margin=None, verbose=False):
    """
    :param tuple v0: Start vertex
    :param tuple v1: End vertex
    :param int big_t: The number of steps T
    :param alpha: The coupling, non negative
    :type alpha: float, optional
    :param version: ``v1`` or ``v2``
    :type version: str, optional
    :param table: The potential kernel, built to the needed radius when None
    :type table: hkl.lattice.green.GreenTable, optional
    :param margin: Version 1 window margin around the bounding box of the endpoints, the window is derived from an
        incumbent action when None and is then exact
    :type margin: int, optional
    :param verbose: If True or a string, displays a progress bar
    :type verbose: bool or str, optional
    :return: DPResult
    """
    v0, v1 = tuple(v0), tuple(v1)
    d = _check(v0, v1, big_t, alpha, version)
    if version == 'v2':
        window = [(m, n) for m in range(min(v0[0], v1[0]) - big_t, max(v0[0], v1[0]) + big_t + 1)
                  for n in range(min(v0[1], v1[1]) - big_t, max(v0[1], v1[1]) + big_t + 1)
                  if l1(v0, (m, n)) + l1((m, n), v1) <= big_t]
    elif margin is not None:
        window = [(m, n) for m in range(min(v0[0], v1[0]) - margin, max(v0[0], v1[0]) + margin + 1)
                  for n in range(min(v0[1], v1[1]) - margin, max(v0[1], v1[1]) + margin + 1)]
    else:
        if big_t <= d or big_t == 0:
            incumbent = path_action(_balanced_path(v0, v1, big_t), alpha, table) if big_t else \
                _potential(alpha, table if table is not None or not alpha else green_table(max(map(abs, v0))))(v0)
        else:
            try:
                incumbent = dp_min_action(v0, v1, big_t, alpha, 'v2', table).min_action
            except RadiusExceeded:
                incumbent = dp_min_action(v0, v1, big_t, alpha, 'v2').min_action
        ends = table if table is not None or not alpha else \
            green_table(max(abs(v0[0]), abs(v0[1]), abs(v1[0]), abs(v1[1])))
        budget, length = v1_budget(v0, v1, big_t, alpha, incumbent, _potential(alpha, ends))
        logger.debug('version 1 paths below %.17g have length <= %d', float(incumbent), length)
        window = [(m, n) for m in range(min(v0[0], v1[0]) - length, max(v0[0], v1[0]) + length + 1)
                  for n in range(min(v0[1], v1[1]) - length, max(v0[1], v1[1]) + length + 1)
                  if l1(v0, (m, n)) + l1((m, n), v1) <= length]
    if alpha and (table is None or not all(p in table for p in window)):
        table = green_table(max(max(abs(m), abs(n)) for m, n in window))
    u = _potential(alpha, table)
    exact = alpha == 0

    if version == 'v2':
        reach = 1

        def moves(point):
            m, n = point
            return (point, (m + 1, n), (m - 1, n), (m, n + 1), (m, n - 1))
    else:
        if margin is not None:
            incumbent = path_action(_balanced_path(v0, v1, big_t), alpha, table) if big_t else u(v0)
            budget = incumbent - u(v0) - (big_t * min(u(p) for p in window) if big_t else 0)
        jump = math.isqrt(int(2 * budget * (1 + TIE_TOL) + TIE_TOL))
        reach = max(jump, 1)
        logger.debug('version 1 jumps bounded by %d', jump)
        offsets = [(dm, dn) for dm in range(-jump, jump + 1) for dn in range(-jump + abs(dm), jump - abs(dm) + 1)]

        def moves(point):
            return [(point[0] + dm, point[1] + dn) for dm, dn in offsets]

    inside = set(window)
    best = {v0: Fraction(0) + u(v0) if exact else u(v0)}
    counts = {v0: 1}
    parents = [{}]
    count_bar = Counter.from_verbose(verbose, 'DP', big_t)
    for t in range(1, big_t + 1):
        new_best, new_counts, new_parents = {}, {}, {}
        for q, value in best.items():
            for p in moves(q):
                if p not in inside or version == 'v2' and l1(v0, p) > t or l1(p, v1) > (big_t - t) * reach:
                    continue
                candidate = value + Fraction(l1(p, q) ** 2, 2) + u(p) if exact else \
                    value + l1(p, q) ** 2 / 2 + u(p)
                current = new_best.get(p)
                tol = 0 if exact or current is None else TIE_TOL * max(1., abs(current))
                if current is None or candidate < current - tol:
                    new_best[p], new_counts[p], new_parents[p] = candidate, counts[q], q
                elif candidate <= current + tol:
                    new_counts[p] += counts[q]
        best, counts = new_best, new_counts
        parents.append(new_parents)
        count_bar(t - 1)
    if v1 not in best:
        raise Infeasible('no {0} path joins {1} and {2} in {3} steps'.format(version, v0, v1, big_t))
    vertices = [v1]
    for t in range(big_t, 0, -1):
        vertices.append(parents[t][vertices[-1]])
    result = DPResult(best[v1], counts[v1], LatticePath(vertices[::-1], version))
    logger.info('%s minimum %.17g with %d minimizers', version, float(result.min_action), result.count)
    return result


def brute_force_min_action(v0, v1, big_t, alpha=0., version='v2', table=None, max_jump=None):
    """
    Exhaustive enumeration of the paths, pruned by feasibility only

    :param tuple v0:
    :param tuple v1:
    :param int big_t:
    :param alpha:
    :type alpha: float, optional
    :param version: ``v1`` or ``v2``
    :type version: str, optional
    :param table: The potential kernel
    :type table: hkl.lattice.green.GreenTable, optional
    :param max_jump: Version 1 jump bound, defaults to the distance of the endpoints
    :type max_jump: int, optional
    :return: DPResult
    """
    v0, v1 = tuple(v0), tuple(v1)
    d = _check(v0, v1, big_t, alpha, version)
    jump = 1 if version == 'v2' else (d if max_jump is None else max_jump)
    if alpha and table is None:
        table = green_table(max(abs(v0[0]), abs(v0[1]), abs(v1[0]), abs(v1[1])) + jump * big_t)
    offsets = [(dm, dn) for dm in range(-jump, jump + 1) for dn in range(-jump + abs(dm), jump - abs(dm) + 1)]
    found = {'best': None, 'count': 0, 'witness': None}

    def record(path):
        value = path_action(LatticePath(path, version), alpha, table)
        best = found['best']
        tol = 0 if alpha == 0 or best is None else TIE_TOL * max(1., abs(best))
        if best is None or value < best - tol:
            found.update(best=value, count=1, witness=tuple(path))
        elif value <= best + tol:
            found['count'] += 1

    def explore(path):
        left = big_t - len(path) + 1
        if left == 0:
            if path[-1] == v1:
                record(path)
            return
        for dm, dn in offsets:
            p = (path[-1][0] + dm, path[-1][1] + dn)
            if l1(p, v1) <= jump * (left - 1):
                path.append(p)
                explore(path)
                path.pop()

    explore([v0])
    if found['best'] is None:
        raise Infeasible('no {0} path joins {1} and {2} in {3} steps'.format(version, v0, v1, big_t))
    return DPResult(found['best'], found['count'], LatticePath(found['witness'], version))


def claimed_path_count(n, m):
    """
    :return: int - The closed form :math:`(n + 1)m` quoted for the shortest paths from (0, 0) to (n, m), which
        differs from the exact count :math:`\\binom{n + m}{n}`, see :func:`shortest_path_count`
    """
    return (n + 1) * m


def shortest_path_count(n, m):
    """
    :return: int - :math:`\\binom{|n| + |m|}{|n|}`
    """
    return math.comb(abs(n) + abs(m), abs(n))
