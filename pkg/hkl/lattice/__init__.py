r"""
Discrete analogues of the Kepler problem.

On :math:`\mathbb{Z}` the potential :math:`U(n) = -\frac{1}{2}|n|` drives an integer map whose orbits recur. On
:math:`\mathbb{Z}^2` the potential kernel of the square lattice plays the role of the logarithm; it enters the
discrete actions minimized exactly by dynamic programming, and an experimental Newton difference map.
"""

from .green import (METHODS, RECURSION_MAX_RADIUS, GreenTable, green2d, green_csv, green_exact, green_quadrature,
                    green_table, inverse_pi, laplacian2d)
from .newton import DIRECTIONS, dV, lattice_potential, newton_difference_step, projection, round_half_toward_zero
from .paths import (VERSIONS, DPResult, LatticePath, brute_force_min_action, claimed_path_count, dp_min_action,
                    kernel_bound, path_action, shortest_path_count, v1_budget)
from .zmap import (VARIANTS, FundamentalCheck, LatticeState, ZGridScan, ZOrbit, energy, sgn, z_fundamental_check,
                   z_grid_scan, z_inverse_step, z_orbit, z_step)
