r"""
Variational search of periodic orbits and the third law.

Periodic orbits have zero energy and are critical points of the action :math:`\int_0^T K + U\,dt` among the
horizontal loops. The loops are trigonometric polynomials in the plane lifted by the horizontality constraint, so the
search is unconstrained.
"""

from .action import (NODES, action, action_and_gradient, action_parts, action_quad, half_period_defect,
                     spectral_antiderivative)
from .loop import (R_2PI_3, LoopPath, SymmetryClass, closure_coefficient, dilate_loop, horizontality_defect,
                   reconstruct_z, rotate_loop, s2_defect, seed_loop, shifted, size, z_coefficients)
from .records import load_orbit, orbit_from_dict, orbit_to_dict, save_orbit
from .search import Certificate, SearchOptions, certificate, initial_loop, minimize_action, multi_start, project
from .third_law import ThirdLawReport, ThirdLawRow, third_law_check
from .zero_energy import advance_parameter, angle_advance, half_period, oval_extent, zero_energy_orbit
