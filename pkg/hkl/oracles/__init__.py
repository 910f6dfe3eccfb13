r"""
Exact solutions used as ground truth for the integrators and the group algebra:

  - the radial lines :math:`(c_1t^{1/2}, c_2t^{1/2}, 0, \frac{1}{2}c_1t^{-1/2}, \frac{1}{2}c_2t^{-1/2}, 0)`,
  - the solutions :math:`(0, 0, k, 0, 0, -4\alpha t/k^2)` constant in configuration space,
  - the conics of the invariant submanifold :math:`N`,
  - the geodesics of the :math:`\alpha = 0` flow.
"""

from .conic import ConicSpec, conic_kind, conic_on_N, conic_oracle, conic_state
from .geodesic import GeodesicDifferenceReport, geodesic, geodesic_difference_demo, geodesic_oracle, geodesic_path
from .solutions import (ExactSolution, line_oracle, line_solution, residual, stationary_energy, stationary_oracle,
                        stationary_solution)
