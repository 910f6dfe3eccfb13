r"""
Integration of the Kepler flow with collision detection, diagnostics and trajectory files.

Along the exact flow :math:`H` and :math:`p_\theta` are constant and :math:`\dot{J} = 2H`. The reference method is the
implicit midpoint rule, symplectic for the non-separable :math:`H`.
"""

from .checks import (DilationReport, HelixReport, ReductionReport, check_dilation_equivariance, helix_deviation,
                     reduced_projection, reduction_check, time_reversal_check)
from .trajectory import CSV_HEADER, RHO_MIN, IntegratorSpec, Trajectory, integrate, march, step_implicit_midpoint
