r"""
Heisenberg geometry, the Kepler Hamiltonian and its symmetries.

.. math::
   H = \frac{1}{2}\left(P_X^2 + P_Y^2\right) - \frac{\alpha}{\rho^2}, \qquad
   P_X = p_x - \frac{1}{2}yp_z, \quad P_Y = p_y + \frac{1}{2}xp_z

All the functions are pure and work on frozen records, so they can be called from any thread.
"""

from .bracket import gradient_numeric, poisson_bracket_numeric
from .coordinates import (CylState, ReducedState, cylindrical_hamiltonian, from_cylindrical, htilde_reduced,
                          reduced_curve, state_from_reduced, to_cylindrical, to_reduced)
from .hamiltonian import (ALPHA, Params, PhaseState, angular_momentum, dilate, dilation_moment, hamiltonian,
                          hamiltonian_gradient, hamiltonian_hessian, horizontal_momenta, htilde, jacobian, kepler_field,
                          kepler_jacobian, kinetic, left_translate, potential, rotate, vector_field)
from .heisenberg import ORIGIN, ConfigPoint, dilate_config, gauge, group_inv, group_mul, rho
