r"""
The package documented here simulates the Kepler problem on the Heisenberg group:

.. math::
   \left\{\begin{aligned}
    \dot{q} &= \frac{\partial H}{\partial p} \\
    \dot{p} &= -\frac{\partial H}{\partial q}
   \end{aligned}\right., \qquad
   H = \frac{1}{2}\left(P_X^2 + P_Y^2\right) - \frac{\alpha}{\rho^2}

The subpackage ``core`` holds the geometry and the Hamiltonian, ``temporal`` the one step integrators and ``flow`` the
trajectories and their diagnostics. ``oracles`` gathers the closed form solutions, ``orbits`` the variational search
of periodic orbits, and ``lattice`` the discrete analogues on :math:`\mathbb{Z}` and :math:`\mathbb{Z}^2`.
"""

__version__ = '1.0'

from . import core
from . import flow
from . import lattice
from . import misc
from . import oracles
from . import orbits
from . import temporal
