r"""
This package regroups the plotting tools used to draw the figures of the command line runs.
"""

from .svg import plot_green, plot_lattice_path, plot_loop, plot_reduced, plot_trajectory, plot_z_orbit
