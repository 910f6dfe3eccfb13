"""
Static figures written as SVG files. The figures are a presentation of the CSV products, nothing reads them back.
"""

import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FIGSIZE = (6.4, 4.8)
"""Size of a single panel, in inches"""

# Reproducible files: no date nor random identifiers in the output
matplotlib.rcParams['svg.hashsalt'] = 'hkl'
METADATA = {'Date': None}


def _save(fig, path):
    fig.savefig(path, format='svg', metadata=METADATA)
    plt.close(fig)


def plot_trajectory(traj, path, title=''):
    """
    Projection to the xy-plane and height against time

    :param hkl.flow.trajectory.Trajectory traj:
    :param str path:
    :param title:
    :type title: str, optional
    """
    fig, (ax_xy, ax_z) = plt.subplots(1, 2, figsize=(2 * FIGSIZE[0], FIGSIZE[1]))
    ax_xy.plot(traj.y[:, 0], traj.y[:, 1], lw=1)
    ax_xy.plot(0, 0, 'k+')
    ax_xy.set_aspect('equal', adjustable='datalim')
    ax_xy.set_xlabel(r'$x$')
    ax_xy.set_ylabel(r'$y$')
    ax_xy.grid(True)
    ax_z.plot(traj.t, traj.y[:, 2], lw=1)
    ax_z.set_xlabel(r'$t$')
    ax_z.set_ylabel(r'$z$')
    ax_z.grid(True)
    fig.suptitle(title)
    _save(fig, path)


def plot_reduced(points, path, curve=None, title=''):
    """
    Samples in the :math:`(v, p_v)` plane, over the curve :math:`\\tilde{H} = 1` when given

    :param numpy.ndarray points: Of shape (n, 2)
    :param str path:
    :param curve: ``(v, lower, upper)`` arrays
    :type curve: tuple, optional
    :param title:
    :type title: str, optional
    """
    fig, ax = plt.subplots(figsize=FIGSIZE)
    if curve is not None:
        v, lower, upper = curve
        ax.plot(v, lower, 'C1', lw=1)
        ax.plot(v, upper, 'C1', lw=1)
    ax.plot(points[:, 0], points[:, 1], 'C0.', ms=2)
    ax.set_xlabel(r'$v$')
    ax.set_ylabel(r'$p_v$')
    ax.grid(True)
    ax.set_title(title)
    _save(fig, path)


def plot_loop(loop, path, samples=1024, title=''):
    """
    :param hkl.orbits.loop.LoopPath loop:
    :param str path:
    :param samples:
    :type samples: int, optional
    :param title:
    :type title: str, optional
    """
    t = np.linspace(0., loop.period, samples + 1)
    x, y, z = loop.evaluate(t)
    fig, (ax_xy, ax_z) = plt.subplots(1, 2, figsize=(2 * FIGSIZE[0], FIGSIZE[1]))
    ax_xy.plot(x, y, lw=1)
    ax_xy.plot(0, 0, 'k+')
    ax_xy.set_aspect('equal', adjustable='datalim')
    ax_xy.set_xlabel(r'$x$')
    ax_xy.set_ylabel(r'$y$')
    ax_xy.grid(True)
    ax_z.plot(t, z, lw=1)
    ax_z.set_xlabel(r'$t$')
    ax_z.set_ylabel(r'$z$')
    ax_z.grid(True)
    fig.suptitle(title)
    _save(fig, path)


def plot_z_orbit(orbit, path, title=''):
    """
    An orbit of the integer map in the :math:`(n, p)` plane

    :param hkl.lattice.zmap.ZOrbit orbit:
    :param str path:
    :param title:
    :type title: str, optional
    """
    n = [s.n for s in orbit.states] + [orbit.states[0].n]
    p = [s.p for s in orbit.states] + [orbit.states[0].p]
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(n, p, 'o-', ms=3, lw=.5)
    ax.set_xlabel(r'$n$')
    ax.set_ylabel(r'$p$')
    ax.grid(True)
    ax.set_title(title)
    _save(fig, path)


def plot_green(table, path, title=''):
    """
    :param hkl.lattice.green.GreenTable table:
    :param str path:
    :param title:
    :type title: str, optional
    """
    r = table.radius
    fig, ax = plt.subplots(figsize=FIGSIZE)
    image = ax.imshow(table.values.T, origin='lower', extent=(-r - .5, r + .5, -r - .5, r + .5))
    fig.colorbar(image, ax=ax)
    ax.set_xlabel(r'$m$')
    ax.set_ylabel(r'$n$')
    ax.set_title(title)
    _save(fig, path)


def plot_lattice_path(lattice_path, path, title=''):
    """
    :param hkl.lattice.paths.LatticePath lattice_path:
    :param str path:
    :param title:
    :type title: str, optional
    """
    vertices = np.array(lattice_path.vertices)
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(vertices[:, 0], vertices[:, 1], 'o-')
    ax.plot(*vertices[0], 'gs')
    ax.plot(*vertices[-1], 'rs')
    ax.set_aspect('equal', adjustable='datalim')
    ax.set_xlabel(r'$m$')
    ax.set_ylabel(r'$n$')
    ax.grid(True)
    ax.set_title(title)
    _save(fig, path)
