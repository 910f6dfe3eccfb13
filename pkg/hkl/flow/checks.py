r"""
Structure preservation diagnostics of the integrated flow.

  - Dilations: if :math:`\gamma` is a solution then so is :math:`\gamma_\lambda(t) = \delta_\lambda(\gamma(\lambda^{-2}t))`,
    with energy :math:`\lambda^{-2}H`.
  - Reduction: on :math:`H = 0` the projection to :math:`(v, p_v)` stays on :math:`\{\tilde{H} = 1\}`.
  - Reversibility: the flow is symmetric in time.
"""

import logging
from dataclasses import dataclass, replace

import numpy as np

from .trajectory import integrate, march
from ..core.hamiltonian import dilate, hamiltonian, kepler_field
from ..errors import AxisSingular
from ..temporal.rk import dopri5

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DilationReport:
    """
    :param float lam: The dilation factor
    :param float max_deviation: Sup norm of :math:`\\delta_\\lambda(\\gamma(\\lambda^{-2}t)) - \\gamma_\\lambda(t)`
    :param float energy_base: H of the base run
    :param float energy_dilated: H of the dilated run
    :param float energy_error: :math:`|H_\\lambda - \\lambda^{-2}H|`
    """
    lam: float
    max_deviation: float
    energy_base: float
    energy_dilated: float
    energy_error: float


def _dilation_matrix(lam):
    return np.array([lam, lam, lam * lam, 1 / lam, 1 / lam, 1 / (lam * lam)])


def check_dilation_equivariance(s0, lam, t_final, spec, params):
    """
    Integrate from ``s0`` and from its dilation and compare them sample by sample. The dilated run uses the time
    step :math:`\\lambda^2 dt`, or the dilated output times with the adaptive method.

    :param hkl.core.hamiltonian.PhaseState s0:
    :param float lam: The dilation factor, positive
    :param float t_final: Duration of the base run
    :param hkl.flow.trajectory.IntegratorSpec spec:
    :param hkl.core.hamiltonian.Params params:
    :return: DilationReport
    """
    s_lam = dilate(s0, lam)
    base = integrate(s0, t_final, spec, params)
    lam2 = lam * lam
    if spec.adaptive:
        y_lam = dopri5(s_lam.as_array(), lam2 * base.t, kepler_field(params), verbose=False, rtol=spec.tolerance,
                       atol=spec.tolerance)
    else:
        y_lam = integrate(s_lam, lam2 * t_final, replace(spec, step=lam2 * spec.step), params).y
    deviation = float(np.max(np.abs(base.y * _dilation_matrix(lam) - y_lam)))
    h_base, h_lam = hamiltonian(s0, params), hamiltonian(s_lam, params)
    report = DilationReport(lam, deviation, h_base, h_lam, abs(h_lam - h_base / lam2))
    logger.info('dilation check %s', report)
    return report


def reduced_projection(traj):
    """
    :param hkl.flow.trajectory.Trajectory traj: A trajectory away from the z-axis
    :return: numpy.ndarray - The samples of :math:`(v, p_v)`, of shape (n, 2)
    """
    x, y, z, _, _, pz = traj.y.T
    r2 = x * x + y * y
    if np.any(r2 == 0):
        raise AxisSingular('the trajectory crosses the z-axis')
    return np.column_stack((z / r2, r2 * pz))


@dataclass(frozen=True)
class ReductionReport:
    """
    :param float htilde_error: Sup of :math:`|\\tilde{H}(v, p_v; J_0, p_{\\theta,0}) - 1|`
    :param float J_drift: Sup of :math:`|J - J_0|`
    :param float ptheta_drift: Sup of :math:`|p_\\theta - p_{\\theta,0}|`
    """
    htilde_error: float
    J_drift: float
    ptheta_drift: float


def reduction_check(traj):
    """
    Companion check of :func:`reduced_projection` for a zero energy trajectory, :math:`J` and :math:`p_\\theta` frozen
    at their initial values

    :param hkl.flow.trajectory.Trajectory traj:
    :return: ReductionReport
    """
    v, p_v = reduced_projection(traj).T
    _, ptheta, j, _ = traj.diagnostics()
    radial = j[0] - 2 * v * p_v
    tangential = ptheta[0] + .5 * p_v
    htilde = (radial ** 2 + tangential ** 2) * np.sqrt(1 + v * v / 16) / (2 * traj.params.alpha)
    return ReductionReport(float(np.max(np.abs(htilde - 1))), float(np.max(np.abs(j - j[0]))),
                           float(np.max(np.abs(ptheta - ptheta[0]))))


def time_reversal_check(s0, t_final, spec, params):
    """
    Integrate forward up to ``t_final`` and back to 0 with the same method

    :param hkl.core.hamiltonian.PhaseState s0:
    :param float t_final:
    :param hkl.flow.trajectory.IntegratorSpec spec:
    :param hkl.core.hamiltonian.Params params:
    :return: float - Sup norm of the return error
    """
    forward = integrate(s0, t_final, spec, params)
    _, back, collision = march(forward.y[-1], t_final, 0., spec, params)
    if collision is not None:
        return np.inf
    error = float(np.max(np.abs(back[-1] - forward.y[0])))
    logger.info('time reversal error %.3e', error)
    return error


@dataclass(frozen=True)
class HelixReport:
    """
    Exploratory fit of the late part of a trajectory, no pass or fail

    :param float z_slope: b in :math:`z \\approx a + bt`
    :param float z_intercept: a
    :param float z_residual: RMS residual of the fit of z
    :param tuple xy_drift: Mean planar velocity
    :param float xy_residual: RMS residual of the linear fit of (x, y)
    :param float t_start: Start of the fitted segment
    """
    z_slope: float
    z_intercept: float
    z_residual: float
    xy_drift: tuple
    xy_residual: float
    t_start: float


def helix_deviation(traj, fraction=.5):
    """
    Fit :math:`z(t) \\approx a + bt` and a planar drift on the last ``fraction`` of the samples

    :param hkl.flow.trajectory.Trajectory traj:
    :param fraction: Part of the samples used, from the end
    :type fraction: float, optional
    :return: HelixReport
    """
    start = min(int(len(traj) * (1 - fraction)), len(traj) - 2)
    t, y = traj.t[start:], traj.y[start:]
    coefficients, z_res = [], 0.
    for col in range(3):
        fit = np.polyfit(t, y[:, col], 1)
        res = np.sqrt(np.mean((np.polyval(fit, t) - y[:, col]) ** 2))
        coefficients.append(fit)
        if col == 2:
            z_res = res
    xy_res = np.sqrt(np.mean(sum((np.polyval(coefficients[c], t) - y[:, c]) ** 2 for c in range(2))))
    return HelixReport(float(coefficients[2][0]), float(coefficients[2][1]), float(z_res),
                       (float(coefficients[0][0]), float(coefficients[1][0])), float(xy_res), float(t[0]))
