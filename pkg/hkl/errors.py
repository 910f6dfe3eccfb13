"""
Exceptions raised by the package.

Every error derives from :class:`HKLError`. The ``code`` attribute is the stable identifier written by the command
line front end in its machine-readable error report.
"""


class HKLError(Exception):
    """Base class of all the errors raised by the package"""
    code = 'hkl_error'

    def to_dict(self):
        """
        :return: dict - A JSON-serializable description of the error
        """
        return {'error': self.code, 'message': str(self)}


class InvalidParameter(HKLError, ValueError):
    """A parameter is outside of its domain (non finite value, non positive step, unknown option, ...)"""
    code = 'invalid_parameter'


class SingularOrigin(HKLError):
    """The configuration is at (or a finite difference stencil touches) the origin, where the potential blows up"""
    code = 'singular_origin'


class AxisSingular(HKLError):
    """Cylindrical or reduced coordinates are requested on the z-axis"""
    code = 'axis_singular'


class NonPositiveLambda(HKLError, ValueError):
    """A dilation factor must be positive"""
    code = 'non_positive_lambda'


class NonPositiveTime(HKLError, ValueError):
    """The line solutions are only defined for t > 0"""
    code = 'non_positive_time'


class ZeroK(HKLError, ValueError):
    """The stationary solutions need a non zero height k"""
    code = 'zero_k'


class DomainExceeded(HKLError):
    """The requested time is outside of the validity window of a closed form solution"""
    code = 'domain_exceeded'


class NewtonDivergence(HKLError):
    """
    The implicit solve of a time step did not converge

    :param float dt: The time step
    :param float residual: The last increment norm
    """
    code = 'newton_divergence'

    def __init__(self, dt, residual):
        super().__init__('Newton iteration diverged with dt = {0:.3e} (last increment {1:.3e}), '
                         'try a smaller time step'.format(dt, residual))
        self.dt = dt
        self.residual = residual


class CollisionEvent(HKLError):
    """
    The gauge fell below the collision floor

    :param trajectory: The trajectory computed up to the event
    :type trajectory: hkl.flow.trajectory.Trajectory
    :param float t: The time of the event
    :param float rho: The gauge at that time
    """
    code = 'collision'

    def __init__(self, trajectory, t, rho):
        super().__init__('collision at t = {0:.17g} (rho = {1:.3e})'.format(t, rho))
        self.trajectory = trajectory
        self.t = t
        self.rho = rho

    def to_dict(self):
        out = super().to_dict()
        out.update(t=self.t, rho=self.rho)
        return out


class StepUnderflow(HKLError):
    """The adaptive step size became negligible with respect to the current time"""
    code = 'step_underflow'


class NonClosingZ(HKLError):
    """The horizontal lift of a loop does not close: the mean of dz/dt does not vanish"""
    code = 'non_closing_z'


class MaxIterations(HKLError):
    """
    The action minimization did not reach the requested gradient norm

    :param loop: The last iterate
    :type loop: hkl.orbits.loop.LoopPath
    :param float gnorm: Its gradient norm
    """
    code = 'max_iterations'

    def __init__(self, loop, gnorm):
        super().__init__('gradient norm {0:.3e} after the maximum number of iterations'.format(gnorm))
        self.loop = loop
        self.gnorm = gnorm

    def to_dict(self):
        out = super().to_dict()
        out.update(gnorm=self.gnorm)
        return out


class UnresolvedOrbit(HKLError):
    """
    A critical loop of the discrete action that does not satisfy the equations of motion, typically because too few
    modes are kept or because a constraint of the class is not compatible with the flow

    :param loop: The loop, with its certificate
    :type loop: hkl.orbits.loop.LoopPath
    :param float tolerance: The largest residual accepted
    """
    code = 'unresolved_orbit'

    def __init__(self, loop, tolerance):
        cert = loop.certificate
        super().__init__('EL residual {0:.3e} and sup |H| {1:.3e} exceed {2:.1e}'.format(cert.el_residual, cert.h_sup,
                                                                                      tolerance))
        self.loop = loop
        self.tolerance = tolerance

    def to_dict(self):
        out = super().to_dict()
        out.update(el_residual=self.loop.certificate.el_residual, h_sup=self.loop.certificate.h_sup,
                   tolerance=self.tolerance)
        return out


class CollapseToSingularity(HKLError):
    """The minimizing loop approaches the origin"""
    code = 'collapse_to_singularity'


class NoRecurrence(HKLError):
    """
    A lattice orbit did not come back to its initial state

    :param list orbit: The visited states
    """
    code = 'no_recurrence'

    def __init__(self, orbit):
        super().__init__('no recurrence after {0} steps'.format(len(orbit) - 1))
        self.orbit = orbit


class RadiusExceeded(HKLError):
    """A lattice point is outside of the table"""
    code = 'radius_exceeded'


class QuadratureNonconvergence(HKLError):
    """The adaptive quadrature did not reach the requested accuracy"""
    code = 'quadrature_nonconvergence'


class Infeasible(HKLError):
    """No lattice path joins the two vertices in the given time"""
    code = 'infeasible'
