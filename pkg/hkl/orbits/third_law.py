r"""
Kepler's third law from the dilations.

If :math:`\gamma` is a periodic orbit of period :math:`T` and size :math:`a`, then
:math:`\gamma_\lambda(t) = \delta_\lambda(\gamma(\lambda^{-2}t))` is a periodic orbit of period :math:`\lambda^2T` and
size :math:`\lambda a`, so :math:`T^2 / a^4` is constant along the family.
"""

import logging
from dataclasses import dataclass

from .action import NODES
from .loop import dilate_loop, size
from .search import certificate
from ..errors import InvalidParameter

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ThirdLawRow:
    lam: float
    period: float
    size: float
    ratio: float
    el_residual: float
    h_sup: float
    action: float


@dataclass(frozen=True)
class ThirdLawReport:
    """
    :param tuple rows: One :class:`ThirdLawRow` per dilation factor
    :param float ratio_spread: :math:`\\max|r_\\lambda / r_1 - 1|` with :math:`r = T^2/a^4`
    """
    rows: tuple
    ratio_spread: float


def third_law_check(loop, lambdas, params, nodes=NODES):
    """
    :param hkl.orbits.loop.LoopPath loop: A converged orbit, with its certificate
    :param lambdas: The dilation factors, positive
    :type lambdas: sequence of float
    :param hkl.core.hamiltonian.Params params:
    :param nodes: The number of nodes the size and the residuals are computed on
    :type nodes: int, optional
    :return: ThirdLawReport
    :raises InvalidParameter: When the loop has no certificate
    """
    if loop.certificate is None:
        raise InvalidParameter('the third law needs a certified orbit, search one first')
    base_ratio = loop.period ** 2 / size(loop, nodes) ** 4
    rows = []
    for lam in lambdas:
        member = dilate_loop(loop, lam)
        a = size(member, nodes)
        cert = certificate(member, params, nodes)
        rows.append(ThirdLawRow(float(lam), member.period, a, member.period ** 2 / a ** 4, cert.el_residual,
                                cert.h_sup, cert.action))
        logger.info('lambda = %g: T = %.12g, a = %.12g, T^2/a^4 = %.15g', lam, member.period, a, rows[-1].ratio)
    spread = max((abs(row.ratio / base_ratio - 1) for row in rows), default=0.)
    return ThirdLawReport(tuple(rows), spread)
