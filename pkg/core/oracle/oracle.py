"""
The oracle bandwidth, its risk bound and the oracle estimator.
"""

import math
import numpy as np
from scipy import integrate
from scipy.stats import norm

from core.estimation.estimator import estimate
from core.utils.errors import OracleSetEmptyError
from core.utils.logutils import get_logger
from core.utils.mathutils import dyadic_grid, noise_compound


# Logging
logger = get_logger(__name__)

# Defaults
H_LEVELS_PER_OCTAVE = 8


class OracleResult(object):
    """
    The oracle bandwidth at a point and the matching risk bound.
    When a smallest resolved bandwidth is given, h_used is h* floored at it.
    """

    def __init__(self, y, h_star, risk_bound, c_r, min_bandwidth=None):
        self.y = float(y)
        self.h_star = float(h_star)
        self.risk_bound = float(risk_bound)
        self.c_r = float(c_r)
        self.min_bandwidth = min_bandwidth
        self.floored = min_bandwidth is not None and self.h_star < min_bandwidth
        self.h_used = float(min_bandwidth) if self.floored else self.h_star

    def __str__(self):
        return "OracleResult(y={}, h_star={}, h_used={}, risk_bound={}, c_r={})".format(
            self.y, self.h_star, self.h_used, self.risk_bound, self.c_r)

    def __repr__(self):
        return self.__str__()


def oracle_levels(epsilon, levels_per_octave=H_LEVELS_PER_OCTAVE):
    """
    The refined dyadic grid 2^(-j/8) within [eps^2, 1], descending.
    """
    return dyadic_grid(epsilon ** 2, 1.0, levels_per_octave)


def oracle_bandwidth(profile, epsilon, y, levels_per_octave=H_LEVELS_PER_OCTAVE):
    """
    h* = the largest grid level h with sqrt(h) Delta*(h, y) <= ||K||_inf eps sqrt(ln(1/eps)).
    Every level is scanned, since sqrt(h) Delta*(h, y) need not be monotone.
    :param profile: (BiasProfile) the bias profile of the link.
    :param epsilon: (float) the noise level.
    :param y: (float) the point on the index axis.
    :return: (float) h*.
    :raise: OracleSetEmptyError: no level satisfies the constraint.
    """
    levels = oracle_levels(epsilon, levels_per_octave)
    star = profile.delta_star_levels(levels, y)
    bound = profile.kernel.sup_norm * noise_compound(epsilon)
    admissible = np.nonzero(np.sqrt(levels) * star <= bound)[0]
    if len(admissible) == 0:
        raise OracleSetEmptyError(
            "No bandwidth in [{}, 1] satisfies the oracle constraint at y={}; the set is nonempty when "
            "epsilon <= exp(-(2 M ||K||_1 / ||K||_inf)^2)".format(epsilon ** 2, y))
    logger.debug("h* = {} at y={} (eps={})".format(levels[admissible[0]], y, epsilon))
    return float(levels[admissible[0]])


def oracle_bandwidth_table(profile, epsilon, y_lo, y_hi, levels_per_octave=H_LEVELS_PER_OCTAVE):
    """
    h* on the uniform window grid of the profile within [y_lo, y_hi], from a single profile evaluation.
    :return: (numpy.ndarray, numpy.ndarray) the points and h* at each of them.
    :raise: OracleSetEmptyError: the set is empty at some point.
    """
    levels = oracle_levels(epsilon, levels_per_octave)
    z, core, maximal = profile.profile(levels, y_lo, y_hi)
    star = np.maximum(core, maximal)
    admissible = np.sqrt(levels)[:, None] * star <= profile.kernel.sup_norm * noise_compound(epsilon)
    if not np.all(np.any(admissible, axis=0)):
        raise OracleSetEmptyError("No bandwidth in [{}, 1] satisfies the oracle constraint somewhere in [{}, {}]".format(
            epsilon ** 2, y_lo, y_hi))
    logger.debug("Tabulated h* at {} points of [{}, {}]".format(len(z), y_lo, y_hi))
    return z, levels[np.argmax(admissible, axis=0)]


def c_r_constant(r):
    """
    c_r = [E(1 + |g|)^r]^(1/r), g standard Gaussian.
    :param r: (float) the order, >= 1.
    :return: (float) the constant.
    """
    if r < 1:
        raise ValueError("r must be >= 1. Found {}".format(r))
    moment, _ = integrate.quad(lambda z: 2.0 * (1.0 + z) ** r * norm.pdf(z), 0.0, np.inf, epsabs=1e-13, epsrel=1e-13)
    return moment ** (1.0 / r)


def oracle_risk_bound(h_star, epsilon, r, kernel):
    """
    c_r sqrt(||K||_inf^4 eps^2 ln(1/eps) / h*).
    :param h_star: (float) the oracle bandwidth.
    :param epsilon: (float) the noise level.
    :param r: (float) the risk order.
    :param kernel: (Kernel1D|ProductKernel) the kernel; ||K||_inf is that of the factor.
    :return: (float) the bound.
    """
    sup = getattr(kernel, "factor", kernel).sup_norm
    return c_r_constant(r) * sup ** 2 * noise_compound(epsilon) / math.sqrt(h_star)


def oracle_result(profile, epsilon, y, r, min_bandwidth=None):
    """
    :param min_bandwidth: (float) the smallest resolved bandwidth; a smaller h* is floored and logged.
    :return: (OracleResult) h* and the risk bound at y.
    """
    h_star = oracle_bandwidth(profile, epsilon, y)
    bound = oracle_risk_bound(h_star, epsilon, r, profile.kernel)
    result = OracleResult(y, h_star, bound, c_r_constant(r), min_bandwidth)
    if result.floored:
        logger.warning("Oracle bandwidth h*={:g} at y={} is below the smallest resolved bandwidth {}: floored".format(
            h_star, y, min_bandwidth))
    return result


def oracle_estimate(obs, kernel, theta_true, h_star, x):
    """
    The oracle estimator F_(theta0, h*)(x).
    """
    return estimate(obs, kernel, theta_true, h_star, x)


def hoelder_h_star_floor(beta, L, epsilon):
    """
    The lower bound (eps sqrt(ln(1/eps)) / L)^(2/(2 beta + 1)) on h* for links in H(beta, L).
    """
    return (noise_compound(epsilon) / L) ** (2.0 / (2.0 * beta + 1.0))


def hoelder_bias_ceiling(kernel, beta, L, h):
    """
    The bound ||K||_inf L h^beta on Delta*(h, .) for links in H(beta, L).
    """
    return getattr(kernel, "factor", kernel).sup_norm * L * h ** beta
