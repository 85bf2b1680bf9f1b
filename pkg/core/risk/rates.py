"""
Minimax rates and least-squares rate fits.

Every rate is a power of the compound eps sqrt(ln(1/eps)), which is therefore the abscissa of the fits.
"""

import math
import numpy as np
from enum import Enum, unique
from scipy.stats import linregress

from core.utils.errors import RateFitError
from core.utils.mathutils import noise_compound


MIN_FIT_POINTS = 4


@unique
class Regime(Enum):
    """
    The regimes of the global rate:
        * DENSE: (2 beta + 1) p > r
        * BOUNDARY: (2 beta + 1) p = r
        * SPARSE: (2 beta + 1) p < r
    """

    def __new__(cls, *args, **kwds):
        value = len(cls.__members__) + 1
        obj = object.__new__(cls)
        obj._value_ = value
        return obj

    def __init__(self, condition):
        self.condition = condition

    DENSE = "(2 beta + 1) p > r"
    BOUNDARY = "(2 beta + 1) p = r"
    SPARSE = "(2 beta + 1) p < r"


def regime(beta, p, r, tol=1e-12):
    """
    :return: (Regime) the regime of (beta, p, r).
    """
    lhs = (2.0 * beta + 1.0) * p
    if abs(lhs - r) <= tol * max(1.0, r):
        return Regime.BOUNDARY
    return Regime.DENSE if lhs > r else Regime.SPARSE


def psi_rate(beta, L, epsilon):
    """
    The pointwise rate L^(1/(2 beta + 1)) (eps sqrt(ln(1/eps)))^(2 beta/(2 beta + 1)).
    """
    return L ** (1.0 / (2.0 * beta + 1.0)) * noise_compound(epsilon) ** (2.0 * beta / (2.0 * beta + 1.0))


def pointwise_exponent(beta):
    return 2.0 * beta / (2.0 * beta + 1.0)


def phi_exponent(beta, p, r):
    """
    The exponent of eps sqrt(ln(1/eps)) in the global rate; the logarithmic factor of the boundary regime is ignored.
    """
    if regime(beta, p, r) is Regime.SPARSE:
        return (beta - 1.0 / p + 1.0 / r) / (beta - 1.0 / p + 0.5)
    return pointwise_exponent(beta)


def phi_rate(beta, L, p, r, epsilon):
    """
    The global rate of the adaptive estimator over the Nikol'skii single-index class.
    :param beta: (float) the smoothness.
    :param L: (float) the class constant.
    :param p: (float) the integrability index, >= 1.
    :param r: (float) the loss index, >= 1.
    :param epsilon: (float) the noise level.
    :return: (float) the rate.
    """
    current = regime(beta, p, r)
    if current is Regime.DENSE:
        return psi_rate(beta, L, epsilon)
    if current is Regime.BOUNDARY:
        return psi_rate(beta, L, epsilon) * math.log(1.0 / epsilon) ** (1.0 / r)
    s = beta - 1.0 / p
    return L ** ((0.5 - 1.0 / r) / (s + 0.5)) * noise_compound(epsilon) ** ((s + 1.0 / r) / (s + 0.5))


def minimax_lower_rate(beta, L, p, r, epsilon):
    """
    The minimax rate of the univariate problem, a lower bound over the single-index class.
    In the dense regime the logarithm is absent.
    """
    current = regime(beta, p, r)
    if current is Regime.DENSE:
        return L ** (1.0 / (2.0 * beta + 1.0)) * epsilon ** (2.0 * beta / (2.0 * beta + 1.0))
    if current is Regime.BOUNDARY:
        return psi_rate(beta, L, epsilon)
    return phi_rate(beta, L, p, r, epsilon)


class RateFit(object):
    """
    A least-squares fit of log risk against log(eps sqrt(ln(1/eps))).
    """

    def __init__(self, slope, intercept, residual, theoretical_exponent, stderr, n_points, regime=None):
        self.slope = float(slope)
        self.intercept = float(intercept)
        self.residual = float(residual)
        self.theoretical_exponent = float(theoretical_exponent)
        self.stderr = float(stderr)
        self.n_points = int(n_points)
        self.regime = regime

    def deviation(self):
        """
        :return: (float) |slope - theoretical exponent|.
        """
        return abs(self.slope - self.theoretical_exponent)

    def as_dict(self):
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "theoretical_exponent": self.theoretical_exponent,
            "slope_stderr": self.stderr,
            "n_points": self.n_points,
            "regime": self.regime.name if self.regime else "POINTWISE",
        }

    def __str__(self):
        return "RateFit(slope={}, theoretical={}, residual={}, n={})".format(
            self.slope, self.theoretical_exponent, self.residual, self.n_points)


def rate_fit(epsilons, risks, beta, p=None, r=None):
    """
    Fit log risk = intercept + slope log(eps sqrt(ln(1/eps))).
    :param epsilons: (sequence) the noise levels.
    :param risks: (sequence) the risks, aligned with epsilons.
    :param beta: (float) the smoothness.
    :param p: (float) the integrability index; None fits the pointwise rate.
    :param r: (float) the loss index of a global fit.
    :return: (RateFit) the fit.
    :raise: RateFitError: fewer than four distinct noise levels, or a nonpositive risk.
    """
    epsilons = np.asarray(epsilons, dtype=float)
    risks = np.asarray(risks, dtype=float)
    if len(np.unique(epsilons)) < MIN_FIT_POINTS:
        raise RateFitError("A rate fit needs at least {} distinct noise levels. Found {}".format(
            MIN_FIT_POINTS, len(np.unique(epsilons))))
    if epsilons.shape != risks.shape:
        raise RateFitError("Noise levels and risks are not aligned: {} vs {}".format(epsilons.shape, risks.shape))
    if np.any(risks <= 0) or not np.all(np.isfinite(risks)):
        raise RateFitError("Risks must be positive and finite: {}".format(risks))

    x = np.log(noise_compound(epsilons))
    y = np.log(risks)
    fit = linregress(x, y)
    residual = float(np.sqrt(np.mean((y - fit.intercept - fit.slope * x) ** 2)))
    if p is None:
        return RateFit(fit.slope, fit.intercept, residual, pointwise_exponent(beta), fit.stderr, len(x))
    return RateFit(fit.slope, fit.intercept, residual, phi_exponent(beta, p, r), fit.stderr, len(x), regime(beta, p, r))
