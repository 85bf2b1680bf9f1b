"""
Deterministic bias diagnostics: the three bias inequalities below the oracle bandwidth and
the L_p scaling of the bias functional of Nikol'skii links.
"""

import math
import numpy as np
from scipy.stats import linregress

from core.estimation.estimator import signal_window
from core.estimation.transform import Direction
from core.field.noise_field import GridSpec
from core.oracle.bias import BiasProfile
from core.oracle.oracle import oracle_bandwidth
from core.rnd.rndgen import ReplicateStreams
from core.utils.logutils import get_logger
from core.utils.mathutils import noise_compound, lp_norm


# Logging
logger = get_logger(__name__)

# Defaults
DEFAULT_SAMPLES = 100
LP_BANDWIDTHS = tuple(2.0 ** -k for k in range(3, 8))
LP_WINDOW_N = 1024
LP_RANGE = 2.0
SLOPE_TOL = 0.1


class BiasComparisonReport(object):
    """
    The sampled (nu, h, eta) with the three bias gaps and their bounds.
    """

    def __init__(self, h_star, bound_pair, bound_single, rows):
        self.h_star = h_star
        self.bound_pair = bound_pair
        self.bound_single = bound_single
        self.rows = rows

    def worst_ratios(self):
        """
        :return: (dict) the largest gap-to-bound ratio of each inequality.
        """
        if not self.rows:
            return {"pair": 0.0, "levels": 0.0, "index": 0.0}
        return {"pair": max(row["pair_gap"] for row in self.rows) / self.bound_pair,
                "levels": max(row["level_gap"] for row in self.rows) / self.bound_pair,
                "index": max(row["index_gap"] for row in self.rows) / self.bound_single}

    def passed(self):
        return all(ratio <= 1.0 for ratio in self.worst_ratios().values())

    def __str__(self):
        return "BiasComparisonReport(h_star={}, samples={}, worst={}, passed={})".format(
            self.h_star, len(self.rows), self.worst_ratios(), self.passed())


def bias_comparison_check(signal, kernel, epsilon, x=(0.0, 0.0), samples=DEFAULT_SAMPLES, seed=0, grid=None):
    """
    For sampled nu and eta <= h <= h*/2, both grid-resolved, check on the noiseless signal
        |S_(theta0,h)(nu,h)(x) - S_(nu,h)(x)| <= 2 (h*)^(-1/2) ||K||_inf^2 eps sqrt(ln(1/eps)),
        |S_(nu,h)(x) - S_(nu,eta)(x)|          <= 2 (h*)^(-1/2) ||K||_inf^2 eps sqrt(ln(1/eps)),
        |S_(theta0,h)(x) - F(x)|               <= (h*)^(-1/2) ||K||_inf eps sqrt(ln(1/eps)).
    :param signal: (SingleIndexSignal) the signal.
    :param kernel: (ProductKernel) the kernel.
    :param epsilon: (float) the noise level defining h*.
    :param x: (tuple) the point.
    :param samples: (int) the number of sampled triples.
    :param seed: (int) the sampling seed.
    :param grid: (GridSpec) the grid; the default grid if None.
    :return: (BiasComparisonReport) the report; empty when h*/2 is below the resolved levels.
    """
    grid = grid or GridSpec()
    sup = kernel.factor.sup_norm
    h_star = oracle_bandwidth(BiasProfile(kernel.factor, signal.link), epsilon, signal.index(x))
    compound = noise_compound(epsilon)
    bound_pair = 2.0 * sup ** 2 * compound / math.sqrt(h_star)
    bound_single = sup * compound / math.sqrt(h_star)

    lower, upper = grid.min_bandwidth(), h_star / 2.0
    if upper < lower:
        logger.warning("h*/2 = {} is below the smallest resolved bandwidth {}: nothing to check".format(upper, lower))
        return BiasComparisonReport(h_star, bound_pair, bound_single, [])

    window = signal_window(signal, x, grid)
    theta0 = signal.theta0.as_array()
    truth = signal.value_at(x)
    rnd = ReplicateStreams(seed).stream(0)
    rows = []
    for _ in range(samples):
        nu = Direction.from_angle(rnd.uniform(0.0, 2.0 * math.pi)).as_array().reshape(1, 2)
        h = math.exp(rnd.uniform(math.log(lower), math.log(upper)))
        eta = math.exp(rnd.uniform(math.log(lower), math.log(h)))
        single_h = window.single_row(kernel, nu, h)[0]
        rows.append({
            "nu_deg": math.degrees(math.atan2(nu[0, 1], nu[0, 0])), "h": h, "eta": eta,
            "pair_gap": abs(window.pair_row(kernel, theta0, nu, h)[0] - single_h),
            "level_gap": abs(single_h - window.single_row(kernel, nu, eta)[0]),
            "index_gap": abs(window.single_row(kernel, theta0.reshape(1, 2), h)[0] - truth),
        })
    report = BiasComparisonReport(h_star, bound_pair, bound_single, rows)
    logger.info("Checked {}".format(report))
    return report


class LpScaling(object):
    """
    The slopes of log ||Delta(h, .)||_p and log ||Delta*(h, .)||_p against log h.
    """

    def __init__(self, hs, norms, star_norms, slope, star_slope, expected):
        self.hs = hs
        self.norms = norms
        self.star_norms = star_norms
        self.slope = slope
        self.star_slope = star_slope
        self.expected = expected

    def passed(self, tol=SLOPE_TOL):
        return abs(self.slope - self.expected) <= tol

    def __str__(self):
        return "LpScaling(slope={}, star_slope={}, expected={})".format(self.slope, self.star_slope, self.expected)


def lp_bias_scaling(link, kernel, p, hs=LP_BANDWIDTHS, expected=None, window_n=LP_WINDOW_N, half_range=LP_RANGE):
    """
    The L_p norms of Delta(h, .) and Delta*(h, .) over center +- half_range on the window grid, and their slopes in h.
    :param link: (Link) the link; its params give the center and, if expected is None, the smoothness beta.
    :param kernel: (Kernel1D|ProductKernel) the kernel.
    :param p: (float) the integrability index.
    :param hs: (sequence) the bandwidths.
    :param expected: (float) the expected slope; params["beta"] if None.
    :return: (LpScaling) the slopes.
    """
    params = getattr(link, "params", None) or {}
    center = params.get("center", 0.0)
    expected = params.get("beta") if expected is None else expected
    profile = BiasProfile(kernel, link, window_n=window_n)
    z, core, maximal = profile.profile(list(hs), center - half_range, center + half_range)
    dz = 1.0 / window_n
    norms = np.array([lp_norm(row, dz, p) for row in core])
    star_norms = np.array([lp_norm(row, dz, p) for row in np.maximum(core, maximal)])
    log_h = np.log(np.asarray(hs, dtype=float))
    result = LpScaling(np.asarray(hs, dtype=float), norms, star_norms, float(linregress(log_h, np.log(norms)).slope),
                       float(linregress(log_h, np.log(star_norms)).slope), expected)
    logger.info("Scaled {}: {}".format(getattr(link, "name", "link"), result))
    return result
