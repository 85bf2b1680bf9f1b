"""
Calibration of the threshold scale on pure noise.

At scale s every threshold is s * TH1(eta), TH1 being the scale-one threshold. Under F = 0 the rule keeps
h = 1 iff some direction has c1 = max_eta gap(theta, eta) / TH1(eta) <= s (first stage) and the selected
direction has c2 = max_eta |F_(theta,1)(x) - F_(theta,eta)(x)| / TH1(eta) <= s (second stage).
Both ratios are computed once per replicate, so the whole scale grid costs a single selector pass.
"""

import numpy as np

from core.field.noise_field import simulate
from core.selection.selector import SelectorConfig, SelectionEngine, DEFAULT_N_DIRECTIONS
from core.utils.logutils import get_logger
from core.utils.poolutils import ordered_map


# Logging
logger = get_logger(__name__)

# Defaults
TARGET_RATE = 0.05
SCALE_GRID = 2.0 ** (np.arange(-16, 17) / 4.0)
DEFAULT_REPLICATES = 200
ORIGIN = (0.0, 0.0)


class CalibrationResult(object):
    """
    The calibrated scale and the false-rejection rate of every scale of the grid.
    """

    def __init__(self, scale, rate, hit_top, scales, rates, epsilon, replicates, seed):
        self.scale = float(scale)
        self.rate = float(rate)
        self.hit_top = hit_top
        self.scales = scales
        self.rates = rates
        self.epsilon = epsilon
        self.replicates = replicates
        self.seed = seed

    def rows(self):
        return [[float(s), float(r)] for s, r in zip(self.scales, self.rates)]

    def header_lines(self):
        """
        :return: (list(string)) the calibration as report comments.
        """
        return ["calibrated_scale = {}".format(self.scale),
                "calibration_rate = {}".format(self.rate),
                "calibration_epsilon = {}".format(self.epsilon),
                "calibration_replicates = {}".format(self.replicates),
                "calibration_seed = {}".format(self.seed),
                "calibration_hit_top = {}".format(self.hit_top)]

    def __str__(self):
        return "CalibrationResult(scale={}, rate={}, hit_top={})".format(self.scale, self.rate, self.hit_top)


def critical_ratios(engine):
    """
    The scale-free ratios c1 (per direction) and c2 (per direction) of one observation.
    :param engine: (SelectionEngine) an engine built at scale one.
    :return: (numpy.ndarray, numpy.ndarray) c1 and c2, aligned with the direction grid.
    """
    n_levels = len(engine.levels)
    engine.prepare()
    c1 = np.array([max(engine.gap(engine.directions[k], j, k) / engine.thresholds[j] for j in range(n_levels))
                   for k in range(len(engine.directions))])
    if n_levels == 1:
        return c1, np.zeros(len(engine.directions))
    singles = np.array([engine.single(j) for j in range(n_levels)])
    c2 = np.max(np.abs(singles[0] - singles[1:]) / engine.thresholds[1:, None], axis=0)
    return c1, c2


def rejects(c1, c2, directions, scale):
    """
    Whether the rule at the given scale fails to select h = 1.
    """
    members = np.nonzero(c1 <= scale)[0]
    if len(members) == 0:
        return True
    k_hat = min(members, key=lambda k: (directions[k, 0], directions[k, 1]))
    return bool(c2[k_hat] > scale)


def calibrate_threshold(kernel, epsilon, grid, replicates=DEFAULT_REPLICATES, seed=0, n_directions=DEFAULT_N_DIRECTIONS,
                        r=2.0, x=ORIGIN, target=TARGET_RATE, min_bandwidth=None, scales=SCALE_GRID, jobs=1):
    """
    The smallest scale of the grid whose false-rejection rate of h = 1 under F = 0 is at most the target.
    :param kernel: (ProductKernel) the kernel.
    :param epsilon: (float) the noise level.
    :param grid: (GridSpec) the grid.
    :param replicates: (int) pure-noise replicates.
    :param seed: (int) the master seed.
    :param n_directions: (int) the direction grid of the rule.
    :param r: (float) the risk order.
    :param x: (tuple) the point.
    :param target: (float) the admissible rate.
    :param min_bandwidth: (float) the smallest level of the rule.
    :param scales: (sequence) the candidate scales, ascending.
    :param jobs: (int) workers over replicates.
    :return: (CalibrationResult) the result; hit_top is set when no scale reaches the target.
    """
    config = SelectorConfig(kernel, epsilon, r=r, n_directions=n_directions, threshold_scale=1.0,
                            min_bandwidth=min_bandwidth)
    directions = config.directions()

    def replicate(k):
        obs = simulate(None, epsilon, grid, seed, replicate=k)
        return critical_ratios(SelectionEngine(obs, x, config))

    ratios = ordered_map(replicate, range(replicates), jobs)
    rates = np.array([np.mean([rejects(c1, c2, directions, s) for c1, c2 in ratios]) for s in scales])

    passing = np.nonzero(rates <= target)[0]
    if len(passing) == 0:
        logger.warning("No threshold scale up to {} keeps the false-rejection rate below {}: using the top".format(
            scales[-1], target))
        result = CalibrationResult(scales[-1], rates[-1], True, scales, rates, epsilon, replicates, seed)
    else:
        i = passing[0]
        result = CalibrationResult(scales[i], rates[i], False, scales, rates, epsilon, replicates, seed)
    logger.info("Calibrated {}".format(result))
    return result
