"""
The two-stage adaptive selection rule.

The first stage scans the direction grid x the bandwidth grid and computes

    R_(theta,h)(x) = max over eta <= h of { max over nu of |F_(theta,eta)(nu,eta)(x) - F_(nu,eta)(x)| - TH(eta) },

collects P(x) = {(theta, h): R <= 0}, and picks h_tilde = max h in P(x) and theta_hat, the
member at h_tilde with the smallest first coordinate. The second stage runs the Lepski scan
at theta_hat over all levels.
"""

import copy
import math
import numpy as np

from core.estimation.estimator import observation_window
from core.estimation.transform import Direction, direction_grid
from core.utils.errors import GuardError
from core.utils.logutils import get_logger
from core.utils.mathutils import dyadic_grid, noise_compound
from core.utils.poolutils import ordered_map
from core.selection.trace import SelectionTrace


# Logging
logger = get_logger(__name__)

# Defaults
DEFAULT_N_DIRECTIONS = 256
MIN_DIRECTIONS = 16
FALLBACK = Direction(1.0, 0.0)


def _factor(kernel):
    return getattr(kernel, "factor", kernel)


def lambda_const(kernel):
    """
    Lambda(K, Q) = 8 sqrt(ln(1 + 2 Q ||K||_inf)) + 50.
    :param kernel: (Kernel1D|ProductKernel) the kernel; a product kernel uses its factor.
    :return: (float) the constant.
    """
    factor = _factor(kernel)
    return 8.0 * math.sqrt(math.log(1.0 + 2.0 * factor.lipschitz_Q * factor.sup_norm)) + 50.0


def epsilon_guard(M, kernel):
    """
    The largest noise level of the standing condition: exp(-max[1, (2 M ||K||_1 / ||K||_inf)^2]).
    :param M: (float) the bound on the sup norm of the link.
    :param kernel: (Kernel1D|ProductKernel) the kernel.
    :return: (float) the guard value.
    """
    factor = _factor(kernel)
    return math.exp(-max(1.0, (2.0 * M * factor.l1_norm / factor.sup_norm) ** 2))


def check_epsilon_guard(epsilon, M, kernel, enforce=True):
    """
    Check epsilon against the guard when M is known; warn otherwise.
    :param epsilon: (float) the noise level.
    :param M: (float|None) the bound on the sup norm of the link.
    :param kernel: (Kernel1D|ProductKernel) the kernel.
    :param enforce: (bool) if True, a violation raises; if False (M computed from the signal), it is logged.
    :return: (float|None) the guard value, if M is known.
    :raise: GuardError: epsilon exceeds the guard of a configured M.
    """
    if M is None:
        logger.warning("Bound M on the link is unknown: noise level {} not checked against the guard".format(epsilon))
        return None
    guard = epsilon_guard(M, kernel)
    if epsilon > guard:
        if enforce:
            raise GuardError("epsilon <= exp(-max[1, (2 M ||K||_1 / ||K||_inf)^2])",
                             "noise level {} exceeds the guard {} for M = {}".format(epsilon, guard, M))
        logger.warning("Noise level {} exceeds the guard {} for the computed bound M = {}: continuing".format(
            epsilon, guard, M))
    return guard


def _check_scale(threshold_scale):
    if not threshold_scale > 0.0:
        raise GuardError("threshold_scale > 0", "invalid threshold scale: {}".format(threshold_scale))
    return float(threshold_scale)


class SelectorConfig(object):
    """
    Parameters of the selection rule.
    """

    def __init__(self, kernel, epsilon, r=2.0, n_directions=DEFAULT_N_DIRECTIONS, threshold_scale=1.0,
                 use_cache=True, min_bandwidth=None, renormalize=True, jobs=1):
        """
        :param kernel: (ProductKernel) the kernel.
        :param epsilon: (float) the noise level entering the thresholds, in (0, exp(-1)].
        :param r: (float) the risk order, >= 1.
        :param n_directions: (int) the size of the direction grid, >= 16.
        :param threshold_scale: (float) the multiplier of TH, > 0.
        :param use_cache: (bool) if True, row maxima are computed once per (theta, eta).
        :param min_bandwidth: (float) the smallest grid-resolved level; levels below it are flagged and not scanned.
        :param renormalize: (bool) passed to the estimators.
        :param jobs: (int) workers for the direction scan.
        """
        if not 0.0 < epsilon <= math.exp(-1.0):
            raise GuardError("0 < epsilon <= exp(-1)", "selector noise level out of range: {}".format(epsilon))
        if int(n_directions) < MIN_DIRECTIONS:
            raise GuardError("n_directions >= {}".format(MIN_DIRECTIONS), "direction grid too coarse: {}".format(n_directions))
        if r < 1.0:
            raise GuardError("r >= 1", "invalid risk order: {}".format(r))
        self.kernel = kernel
        self.epsilon = float(epsilon)
        self.r = float(r)
        self.n_directions = int(n_directions)
        self.threshold_scale = _check_scale(threshold_scale)
        self.use_cache = use_cache
        self.min_bandwidth = min_bandwidth
        self.renormalize = renormalize
        self.jobs = jobs
        unresolved = self.unresolved_levels()
        if len(unresolved) > 0:
            logger.warning("Levels {} of H_eps at eps={} are below the smallest resolved bandwidth {}: "
                           "they are flagged and left out of the scan".format(
                               ", ".join("{:g}".format(h) for h in unresolved), self.epsilon, self.min_bandwidth))

    def full_grid(self):
        """
        H_eps = {2^-k} within [eps^2, 1], descending.
        :return: (numpy.ndarray) the levels.
        """
        return dyadic_grid(self.epsilon ** 2, 1.0, 1)

    def unresolved_levels(self):
        """
        :return: (list(float)) the levels of H_eps below min_bandwidth, descending.
        """
        if self.min_bandwidth is None:
            return []
        levels = self.full_grid()
        return [float(h) for h in levels[1:] if h < self.min_bandwidth]

    def bandwidth_grid(self):
        """
        The scanned levels: H_eps without its unresolved levels. The level 1 is always kept.
        :return: (numpy.ndarray) the levels, descending.
        """
        levels = self.full_grid()
        if self.min_bandwidth is None:
            return levels
        return levels[(levels >= self.min_bandwidth) | (levels == 1.0)]

    def directions(self):
        return direction_grid(self.n_directions)

    def with_scale(self, threshold_scale):
        """
        :return: (SelectorConfig) a copy with another threshold scale.
        """
        other = copy.copy(self)
        other.threshold_scale = _check_scale(threshold_scale)
        return other

    def __str__(self):
        return "SelectorConfig(epsilon={}, r={}, n_directions={}, threshold_scale={}, levels={})".format(
            self.epsilon, self.r, self.n_directions, self.threshold_scale, len(self.bandwidth_grid()))


def threshold(eta, config):
    """
    TH(eta) = 2 ||K||_inf^2 [Lambda + sqrt(4r + 2) + 1] eps sqrt(ln(1/eps) / eta), times the scale.
    :param eta: (float|numpy.ndarray) the level(s) in (0, 1].
    :param config: (SelectorConfig) the configuration.
    :return: (float|numpy.ndarray) the threshold(s).
    """
    factor = _factor(config.kernel)
    constant = 2.0 * factor.sup_norm ** 2 * (lambda_const(factor) + math.sqrt(4.0 * config.r + 2.0) + 1.0)
    value = config.threshold_scale * constant * noise_compound(config.epsilon) / np.sqrt(eta)
    return float(value) if np.ndim(value) == 0 else value


def check_point(x):
    if not (abs(x[0]) <= 0.5 and abs(x[1]) <= 0.5):
        raise GuardError("x in [-1/2, 1/2]^2", "estimation point out of range: {}".format(x))


class SelectionEngine(object):
    """
    The row computations of the rule at one point, over one observation.
    """

    def __init__(self, obs, x, config):
        check_point(x)
        self.config = config
        self.window = observation_window(obs, x, config.renormalize)
        self.directions = config.directions()
        self.levels = config.bandwidth_grid()
        off_grid = [float(h) for h in self.levels if not obs.grid.is_resolved(h)]
        if off_grid:
            logger.debug("Scanned levels {} are not resolved by {}".format(off_grid, obs.grid))
        self.unresolved = sorted(set(config.unresolved_levels()) | set(off_grid), reverse=True)
        self.thresholds = np.array([threshold(h, config) for h in self.levels])
        self._singles = {}
        self._gaps = {}

    def single(self, j):
        """
        F_(nu, eta_j)(x) for every grid direction nu.
        """
        if not self.config.use_cache:
            return self.window.single_row(self.config.kernel, self.directions, self.levels[j])
        if j not in self._singles:
            self._singles[j] = self.window.single_row(self.config.kernel, self.directions, self.levels[j])
        return self._singles[j]

    def gap(self, theta, j, key=None):
        """
        max over grid nu of |F_(theta,eta_j)(nu,eta_j)(x) - F_(nu,eta_j)(x)|.
        :param theta: (numpy.ndarray) the direction, shape (2,).
        :param j: (int) the level index.
        :param key: (hashable) cache key of theta; None disables caching.
        """
        if self.config.use_cache and key is not None and (key, j) in self._gaps:
            return self._gaps[(key, j)]
        pairs = self.window.pair_row(self.config.kernel, theta, self.directions, self.levels[j])
        value = float(np.max(np.abs(pairs - self.single(j))))
        if self.config.use_cache and key is not None:
            self._gaps[(key, j)] = value
        return value

    def R(self, theta, i, key=None):
        """
        R_(theta, h_i)(x): the running maximum of gap - TH over the levels eta_j <= h_i.
        """
        return max(self.gap(theta, j, key) - self.thresholds[j] for j in range(i, len(self.levels)))

    def R_row(self, k):
        """
        R_(theta_k, h)(x) for every level h, descending.
        """
        theta = self.directions[k]
        if not self.config.use_cache:
            return [self.R(theta, i) for i in range(len(self.levels))]
        gaps = [self.gap(theta, j, k) - self.thresholds[j] for j in range(len(self.levels))]
        row = [0.0] * len(self.levels)
        running = -math.inf
        for j in range(len(self.levels) - 1, -1, -1):
            running = max(running, gaps[j])
            row[j] = running
        return row

    def prepare(self):
        """
        Fill the per-level single rows before a concurrent scan.
        """
        if self.config.use_cache:
            for j in range(len(self.levels)):
                self.single(j)

    def level_estimates(self, theta):
        """
        F_(theta, h)(x) for every level, descending.
        """
        theta = np.asarray(theta, dtype=float).reshape(1, 2)
        return np.array([self.window.single_row(self.config.kernel, theta, h)[0] for h in self.levels])


def compute_R(obs, theta, h, x, config):
    """
    R_(theta,h)(x), the sup over nu approximated on the direction grid.
    :param obs: (Observation) the observation.
    :param theta: (Direction) the direction.
    :param h: (float) a level of the bandwidth grid.
    :param x: (tuple) the point.
    :param config: (SelectorConfig) the configuration.
    :return: (float) the statistic.
    """
    engine = SelectionEngine(obs, x, config)
    matches = np.nonzero(np.isclose(engine.levels, h, rtol=0.0, atol=1e-15))[0]
    if len(matches) == 0:
        raise GuardError("h in H_eps", "bandwidth {} is not a grid level".format(h))
    return engine.R(theta.as_array(), int(matches[0]))


def _first_stage(engine, trace):
    engine.prepare()
    rows = ordered_map(engine.R_row, range(len(engine.directions)), engine.config.jobs)
    for k, row in enumerate(rows):
        for i, h in enumerate(engine.levels):
            trace.record(k, float(h), row[i])

    if len(trace.P_membership) == 0:
        trace.theta_hat, trace.theta_index, trace.h_tilde, trace.fallback_used = FALLBACK, None, None, True
        logger.debug("P(x) is empty at x={}: falling back to {}".format(trace.x, FALLBACK))
        return trace.theta_hat, None, trace.P_membership

    h_tilde = max(h for _, h in trace.P_membership)
    members = [k for k, h in trace.P_membership if h == h_tilde]
    k_hat = min(members, key=lambda k: (engine.directions[k, 0], engine.directions[k, 1]))
    trace.h_tilde = h_tilde
    trace.theta_index = k_hat
    trace.theta_hat = Direction(engine.directions[k_hat, 0], engine.directions[k_hat, 1])
    return trace.theta_hat, h_tilde, trace.P_membership


def first_stage(obs, x, config):
    """
    Scan the direction grid x the bandwidth grid.
    :return: (Direction, float|None, set) theta_hat, h_tilde (None when P is empty) and P(x).
    """
    engine = SelectionEngine(obs, x, config)
    trace = SelectionTrace(x, engine.levels, engine.directions, engine.unresolved, engine.config.min_bandwidth)
    return _first_stage(engine, trace)


def _second_stage(engine, theta_hat):
    estimates = engine.level_estimates(theta_hat.as_array())
    levels = engine.levels
    for i in range(len(levels)):
        if all(abs(estimates[i] - estimates[j]) <= engine.thresholds[j] for j in range(i + 1, len(levels))):
            return float(levels[i]), float(estimates[i]), estimates
    # unreachable: the smallest level has no check
    return float(levels[-1]), float(estimates[-1]), estimates


def second_stage(obs, theta_hat, x, config):
    """
    h_hat = the largest level h with |F_(theta_hat,h)(x) - F_(theta_hat,eta)(x)| <= TH(eta) for all eta <= h.
    :return: (float) h_hat.
    """
    engine = SelectionEngine(obs, x, config)
    return _second_stage(engine, theta_hat)[0]


def select_estimate(obs, x, config):
    """
    The final estimate F_(theta_hat, h_hat)(x) with the full trace.
    :param obs: (Observation) the observation.
    :param x: (tuple) the point.
    :param config: (SelectorConfig) the configuration.
    :return: (float, SelectionTrace) the estimate and the trace.
    """
    engine = SelectionEngine(obs, x, config)
    trace = SelectionTrace(x, engine.levels, engine.directions, engine.unresolved, engine.config.min_bandwidth)
    theta_hat, _, _ = _first_stage(engine, trace)
    h_hat, value, estimates = _second_stage(engine, theta_hat)
    trace.h_hat = h_hat
    trace.estimate = value
    trace.level_estimates = [float(v) for v in estimates]
    logger.debug("Selected {}".format(trace))
    return value, trace
