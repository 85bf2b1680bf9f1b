"""
Estimation procedures compared by the risk harness: the adaptive rule, the oracle and a fixed (theta, h).
Each procedure maps (observation, point) to an estimate plus a small record of its choices.
"""

from core.estimation.estimator import estimate
from core.oracle.bias import BiasProfile
from core.oracle.oracle import oracle_bandwidth, oracle_estimate
from core.selection.selector import select_estimate
from core.utils.logutils import get_logger


# Logging
logger = get_logger(__name__)


class Procedure(object):
    """
    The interface of a procedure.
    """
    name = "procedure"

    def run(self, obs, x):
        """
        :param obs: (Observation) the observation.
        :param x: (tuple) the point.
        :return: (float, dict) the estimate and what the procedure chose.
        """
        raise NotImplementedError

    def __call__(self, obs, x):
        return self.run(obs, x)[0]

    def __str__(self):
        return self.name


class AdaptiveProcedure(Procedure):
    """
    The two-stage selection rule.
    """
    name = "adaptive"

    def __init__(self, config, theta0=None):
        """
        :param config: (SelectorConfig) the rule configuration.
        :param theta0: (Direction) the true index, used only to record the alignment |theta_hat'theta0|.
        """
        self.config = config
        self.theta0 = theta0

    def run(self, obs, x):
        value, trace = select_estimate(obs, x, self.config)
        info = {"h": trace.h_hat, "fallback": trace.fallback_used}
        if self.theta0 is not None:
            info["alignment"] = abs(trace.theta_hat.dot(self.theta0))
        return value, info


class OracleProcedure(Procedure):
    """
    F_(theta0, h*)(x), with h* at the index theta0'x of the link; h* is floored at the smallest resolved level.
    """
    name = "oracle"

    def __init__(self, kernel, signal, epsilon, min_bandwidth=None, profile=None):
        """
        :param kernel: (ProductKernel) the kernel.
        :param signal: (SingleIndexSignal) the signal; its link and index are known to the oracle.
        :param epsilon: (float) the noise level entering h*.
        :param min_bandwidth: (float) the floor of the used bandwidth.
        :param profile: (BiasProfile) a prebuilt bias profile of the link, if any.
        """
        self.kernel = kernel
        self.signal = signal
        self.epsilon = epsilon
        self.min_bandwidth = min_bandwidth
        self.profile = profile or BiasProfile(kernel.factor, signal.link)
        self._h_star = {}

    def h_star(self, x):
        """
        :return: (float) h* at the index of x, memoized.
        """
        y = round(self.signal.index(x), 12)
        if y not in self._h_star:
            h = oracle_bandwidth(self.profile, self.epsilon, y)
            if self.min_bandwidth is not None and h < self.min_bandwidth:
                logger.warning("Oracle bandwidth h*={:g} at y={} (eps={}) is below the smallest resolved bandwidth {}: "
                               "floored".format(h, y, self.epsilon, self.min_bandwidth))
            self._h_star[y] = h
        return self._h_star[y]

    def is_floored(self, x):
        return self.min_bandwidth is not None and self.h_star(x) < self.min_bandwidth

    def bandwidth(self, x):
        h = self.h_star(x)
        return max(h, self.min_bandwidth) if self.min_bandwidth is not None else h

    def run(self, obs, x):
        h = self.bandwidth(x)
        value = oracle_estimate(obs, self.kernel, self.signal.theta0, h, x)
        return value, {"h": h, "h_star": self.h_star(x), "floored": self.is_floored(x)}


class FixedProcedure(Procedure):
    """
    F_(theta,h)(x) for a fixed direction and bandwidth.
    """
    name = "fixed"

    def __init__(self, kernel, theta, h):
        self.kernel = kernel
        self.theta = theta
        self.h = h

    def run(self, obs, x):
        return estimate(obs, self.kernel, self.theta, self.h, x), {"h": self.h}

