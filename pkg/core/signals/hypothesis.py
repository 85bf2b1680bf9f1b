"""
The hypothesis family of the pointwise lower bound: F_0 = 0 and ridges
F_i(t) = L h^beta g(theta_i'(t - x) / h), i = 1..N, with directions close to each other.
"""

import math
import numpy as np

from core.signals.hoelder import Link, bump, bump_derivative, bump_second_derivative, verify_hoelder, attach_certificate, \
    BUMP_DERIVATIVE_SUP, BUMP_SECOND_DERIVATIVE_SUP
from core.utils.errors import GuardError
from core.utils.logutils import get_logger
from core.utils.mathutils import noise_compound


# Logging
logger = get_logger(__name__)

# raw norms of (1 - 4v^2)^2 on |v| < 1/2
BUMP_L2_SQUARED = 128.0 / 315.0
BUMP_L1 = 8.0 / 15.0


def bump_hoelder_constant(beta):
    """
    The smallest c with (1 - 4v^2)^2 / c in H(beta, 1), by interpolating the derivative bounds.
    :param beta: (float) the smoothness, in (0, 2].
    :return: (float) the constant.
    """
    if beta <= 0 or beta > 2:
        raise GuardError("0 < beta <= 2 for the hypothesis bump", "invalid smoothness: {}".format(beta))
    if beta <= 1:
        return max(1.0, 2.0 ** (1.0 - beta) * BUMP_DERIVATIVE_SUP ** beta)
    return max(1.0, BUMP_DERIVATIVE_SUP,
               (2.0 * BUMP_DERIVATIVE_SUP) ** (2.0 - beta) * BUMP_SECOND_DERIVATIVE_SUP ** (beta - 1.0))


def hypothesis_bump(beta):
    """
    The default g: the C^1 bump rescaled into H(beta, 1), certified.
    :param beta: (float) the smoothness.
    :return: (Link) g, with the attributes l2_squared and l1_norm.
    """
    scale = 1.0 / bump_hoelder_constant(beta)
    g = Link(lambda v: scale * bump(v), "g(beta={})".format(beta),
             derivatives=(lambda v: scale * bump_derivative(v), lambda v: scale * bump_second_derivative(v)),
             params={"beta": beta, "L": 1.0, "scale": scale})
    g.l2_squared = BUMP_L2_SQUARED * scale ** 2
    g.l1_norm = BUMP_L1 * scale
    return attach_certificate(g, verify_hoelder(g, beta, 1.0))


class HypothesisFamily(object):
    """
    F_0 = 0 and F_1..F_N, ridges of height L h^beta centered at x along directions theta_i.
    """

    def __init__(self, beta, L, epsilon, b, g, x, d, a_frak, h, N, directions):
        self.beta = beta
        self.L = L
        self.epsilon = epsilon
        self.b = b
        self.g = g
        self.x = np.asarray(x, dtype=float)
        self.d = d
        self.a_frak = a_frak
        self.h = h
        self.N = N
        self.directions = directions

    def lambda_eps(self):
        """
        :return: (float) |F_i(x) - F_0(x)| = L h^beta |g(0)|.
        """
        return abs(float(self.value(1, self.x)))

    def value(self, i, t):
        """
        F_i at the points t.
        :param i: (int) the hypothesis index; 0 is the zero signal.
        :param t: (numpy.ndarray) points, the last axis holding the d coordinates.
        :return: (numpy.ndarray|float) the values.
        """
        t = np.asarray(t, dtype=float)
        if i == 0 or self.h == 0.0:
            return np.zeros(t.shape[:-1]) if t.ndim > 1 else 0.0
        u = (t - self.x) @ self.directions[i - 1]
        return self.L * self.h ** self.beta * self.g(u / self.h)

    def __str__(self):
        return "HypothesisFamily(beta={}, L={}, epsilon={}, b={}, d={}, N={}, h={}, a={})".format(
            self.beta, self.L, self.epsilon, self.b, self.d, self.N, self.h, self.a_frak)


def hypothesis_family(beta, L, epsilon, b, g=None, x=None, d=2):
    """
    Build the family with a^2 = 3^-d b / ||g||_2^2, h = (a eps sqrt(ln(1/eps)) / L)^(2/(2 beta + 1)),
    N = ceil(eps^-b) and theta_i = (cos(i/N), sin(i/N), 0, ...).
    :param beta: (float) the smoothness.
    :param L: (float) the Hoelder constant.
    :param epsilon: (float) the noise level.
    :param b: (float) the log-cardinality exponent, 0 <= b < 2/(2 beta + 1).
    :param g: (Link) the bump; the certified default if None. A custom g must carry l2_squared.
    :param x: (sequence) the point; the origin if None.
    :param d: (int) the dimension, 2 or 3.
    :return: (HypothesisFamily) the family.
    """
    if not 0.0 <= b < 2.0 / (2.0 * beta + 1.0):
        raise GuardError("0 <= b < 2/(2 beta + 1)", "invalid exponent b={} for beta={}".format(b, beta))
    if d not in (2, 3):
        raise GuardError("d in {2, 3}", "unsupported dimension: {}".format(d))
    g = g or hypothesis_bump(beta)
    x = np.zeros(d) if x is None else np.asarray(x, dtype=float)
    if x.shape != (d,):
        raise GuardError("x in R^d", "point {} does not match d={}".format(x, d))

    a_frak = math.sqrt(3.0 ** -d * b / g.l2_squared)
    h = (a_frak * noise_compound(epsilon) / L) ** (2.0 / (2.0 * beta + 1.0))
    N = int(math.ceil(epsilon ** -b - 1e-9))
    angles = np.arange(1, N + 1) / N
    directions = np.zeros((N, d))
    directions[:, 0] = np.cos(angles)
    directions[:, 1] = np.sin(angles)
    family = HypothesisFamily(beta, L, epsilon, b, g, x, d, a_frak, h, N, directions)
    logger.debug("Built {}".format(family))
    return family
