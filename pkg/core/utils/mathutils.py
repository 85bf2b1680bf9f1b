"""
Utilities for grids, quadrature nodes and the recurring noise-scale compound.
"""

import math
import numpy as np
from scipy.special import roots_legendre


def noise_compound(epsilon):
    """
    The compound epsilon * sqrt(ln(1/epsilon)) every threshold and rate is a power of.
    :param epsilon: (float|array) the noise level in (0, 1).
    :return: (float|array) epsilon * sqrt(ln(1/epsilon)).
    """
    epsilon = np.asarray(epsilon, dtype=float)
    value = epsilon * np.sqrt(np.log(1.0 / epsilon))
    return float(value) if value.ndim == 0 else value


def dyadic_grid(lower, upper=1.0, levels_per_octave=1):
    """
    Dyadic levels upper * 2^(-j/levels_per_octave) lying in [lower, upper], descending.
    :param lower: (float) the smallest admissible level.
    :param upper: (float) the largest level.
    :param levels_per_octave: (int) the refinement.
    :return: (numpy.ndarray) the levels, from the largest to the smallest.
    """
    if lower <= 0 or lower > upper:
        raise ValueError("Invalid dyadic range [{}, {}]".format(lower, upper))
    # the small slack keeps exact powers of two such as eps^2 = 2^-12
    count = int(math.floor(levels_per_octave * math.log2(upper / lower) + 1e-9)) + 1
    return upper * np.power(2.0, -np.arange(count) / levels_per_octave)


def midpoint_nodes(a, b, n):
    """
    Midpoint-rule nodes and the common weight on [a, b].
    :param a: (float) left end.
    :param b: (float) right end.
    :param n: (int) the number of cells.
    :return: (numpy.ndarray, float) the nodes and the weight (b - a) / n.
    """
    step = (b - a) / n
    return a + step * (np.arange(n) + 0.5), step


def legendre_nodes(a, b, n):
    """
    Gauss-Legendre nodes and weights on [a, b].
    :param a: (float) left end.
    :param b: (float) right end.
    :param n: (int) the number of nodes.
    :return: (numpy.ndarray, numpy.ndarray) nodes and weights.
    """
    x, w = roots_legendre(n)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def lp_norm(values, weight, p):
    """
    Discrete L_p norm of samples taken on a uniform grid.
    :param values: (array) the samples.
    :param weight: (float) the cell width.
    :param p: (float) the exponent, >= 1 or inf.
    :return: (float) the norm.
    """
    values = np.abs(np.asarray(values, dtype=float))
    if math.isinf(p):
        return float(values.max())
    return float((weight * np.sum(values ** p)) ** (1.0 / p))
