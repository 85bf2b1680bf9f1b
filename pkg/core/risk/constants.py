"""
The constants of the oracle inequality and the bounds built from them.
"""

import math
import numpy as np

from core.oracle.bias import BiasProfile
from core.oracle.oracle import c_r_constant, oracle_bandwidth_table
from core.selection.selector import lambda_const
from core.utils.mathutils import noise_compound


# Defaults
INDEX_RANGE = (-0.5, 0.5)


def _factor(kernel):
    return getattr(kernel, "factor", kernel)


def c_r1(kernel, r):
    """
    C_(r,1) = 8 [Lambda + sqrt(4r + 2) + 1] + c_r [(2 + sqrt 2) Lambda + 2] + 1.
    :param kernel: (Kernel1D|ProductKernel) the kernel.
    :param r: (float) the risk order.
    :return: (float) the constant.
    """
    lam = lambda_const(kernel)
    return 8.0 * (lam + math.sqrt(4.0 * r + 2.0) + 1.0) + c_r_constant(r) * ((2.0 + math.sqrt(2.0)) * lam + 2.0) + 1.0


def c_r2(kernel, r, M):
    """
    C_(r,2) = 2^(1/r) [2 M + Lambda c_(2r)].
    :param M: (float) the bound on the sup norm of the link.
    """
    return 2.0 ** (1.0 / r) * (2.0 * M + lambda_const(kernel) * c_r_constant(2.0 * r))


def adaptive_risk_bound(kernel, epsilon, r, M, h_star):
    """
    The pointwise oracle inequality
    C_(r,1) sqrt(||K||_inf^4 eps^2 ln(1/eps) / h*) + C_(r,2) ||K||_inf^2 eps sqrt(ln(1/eps)).
    :param h_star: (float) h* at the index of the point.
    :return: (float) the bound on the pointwise risk of the adaptive estimator.
    """
    sup = _factor(kernel).sup_norm
    compound = noise_compound(epsilon)
    return c_r1(kernel, r) * sup ** 2 * compound / math.sqrt(h_star) + c_r2(kernel, r, M) * sup ** 2 * compound


def global_oracle_bound(link, kernel, epsilon, r, M=None, ys=INDEX_RANGE, profile=None):
    """
    The global oracle inequality
    C_(r,1) || sqrt(||K||_inf^4 eps^2 ln(1/eps) / h*(.)) ||_(L_r[ys]) + C_(r,2) ||K||_inf^2 eps sqrt(ln(1/eps)).
    :param link: (Link) the link.
    :param kernel: (Kernel1D|ProductKernel) the kernel.
    :param epsilon: (float) the noise level.
    :param r: (float) the risk order.
    :param M: (float) the bound on |f|; the sup of the link over the index range if None.
    :param ys: (float, float) the index range of the norm.
    :param profile: (BiasProfile) a prebuilt profile of the link, if any.
    :return: (float) the bound.
    """
    factor = _factor(kernel)
    profile = profile or BiasProfile(factor, link)
    z, h_star = oracle_bandwidth_table(profile, epsilon, ys[0], ys[1])
    if M is None:
        M = link.sup(ys[0] - 1.0, ys[1] + 1.0)
    compound = noise_compound(epsilon)
    term = factor.sup_norm ** 2 * compound / np.sqrt(h_star)
    # z is uniform over ys, so the mean is the normalised integral
    norm = float(np.mean(term ** r) * (ys[1] - ys[0])) ** (1.0 / r)
    return c_r1(factor, r) * norm + c_r2(factor, r, M) * factor.sup_norm ** 2 * compound
