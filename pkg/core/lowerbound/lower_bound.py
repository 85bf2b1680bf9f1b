"""
Numerical verification of the hypothesis-family conditions behind the pointwise lower bound:

    |F_i(x) - F_0(x)| = lambda_eps,
    <F_i - F_0, F_j - F_0> <= c eps^2 for i != j,
    ||F_i - F_0||_2^2 <= rho eps^2 ln N,

with F_0 = 0, and the resulting bound (1/2)(1 - sqrt((e^c - 1)/(e^c + 3))) lambda_eps.
"""

import math
import numpy as np

from core.risk.rates import psi_rate
from core.signals.hypothesis import hypothesis_family
from core.utils.errors import GuardError
from core.utils.logutils import get_logger
from core.utils.mathutils import midpoint_nodes
from core.utils.poolutils import ordered_map
from core.utils.report import SimpleReport


# Logging
logger = get_logger(__name__)

# Defaults
DEFAULT_C = 1.0
DEFAULT_RHO = 1.0 / 3.0
GRID_N = {2: 512, 3: 192}
BLOCK_POINTS = 1 << 15
DOMAIN_HALFWIDTH = 1.0
QUADRATURE_TOL = 0.02
SEPARATION_TOL = 1e-10
SYMMETRY_TOL = 1e-12


class LBReport(object):
    """
    The quantities of the family and one pass/fail flag per condition.
    """

    def __init__(self, family, c, rho, grid_n):
        self.family = family
        self.c_used = float(c)
        self.rho_used = float(rho)
        self.grid_n = grid_n
        self.values = {}
        self.flags = {}

    def set(self, name, value):
        self.values[name] = value

    def flag(self, name, passed):
        self.flags[name] = bool(passed)

    def passed(self):
        return all(self.flags.values())

    def failures(self):
        return [name for name, ok in self.flags.items() if not ok]

    @property
    def lambda_eps(self):
        return self.values["lambda_eps"]

    @property
    def max_cross_inner(self):
        return self.values["max_cross_inner"]

    @property
    def max_sq_norm(self):
        return self.values["max_sq_norm"]

    @property
    def bound_value(self):
        return self.values["bound_value"]

    def to_report(self):
        """
        :return: (SimpleReport) the sectioned rendering.
        """
        report = SimpleReport("LOWER BOUND FAMILY")
        family = self.family
        report.add_all("family", {"beta": family.beta, "L": family.L, "epsilon": family.epsilon, "b": family.b,
                                  "d": family.d, "N": family.N, "h": family.h, "a": family.a_frak,
                                  "grid_n": self.grid_n})
        report.add_all("values", self.values)
        report.add("values", "c_used", self.c_used)
        report.add("values", "rho_used", self.rho_used)
        report.add_all("flags", self.flags)
        return report

    def __str__(self):
        return "LBReport(N={}, passed={}, failures={})".format(self.family.N, self.passed(), self.failures())


def bound_value(lambda_eps, c):
    """
    (1/2)(1 - sqrt((e^c - 1)/(e^c + 3))) lambda_eps.
    :param lambda_eps: (float) the separation.
    :param c: (float) the cross-product constant, > 0.
    :return: (float) the lower bound on the risk.
    """
    if c <= 0:
        raise GuardError("c > 0", "invalid cross-product constant: {}".format(c))
    # expm1 keeps the radical accurate as c -> 0
    e = math.expm1(c)
    return 0.5 * (1.0 - math.sqrt(e / (e + 4.0))) * lambda_eps


def _slab_gram(family, nodes, weight, block):
    """
    The Gram matrix of F_1..F_N restricted to the cells whose first coordinate index lies in block.
    """
    d = family.d
    axes = [nodes[block]] + [nodes] * (d - 1)
    points = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    values = np.array([family.value(i, points) for i in range(1, family.N + 1)])
    return values @ values.T * weight


def gram_matrix(family, grid_n=None, jobs=1):
    """
    <F_i, F_j> over [-1, 1]^d by the midpoint rule, for i, j = 1..N.
    The grid is swept in blocks of first-coordinate slabs; partial sums are added in slab order.
    :param family: (HypothesisFamily) the family.
    :param grid_n: (int) cells per axis; 512 for d = 2 and 192 for d = 3 if None.
    :param jobs: (int) workers over the slabs.
    :return: (numpy.ndarray) the (N, N) matrix.
    """
    grid_n = grid_n or GRID_N[family.d]
    nodes, step = midpoint_nodes(-DOMAIN_HALFWIDTH, DOMAIN_HALFWIDTH, grid_n)
    rows = max(1, BLOCK_POINTS // grid_n ** (family.d - 1))
    blocks = [slice(start, min(start + rows, grid_n)) for start in range(0, grid_n, rows)]
    partial = ordered_map(lambda block: _slab_gram(family, nodes, step ** family.d, block), blocks, jobs)
    gram = np.zeros((family.N, family.N))
    for part in partial:
        gram += part
    return gram


def cross_analytic_bound(family):
    """
    3^(d-2) 2 ||g||_1^2 a^2 eps^2 ln(1/eps) N h, the bound on every cross product.
    """
    return (3.0 ** (family.d - 2) * 2.0 * family.g.l1_norm ** 2 * family.a_frak ** 2
            * family.epsilon ** 2 * math.log(1.0 / family.epsilon) * family.N * family.h)


def norm_analytic_bound(family):
    """
    3^(d-1) ||g||_2^2 L^2 h^(2 beta + 1), the bound on every squared norm.
    """
    return 3.0 ** (family.d - 1) * family.g.l2_squared * family.L ** 2 * family.h ** (2.0 * family.beta + 1.0)


def _off_diagonal(gram):
    return gram[~np.eye(len(gram), dtype=bool)]


def cross_inner_bound_check(family, gram=None, grid_n=None, jobs=1):
    """
    The largest ratio of a quadrature cross product to its analytic bound.
    :param family: (HypothesisFamily) the family.
    :param gram: (numpy.ndarray) a precomputed Gram matrix, if any.
    :return: (float) the ratio; 0 when the family has fewer than two members.
    """
    if family.N < 2 or family.h == 0.0:
        return 0.0
    gram = gram_matrix(family, grid_n, jobs) if gram is None else gram
    return float(np.max(_off_diagonal(gram)) / cross_analytic_bound(family))


def check_family(family, c=DEFAULT_C, rho=DEFAULT_RHO, grid_n=None, jobs=1):
    """
    Check the three conditions and the analytic displays on a hypothesis family.
    :param family: (HypothesisFamily) the family, built with its own epsilon.
    :param c: (float) the cross-product constant.
    :param rho: (float) the norm constant.
    :param grid_n: (int) quadrature cells per axis.
    :param jobs: (int) workers.
    :return: (LBReport) the report; failed conditions are flagged, never raised.
    """
    grid_n = grid_n or GRID_N[family.d]
    report = LBReport(family, c, rho, grid_n)
    eps = family.epsilon

    separation = abs(float(family.value(1, family.x)) - float(family.value(0, family.x)))
    closed_form = abs(float(family.g(0.0))) * family.a_frak ** (2.0 * family.beta / (2.0 * family.beta + 1.0)) \
        * psi_rate(family.beta, family.L, eps)
    separations = [abs(float(family.value(i, family.x))) for i in range(1, family.N + 1)]
    report.set("lambda_eps", separation)
    report.set("lambda_closed_form", closed_form)
    report.flag("separation", max(abs(s - closed_form) for s in separations) <= SEPARATION_TOL)

    gram = gram_matrix(family, grid_n, jobs)
    norms = np.diag(gram)
    max_sq_norm = float(np.max(norms))
    norm_bound = rho * eps ** 2 * math.log(family.N)
    report.set("max_sq_norm", max_sq_norm)
    report.set("norm_bound", norm_bound)
    report.set("norm_analytic_bound", norm_analytic_bound(family))
    report.flag("norm", max_sq_norm <= norm_bound * (1.0 + QUADRATURE_TOL))
    report.flag("norm_analytic", max_sq_norm <= norm_analytic_bound(family) * (1.0 + QUADRATURE_TOL))

    symmetry = float(np.max(np.abs(gram - gram.T)))
    report.set("symmetry_residual", symmetry)
    report.flag("symmetry", symmetry <= SYMMETRY_TOL)

    if family.N > 1:
        cross = np.where(np.eye(family.N, dtype=bool), -np.inf, gram)
        i, j = np.unravel_index(np.argmax(cross), cross.shape)
        max_cross = float(cross[i, j])
        report.set("max_cross_inner", max_cross)
        report.set("argmax_pair", "{}-{}".format(i + 1, j + 1))
        report.set("smallest_c", max(0.0, max_cross) / eps ** 2)
        report.set("cross_bound_ratio", cross_inner_bound_check(family, gram))
    else:
        max_cross = 0.0
        report.set("max_cross_inner", 0.0)
        report.set("argmax_pair", "none")
        report.set("smallest_c", 0.0)
        report.set("cross_bound_ratio", 0.0)
    report.flag("cross", max_cross <= c * eps ** 2)
    report.flag("cross_analytic", report.values["cross_bound_ratio"] <= 1.0 + QUADRATURE_TOL)
    report.set("bound_value", bound_value(separation, c))

    logger.info("Checked {}: {}".format(family, report))
    return report


def smallest_passing_epsilon(beta, L, b, epsilons, c=DEFAULT_C, rho=DEFAULT_RHO, d=2, grid_n=None, jobs=1):
    """
    Scan decreasing noise levels and return the first at which every condition passes.
    :param epsilons: (sequence) the noise levels, scanned in decreasing order.
    :return: (float, LBReport) the level and its report; (None, last report) if none passes.
    """
    report = None
    for eps in sorted(epsilons, reverse=True):
        report = check_family(hypothesis_family(beta, L, eps, b, d=d), c, rho, grid_n, jobs)
        if report.passed():
            return eps, report
    return None, report
