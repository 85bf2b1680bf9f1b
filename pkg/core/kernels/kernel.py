"""
One-dimensional kernels supported on [-1/2, 1/2] and their product kernels.

Polynomial kernels are stored as an even polynomial q with K(u) = q(u^2) on the
support, so that K(u) == K(-u) holds bit-exactly. Higher-order kernels have the
form K(u) = p(u) (1 - 4u^2) with p even; p solves the moment system exactly
(sympy rationals) and all declared constants are exact.
"""

import numpy as np
import sympy

from core.utils.errors import CertificationError, GuardError
from core.utils.logutils import get_logger
from core.utils.mathutils import legendre_nodes


# Logging
logger = get_logger(__name__)

# Defaults
SUPPORT_HALFWIDTH = 0.5
DEFAULT_GRID_N = 4096
MOMENT_TOL = 1e-8
NORM_TOL = 1e-6
SYMMETRY_TOL = 1e-12
TEST_RANGE = 0.6
PANEL_NODES = 16


class Kernel1D(object):
    """
    A symmetric kernel on [-1/2, 1/2] with declared norms, Lipschitz constant and moment order.
    Instances are immutable after construction and can be shared across workers.
    """

    def __init__(self, evaluator, lipschitz_Q, sup_norm, l1_norm, l2_norm, moment_order, name="kernel", coefficients=None):
        """
        Create a new kernel.
        :param evaluator: (callable) vectorised u -> K(u); must vanish outside [-1/2, 1/2].
        :param lipschitz_Q: (float) the declared Lipschitz constant Q.
        :param sup_norm: (float) the declared sup norm.
        :param l1_norm: (float) the declared L1 norm.
        :param l2_norm: (float) the declared L2 norm.
        :param moment_order: (int) the declared vanishing-moment order m_b.
        :param name: (string) a label used in reports.
        :param coefficients: (tuple) the coefficients of q in K(u) = q(u^2), if polynomial.
        """
        self._evaluator = evaluator
        self.support_halfwidth = SUPPORT_HALFWIDTH
        self.lipschitz_Q = float(lipschitz_Q)
        self.sup_norm = float(sup_norm)
        self.l1_norm = float(l1_norm)
        self.l2_norm = float(l2_norm)
        self.moment_order = int(moment_order)
        self.name = name
        self.coefficients = tuple(coefficients) if coefficients is not None else None

    @classmethod
    def from_even_polynomial(cls, q, lipschitz_Q, sup_norm, l1_norm, l2_norm, moment_order, name):
        """
        Build a kernel K(u) = q(u^2) on [-1/2, 1/2], zero outside.
        :param q: (sequence(float)) coefficients of q, lowest degree first.
        :return: (Kernel1D) the kernel.
        """
        coefficients = tuple(float(c) for c in q)
        reversed_coefficients = coefficients[::-1]
        limit = SUPPORT_HALFWIDTH ** 2

        def evaluator(u):
            u = np.asarray(u, dtype=float)
            s = u * u
            value = np.zeros_like(s)
            for c in reversed_coefficients:
                value = value * s + c
            return np.where(s <= limit, value, 0.0)

        return cls(evaluator, lipschitz_Q, sup_norm, l1_norm, l2_norm, moment_order, name=name, coefficients=coefficients)

    def __call__(self, u):
        return self._evaluator(u)

    def __str__(self):
        return "Kernel1D({}: Q={}, sup={}, l1={}, l2={}, m_b={})".format(
            self.name, self.lipschitz_Q, self.sup_norm, self.l1_norm, self.l2_norm, self.moment_order)

    def __repr__(self):
        return self.__str__()


class ProductKernel(object):
    """
    The product kernel K(u, v) = K(u) K(v).
    """

    def __init__(self, factor):
        """
        :param factor: (Kernel1D) the one-dimensional factor.
        """
        self.factor = factor
        self.sup_norm = factor.sup_norm ** 2
        self.l2_norm = factor.l2_norm ** 2
        self.l1_norm = factor.l1_norm ** 2

    def __call__(self, u, v):
        return self.factor(u) * self.factor(v)

    def __str__(self):
        return "ProductKernel({})".format(self.factor.name)

    def __repr__(self):
        return self.__str__()


class CertificationReport(object):
    """
    Recomputed kernel quantities and one pass/fail flag per invariant.
    """

    def __init__(self, kernel_name, grid_n):
        self.kernel_name = kernel_name
        self.grid_n = grid_n
        self.values = {}
        self.flags = {}

    def set(self, name, value):
        self.values[name] = value

    def flag(self, name, passed):
        self.flags[name] = bool(passed)

    def passed(self):
        """
        :return: (bool) True if every flag passed.
        """
        return all(self.flags.values())

    def failures(self):
        """
        :return: (list) the names of failed flags.
        """
        return [name for name, ok in self.flags.items() if not ok]

    def __str__(self):
        return "CertificationReport({}: passed={}, failures={})".format(self.kernel_name, self.passed(), self.failures())


def support_quadrature(grid_n):
    """
    Composite Gauss-Legendre nodes on [-1/2, 1/2], mirrored so the rule is exactly symmetric.
    :param grid_n: (int) the total number of nodes (rounded to a multiple of 2 * PANEL_NODES).
    :return: (numpy.ndarray, numpy.ndarray) nodes and weights.
    """
    panels = max(1, grid_n // (2 * PANEL_NODES))
    edges = np.linspace(0.0, SUPPORT_HALFWIDTH, panels + 1)
    half_nodes, half_weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = legendre_nodes(a, b, PANEL_NODES)
        half_nodes.append(x)
        half_weights.append(w)
    x = np.concatenate(half_nodes)
    w = np.concatenate(half_weights)
    return np.concatenate([-x[::-1], x]), np.concatenate([w[::-1], w])


def certify(kernel, grid_n=DEFAULT_GRID_N):
    """
    Recompute every kernel invariant numerically.
    Integrals use an exactly symmetric composite Gauss-Legendre rule on the support;
    sup norm and Lipschitz constant use a uniform grid on [-0.6, 0.6] plus the origin.
    :param kernel: (Kernel1D) the kernel.
    :param grid_n: (int) the resolution, >= 64.
    :return: (CertificationReport) the report; failed checks are flagged, never raised.
    """
    if grid_n < 64:
        raise GuardError("grid_n >= 64", "certification grid too coarse: {}".format(grid_n))

    report = CertificationReport(kernel.name, grid_n)

    nodes, weights = support_quadrature(grid_n)
    k_nodes = kernel(nodes)
    integral = float(np.sum(weights * k_nodes))
    l1 = float(np.sum(weights * np.abs(k_nodes)))
    l2 = float(np.sqrt(np.sum(weights * k_nodes ** 2)))

    u = np.union1d(np.linspace(-TEST_RANGE, TEST_RANGE, grid_n), [0.0])
    k_grid = kernel(u)
    sup = float(np.max(np.abs(k_grid)))
    slopes = np.abs(np.diff(k_grid)) / np.diff(u)
    q_estimate = float(np.max(slopes))
    outside = np.abs(u) > SUPPORT_HALFWIDTH
    support_leak = float(np.max(np.abs(k_grid[outside]))) if np.any(outside) else 0.0
    asymmetry = float(np.max(np.abs(k_grid - kernel(-u))))

    report.set("integral", integral)
    report.set("l1_norm", l1)
    report.set("l2_norm", l2)
    report.set("sup_norm", sup)
    report.set("lipschitz_Q", q_estimate)
    report.set("support_leak", support_leak)
    report.set("asymmetry", asymmetry)

    report.flag("integral", abs(integral - 1.0) <= MOMENT_TOL)
    report.flag("support", support_leak == 0.0)
    report.flag("symmetry", asymmetry <= SYMMETRY_TOL)
    report.flag("lipschitz", q_estimate <= kernel.lipschitz_Q * (1.0 + NORM_TOL) + NORM_TOL)
    report.flag("sup_norm", abs(sup - kernel.sup_norm) <= NORM_TOL)
    report.flag("l1_norm", abs(l1 - kernel.l1_norm) <= NORM_TOL)
    report.flag("l2_norm", abs(l2 - kernel.l2_norm) <= NORM_TOL)
    report.flag("norm_chain", 1.0 - NORM_TOL <= l1 <= l2 + NORM_TOL and l2 <= sup + NORM_TOL)

    for j in range(1, kernel.moment_order + 2):
        moment = float(np.sum(weights * nodes ** j * k_nodes))
        report.set("moment_{}".format(j), moment)
        if j % 2 == 1:
            report.flag("moment_{}".format(j), abs(moment) <= SYMMETRY_TOL)
        elif j <= kernel.moment_order:
            report.flag("moment_{}".format(j), abs(moment) <= MOMENT_TOL)

    logger.debug("Certified {}: {}".format(kernel.name, report))
    return report


def make_default_kernel():
    """
    The parabolic kernel K(u) = (3/2)(1 - 4u^2) on [-1/2, 1/2].
    Q = 6, sup norm 3/2, L2 norm sqrt(6/5), moment order 1.
    :return: (Kernel1D) the kernel.
    """
    return Kernel1D.from_even_polynomial(
        q=(1.5, -6.0),
        lipschitz_Q=6.0,
        sup_norm=1.5,
        l1_norm=1.0,
        l2_norm=float(np.sqrt(1.2)),
        moment_order=1,
        name="parabolic")


def solve_moment_system(m_b):
    """
    Solve for the even polynomial p with K(u) = p(u)(1 - 4u^2), int K = 1 and int u^{2j} K = 0, 2j <= m_b.
    :param m_b: (int) the requested moment order.
    :return: (sympy.Expr, sympy.Symbol) K(u) as an exact expression, and u.
    """
    u = sympy.Symbol("u", real=True)
    k = m_b // 2
    a = sympy.symbols("a0:{}".format(k + 1))
    p = sum(a[i] * u ** (2 * i) for i in range(k + 1))
    kernel = p * (1 - 4 * u ** 2)
    half = sympy.Rational(1, 2)
    equations = [sympy.integrate(kernel, (u, -half, half)) - 1]
    equations += [sympy.integrate(u ** (2 * j) * kernel, (u, -half, half)) for j in range(1, k + 1)]
    solution = sympy.solve(equations, a, dict=True)[0]
    return sympy.expand(kernel.subs(solution)), u


def _extremum(expr, u, candidates):
    half = sympy.Rational(1, 2)
    points = [-half, half] + [r for r in candidates if -half <= r <= half]
    return max(abs(float(expr.subs(u, r).evalf(30))) for r in points)


def _real_roots(expr, u):
    poly = sympy.Poly(expr, u)
    if poly.degree() < 1:
        return []
    return [sympy.Float(sympy.re(r), 30) for r in poly.nroots(n=30) if abs(sympy.im(r)) < 1e-20]


def make_order_kernel(m_b):
    """
    A symmetric polynomial kernel whose moments 1..m_b vanish.
    Symmetric kernels get odd orders for free, so m_b = 2 and m_b = 3 give the same kernel.
    :param m_b: (int) the requested order, >= 1.
    :return: (Kernel1D) the certified kernel; its moment_order is the achieved (odd) order.
    :raise: CertificationError: the kernel fails numerical certification.
    """
    if m_b < 1:
        raise GuardError("m_b >= 1", "invalid moment order: {}".format(m_b))
    if m_b <= 1:
        kernel = make_default_kernel()
    else:
        expr, u = solve_moment_system(m_b)
        derivative = sympy.diff(expr, u)
        second = sympy.diff(derivative, u)
        half = sympy.Rational(1, 2)

        sup = _extremum(expr, u, _real_roots(derivative, u))
        lipschitz = _extremum(derivative, u, _real_roots(second, u))
        l2 = float(sympy.sqrt(sympy.integrate(expr ** 2, (u, -half, half))).evalf(30))

        antiderivative = sympy.integrate(expr, u)
        breaks = sorted([-half, half] + [r for r in _real_roots(expr, u) if -half < r < half])
        l1 = sum(abs(float((antiderivative.subs(u, b) - antiderivative.subs(u, a)).evalf(30)))
                 for a, b in zip(breaks[:-1], breaks[1:]))

        s = sympy.Symbol("s", nonnegative=True)
        q = sympy.Poly(expr.subs(u, sympy.sqrt(s)), s).all_coeffs()[::-1]
        achieved = 2 * (m_b // 2) + 1
        kernel = Kernel1D.from_even_polynomial(
            q=[float(c) for c in q],
            lipschitz_Q=lipschitz,
            sup_norm=sup,
            l1_norm=l1,
            l2_norm=l2,
            moment_order=achieved,
            name="order{}".format(achieved))

    report = certify(kernel)
    if not report.passed():
        raise CertificationError("Kernel {} failed certification: {}".format(kernel.name, report.failures()), report)
    return kernel


def kernel_from_preset(name):
    """
    Resolve a kernel preset: "parabolic" or "order<m>" (also "order:<m>").
    :param name: (string) the preset.
    :return: (Kernel1D) the kernel.
    """
    key = str(name).strip().lower().replace(":", "")
    if key in ("parabolic", "default", "epanechnikov"):
        return make_default_kernel()
    if key.startswith("order"):
        try:
            order = int(key[len("order"):])
        except ValueError:
            raise ValueError("Malformed kernel preset: {}".format(name))
        return make_order_kernel(order)
    raise ValueError("Unknown kernel preset: {}".format(name))
