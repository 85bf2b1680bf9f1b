"""
Certified link functions for the Hoelder classes H(beta, L) and the Nikol'skii classes N_p(beta, L),
and the single-index fields built from them.

A link belongs to H(beta, L) when its derivatives of order m <= m_beta are bounded by L and its
derivative of order m_beta satisfies |g(t + h) - g(t)| <= L h^(beta - m_beta); m_beta is the largest
integer strictly below beta. Membership is certified by finite differences on a dense (t, h) grid.
"""

import math
import numpy as np

from core.estimation.transform import Direction
from core.utils.errors import CertificationError, GuardError
from core.utils.logutils import get_logger


# Logging
logger = get_logger(__name__)

# Defaults
CERTIFICATION_TOL = 1.02
TEST_RANGE = (-1.5, 1.5)
TEST_POINTS = 1201
TEST_STEPS = np.geomspace(1e-4, 2.0, 41)
NIKOLSKII_STEPS = np.geomspace(1e-3, 2.0, 45)
LP_RANGE = 6.0
LP_POINTS_PER_UNIT = 2048
SIGNAL_RANGE = 2.0

# constants of the C^1 bump g(v) = (1 - 4v^2)^2 on |v| < 1/2
BUMP_DERIVATIVE_SUP = 32.0 / (3.0 * math.sqrt(12.0))
BUMP_SECOND_DERIVATIVE_SUP = 32.0


def m_beta(beta):
    """
    :return: (int) the largest integer strictly below beta.
    """
    return int(math.ceil(beta)) - 1


class Link(object):
    """
    A vectorised univariate function with optional analytic derivatives.
    """

    def __init__(self, func, name, derivatives=(), params=None):
        self._func = func
        self.name = name
        self._derivatives = tuple(derivatives)
        self.params = dict(params or {})
        self.certificate = None

    def __call__(self, u):
        return self._func(np.asarray(u, dtype=float))

    def derivative(self, m):
        """
        :param m: (int) the order; 0 is the link itself.
        :return: (callable) the derivative.
        """
        if m == 0:
            return self
        if m > len(self._derivatives):
            raise ValueError("Link {} has no derivative of order {}".format(self.name, m))
        derivative = self._derivatives[m - 1]
        return lambda u: derivative(np.asarray(u, dtype=float))

    def sup(self, lo=-SIGNAL_RANGE, hi=SIGNAL_RANGE, n=8001):
        """
        :return: (float) the grid sup of |link| on [lo, hi].
        """
        return float(np.max(np.abs(self(np.linspace(lo, hi, n)))))

    def __str__(self):
        return "Link({}, {})".format(self.name, self.params)

    def __repr__(self):
        return self.__str__()


class HoelderSpec(object):
    """
    A requested member of H(beta, L).
    """

    SHAPES = ("cusp", "bump", "sine")

    def __init__(self, beta, L, shape="cusp", center=0.0, width=1.0, omega=2.0 * math.pi):
        """
        :param beta: (float) the smoothness, > 0.
        :param L: (float) the constant, >= 0.
        :param shape: (string) cusp (beta <= 1), bump (beta <= 2) or sine.
        :param center: (float) the location of the cusp or bump.
        :param width: (float) the truncation width of the cusp, or the bump width; in (0, 1].
        :param omega: (float) the frequency of the sine.
        """
        if beta <= 0:
            raise GuardError("beta > 0", "invalid smoothness: {}".format(beta))
        if L < 0:
            raise GuardError("L >= 0", "invalid Hoelder constant: {}".format(L))
        if shape not in self.SHAPES:
            raise GuardError("shape in {}".format(self.SHAPES), "unknown shape: {}".format(shape))
        if shape == "cusp" and beta > 1:
            raise GuardError("beta <= 1 for cusp links", "cusp smoothness too large: {}".format(beta))
        if shape == "bump" and beta > 2:
            raise GuardError("beta <= 2 for bump links", "bump smoothness too large: {}".format(beta))
        if not 0 < width <= 1:
            raise GuardError("0 < width <= 1", "invalid width: {}".format(width))
        self.beta = float(beta)
        self.L = float(L)
        self.shape = shape
        self.center = float(center)
        self.width = float(width)
        self.omega = float(omega)

    def __str__(self):
        return "HoelderSpec(beta={}, L={}, shape={}, center={}, width={})".format(
            self.beta, self.L, self.shape, self.center, self.width)


class NikolskiiSpec(object):
    """
    A requested member of N_p(beta, L); beta p > 1 is required.
    """

    def __init__(self, beta, L, p, center=0.0, width=1.0):
        if p <= 1:
            raise GuardError("p > 1", "invalid integrability index: {}".format(p))
        if beta * p <= 1:
            raise GuardError("beta p > 1", "Nikol'skii parameters beta={} p={} give beta p <= 1".format(beta, p))
        if beta > 1:
            raise GuardError("beta <= 1 for Nikol'skii cusp links", "smoothness too large: {}".format(beta))
        self.beta = float(beta)
        self.L = float(L)
        self.p = float(p)
        self.center = float(center)
        self.width = float(width)

    def alpha(self):
        """
        :return: (float) the cusp exponent beta - 1/p.
        """
        return self.beta - 1.0 / self.p

    def __str__(self):
        return "NikolskiiSpec(beta={}, L={}, p={})".format(self.beta, self.L, self.p)


class Certificate(object):
    """
    The outcome of a finite-difference class certification.
    """

    def __init__(self, kind, beta, L, constant, sup_norms, passed):
        self.kind = kind
        self.beta = beta
        self.L = L
        self.constant = float(constant)
        self.sup_norms = [float(s) for s in sup_norms]
        self.passed = bool(passed)

    def __str__(self):
        return "Certificate({}: beta={}, L={}, constant={}, sup_norms={}, passed={})".format(
            self.kind, self.beta, self.L, self.constant, self.sup_norms, self.passed)


def verify_hoelder(link, beta, L, t_range=TEST_RANGE, n_t=TEST_POINTS, steps=TEST_STEPS):
    """
    Certify membership in H(beta, L) on a (t, h) grid, with tolerance 1.02 L.
    :param link: (Link) the link; derivatives up to m_beta must be available.
    :return: (Certificate) the certificate.
    """
    m = m_beta(beta)
    t = np.linspace(t_range[0], t_range[1], n_t)
    sup_norms = [float(np.max(np.abs(link.derivative(j)(t)))) for j in range(m + 1)]
    top = link.derivative(m)
    steps = np.asarray(steps, dtype=float)
    diffs = np.abs(top(t[:, None] + steps[None, :]) - top(t)[:, None])
    constant = float(np.max(diffs / steps[None, :] ** (beta - m)))
    bound = CERTIFICATION_TOL * L + 1e-300
    passed = constant <= bound and all(s <= bound for s in sup_norms)
    return Certificate("hoelder", beta, L, constant, sup_norms, passed)


def verify_nikolskii(link, beta, L, p, center=0.0, steps=TEST_STEPS):
    """
    Certify membership in N_p(beta, L) for beta <= 1: (int |g(t + h) - g(t)|^p dt)^(1/p) <= 1.02 L h^beta.
    The integral runs over center +- 6 on a uniform grid.
    :return: (Certificate) the certificate.
    """
    n = int(2 * LP_RANGE * LP_POINTS_PER_UNIT)
    dt = 2 * LP_RANGE / n
    t = center - LP_RANGE + dt * (np.arange(n) + 0.5)
    f_t = link(t)
    ratios = []
    for h in steps:
        norm = (dt * np.sum(np.abs(link(t + h) - f_t) ** p)) ** (1.0 / p)
        ratios.append(norm / h ** beta)
    constant = max(ratios)
    return Certificate("nikolskii", beta, L, constant, [], constant <= CERTIFICATION_TOL * L + 1e-300)


def attach_certificate(link, certificate):
    link.certificate = certificate
    if not certificate.passed:
        raise CertificationError("Link {} failed certification: {}".format(link.name, certificate), certificate)
    logger.debug("Certified {}: {}".format(link, certificate))
    return link


def _cusp_link(beta, scale, center, width, name, params):
    def cusp(u):
        return scale * (width * np.tanh(np.abs(u - center) / width)) ** beta
    return Link(cusp, name, params=params)


def _bump_factor(beta, width):
    if beta <= 1:
        return min(width ** -beta, 1.0 / (2.0 ** (1.0 - beta) * BUMP_DERIVATIVE_SUP ** beta))
    return min(width ** -beta, width ** (1.0 - beta) / BUMP_DERIVATIVE_SUP,
               1.0 / ((2.0 * BUMP_DERIVATIVE_SUP) ** (2.0 - beta) * BUMP_SECOND_DERIVATIVE_SUP ** (beta - 1.0)))


def _sine_factor(beta, omega):
    m = m_beta(beta)
    alpha = beta - m
    bounds = [omega ** -j for j in range(m + 1)]
    bounds.append(1.0 / (omega ** m * 2.0 ** (1.0 - alpha) * omega ** alpha))
    return min(bounds)


def bump(v):
    """
    The C^1 bump (1 - 4v^2)^2 on |v| < 1/2, zero outside.
    """
    s = v * v
    return np.where(s < 0.25, (1.0 - 4.0 * s) ** 2, 0.0)


def bump_derivative(v):
    s = v * v
    return np.where(s < 0.25, -16.0 * v * (1.0 - 4.0 * s), 0.0)


def bump_second_derivative(v):
    s = v * v
    return np.where(s < 0.25, -16.0 + 192.0 * s, 0.0)


def make_hoelder(spec):
    """
    Build a certified member of H(beta, L).
    Cusp: (L/2) T(|u - u0|)^beta with T(r) = w tanh(r/w). Bump: c L w^beta g((u - u0)/w).
    Sine: L c sin(omega u), with c small enough for every derivative condition.
    :param spec: (HoelderSpec) the request.
    :return: (Link) the certified link.
    :raise: CertificationError: the finite-difference certification failed.
    """
    params = {"beta": spec.beta, "L": spec.L, "shape": spec.shape}
    name = "{}(beta={},L={})".format(spec.shape, spec.beta, spec.L)
    if spec.shape == "cusp":
        link = _cusp_link(spec.beta, 0.5 * spec.L, spec.center, spec.width, name, params)
    elif spec.shape == "bump":
        c = _bump_factor(spec.beta, spec.width) * spec.L
        w, u0 = spec.width, spec.center
        link = Link(lambda u: c * w ** spec.beta * bump((u - u0) / w), name,
                    derivatives=(lambda u: c * w ** (spec.beta - 1.0) * bump_derivative((u - u0) / w),
                                 lambda u: c * w ** (spec.beta - 2.0) * bump_second_derivative((u - u0) / w)),
                    params=params)
    else:
        c = _sine_factor(spec.beta, spec.omega) * spec.L
        omega = spec.omega
        derivatives = [(lambda j: lambda u: c * omega ** j * np.sin(omega * u + j * math.pi / 2.0))(j)
                       for j in range(1, m_beta(spec.beta) + 2)]
        link = Link(lambda u: c * np.sin(omega * u), name, derivatives=derivatives, params=params)
    return attach_certificate(link, verify_hoelder(link, spec.beta, spec.L))


def make_inhomogeneous(flat_scale, spec, width=0.25, center=0.25):
    """
    A link that is constant away from u0 and carries a localized inverted cusp of smoothness beta:
    flat_scale + (L/2)[w^beta - min(|u - u0|, w)^beta]. Certified in H(beta, L).
    :param flat_scale: (float) the level of the flat part.
    :param spec: (HoelderSpec) beta (<= 1) and L of the cusp.
    :param width: (float) the half width w of the cusp region.
    :param center: (float) the cusp location u0.
    :return: (Link) the certified link.
    """
    if spec.beta > 1:
        raise GuardError("beta <= 1 for inhomogeneous links", "smoothness too large: {}".format(spec.beta))
    beta, half_L = spec.beta, 0.5 * spec.L

    def inhomogeneous(u):
        return flat_scale + half_L * (width ** beta - np.minimum(np.abs(u - center), width) ** beta)

    params = {"beta": spec.beta, "L": spec.L, "flat_scale": flat_scale, "width": width, "center": center}
    link = Link(inhomogeneous, "inhomogeneous(beta={},L={},w={})".format(spec.beta, spec.L, width), params=params)
    return attach_certificate(link, verify_hoelder(link, spec.beta, spec.L))


def make_nikolskii(spec):
    """
    A certified member of N_p(beta, L): a truncated cusp of exponent beta - 1/p, rescaled so its
    finite-difference L_p constant is L / 1.01.
    :param spec: (NikolskiiSpec) the request.
    :return: (Link) the certified link.
    """
    alpha = spec.alpha()
    raw = _cusp_link(alpha, 1.0, spec.center, spec.width, "raw", {})
    raw_constant = verify_nikolskii(raw, spec.beta, 1.0, spec.p, spec.center, steps=NIKOLSKII_STEPS).constant
    scale = spec.L / (1.01 * raw_constant)
    params = {"beta": spec.beta, "L": spec.L, "p": spec.p, "alpha": alpha, "center": spec.center}
    link = _cusp_link(alpha, scale, spec.center, spec.width,
                      "nikolskii(beta={},L={},p={})".format(spec.beta, spec.L, spec.p), params)
    return attach_certificate(link, verify_nikolskii(link, spec.beta, spec.L, spec.p, spec.center, steps=NIKOLSKII_STEPS))


def constant_link(c):
    """
    :return: (Link) the link u -> c.
    """
    return Link(lambda u: np.full(np.shape(u), float(c)), "constant(c={})".format(c),
                derivatives=(lambda u: np.zeros(np.shape(u)), lambda u: np.zeros(np.shape(u))), params={"c": c})


def linear_link(a, b=0.0):
    """
    :return: (Link) the link u -> a u + b.
    """
    return Link(lambda u: a * u + b, "linear(a={},b={})".format(a, b),
                derivatives=(lambda u: np.full(np.shape(u), float(a)), lambda u: np.zeros(np.shape(u))),
                params={"a": a, "b": b})


class SingleIndexSignal(object):
    """
    The field F(t) = f(theta0't).
    """

    def __init__(self, link, theta0, bound_M=None, name=None, params=None):
        """
        :param link: (callable) the link f.
        :param theta0: (Direction) the index vector.
        :param bound_M: (float) the sup norm of the link; the grid sup on [-2, 2] if None.
        :param name: (string) the signal descriptor.
        :param params: (dict) the class parameters (beta, L, p) the link was built for.
        """
        self.params = dict(params if params is not None else getattr(link, "params", {}))
        self.link = link
        self.theta0 = theta0
        self.bound_M = float(bound_M) if bound_M is not None else float(np.max(np.abs(link(np.linspace(-SIGNAL_RANGE, SIGNAL_RANGE, 8001)))))
        self.signal_id = name or "{}@{:.6g}deg".format(getattr(link, "name", "link"), math.degrees(theta0.angle()))

    def __call__(self, t1, t2):
        return self.link(self.theta0.theta1 * np.asarray(t1, dtype=float) + self.theta0.theta2 * np.asarray(t2, dtype=float))

    def value_at(self, x):
        """
        :return: (float) F(x).
        """
        return float(self(x[0], x[1]))

    def index(self, x):
        """
        :return: (float) the index coordinate theta0'x.
        """
        return self.theta0.theta1 * x[0] + self.theta0.theta2 * x[1]

    def __str__(self):
        return "SingleIndexSignal({}, M={})".format(self.signal_id, self.bound_M)


def single_index_field(link, theta0):
    """
    :param link: (callable) the link f.
    :param theta0: (Direction) the index vector.
    :return: (SingleIndexSignal) the field t -> f(theta0't).
    """
    if not isinstance(theta0, Direction):
        theta0 = Direction(*theta0)
    return SingleIndexSignal(link, theta0)
