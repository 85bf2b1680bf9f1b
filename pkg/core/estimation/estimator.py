"""
Kernel estimators F_(theta,h)(x), F_(theta,h)(nu,h)(x) and their noiseless counterparts S.

Every estimator weighs the cell increments with w_ij = K(E(t_ij - x)). The literal
estimator is det(E) * sum(w * Y). On grid-resolved levels, where the discrete kernel
mass det(E) * sum(w) * cell_area lies in [1/2, 2], the weights are renormalized to
unit discrete mass instead, so constants are reproduced to floating-point precision.
A window that leaves the domain is logged as truncated and keeps the literal formula.
"""

import math
import numpy as np

from core.field.noise_field import sample_field, GridSpec
from core.utils.logutils import get_logger


# Logging
logger = get_logger(__name__)

# Defaults
CHUNK = 16
MASS_BAND = (0.5, 2.0)
WINDOW_RADIUS = math.sqrt(2.0)


def project(directions, d1, d2):
    """
    Project offsets onto directions and their orthogonal vectors.
    :param directions: (numpy.ndarray) an (m, 2) array of unit vectors.
    :param d1: (numpy.ndarray) first coordinates of t - x.
    :param d2: (numpy.ndarray) second coordinates of t - x.
    :return: (numpy.ndarray, numpy.ndarray) P = nu'(t - x) and Q = nu_perp'(t - x), each (m, cells).
    """
    n1 = directions[:, 0:1]
    n2 = directions[:, 1:2]
    return n1 * d1 + n2 * d2, -n2 * d1 + n1 * d2


_truncated_windows = set()


def _warn_truncated(grid, x):
    if (grid, x) in _truncated_windows:
        return
    _truncated_windows.add((grid, x))
    logger.warning("Kernel window at x={} leaves the domain of {}: pair kernels are truncated, "
                   "estimates keep the literal formula".format(x, grid))


class LocalWindow(object):
    """
    The cells within reach of every transformed kernel centered at x, with their values.
    The radius sqrt(2) covers the pair-kernel support for all h <= 1.
    """

    def __init__(self, grid, values, x, renormalize=True):
        """
        :param grid: (GridSpec) the grid.
        :param values: (numpy.ndarray) n x n cell values (increments, or signal times cell area).
        :param x: (tuple) the estimation point.
        :param renormalize: (bool) if False, the literal det(E) formula is used everywhere.
        """
        self.grid = grid
        self.x = (float(x[0]), float(x[1]))
        self.truncated = not grid.covers(self.x, WINDOW_RADIUS)
        if self.truncated:
            _warn_truncated(grid, self.x)
        self.renormalize = renormalize and not self.truncated
        t1, t2 = grid.mesh()
        d1 = t1 - self.x[0]
        d2 = t2 - self.x[1]
        mask = d1 * d1 + d2 * d2 <= (WINDOW_RADIUS + grid.step) ** 2
        self.d1 = d1[mask]
        self.d2 = d2[mask]
        self.values = np.asarray(values, dtype=float)[mask]
        self.cell_area = grid.cell_area

    def combine(self, weights, det):
        """
        Turn kernel weights into estimates.
        :param weights: (numpy.ndarray) an (m, cells) array.
        :param det: (numpy.ndarray|float) the determinant(s) of the transforms.
        :return: (numpy.ndarray) m estimates.
        """
        det = np.broadcast_to(np.asarray(det, dtype=float), (weights.shape[0],))
        total = np.sum(weights * self.values, axis=1)
        mass = np.sum(weights, axis=1) * self.cell_area
        literal = det * total
        if not self.renormalize:
            return literal
        discrete_mass = det * mass
        resolved = (discrete_mass >= MASS_BAND[0]) & (discrete_mass <= MASS_BAND[1])
        safe_mass = np.where(resolved, mass, 1.0)
        return np.where(resolved, total / safe_mass, literal)

    def single_row(self, kernel, directions, h):
        """
        F_(nu,h)(x) for every nu in directions.
        :param kernel: (ProductKernel) the kernel.
        :param directions: (numpy.ndarray) an (m, 2) array of unit vectors.
        :param h: (float) the bandwidth.
        :return: (numpy.ndarray) m estimates.
        """
        out = np.empty(len(directions))
        for start in range(0, len(directions), CHUNK):
            chunk = directions[start:start + CHUNK]
            P, Q = project(chunk, self.d1, self.d2)
            out[start:start + len(chunk)] = self.combine(kernel(P / h, Q), 1.0 / h)
        return out

    def pair_row(self, kernel, theta, directions, h):
        """
        F_(theta,h)(nu,h)(x) for every nu in directions.
        :param kernel: (ProductKernel) the kernel.
        :param theta: (numpy.ndarray) the first direction, shape (2,).
        :param directions: (numpy.ndarray) an (m, 2) array of unit vectors.
        :param h: (float) the bandwidth.
        :return: (numpy.ndarray) m estimates.
        """
        theta = np.asarray(theta, dtype=float).reshape(1, 2)
        P_theta, Q_theta = project(theta, self.d1, self.d2)
        out = np.empty(len(directions))
        for start in range(0, len(directions), CHUNK):
            chunk = directions[start:start + CHUNK]
            c = chunk[:, 0] * theta[0, 0] + chunk[:, 1] * theta[0, 1]
            s = np.where(c >= 0.0, 1.0, -1.0)[:, None]
            scale = 1.0 + np.abs(c)
            P, Q = project(chunk, self.d1, self.d2)
            a = (s * P_theta + P) / (2.0 * h * scale)[:, None]
            b = (s * Q_theta + Q) / (2.0 * scale)[:, None]
            out[start:start + len(chunk)] = self.combine(kernel(a, b), 1.0 / (2.0 * h * scale))
        return out

    def matrix_value(self, kernel, matrix):
        """
        The estimator for an arbitrary transform matrix.
        :param kernel: (ProductKernel) the kernel.
        :param matrix: (TransformMatrix) the transform.
        :return: (float) the estimate.
        """
        a, b = matrix.apply(self.d1, self.d2)
        return float(self.combine(kernel(a, b)[None, :], matrix.det())[0])


def observation_window(obs, x, renormalize=True):
    """
    :param obs: (Observation) the observation.
    :param x: (tuple) the estimation point.
    :return: (LocalWindow) the window over the observation increments.
    """
    return LocalWindow(obs.grid, obs.increments, x, renormalize)


def signal_window(F, x, grid=None, renormalize=True):
    """
    :param F: (callable) a field function.
    :param x: (tuple) the estimation point.
    :param grid: (GridSpec) the grid; the default grid if None.
    :return: (LocalWindow) the window over F(t_ij) * cell_area.
    """
    grid = grid or GridSpec()
    return LocalWindow(grid, sample_field(F, grid) * grid.cell_area, x, renormalize)


def _as_row(direction):
    return np.array([[direction.theta1, direction.theta2]])


def estimate(obs, kernel, theta, h, x, renormalize=True):
    """
    F_(theta,h)(x) = det(E_(theta,h)) * integral of K(E_(theta,h)(t - x)) against Y.
    :param obs: (Observation) the observation.
    :param kernel: (ProductKernel) the kernel.
    :param theta: (Direction) the direction.
    :param h: (float) the bandwidth.
    :param x: (tuple) the point.
    :param renormalize: (bool) if False, the literal formula is used.
    :return: (float) the estimate.
    """
    return float(observation_window(obs, x, renormalize).single_row(kernel, _as_row(theta), h)[0])


def estimate_pair(obs, kernel, theta, nu, h, x, renormalize=True):
    """
    F_(theta,h)(nu,h)(x), the estimator of the pair transform.
    :return: (float) the estimate.
    """
    window = observation_window(obs, x, renormalize)
    return float(window.pair_row(kernel, theta.as_array(), _as_row(nu), h)[0])


def estimate_matrix(obs, kernel, matrix, x, renormalize=True):
    """
    The estimator for an arbitrary transform.
    :return: (float) the estimate.
    """
    return observation_window(obs, x, renormalize).matrix_value(kernel, matrix)


def bias_single(F, kernel, theta, h, x, grid=None, renormalize=True):
    """
    S_(theta,h)(x): the single estimator applied to the noiseless signal.
    :param F: (callable) the field function.
    :return: (float) the value.
    """
    return float(signal_window(F, x, grid, renormalize).single_row(kernel, _as_row(theta), h)[0])


def bias_pair(F, kernel, theta, nu, h, x, grid=None, renormalize=True):
    """
    S_(theta,h)(nu,h)(x): the pair estimator applied to the noiseless signal.
    :param F: (callable) the field function.
    :return: (float) the value.
    """
    window = signal_window(F, x, grid, renormalize)
    return float(window.pair_row(kernel, theta.as_array(), _as_row(nu), h)[0])
