"""
Directions on the unit circle, bandwidths and the 2x2 transforms of the estimator family.
"""

import math
import numpy as np

from core.utils.errors import GuardError


UNIT_TOL = 1e-12


class Direction(object):
    """
    A unit vector (theta1, theta2).
    """

    __slots__ = ("theta1", "theta2")

    def __init__(self, theta1, theta2):
        theta1, theta2 = float(theta1), float(theta2)
        if abs(theta1 * theta1 + theta2 * theta2 - 1.0) > UNIT_TOL:
            raise GuardError("theta1^2 + theta2^2 = 1", "not a unit vector: ({}, {})".format(theta1, theta2))
        self.theta1 = theta1
        self.theta2 = theta2

    @classmethod
    def from_angle(cls, angle):
        """
        :param angle: (float) the angle in radians.
        :return: (Direction) (cos(angle), sin(angle)).
        """
        return cls(math.cos(angle), math.sin(angle))

    @classmethod
    def from_degrees(cls, degrees):
        return cls.from_angle(math.radians(degrees))

    def angle(self):
        return math.atan2(self.theta2, self.theta1)

    def dot(self, other):
        return self.theta1 * other.theta1 + self.theta2 * other.theta2

    def perp(self):
        """
        :return: (tuple) the orthogonal vector (-theta2, theta1).
        """
        return -self.theta2, self.theta1

    def negate(self):
        return Direction(-self.theta1, -self.theta2)

    def as_array(self):
        return np.array([self.theta1, self.theta2])

    def __eq__(self, other):
        return isinstance(other, Direction) and self.theta1 == other.theta1 and self.theta2 == other.theta2

    def __hash__(self):
        return hash((self.theta1, self.theta2))

    def __str__(self):
        return "({}, {})".format(self.theta1, self.theta2)

    def __repr__(self):
        return "Direction{}".format(self.__str__())


def direction_grid(n_directions):
    """
    The uniform grid of the full circle: theta_k = (cos 2 pi k/n, sin 2 pi k/n), k = 0..n-1.
    :param n_directions: (int) the number of directions.
    :return: (numpy.ndarray) an (n, 2) array of unit vectors.
    """
    angles = 2.0 * math.pi * np.arange(n_directions) / n_directions
    return np.column_stack([np.cos(angles), np.sin(angles)])


def check_bandwidth(h, epsilon=None):
    """
    Check that a bandwidth lies in [epsilon^2, 1] (in (0, 1] without epsilon).
    :param h: (float) the bandwidth.
    :param epsilon: (float) the noise level, if known.
    :return: (float) the bandwidth.
    """
    h = float(h)
    lower = epsilon ** 2 if epsilon else 0.0
    if not (h > 0.0 and lower <= h <= 1.0):
        raise GuardError("epsilon^2 <= h <= 1", "bandwidth out of range: {}".format(h))
    return h


class TransformMatrix(object):
    """
    A 2x2 matrix E; kind is "single" for E_(theta,h) and "pair" for E_(theta,h)(nu,h).
    """

    def __init__(self, a11, a12, a21, a22, kind):
        self.a11 = float(a11)
        self.a12 = float(a12)
        self.a21 = float(a21)
        self.a22 = float(a22)
        self.kind = kind

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def apply(self, d1, d2):
        """
        Apply E to the vectors (d1, d2).
        :return: (tuple) the two coordinates of E(d1, d2).
        """
        return self.a11 * d1 + self.a12 * d2, self.a21 * d1 + self.a22 * d2

    def as_array(self):
        return np.array([[self.a11, self.a12], [self.a21, self.a22]])

    def __str__(self):
        return "TransformMatrix({}: [[{}, {}], [{}, {}]])".format(self.kind, self.a11, self.a12, self.a21, self.a22)

    def __repr__(self):
        return self.__str__()


def matrix_single(theta, h):
    """
    E_(theta,h) = [[theta1/h, theta2/h], [-theta2, theta1]], with determinant 1/h.
    :param theta: (Direction) the direction.
    :param h: (float) the bandwidth.
    :return: (TransformMatrix) the matrix.
    """
    return TransformMatrix(theta.theta1 / h, theta.theta2 / h, -theta.theta2, theta.theta1, "single")


def pair_sign(theta, nu):
    """
    The sign rule of the pair transform: theta is replaced by -theta when nu'theta < 0.
    :return: (float, float) the sign s and |nu'theta|.
    """
    c = theta.dot(nu)
    return (1.0, c) if c >= 0.0 else (-1.0, -c)


def matrix_pair(theta, nu, h):
    """
    E_(theta,h)(nu,h): first row (s theta + nu) / (2h(1 + |c|)), second row
    (-(s theta2 + nu2), s theta1 + nu1) / (2(1 + |c|)), with c = nu'theta and s its sign.
    The determinant is 1/(2h(1 + |c|)), within [1/(4h), 1/(2h)].
    :param theta: (Direction) the first direction.
    :param nu: (Direction) the second direction.
    :param h: (float) the bandwidth.
    :return: (TransformMatrix) the matrix.
    """
    s, c = pair_sign(theta, nu)
    u1 = s * theta.theta1 + nu.theta1
    u2 = s * theta.theta2 + nu.theta2
    first = 2.0 * h * (1.0 + c)
    second = 2.0 * (1.0 + c)
    return TransformMatrix(u1 / first, u2 / first, -u2 / second, u1 / second, "pair")
