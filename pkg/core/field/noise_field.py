"""
The discretized Gaussian white-noise observation Y(dt) = F(t)dt + eps W(dt).

The domain [-w, w]^2 is split into n x n square cells; cell (i, j) has center
t_ij = (c_i, c_j) and carries the increment F(t_ij) * cell_area + eps * sqrt(cell_area) * xi_ij.
Increments are stored row-major: the first index runs along the first coordinate.
"""

import math
import numpy as np

from core.rnd.rndgen import ReplicateStreams
from core.utils.errors import GuardError
from core.utils.file_utils import create_dir_tree
from core.utils.logutils import get_logger


# Logging
logger = get_logger(__name__)

# Defaults
DEFAULT_HALF_WIDTH = 2.0
DEFAULT_N_PER_AXIS = 256
MIN_HALF_WIDTH = 1.25
RESOLUTION_STEPS = 4
EPSILON_MAX = math.exp(-1.0)
PURE_NOISE = "pure-noise"
HEADER_TAG = "pysil-field"


class GridSpec(object):
    """
    A uniform grid of square cells on D = [-half_width, half_width]^2.
    """

    def __init__(self, half_width=DEFAULT_HALF_WIDTH, n_per_axis=DEFAULT_N_PER_AXIS):
        """
        Create a new grid.
        :param half_width: (float) the half width w of the domain, >= 1.25.
        :param n_per_axis: (int) the number of cells per axis, >= 2.
        """
        if int(n_per_axis) < 2:
            raise GuardError("n_per_axis >= 2", "grid too small: {}".format(n_per_axis))
        if half_width < MIN_HALF_WIDTH:
            raise GuardError("half_width >= {}".format(MIN_HALF_WIDTH), "domain too small: {}".format(half_width))
        self.half_width = float(half_width)
        self.n_per_axis = int(n_per_axis)
        self.step = 2.0 * self.half_width / self.n_per_axis
        self.cell_area = self.step ** 2
        self.centers = -self.half_width + self.step * (np.arange(self.n_per_axis) + 0.5)

    def mesh(self):
        """
        The cell centers as two n x n arrays.
        :return: (numpy.ndarray, numpy.ndarray) first and second coordinates.
        """
        return np.meshgrid(self.centers, self.centers, indexing="ij")

    def area(self):
        """
        :return: (float) the area |D| of the domain.
        """
        return (2.0 * self.half_width) ** 2

    def min_bandwidth(self):
        """
        :return: (float) the smallest bandwidth the grid resolves, 4 grid steps.
        """
        return RESOLUTION_STEPS * self.step

    def is_resolved(self, h):
        """
        Whether the grid resolves bandwidth h (h >= 4 grid steps).
        :param h: (float) the bandwidth.
        :return: (bool) True if resolved.
        """
        return h >= self.min_bandwidth()

    def covers(self, x, radius):
        """
        Whether the ball of the given radius around x, widened by one cell, lies in the domain.
        :param x: (tuple) the center.
        :param radius: (float) the radius.
        :return: (bool) True if no part of the ball falls outside D.
        """
        reach = max(abs(float(x[0])), abs(float(x[1]))) + radius + self.step
        return reach <= self.half_width

    def __eq__(self, other):
        return isinstance(other, GridSpec) and self.half_width == other.half_width and self.n_per_axis == other.n_per_axis

    def __hash__(self):
        return hash((self.half_width, self.n_per_axis))

    def __str__(self):
        return "GridSpec(half_width={}, n_per_axis={})".format(self.half_width, self.n_per_axis)

    def __repr__(self):
        return self.__str__()


class Observation(object):
    """
    An immutable realization of the discretized observation.
    """

    def __init__(self, grid, increments, epsilon, seed, replicate=0, signal_id=PURE_NOISE):
        self.grid = grid
        self.increments = np.array(increments, dtype=float)
        self.increments.setflags(write=False)
        self.epsilon = float(epsilon)
        self.seed = int(seed)
        self.replicate = int(replicate)
        self.signal_id = signal_id

    def __str__(self):
        return "Observation({}, epsilon={}, seed={}, replicate={}, signal={})".format(
            self.grid, self.epsilon, self.seed, self.replicate, self.signal_id)

    def __repr__(self):
        return self.__str__()


def check_epsilon(epsilon, deterministic=False):
    """
    Check the standing noise condition 0 < epsilon <= exp(-1).
    :param epsilon: (float) the noise level.
    :param deterministic: (bool) if True, epsilon = 0 is accepted.
    :return: (float) the noise level.
    """
    epsilon = float(epsilon)
    if epsilon == 0.0 and deterministic:
        return epsilon
    if not 0.0 < epsilon <= EPSILON_MAX:
        raise GuardError("0 < epsilon <= exp(-1)", "noise level out of range: {}".format(epsilon))
    return epsilon


def sample_field(F, grid):
    """
    Evaluate a field function at the cell centers.
    :param F: (callable|numpy.ndarray|None) a field function (t1, t2) -> values, precomputed
    cell values, or None for the zero field.
    :param grid: (GridSpec) the grid.
    :return: (numpy.ndarray) the n x n values.
    """
    shape = (grid.n_per_axis, grid.n_per_axis)
    if F is None:
        return np.zeros(shape)
    if callable(F):
        t1, t2 = grid.mesh()
        return np.broadcast_to(np.asarray(F(t1, t2), dtype=float), shape)
    values = np.asarray(F, dtype=float)
    if values.shape != shape:
        raise ValueError("Field values have shape {}, expected {}".format(values.shape, shape))
    return values


def simulate(F, epsilon, grid, seed, replicate=0, deterministic=False, signal_id=None):
    """
    Simulate an observation on the grid.
    :param F: (callable|numpy.ndarray|None) the signal (see sample_field).
    :param epsilon: (float) the noise level in (0, exp(-1)].
    :param grid: (GridSpec) the grid.
    :param seed: (int) the master seed.
    :param replicate: (int) the replicate index; selects an independent stream.
    :param deterministic: (bool) if True, epsilon = 0 is accepted and no noise is drawn.
    :param signal_id: (string) a descriptor of F; defaults to its name or "pure-noise".
    :return: (Observation) the observation.
    """
    epsilon = check_epsilon(epsilon, deterministic)
    if signal_id is None:
        signal_id = PURE_NOISE if F is None else getattr(F, "signal_id", getattr(F, "__name__", "signal"))

    increments = sample_field(F, grid) * grid.cell_area
    if epsilon > 0.0:
        xi = ReplicateStreams(seed).stream(replicate).standard_normal((grid.n_per_axis, grid.n_per_axis))
        increments = increments + (epsilon * math.sqrt(grid.cell_area)) * xi
    return Observation(grid, increments, epsilon, seed, replicate, signal_id)


def integrate_against(obs, weight):
    """
    The stochastic integral of a weight against the observation.
    :param obs: (Observation) the observation.
    :param weight: (callable|numpy.ndarray) a field function or its cell values.
    :return: (float) sum_ij weight(t_ij) * increment_ij.
    """
    values = sample_field(weight, obs.grid)
    return float(np.sum(values * obs.increments))


def dump(obs, filename):
    """
    Write an observation as text: a header line with the metadata, then one increment per line.
    :param obs: (Observation) the observation.
    :param filename: (string) the file path.
    :return: None
    """
    create_dir_tree(filename)
    header = "# {} half_width={!r} n_per_axis={} epsilon={!r} seed={} replicate={} signal_id={}".format(
        HEADER_TAG, obs.grid.half_width, obs.grid.n_per_axis, obs.epsilon, obs.seed, obs.replicate,
        str(obs.signal_id).replace(" ", "_"))
    with open(filename, "w") as f:
        f.write(header + "\n")
        for value in obs.increments.ravel(order="C"):
            f.write("{!r}\n".format(float(value)))
    logger.debug("Dumped {} to {}".format(obs, filename))


def load(filename):
    """
    Read an observation written by dump.
    :param filename: (string) the file path.
    :return: (Observation) the observation, bit-identical to the dumped one.
    """
    with open(filename, "r") as f:
        header = f.readline().split()
        if len(header) < 2 or header[0] != "#" or header[1] != HEADER_TAG:
            raise ValueError("Not a field dump: {}".format(filename))
        meta = dict(item.split("=", 1) for item in header[2:])
        values = np.array([float(line) for line in f if line.strip()], dtype=float)
    grid = GridSpec(float(meta["half_width"]), int(meta["n_per_axis"]))
    if values.size != grid.n_per_axis ** 2:
        raise ValueError("Field dump {} holds {} values, expected {}".format(filename, values.size, grid.n_per_axis ** 2))
    increments = values.reshape((grid.n_per_axis, grid.n_per_axis))
    return Observation(grid, increments, float(meta["epsilon"]), int(meta["seed"]), int(meta["replicate"]), meta["signal_id"])
