"""
The bias functional of a link f and kernel K:

    Delta(h, z) = sup over delta <= h of |integral K(s) [f(z + delta s) - f(z)] ds|,

its maximal function Delta_bar(h, y) = sup over a of the mean of Delta(h, .) on [y - a, y + a],
and Delta*(h, y) = max(Delta(h, y), Delta_bar(h, y)).
"""

import math
import numpy as np

# Defaults
DEFAULT_QUADRATURE_N = 2048
DEFAULT_LEVELS_PER_OCTAVE = 8
DEFAULT_WINDOW_N = 256
DEFAULT_MIN_POINTS = 8
FLOOR_STEPS = 4
MAX_HALFWIDTH = 1.0
ROW_BLOCK = 4096


class BiasProfile(object):
    """
    The bias functional of a link with respect to a one-dimensional kernel.
    """

    def __init__(self, kernel, link, quadrature_n=DEFAULT_QUADRATURE_N, levels_per_octave=DEFAULT_LEVELS_PER_OCTAVE,
                 window_n=DEFAULT_WINDOW_N, min_points=DEFAULT_MIN_POINTS):
        """
        :param kernel: (Kernel1D) the kernel (a product kernel uses its factor).
        :param link: (callable) the vectorised link f.
        :param quadrature_n: (int) midpoint nodes per unit length of the smoothing integrals.
        :param levels_per_octave: (int) refinement of the delta grid.
        :param window_n: (int) grid points per unit length of the maximal-function windows.
        :param min_points: (int) the least number of nodes of a smoothing integral.
        """
        self.kernel = getattr(kernel, "factor", kernel)
        self.link = link
        self.quadrature_n = int(quadrature_n)
        self.levels_per_octave = int(levels_per_octave)
        self.window_n = int(window_n)
        self.min_points = int(min_points)
        self.floor = FLOOR_STEPS / float(self.quadrature_n)
        self._increments = {}

    def delta_levels(self, h):
        """
        The smoothing levels h 2^(-j/L) down to the quadrature floor; h itself is always included.
        :param h: (float) the bandwidth in (0, 1].
        :return: (numpy.ndarray) the levels, descending.
        """
        if h <= self.floor:
            return np.array([h])
        count = int(math.floor(self.levels_per_octave * math.log2(h / self.floor) + 1e-9)) + 1
        return h * np.power(2.0, -np.arange(count) / self.levels_per_octave)

    def smoothed_increment(self, delta, z):
        """
        |integral K(s) [f(z + delta s) - f(z)] ds| by the midpoint rule.
        :param delta: (float) the smoothing level.
        :param z: (numpy.ndarray) the points.
        :return: (numpy.ndarray) the values.
        """
        z = np.atleast_1d(np.asarray(z, dtype=float))
        m = max(self.min_points, int(math.ceil(delta * self.quadrature_n)))
        s = -0.5 + (np.arange(m) + 0.5) / m
        w = self.kernel(s) / m
        out = np.empty(z.shape)
        for start in range(0, z.size, ROW_BLOCK):
            block = z[start:start + ROW_BLOCK]
            f_z = self.link(block)
            f_shift = self.link(block[:, None] + delta * s[None, :])
            out[start:start + block.size] = np.abs((f_shift - f_z[:, None]) @ w)
        return out

    def delta(self, h, z):
        """
        Delta(h, z).
        :param h: (float) the bandwidth.
        :param z: (float|numpy.ndarray) the point(s).
        :return: (float|numpy.ndarray) the value(s).
        """
        scalar = np.ndim(z) == 0
        value = self.delta_table([h], z)[0]
        return float(value[0]) if scalar else value

    def delta_table(self, hs, z):
        """
        Delta(h, z) for several bandwidths, sharing the smoothing levels they have in common.
        :param hs: (sequence(float)) the bandwidths.
        :param z: (float|numpy.ndarray) the points.
        :return: (numpy.ndarray) an array of shape (len(hs), len(z)).
        """
        z = np.atleast_1d(np.asarray(z, dtype=float))
        values = {}
        table = np.zeros((len(hs), z.size))
        for row, h in enumerate(hs):
            for delta in self.delta_levels(h):
                key = round(math.log2(delta) * self.levels_per_octave, 6)
                if key not in values:
                    values[key] = self.smoothed_increment(delta, z)
                np.maximum(table[row], values[key], out=table[row])
        return table

    def profile(self, hs, z_lo, z_hi):
        """
        Delta and its maximal function on the uniform grid z_lo + i / window_n within [z_lo, z_hi].
        The maximal function averages Delta over centered windows of 2m + 1 grid points,
        m = 1, 2, 4, ... up to a half width of one.
        :param hs: (sequence(float)) the bandwidths.
        :param z_lo: (float) the left end.
        :param z_hi: (float) the right end.
        :return: (numpy.ndarray, numpy.ndarray, numpy.ndarray) z, Delta and Delta_bar, the last two (len(hs), len(z)).
        """
        dz = 1.0 / self.window_n
        pad = int(round(MAX_HALFWIDTH * self.window_n))
        count = int(math.floor((z_hi - z_lo) * self.window_n + 1e-9)) + 1
        z = z_lo + dz * np.arange(-pad, count + pad)
        table = self.delta_table(hs, z)

        inner = np.arange(pad, pad + count)
        maximal = np.zeros((len(hs), count))
        prefix = np.concatenate([np.zeros((len(hs), 1)), np.cumsum(table, axis=1)], axis=1)
        m = 1
        while m <= pad:
            means = (prefix[:, inner + m + 1] - prefix[:, inner - m]) / (2 * m + 1)
            np.maximum(maximal, means, out=maximal)
            m *= 2
        return z[inner], table[:, inner], maximal

    def maximal_delta(self, h, y):
        """
        Delta_bar(h, y), the maximal function of Delta(h, .) at y.
        """
        return float(self.profile([h], y, y)[2][0, 0])

    def delta_star(self, h, y):
        """
        Delta*(h, y) = max(Delta(h, y), Delta_bar(h, y)).
        """
        _, core, maximal = self.profile([h], y, y)
        return float(max(core[0, 0], maximal[0, 0]))

    def delta_star_levels(self, hs, y):
        """
        Delta*(h, y) for several bandwidths at one point.
        :return: (numpy.ndarray) the values, aligned with hs.
        """
        _, core, maximal = self.profile(hs, y, y)
        return np.maximum(core, maximal)[:, 0]

    def __str__(self):
        return "BiasProfile(kernel={}, quadrature_n={}, levels_per_octave={}, window_n={})".format(
            self.kernel.name, self.quadrature_n, self.levels_per_octave, self.window_n)
