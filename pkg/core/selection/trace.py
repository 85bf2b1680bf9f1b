"""
The audit record of one run of the two-stage selection rule.
"""

from core.utils.csv_utils import save_csv


COLUMNS = ["kind", "theta_index", "theta1", "theta2", "h", "r_value", "in_p",
           "h_tilde", "h_hat", "estimate", "fallback", "min_bandwidth", "unresolved"]


class SelectionTrace(object):
    """
    Everything the selection rule computed at one point x.
    """

    def __init__(self, x, bandwidth_grid, directions, unresolved_levels=(), min_bandwidth=None):
        """
        :param x: (tuple) the estimation point.
        :param bandwidth_grid: (numpy.ndarray) the scanned levels, descending.
        :param directions: (numpy.ndarray) the (n, 2) direction grid.
        :param unresolved_levels: (sequence) the levels of H_eps the grid does not resolve.
        :param min_bandwidth: (float) the smallest resolved level, if the grid sets one.
        """
        self.x = tuple(x)
        self.bandwidth_grid = [float(h) for h in bandwidth_grid]
        self.directions = directions
        self.unresolved_levels = [float(h) for h in unresolved_levels]
        self.min_bandwidth = min_bandwidth
        self.R_values = {}
        self.P_membership = set()
        self.h_tilde = None
        self.theta_hat = None
        self.theta_index = None
        self.h_hat = None
        self.estimate = None
        self.fallback_used = False
        self.level_estimates = []

    def record(self, theta_index, h, value):
        """
        Record R_(theta,h)(x) and the membership of (theta, h) in P(x).
        :return: None
        """
        self.R_values[(theta_index, h)] = float(value)
        if value <= 0.0:
            self.P_membership.add((theta_index, h))

    def is_complete(self):
        """
        :return: (bool) True if every (direction, level) pair has an R value.
        """
        return all((k, h) in self.R_values for k in range(len(self.directions)) for h in self.bandwidth_grid)

    def rows(self):
        """
        :return: (list) one row per (direction, level), then the summary row.
        """
        rows = []
        for k in range(len(self.directions)):
            for h in self.bandwidth_grid:
                if (k, h) not in self.R_values:
                    continue
                rows.append(("row", k, float(self.directions[k, 0]), float(self.directions[k, 1]), h,
                             self.R_values[(k, h)], (k, h) in self.P_membership, "", "", "", "", "", ""))
        rows.append(("summary", "" if self.theta_index is None else self.theta_index,
                     self.theta_hat.theta1, self.theta_hat.theta2, "", "", "",
                     "" if self.h_tilde is None else self.h_tilde, self.h_hat, self.estimate, self.fallback_used,
                     "" if self.min_bandwidth is None else self.min_bandwidth,
                     ";".join(repr(h) for h in self.unresolved_levels)))
        return rows

    def save_csv(self, filename, comments=None):
        """
        Save the trace as CSV.
        :param filename: (string) the file path.
        :param comments: (list(string)) the header block.
        :return: None
        """
        save_csv(filename, COLUMNS, self.rows(), append=False, empty=True, comments=comments)

    def __str__(self):
        return ("SelectionTrace(x={}, theta_hat={}, h_tilde={}, h_hat={}, estimate={}, fallback={}, "
                "unresolved={})").format(
            self.x, self.theta_hat, self.h_tilde, self.h_hat, self.estimate, self.fallback_used,
            len(self.unresolved_levels))
