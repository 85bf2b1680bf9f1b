import os
import tempfile
import unittest
import numpy as np
from core.estimation.transform import Direction
from core.field.noise_field import GridSpec, simulate
from core.kernels.kernel import ProductKernel, make_default_kernel
from core.selection.selector import SelectorConfig, lambda_const, threshold, epsilon_guard, check_epsilon_guard, \
    first_stage, second_stage, select_estimate, compute_R, FALLBACK
from core.utils.csv_utils import read_csv
from core.utils.errors import GuardError

SEED = 7
N_DIRECTIONS = 16
X = (0.1, -0.2)


def constant(t1, t2):
    return np.full(np.shape(t1), 0.75)


def ridge(t1, t2):
    return np.abs(np.cos(np.radians(30.0)) * t1 + np.sin(np.radians(30.0)) * t2) ** 0.5


class SelectorTest(unittest.TestCase):

    def setUp(self):
        self.kernel = ProductKernel(make_default_kernel())
        self.grid = GridSpec(2.0, 64)
        self.config = SelectorConfig(self.kernel, 0.3, n_directions=N_DIRECTIONS, min_bandwidth=4 * self.grid.step)

    def test_lambda(self):
        """
        Verify Lambda(K, Q) = 8 sqrt(ln 19) + 50 for the parabolic kernel.
        :return: None
        """
        self.assertAlmostEqual(lambda_const(self.kernel), 63.7275, delta=1e-3)

    def test_threshold(self):
        """
        Verify TH(1) at eps = 0.05, r = 2 and the decrease of TH in eta.
        :return: None
        """
        config = SelectorConfig(self.kernel, 0.05)
        print("TH(1):", threshold(1.0, config))
        self.assertAlmostEqual(threshold(1.0, config), 26.44, delta=0.01)
        values = threshold(np.array([1.0, 0.5, 0.25]), config)
        self.assertTrue(np.all(np.diff(values) > 0))
        self.assertAlmostEqual(threshold(0.25, config), 2.0 * threshold(1.0, config), delta=1e-10)
        self.assertAlmostEqual(threshold(1.0, config.with_scale(0.5)), 0.5 * threshold(1.0, config), delta=1e-12)

    def test_guards(self):
        with self.assertRaises(GuardError):
            SelectorConfig(self.kernel, 0.5)
        with self.assertRaises(GuardError):
            SelectorConfig(self.kernel, 0.1, n_directions=8)
        with self.assertRaises(GuardError):
            SelectorConfig(self.kernel, 0.1, threshold_scale=-1.0)
        with self.assertRaises(GuardError):
            SelectorConfig(self.kernel, 0.1, threshold_scale=0.0)
        with self.assertRaises(GuardError):
            self.config.with_scale(0.0)
        with self.assertRaises(GuardError):
            select_estimate(simulate(None, 0.1, self.grid, SEED), (0.6, 0.0), self.config)

    def test_epsilon_guard(self):
        """
        Verify the standing guard exp(-max[1, (2 M ||K||_1 / ||K||_inf)^2]).
        :return: None
        """
        self.assertAlmostEqual(epsilon_guard(1.0, self.kernel), np.exp(-16.0 / 9.0), delta=1e-12)
        self.assertAlmostEqual(epsilon_guard(0.1, self.kernel), np.exp(-1.0), delta=1e-12)
        self.assertIsNone(check_epsilon_guard(0.2, None, self.kernel))
        self.assertIsNotNone(check_epsilon_guard(0.1, 1.0, self.kernel))
        with self.assertRaises(GuardError):
            check_epsilon_guard(0.2, 1.0, self.kernel)
        with self.assertLogs("core.selection.selector", level="WARNING"):
            guard = check_epsilon_guard(0.2, 1.0, self.kernel, enforce=False)
        self.assertAlmostEqual(guard, np.exp(-16.0 / 9.0), delta=1e-12)

    def test_bandwidth_grid(self):
        """
        Verify the dyadic grid H_eps, with the under-resolved levels flagged and left out of the scan.
        :return: None
        """
        self.assertEqual(list(SelectorConfig(self.kernel, 2 ** -3).bandwidth_grid()), [2.0 ** -k for k in range(7)])
        self.assertEqual(list(self.config.full_grid()), [1.0, 0.5, 0.25, 0.125])
        self.assertEqual(self.config.unresolved_levels(), [0.125])
        levels = self.config.bandwidth_grid()
        self.assertEqual(list(levels), [1.0, 0.5, 0.25])
        self.assertTrue(all(self.grid.is_resolved(h) for h in levels))
        self.assertFalse(self.grid.is_resolved(0.125))

    def test_unresolved_levels_reported(self):
        """
        Verify that the unresolved levels are logged and recorded in the trace.
        :return: None
        """
        with self.assertLogs("core.selection.selector", level="WARNING") as logs:
            config = SelectorConfig(self.kernel, 2 ** -4, n_directions=N_DIRECTIONS,
                                    min_bandwidth=self.grid.min_bandwidth())
        print(logs.output)
        self.assertIn("0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625", logs.output[0])
        _, trace = select_estimate(simulate(ridge, 0.1, self.grid, SEED), X, config)
        self.assertEqual(trace.unresolved_levels, [2.0 ** -k for k in range(3, 9)])
        self.assertEqual(trace.min_bandwidth, 0.25)
        self.assertEqual(trace.bandwidth_grid, [1.0, 0.5, 0.25])
        self.assertEqual(trace.rows()[-1][-1], "0.125;0.0625;0.03125;0.015625;0.0078125;0.00390625")

    def test_wrong_direction_rejected(self):
        """
        Verify that, without noise, a direction orthogonal to a strongly anisotropic index gives R > 0 at h = 1.
        :return: None
        """
        grid = GridSpec(2.0, 128)
        obs = simulate(lambda t1, t2: np.cos(3.0 * t1), 0.0, grid, SEED, deterministic=True)
        config = SelectorConfig(self.kernel, 2 ** -10, n_directions=N_DIRECTIONS, threshold_scale=0.01,
                                min_bandwidth=grid.min_bandwidth())
        value = compute_R(obs, Direction(0.0, 1.0), 1.0, (0.1, 0.0), config)
        print("R:", value)
        self.assertGreater(value, 0.0)

    def test_constant_field(self):
        """
        Verify that a noiseless constant field keeps every pair in P(x) and is returned exactly.
        :return: None
        """
        grid = GridSpec(2.0, 128)
        config = SelectorConfig(self.kernel, 0.3, n_directions=N_DIRECTIONS)
        self.assertTrue(all(grid.is_resolved(h) for h in config.bandwidth_grid()))
        obs = simulate(constant, 0.0, grid, SEED, deterministic=True)
        value, trace = select_estimate(obs, X, config)
        print(trace)
        self.assertAlmostEqual(value, 0.75, delta=1e-12)
        self.assertEqual(len(trace.P_membership), N_DIRECTIONS * len(config.bandwidth_grid()))
        self.assertEqual(trace.h_tilde, 1.0)
        self.assertEqual(trace.h_hat, 1.0)
        self.assertFalse(trace.fallback_used)
        self.assertEqual(trace.theta_index, N_DIRECTIONS // 2)
        self.assertAlmostEqual(trace.theta_hat.theta1, -1.0, delta=1e-15)

    def test_fallback(self):
        """
        Verify the fallback to (1, 0) when P(x) is empty, with vanishing thresholds.
        :return: None
        """
        obs = simulate(ridge, 0.1, self.grid, SEED)
        config = self.config.with_scale(1e-9)
        value, trace = select_estimate(obs, X, config)
        self.assertTrue(trace.fallback_used)
        self.assertEqual(trace.theta_hat, FALLBACK)
        self.assertEqual(trace.theta_hat, Direction(1.0, 0.0))
        self.assertIsNone(trace.h_tilde)
        self.assertIsNone(trace.theta_index)
        self.assertEqual(trace.h_hat, float(config.bandwidth_grid()[-1]))
        self.assertEqual(value, trace.level_estimates[-1])

    def test_running_maximum(self):
        """
        Verify that R is nondecreasing in h and that compute_R agrees with the trace.
        :return: None
        """
        obs = simulate(ridge, 0.1, self.grid, SEED)
        _, trace = select_estimate(obs, X, self.config)
        levels = trace.bandwidth_grid
        for k in range(N_DIRECTIONS):
            row = [trace.R_values[(k, h)] for h in levels]
            self.assertTrue(all(row[i] >= row[i + 1] for i in range(len(row) - 1)))
        k = 3
        theta = Direction(trace.directions[k, 0], trace.directions[k, 1])
        self.assertEqual(compute_R(obs, theta, levels[1], X, self.config), trace.R_values[(k, levels[1])])

    def test_cache_identity(self):
        """
        Verify that the cached and uncached scans are bit-identical.
        :return: None
        """
        obs = simulate(ridge, 0.1, self.grid, SEED)
        cached_value, cached = select_estimate(obs, X, self.config)
        self.config.use_cache = False
        uncached_value, uncached = select_estimate(obs, X, self.config)
        self.assertEqual(cached.R_values, uncached.R_values)
        self.assertEqual(cached.P_membership, uncached.P_membership)
        self.assertEqual(cached_value, uncached_value)

    def test_parallel_identity(self):
        obs = simulate(ridge, 0.1, self.grid, SEED)
        serial_value, serial = select_estimate(obs, X, self.config)
        self.config.jobs = 4
        parallel_value, parallel = select_estimate(obs, X, self.config)
        self.assertEqual(serial.R_values, parallel.R_values)
        self.assertEqual(serial_value, parallel_value)

    def test_scale_monotonicity(self):
        """
        Verify that P(x) grows with the threshold scale.
        :return: None
        """
        obs = simulate(ridge, 0.1, self.grid, SEED)
        _, P_small = first_stage(obs, X, self.config.with_scale(0.05))[1:]
        _, P_large = first_stage(obs, X, self.config.with_scale(0.5))[1:]
        self.assertTrue(P_small.issubset(P_large))

    def test_stages_agree(self):
        """
        Verify that the separate stages reproduce the combined rule.
        :return: None
        """
        obs = simulate(ridge, 0.1, self.grid, SEED)
        value, trace = select_estimate(obs, X, self.config)
        theta_hat, h_tilde, _ = first_stage(obs, X, self.config)
        self.assertEqual(theta_hat, trace.theta_hat)
        self.assertEqual(h_tilde, trace.h_tilde)
        self.assertEqual(second_stage(obs, theta_hat, X, self.config), trace.h_hat)
        levels = list(trace.bandwidth_grid)
        self.assertEqual(value, trace.level_estimates[levels.index(trace.h_hat)])

    def test_trace_csv(self):
        """
        Verify that the trace is complete and saved as one row per pair plus a summary.
        :return: None
        """
        obs = simulate(ridge, 0.1, self.grid, SEED)
        _, trace = select_estimate(obs, X, self.config)
        self.assertTrue(trace.is_complete())
        with tempfile.TemporaryDirectory() as tmp:
            filename = os.path.join(tmp, "trace.csv")
            trace.save_csv(filename, comments=["seed={}".format(SEED)])
            rows = read_csv(filename)
        self.assertEqual(len(rows), N_DIRECTIONS * len(trace.bandwidth_grid) + 1)
        self.assertEqual(rows[-1]["kind"], "summary")
        self.assertEqual(float(rows[-1]["h_hat"]), trace.h_hat)


if __name__ == "__main__":
    unittest.main()
