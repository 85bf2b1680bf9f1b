import unittest
import numpy as np
from core.estimation.estimator import estimate, estimate_pair, estimate_matrix, bias_single, bias_pair, observation_window
from core.estimation.transform import Direction, TransformMatrix, matrix_pair
from core.field.noise_field import GridSpec, simulate
from core.kernels.kernel import ProductKernel, make_default_kernel

SEED = 42
EPSILON = 0.1
REPLICATES = 3000
ERROR = 0.1
ORIGIN = (0.0, 0.0)


def constant(t1, t2):
    return np.full(np.shape(t1), 2.5)


def linear(t1, t2):
    return 0.3 + 0.7 * t1 - 0.2 * t2


def smooth(t1, t2):
    return np.sin(2.0 * t1) + t2 ** 2


class EstimatorTest(unittest.TestCase):

    def setUp(self):
        self.kernel = ProductKernel(make_default_kernel())
        self.grid = GridSpec(2.0, 200)
        self.theta = Direction.from_degrees(30.0)

    def test_constant_reproduced(self):
        """
        Verify that single and pair estimators return a constant field exactly on resolved levels.
        :return: None
        """
        obs = simulate(constant, 0.0, self.grid, SEED, deterministic=True)
        nu = Direction.from_degrees(100.0)
        for h in [1.0, 0.5, 0.25, 0.125]:
            self.assertAlmostEqual(estimate(obs, self.kernel, self.theta, h, (0.2, -0.3)), 2.5, delta=1e-12)
            self.assertAlmostEqual(estimate_pair(obs, self.kernel, self.theta, nu, h, (0.2, -0.3)), 2.5, delta=1e-12)

    def test_literal_formula(self):
        """
        Verify that the literal estimator of a constant is close to the constant on resolved levels.
        :return: None
        """
        obs = simulate(constant, 0.0, self.grid, SEED, deterministic=True)
        value = estimate(obs, self.kernel, self.theta, 0.25, ORIGIN, renormalize=False)
        print("literal:", value)
        self.assertAlmostEqual(value, 2.5, delta=5e-2)

    def test_linear_reproduced(self):
        """
        Verify that a linear field is reproduced at the grid center, where the weights are symmetric.
        :return: None
        """
        obs = simulate(linear, 0.0, self.grid, SEED, deterministic=True)
        for h in [0.5, 0.125]:
            self.assertAlmostEqual(estimate(obs, self.kernel, self.theta, h, ORIGIN), 0.3, delta=1e-10)

    def test_pair_same_direction(self):
        """
        Verify that the pair estimator with nu = theta is the estimator of [[1/(2h), 0], [0, 1/2]] for theta = e1.
        :return: None
        """
        obs = simulate(smooth, EPSILON, self.grid, SEED)
        e1 = Direction(1.0, 0.0)
        h = 0.25
        x = (0.1, 0.2)
        pair = estimate_pair(obs, self.kernel, e1, e1, h, x)
        explicit = estimate_matrix(obs, self.kernel, TransformMatrix(1.0 / (2 * h), 0.0, 0.0, 0.5, "pair"), x)
        generic = estimate_matrix(obs, self.kernel, matrix_pair(e1, e1, h), x)
        self.assertAlmostEqual(pair, explicit, delta=1e-12)
        self.assertAlmostEqual(pair, generic, delta=1e-12)

    def test_pair_sign_symmetry(self):
        """
        Verify that the pair estimator does not depend on the sign of theta.
        :return: None
        """
        obs = simulate(smooth, EPSILON, self.grid, SEED)
        nu = Direction.from_degrees(160.0)
        first = estimate_pair(obs, self.kernel, self.theta, nu, 0.5, (0.3, 0.3))
        second = estimate_pair(obs, self.kernel, self.theta.negate(), nu, 0.5, (0.3, 0.3))
        self.assertAlmostEqual(first, second, delta=1e-14)

    def test_bias_is_noiseless_estimate(self):
        """
        Verify that S_(theta,h) equals the estimator on the noiseless observation.
        :return: None
        """
        obs = simulate(smooth, 0.0, self.grid, SEED, deterministic=True)
        nu = Direction.from_degrees(-45.0)
        x = (-0.4, 0.25)
        self.assertAlmostEqual(bias_single(smooth, self.kernel, self.theta, 0.25, x, self.grid),
                               estimate(obs, self.kernel, self.theta, 0.25, x), delta=1e-14)
        self.assertAlmostEqual(bias_pair(smooth, self.kernel, self.theta, nu, 0.25, x, self.grid),
                               estimate_pair(obs, self.kernel, self.theta, nu, 0.25, x), delta=1e-14)

    def test_estimate_is_bias_plus_noise(self):
        """
        Verify that the estimator splits into the noiseless part and the estimator of the noise.
        :return: None
        """
        signal = simulate(smooth, EPSILON, self.grid, SEED, replicate=2)
        noise = simulate(None, EPSILON, self.grid, SEED, replicate=2)
        x = (0.0, 0.5)
        total = estimate(signal, self.kernel, self.theta, 0.25, x)
        split = bias_single(smooth, self.kernel, self.theta, 0.25, x, self.grid) + estimate(noise, self.kernel, self.theta, 0.25, x)
        self.assertAlmostEqual(total, split, delta=1e-12)

    def test_variance(self):
        """
        Verify the variance law eps^2 sum(w^2) cell_area / (sum(w) cell_area)^2 of the estimator on pure noise.
        :return: None
        """
        grid = GridSpec(2.0, 128)
        h = 0.25
        window = observation_window(simulate(None, EPSILON, grid, SEED), ORIGIN)
        P = self.theta.theta1 * window.d1 + self.theta.theta2 * window.d2
        Q = -self.theta.theta2 * window.d1 + self.theta.theta1 * window.d2
        w = self.kernel(P / h, Q)
        expected_var = EPSILON ** 2 * float(np.sum(w ** 2)) * grid.cell_area / (float(np.sum(w)) * grid.cell_area) ** 2
        values = [estimate(simulate(None, EPSILON, grid, SEED, replicate=k), self.kernel, self.theta, h, ORIGIN)
                  for k in range(REPLICATES)]
        actual_var = float(np.var(values))
        print("expected_var:", expected_var)
        print("actual_var:", actual_var)
        self.assertLessEqual(abs(actual_var - expected_var) / expected_var, ERROR)
        self.assertAlmostEqual(expected_var * h / EPSILON ** 2, 1.44, delta=0.15)

    def test_pair_mass_at_box_corner(self):
        """
        Verify that the literal pair kernel keeps unit mass at the corner of the point box,
        where its support reaches farthest from the origin.
        :return: None
        """
        grid = GridSpec()
        obs = simulate(lambda t1, t2: np.ones(np.shape(t1)), 0.0, grid, SEED, deterministic=True)
        diagonal = Direction.from_degrees(45.0)
        for h in [1.0, 0.5, 0.25]:
            mass = estimate_pair(obs, self.kernel, diagonal, diagonal, h, (0.5, 0.5), renormalize=False)
            print("h:", h, "mass:", mass)
            self.assertAlmostEqual(mass, 1.0, delta=2e-2)

    def test_truncated_window(self):
        """
        Verify that a window leaving the domain is reported and is not renormalized.
        :return: None
        """
        grid = GridSpec(1.25, 72)
        obs = simulate(lambda t1, t2: np.ones(np.shape(t1)), 0.0, grid, SEED, deterministic=True)
        diagonal = Direction.from_degrees(45.0)
        with self.assertLogs("core.estimation.estimator", level="WARNING"):
            window = observation_window(obs, (0.5, 0.5))
        self.assertTrue(window.truncated)
        self.assertFalse(window.renormalize)
        row = np.array([[diagonal.theta1, diagonal.theta2]])
        mass = float(window.pair_row(self.kernel, diagonal.as_array(), row, 1.0)[0])
        print("truncated mass:", mass)
        self.assertLess(mass, 0.95)
        self.assertTrue(GridSpec().covers((0.5, 0.5), np.sqrt(2.0)))


if __name__ == "__main__":
    unittest.main()
