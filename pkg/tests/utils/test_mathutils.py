import math
import unittest
import numpy as np
from core.utils import mathutils


class MathUtilsTest(unittest.TestCase):

    def test_noise_compound(self):
        self.assertAlmostEqual(mathutils.noise_compound(math.exp(-1)), math.exp(-1), 12)
        values = mathutils.noise_compound([0.25, 0.0625])
        self.assertAlmostEqual(values[1], 0.0625 * math.sqrt(math.log(16)), 12)

    def test_dyadic_grid(self):
        """
        Verify that exact powers of two are kept as the smallest level.
        :return: None
        """
        grid = mathutils.dyadic_grid(2.0 ** -12)
        print("grid:", grid)
        self.assertEqual(len(grid), 13)
        self.assertEqual(grid[0], 1.0)
        self.assertEqual(grid[-1], 2.0 ** -12)
        self.assertEqual(len(mathutils.dyadic_grid(0.25, levels_per_octave=4)), 9)
        with self.assertRaises(ValueError):
            mathutils.dyadic_grid(2.0)

    def test_quadrature(self):
        nodes, weight = mathutils.midpoint_nodes(-1.0, 1.0, 4)
        self.assertEqual(weight, 0.5)
        self.assertTrue(np.allclose(nodes, [-0.75, -0.25, 0.25, 0.75]))
        nodes, weights = mathutils.legendre_nodes(0.0, 2.0, 8)
        self.assertAlmostEqual(float(np.sum(weights * nodes ** 5)), 2.0 ** 6 / 6.0, 10)

    def test_lp_norm(self):
        values = [1.0, -2.0, 2.0]
        self.assertAlmostEqual(mathutils.lp_norm(values, 1.0, 1), 5.0, 12)
        self.assertAlmostEqual(mathutils.lp_norm(values, 0.5, 2), math.sqrt(4.5), 12)
        self.assertEqual(mathutils.lp_norm(values, 1.0, math.inf), 2.0)


if __name__ == "__main__":
    unittest.main()
