import math
import unittest
import numpy as np
from core.lowerbound.lower_bound import bound_value, check_family, cross_inner_bound_check, gram_matrix, \
    cross_analytic_bound
from core.signals.hypothesis import hypothesis_family
from core.utils.errors import GuardError

EPSILON = 2 ** -6


class BoundValueTest(unittest.TestCase):

    def test_limits(self):
        """
        Verify c -> 0 gives lambda/2 and c = ln 5 gives (1 - 1/sqrt 2)/2 lambda.
        :return: None
        """
        self.assertAlmostEqual(bound_value(1.0, 1e-12), 0.5, delta=1e-6)
        expected = 0.5 * (1.0 - 1.0 / math.sqrt(2.0))
        print("expected:", expected, "actual:", bound_value(1.0, math.log(5.0)))
        self.assertAlmostEqual(bound_value(1.0, math.log(5.0)), expected, delta=1e-14)
        self.assertAlmostEqual(expected, 0.1464, delta=1e-4)

    def test_monotone(self):
        values = [bound_value(2.0, c) for c in np.linspace(0.01, 10.0, 200)]
        self.assertTrue(all(a > b for a, b in zip(values, values[1:])))

    def test_guard(self):
        with self.assertRaises(GuardError):
            bound_value(1.0, 0.0)


class CheckFamilyTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.family = hypothesis_family(1.0, 1.0, EPSILON, 0.5)
        cls.report = check_family(cls.family)
        print(cls.report.to_report())

    def test_all_conditions(self):
        """
        Verify that beta = 1, L = 1, b = 1/2, eps = 2^-6 passes every condition with c = 1 and rho = 1/3.
        :return: None
        """
        self.assertTrue(self.report.passed(), str(self.report))
        self.assertEqual(set(self.report.flags), {"separation", "norm", "norm_analytic", "symmetry", "cross",
                                                  "cross_analytic"})

    def test_separation(self):
        """
        Verify lambda_eps against the closed form to 1e-10.
        :return: None
        """
        self.assertAlmostEqual(self.report.lambda_eps, self.report.values["lambda_closed_form"], delta=1e-10)
        self.assertGreater(self.report.lambda_eps, 0.0)
        self.assertAlmostEqual(self.report.bound_value, bound_value(self.report.lambda_eps, 1.0), delta=1e-15)

    def test_cross(self):
        """
        Verify that the largest cross product is between adjacent directions and below its analytic display.
        :return: None
        """
        i, j = [int(v) for v in self.report.values["argmax_pair"].split("-")]
        self.assertEqual(abs(i - j), 1)
        self.assertLess(self.report.values["smallest_c"], 1.0)
        self.assertAlmostEqual(self.report.values["smallest_c"], self.report.max_cross_inner / EPSILON ** 2, delta=1e-12)
        self.assertLessEqual(self.report.values["cross_bound_ratio"], 1.02)
        self.assertLessEqual(self.report.max_sq_norm, self.report.values["norm_bound"] * 1.02)

    def test_far_pairs(self):
        """
        Verify that ridges further apart overlap less.
        :return: None
        """
        gram = gram_matrix(self.family)
        self.assertLess(gram[0, self.family.N - 1], gram[0, 1])
        self.assertTrue(np.all(np.abs(gram - gram.T) <= 1e-12))
        ratio = cross_inner_bound_check(self.family, gram)
        self.assertAlmostEqual(ratio, float(np.max(gram[~np.eye(self.family.N, dtype=bool)])) / cross_analytic_bound(self.family),
                               delta=1e-12)

    def test_single_member(self):
        """
        Verify that N = 1 makes the cross condition vacuous.
        :return: None
        """
        report = check_family(hypothesis_family(1.0, 1.0, EPSILON, 0.0), grid_n=64)
        self.assertTrue(report.passed(), str(report))
        self.assertEqual(report.max_cross_inner, 0.0)
        self.assertEqual(cross_inner_bound_check(report.family), 0.0)

    def test_parallel(self):
        family = hypothesis_family(1.0, 1.0, EPSILON, 0.5)
        self.assertTrue(np.allclose(gram_matrix(family, 128), gram_matrix(family, 128, jobs=4), rtol=1e-12, atol=0.0))


if __name__ == "__main__":
    unittest.main()
