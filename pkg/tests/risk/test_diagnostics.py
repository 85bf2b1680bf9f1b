import unittest
from core.estimation.transform import Direction
from core.field.noise_field import GridSpec
from core.kernels.kernel import make_default_kernel, ProductKernel
from core.risk.diagnostics import bias_comparison_check, lp_bias_scaling, LP_BANDWIDTHS
from core.signals.hoelder import HoelderSpec, NikolskiiSpec, SingleIndexSignal, make_hoelder, make_nikolskii

EPSILON = 2.0 ** -4


class BiasComparisonTest(unittest.TestCase):

    def setUp(self):
        self.kernel = ProductKernel(make_default_kernel())
        link = make_hoelder(HoelderSpec(1.0, 1.0, shape="cusp"))
        self.signal = SingleIndexSignal(link, Direction.from_degrees(30.0))

    def test_cusp(self):
        """
        Verify the three bias inequalities on sampled (nu, h, eta) for a cusp.
        :return: None
        """
        report = bias_comparison_check(self.signal, self.kernel, EPSILON, samples=40, seed=3, grid=GridSpec(n_per_axis=128))
        print(report)
        self.assertEqual(len(report.rows), 40)
        self.assertTrue(report.passed())
        for row in report.rows:
            self.assertLessEqual(row["eta"], row["h"])
            self.assertLessEqual(row["h"], report.h_star / 2.0)

    def test_unresolved(self):
        report = bias_comparison_check(self.signal, self.kernel, EPSILON, samples=10, grid=GridSpec(n_per_axis=8))
        self.assertEqual(report.rows, [])
        self.assertTrue(report.passed())


class LpScalingTest(unittest.TestCase):

    def setUp(self):
        self.kernel = make_default_kernel()

    def test_nikolskii(self):
        """
        Verify that ||Delta(h, .)||_p scales as h^beta for Nikol'skii cusps.
        :return: None
        """
        for beta, p in [(0.75, 2.0), (1.0, 2.0)]:
            link = make_nikolskii(NikolskiiSpec(beta, 1.0, p))
            result = lp_bias_scaling(link, self.kernel, p)
            print("expected:", beta, "actual:", result.slope)
            self.assertEqual(result.expected, beta)
            self.assertEqual(len(result.norms), len(LP_BANDWIDTHS))
            self.assertTrue(result.passed())
            self.assertTrue(all(s >= n for s, n in zip(result.star_norms, result.norms)))


if __name__ == "__main__":
    unittest.main()
