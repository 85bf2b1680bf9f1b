import os
import shutil
import tempfile
import unittest
import numpy as np
from core.estimation.transform import Direction
from core.field.noise_field import GridSpec, simulate
from core.kernels.kernel import make_default_kernel, ProductKernel
from core.risk.harness import RiskConfig, pointwise_risk, global_risk, x_grid, risk_sweep, oracle_ratio_study, \
    global_sweep, check_guards
from core.risk.procedures import AdaptiveProcedure, OracleProcedure, FixedProcedure
from core.selection.selector import SelectorConfig
from core.signals.hoelder import HoelderSpec, SingleIndexSignal, make_hoelder, constant_link
from core.utils.csv_utils import read_csv
from core.utils.errors import GuardError

GRID = GridSpec(n_per_axis=64)
EPSILON = 0.05
ORIGIN = (0.0, 0.0)


class PointwiseRiskTest(unittest.TestCase):

    def setUp(self):
        self.kernel = ProductKernel(make_default_kernel())
        self.constant = SingleIndexSignal(constant_link(0.7), Direction.from_degrees(30.0))
        self.zero = SingleIndexSignal(constant_link(0.0), Direction(1.0, 0.0))

    def test_noiseless_constant(self):
        """
        Verify zero risk for a constant field without noise, for every procedure.
        :return: None
        """
        config = SelectorConfig(self.kernel, EPSILON, n_directions=16, min_bandwidth=4 * GRID.step)
        procedures = [FixedProcedure(self.kernel, Direction(1.0, 0.0), 0.5),
                      OracleProcedure(self.kernel, self.constant, EPSILON),
                      AdaptiveProcedure(config, self.constant.theta0)]
        for procedure in procedures:
            risk = pointwise_risk(procedure, self.constant, 0.0, (0.1, -0.2), 2.0, 10, 1, GRID)
            self.assertEqual(risk.replicates, 1)
            self.assertAlmostEqual(risk.value, 0.0, delta=1e-10, msg=str(procedure))

    def test_variance_only(self):
        """
        Verify that the oracle on pure noise has h* = 1 and risk ||K||_2^2 eps within 10%.
        :return: None
        """
        procedure = OracleProcedure(self.kernel, self.zero, EPSILON)
        self.assertEqual(procedure.h_star(ORIGIN), 1.0)
        risk = pointwise_risk(procedure, self.zero, EPSILON, ORIGIN, 2.0, 600, 3, GRID)
        expected = 1.2 * EPSILON
        print("expected:", expected, "actual:", risk.value, "stderr:", risk.stderr)
        self.assertAlmostEqual(risk.value, expected, delta=0.1 * expected)
        self.assertEqual(risk.info["mean_h"], 1.0)

    def test_stderr_shrinks(self):
        """
        Verify that doubling the replicates shrinks the standard error by about 1/sqrt(2).
        :return: None
        """
        procedure = FixedProcedure(self.kernel, Direction(1.0, 0.0), 0.5)
        small = pointwise_risk(procedure, None, EPSILON, ORIGIN, 2.0, 300, 5, GRID)
        large = pointwise_risk(procedure, None, EPSILON, ORIGIN, 2.0, 600, 5, GRID)
        ratio = large.stderr / small.stderr
        print("ratio:", ratio)
        self.assertTrue(0.6 <= ratio <= 0.85)

    def test_oracle_floor_recorded(self):
        """
        Verify that the oracle records and logs an h* floored at the smallest resolved bandwidth.
        :return: None
        """
        signal = SingleIndexSignal(make_hoelder(HoelderSpec(0.5, 1.0, shape="cusp")), Direction.from_degrees(30.0))
        free = OracleProcedure(self.kernel, signal, EPSILON)
        h_star = free.h_star(ORIGIN)
        print("h_star:", h_star)
        self.assertLess(h_star, 0.5)
        floored = OracleProcedure(self.kernel, signal, EPSILON, min_bandwidth=2.0 * h_star, profile=free.profile)
        obs = simulate(signal, EPSILON, GRID, 1)
        with self.assertLogs("core.risk.procedures", level="WARNING"):
            _, info = floored.run(obs, ORIGIN)
        self.assertTrue(info["floored"])
        self.assertEqual(info["h"], 2.0 * h_star)
        self.assertEqual(info["h_star"], h_star)
        self.assertFalse(free.run(obs, ORIGIN)[1]["floored"])

    def test_reproducible(self):
        procedure = FixedProcedure(self.kernel, Direction.from_degrees(30.0), 0.25)
        first = pointwise_risk(procedure, self.constant, EPSILON, ORIGIN, 2.0, 20, 11, GRID)
        second = pointwise_risk(procedure, self.constant, EPSILON, ORIGIN, 2.0, 20, 11, GRID, jobs=4)
        self.assertEqual(first.value, second.value)
        self.assertEqual(first.stderr, second.stderr)


class GlobalRiskTest(unittest.TestCase):

    def setUp(self):
        self.kernel = ProductKernel(make_default_kernel())

    def test_grid(self):
        xs, weight = x_grid(4)
        self.assertEqual(len(xs), 16)
        self.assertEqual(weight, 1.0 / 16.0)
        self.assertEqual(xs[0], (-0.375, -0.375))

    def test_noiseless_constant(self):
        signal = SingleIndexSignal(constant_link(2.0), Direction.from_degrees(45.0))
        xs, weight = x_grid(3)
        risk = global_risk(FixedProcedure(self.kernel, Direction(0.0, 1.0), 0.25), signal, 0.0, 2.0, xs, 5, 0, weight,
                           GRID)
        self.assertAlmostEqual(risk.value, 0.0, delta=1e-10)

    def test_norm_inequalities(self):
        """
        Verify global <= L_r of the pointwise risks <= sup of the pointwise risks.
        :return: None
        """
        xs, weight = x_grid(3)
        for r in [1.0, 2.0, 4.0]:
            risk = global_risk(FixedProcedure(self.kernel, Direction(1.0, 0.0), 0.5), None, EPSILON, r, xs, 40, 2,
                               weight, GRID)
            print(risk)
            self.assertTrue(risk.jensen_holds())
            self.assertTrue(risk.sup_holds())
            self.assertLessEqual(risk.lr_of_pointwise, risk.sup_pointwise * (1.0 + 1e-12))
            self.assertEqual(len(risk.pointwise), 9)


class SweepTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.kernel = ProductKernel(make_default_kernel())
        cls.signal = SingleIndexSignal(make_hoelder(HoelderSpec(1.0, 1.0, shape="cusp")), Direction.from_degrees(30.0))
        cls.config = RiskConfig(cls.kernel, r=2.0, replicates=8, epsilons=[2.0 ** -k for k in range(4, 8)],
                                master_seed=7, threshold_scale=0.5, n_grid=64, n_directions=16)
        cls.sweep = risk_sweep(cls.signal, cls.config)

    def test_rows(self):
        """
        Verify one row per noise level and procedure, the fits and the oracle inequality.
        :return: None
        """
        self.assertEqual(len(self.sweep.rows), 8)
        self.assertEqual(self.config.epsilons, sorted(self.config.epsilons, reverse=True))
        self.assertIsNotNone(self.sweep.fit("adaptive"))
        self.assertIsNotNone(self.sweep.fit("oracle"))
        self.assertAlmostEqual(self.sweep.fit("adaptive").theoretical_exponent, 2.0 / 3.0, delta=1e-15)
        self.assertTrue(self.sweep.adaptive_bound_holds())
        for row in self.sweep.select("adaptive"):
            self.assertTrue(0.0 <= row["alignment"] <= 1.0)
            self.assertGreaterEqual(row["mean_h"], self.config.min_bandwidth())

    def test_oracle_ratio(self):
        study = oracle_ratio_study(self.signal, self.config, sweep=self.sweep)
        self.assertEqual(len(study.rows), 4)
        self.assertAlmostEqual(study.c_r1, 960.50, delta=0.05)
        self.assertTrue(study.adaptive_bound_holds())
        self.assertIsNotNone(study.slope)
        for row in study.rows:
            self.assertAlmostEqual(row["ratio"], row["adaptive_risk"] / row["oracle_bound"], delta=1e-12)

    def test_save(self):
        outdir = tempfile.mkdtemp()
        try:
            filename = os.path.join(outdir, "sweep.csv")
            self.sweep.save_csv(filename, comments=["seed = 7"])
            rows = read_csv(filename)
            self.assertEqual(len(rows), 8)
            summary = os.path.join(outdir, "summary.csv")
            self.sweep.save_summary_csv(summary)
            self.assertEqual(len(read_csv(summary)), 2)
        finally:
            shutil.rmtree(outdir)

    def test_global_sweep(self):
        """
        Verify the norm inequalities and the global oracle inequality over a small sweep.
        :return: None
        """
        config = RiskConfig(self.kernel, r=4.0, replicates=4, epsilons=[2.0 ** -k for k in range(4, 8)],
                            master_seed=3, threshold_scale=0.5, n_grid=64, n_directions=16)
        result = global_sweep(self.signal, config, p=1.0, n_points=2)
        self.assertEqual(len(result.rows), 4)
        self.assertTrue(result.norms_hold())
        self.assertTrue(result.bound_holds())
        self.assertAlmostEqual(result.fit.theoretical_exponent, 0.5, delta=1e-15)

    def test_guards(self):
        with self.assertRaises(GuardError):
            RiskConfig(self.kernel, epsilons=[0.5])
        with self.assertRaises(GuardError):
            RiskConfig(self.kernel, r=0.5)
        self.assertTrue(np.isclose(self.config.min_bandwidth(), 4 * 4.0 / 64))

    def test_guard_of_computed_bound(self):
        """
        Verify that the signal's own bound only warns at the noise guard, and that a configured M enforces it.
        :return: None
        """
        steep = SingleIndexSignal(make_hoelder(HoelderSpec(0.5, 4.0, shape="cusp")), Direction(1.0, 0.0))
        config = RiskConfig(self.kernel, replicates=60, epsilons=[2.0 ** -6], n_grid=64, n_directions=16)
        with self.assertLogs("core.selection.selector", level="WARNING") as logs:
            M = check_guards(steep, config)
        print(logs.output)
        self.assertEqual(M, steep.bound_M)
        self.assertTrue(any("exceeds the guard" in line for line in logs.output))
        with self.assertRaises(GuardError):
            check_guards(steep, config, M=steep.bound_M)


if __name__ == "__main__":
    unittest.main()
