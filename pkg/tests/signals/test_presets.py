import math
import unittest
import numpy as np
from core.estimation.transform import Direction
from core.signals.hypothesis import hypothesis_family, hypothesis_bump, bump_hoelder_constant, BUMP_L2_SQUARED
from core.signals.presets import parse_preset, parse_angle, signal_from_preset
from core.utils.errors import ConfigError, GuardError

EPSILON = 2 ** -6


class PresetsTest(unittest.TestCase):

    def test_parse(self):
        """
        Verify the name:key=value,... format.
        :return: None
        """
        name, params = parse_preset("cusp:beta=0.5, L=1,theta=30deg")
        self.assertEqual(name, "cusp")
        self.assertEqual(params, {"beta": "0.5", "L": "1", "theta": "30deg"})
        self.assertEqual(parse_preset("zero"), ("zero", {}))
        with self.assertRaises(ConfigError):
            parse_preset("cusp:beta")

    def test_angles(self):
        self.assertAlmostEqual(parse_angle("30deg"), math.pi / 6, delta=1e-15)
        self.assertAlmostEqual(parse_angle("0.5rad"), 0.5, delta=1e-15)
        self.assertAlmostEqual(parse_angle("90"), math.pi / 2, delta=1e-15)
        with self.assertRaises(ConfigError):
            parse_angle("north")

    def test_signal(self):
        """
        Verify that a cusp preset builds the rotated single-index field.
        :return: None
        """
        signal = signal_from_preset("cusp:beta=0.5,L=1,theta=30deg")
        self.assertAlmostEqual(math.degrees(signal.theta0.angle()), 30.0, delta=1e-12)
        self.assertEqual(signal.params["beta"], 0.5)
        self.assertTrue(signal.link.certificate.passed)
        self.assertEqual(signal.value_at((0.0, 0.0)), 0.0)
        overridden = signal_from_preset("cusp:beta=0.5,theta=30deg", theta=Direction(0.0, 1.0))
        self.assertEqual(overridden.theta0, Direction(0.0, 1.0))
        self.assertAlmostEqual(math.degrees(signal_from_preset("cusp", theta=45.0).theta0.angle()), 45.0, delta=1e-12)

    def test_zero_and_constant(self):
        self.assertIsNone(signal_from_preset("zero"))
        signal = signal_from_preset("constant:c=2")
        self.assertEqual(signal.value_at((0.3, -0.1)), 2.0)

    def test_unknown(self):
        with self.assertRaises(ConfigError):
            signal_from_preset("spline")
        with self.assertRaises(ConfigError):
            signal_from_preset("cusp:gamma=2")
        with self.assertRaises(ConfigError):
            signal_from_preset("cusp:beta=abc")


class HypothesisFamilyTest(unittest.TestCase):

    def test_bump(self):
        """
        Verify the default g: certified in H(1, 1), with closed-form norms.
        :return: None
        """
        self.assertAlmostEqual(bump_hoelder_constant(1.0), 3.0792, delta=1e-4)
        g = hypothesis_bump(1.0)
        self.assertTrue(g.certificate.passed)
        self.assertAlmostEqual(g.l2_squared, BUMP_L2_SQUARED / bump_hoelder_constant(1.0) ** 2, delta=1e-15)
        v = np.linspace(-0.5, 0.5, 200001)
        self.assertAlmostEqual(float(np.sum(g(v) ** 2)) * (v[1] - v[0]), g.l2_squared, delta=1e-6)
        self.assertGreater(float(g(0.0)), 0.0)

    def test_family(self):
        """
        Verify N, h and the separation lambda = |g(0)| a^(2 beta/(2 beta + 1)) psi_eps.
        :return: None
        """
        family = hypothesis_family(1.0, 1.0, EPSILON, 0.5)
        self.assertEqual(family.N, 8)
        self.assertTrue(np.allclose(np.sum(family.directions ** 2, axis=1), 1.0))
        psi = (EPSILON * math.sqrt(math.log(1.0 / EPSILON))) ** (2.0 / 3.0)
        expected = abs(float(family.g(0.0))) * family.a_frak ** (2.0 / 3.0) * psi
        for i in range(1, family.N + 1):
            self.assertAlmostEqual(abs(float(family.value(i, family.x))), expected, delta=1e-12)
        self.assertAlmostEqual(family.lambda_eps(), expected, delta=1e-12)
        self.assertEqual(family.value(0, family.x), 0.0)

    def test_family_guards(self):
        with self.assertRaises(GuardError):
            hypothesis_family(1.0, 1.0, EPSILON, 2.0 / 3.0)
        with self.assertRaises(GuardError):
            hypothesis_family(1.0, 1.0, EPSILON, 0.5, d=4)

    def test_single_hypothesis(self):
        """
        Verify that b = 0 gives N = 1 and the zero signal.
        :return: None
        """
        family = hypothesis_family(1.0, 1.0, EPSILON, 0.0)
        self.assertEqual(family.N, 1)
        self.assertEqual(family.h, 0.0)
        self.assertEqual(family.lambda_eps(), 0.0)

    def test_three_dimensions(self):
        family = hypothesis_family(1.0, 1.0, EPSILON, 0.5, d=3)
        self.assertEqual(family.directions.shape, (8, 3))
        self.assertTrue(np.all(family.directions[:, 2] == 0.0))
        self.assertAlmostEqual(family.a_frak ** 2 * 3, hypothesis_family(1.0, 1.0, EPSILON, 0.5).a_frak ** 2, delta=1e-15)


if __name__ == "__main__":
    unittest.main()
