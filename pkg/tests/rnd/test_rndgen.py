import unittest
import numpy as np
from core.rnd.rndgen import ReplicateStreams


class RndgenTest(unittest.TestCase):

    def setUp(self):
        """
        The test setup.
        :return: None
        """
        self.streams = ReplicateStreams(123456789)

    def test_reproducible(self):
        """
        Verify that a replicate stream restarts at the same position.
        :return: None
        """
        first = self.streams.stream(5).standard_normal(1000)
        second = ReplicateStreams(123456789).stream(5).standard_normal(1000)
        self.assertTrue(np.array_equal(first, second), "{} is not reproducible!".format(self.streams))

    def test_order_independent(self):
        """
        Verify that streams do not depend on the order in which replicates are drawn.
        :return: None
        """
        forward = [self.streams.stream(i).standard_normal(10) for i in range(4)]
        backward = [self.streams.stream(i).standard_normal(10) for i in reversed(range(4))][::-1]
        for a, b in zip(forward, backward):
            self.assertTrue(np.array_equal(a, b))

    def test_distinct(self):
        a = self.streams.stream(0).standard_normal(100)
        b = self.streams.stream(1).standard_normal(100)
        c = ReplicateStreams(123456790).stream(0).standard_normal(100)
        self.assertFalse(np.array_equal(a, b))
        self.assertFalse(np.array_equal(a, c))

    def test_key(self):
        self.assertEqual(self.streams.key(3), (123456789 << 64) | 3)
        with self.assertRaises(ValueError):
            ReplicateStreams(-1)
        with self.assertRaises(ValueError):
            self.streams.key(2 ** 64)


if __name__ == "__main__":
    unittest.main()
