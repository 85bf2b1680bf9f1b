from math import sqrt


class WelfordAccumulator:
    """
    One-pass (Welford) accumulator of
        * sample mean
        * sample variance
        * standard error of the mean.
    Values must be added in a fixed order for bit-exact reproducibility.
    """

    def __init__(self):
        self._n = 0
        self._mean = 0.0
        self._m2 = 0.0

    def reset(self):
        """
        Reset statistics.
        :return: None
        """
        self._n = 0
        self._mean = 0.0
        self._m2 = 0.0

    def add_value(self, value):
        """
        Add a value.
        :param value: (float) the value.
        :return: None
        """
        self._n += 1
        delta = value - self._mean
        self._mean += delta / self._n
        self._m2 += delta * (value - self._mean)

    def add_all(self, values):
        """
        Add values in iteration order.
        :param values: (iterable) the values.
        :return: None
        """
        for value in values:
            self.add_value(float(value))

    def samsize(self):
        """
        :return: (int) the sample size.
        """
        return self._n

    def mean(self):
        """
        :return: (float) the sample mean.
        """
        return self._mean

    def var(self):
        """
        :return: (float) the (population form) sample variance.
        """
        return self._m2 / self._n if self._n > 0 else 0.0

    def sdev(self):
        """
        :return: (float) the sample standard deviation.
        """
        return sqrt(self.var())

    def stderr(self):
        """
        :return: (float) the standard error of the mean, with the n-1 correction.
        """
        return sqrt(self._m2 / (self._n - 1) / self._n) if self._n > 1 else 0.0

    def __str__(self):
        return "WelfordAccumulator(n={}, mean={}, var={})".format(self._n, self._mean, self.var())

    def __repr__(self):
        return self.__str__()
