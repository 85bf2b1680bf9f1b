"""
Counter-based replicate streams.

Every replicate owns a numpy Generator over the Philox bit generator, keyed by
the pair (master seed, replicate index). Streams are independent of the order
in which replicates are executed, so parallel runs reproduce serial ones
bit-exactly.
"""

import numpy as np


DEFAULT_SEED = 123456789
MAX_WORD = 2 ** 64


class ReplicateStreams(object):
    """
    A family of independent Gaussian-capable streams indexed by replicate.
    """

    def __init__(self, master_seed=DEFAULT_SEED):
        """
        Creates a new stream family.
        :param master_seed: (int) the master seed; must lie in [0, 2^64).
        """
        master_seed = int(master_seed)
        if not 0 <= master_seed < MAX_WORD:
            raise ValueError("master seed must lie in [0, 2^64). Found {}".format(master_seed))
        self._master_seed = master_seed

    def key(self, index):
        """
        The 128-bit Philox key of a replicate.
        :param index: (int) the replicate index, in [0, 2^64).
        :return: (int) the key.
        """
        index = int(index)
        if not 0 <= index < MAX_WORD:
            raise ValueError("replicate index must lie in [0, 2^64). Found {}".format(index))
        return (self._master_seed << 64) | index

    def stream(self, index):
        """
        Returns a fresh generator positioned at the start of a replicate stream.
        :param index: (int) the replicate index.
        :return: (numpy.random.Generator) the generator.
        """
        return np.random.Generator(np.random.Philox(key=self.key(index)))

    def __str__(self):
        return "ReplicateStreams(master_seed={})".format(self._master_seed)

    def __repr__(self):
        return self.__str__()
