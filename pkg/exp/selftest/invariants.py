"""
SELFTEST: Run the invariant suites of the package.
The quick suites cover transforms, estimators, kernels, fields, selection, links, the oracle, the lower bound
and the rate formulas; --heavy runs every test module found under tests/.
"""

import os
import sys
import unittest

from core.cli.runner import launch
from core.utils.logutils import get_logger


# Logging
logger = get_logger(__name__)

# Defaults
QUICK_SUITES = [
    "tests.estimation.test_transform",
    "tests.estimation.test_estimator",
    "tests.kernels.test_kernel",
    "tests.field.test_noise_field",
    "tests.selection.test_selector",
    "tests.signals.test_hoelder",
    "tests.oracle.test_oracle",
    "tests.lowerbound.test_lower_bound",
    "tests.risk.test_rates",
    "tests.risk.test_constants",
]
ROOT = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))


def _suites(heavy):
    loader = unittest.TestLoader()
    if heavy:
        return [("all", loader.discover(os.path.join(ROOT, "tests"), top_level_dir=ROOT))]
    return [(name, loader.loadTestsFromName(name)) for name in QUICK_SUITES]


def run(config, tracker, outcome):
    """
    Execute the experiment.
    :param config: (RunConfig) the configuration; only heavy is read.
    :param tracker: (OutputTracker) unused, the suites write no files.
    :param outcome: (RunOutcome) one check per suite.
    :return: None
    """
    runner = unittest.TextTestRunner(stream=sys.stderr, verbosity=1)
    for name, suite in _suites(config["heavy"]):
        logger.info("Running suite {}".format(name))
        result = runner.run(suite)
        outcome.check(name, result.wasSuccessful())


if __name__ == "__main__":
    sys.exit(launch("selftest", run))
