"""
LB CHECK: Build the hypothesis family of the lower bound and check its separation, norm and cross-product conditions.
Results are stored in 'lb_report.csv' and 'lb_report.txt'; with --heavy, 'lb_scan.csv' holds the scan of the noise
levels for the first one at which every condition passes.
"""

import sys

from core.cli.runner import launch
from core.lowerbound.lower_bound import check_family, smallest_passing_epsilon
from core.signals.hypothesis import hypothesis_family
from core.utils.csv_utils import save_csv
from core.utils.logutils import get_logger


# Logging
logger = get_logger(__name__)

# Defaults
DEFAULT_BETA = 1.0
DEFAULT_L = 1.0
REPORT_NAME = "lb_report"
SCAN_FILE = "lb_scan.csv"


def run(config, tracker, outcome):
    """
    Execute the experiment.
    :param config: (RunConfig) the configuration; beta and L default to 1 here.
    :param tracker: (OutputTracker) the output files of the run.
    :param outcome: (RunOutcome) the checks of the run.
    :return: None
    """
    beta = config["beta"] if config["beta"] is not None else DEFAULT_BETA
    L = config["L"] if config["L"] is not None else DEFAULT_L
    family = hypothesis_family(beta, L, config["epsilon"], config["b"], d=config["d"])
    report = check_family(family, config["c"], config["rho"], jobs=config["jobs"])

    r = report.to_report()
    r.save_csv(tracker.path(REPORT_NAME + ".csv"), empty=True, comments=config.header_lines())
    r.save_txt(tracker.path(REPORT_NAME + ".txt"), empty=True)
    for name, passed in report.flags.items():
        outcome.check(name, passed)

    if config["heavy"]:
        eps, scanned = smallest_passing_epsilon(beta, L, config["b"], config["epsilons"], config["c"], config["rho"],
                                                d=config["d"], jobs=config["jobs"])
        save_csv(tracker.path(SCAN_FILE), ["smallest_passing_epsilon", "failures"],
                 [[eps if eps is not None else "none", " ".join(scanned.failures()) or "none"]], empty=True,
                 comments=config.header_lines())
        logger.info("Smallest passing noise level: {}".format(eps))

    print(r)


if __name__ == "__main__":
    sys.exit(launch("lb-check", run))
