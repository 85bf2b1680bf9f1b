"""
CALIBRATE: Find the smallest threshold scale keeping the false rejection of h = 1 under pure noise below 5%.
Results are stored in 'calibration.csv' with the rate of every scale of the grid.
"""

import sys

from core.cli.runner import launch
from core.risk.calibration import calibrate_threshold
from core.utils.csv_utils import save_csv
from core.utils.logutils import get_logger


# Logging
logger = get_logger(__name__)

# Defaults
CALIBRATION_FILE = "calibration.csv"
COLUMNS = ["scale", "rate"]


def run(config, tracker, outcome):
    """
    Execute the experiment.
    :param config: (RunConfig) the configuration.
    :param tracker: (OutputTracker) the output files of the run.
    :param outcome: (RunOutcome) the checks of the run.
    :return: None
    """
    grid = config.grid()
    result = calibrate_threshold(config.kernel(), config["epsilon"], grid,
                                 replicates=config["calibration_replicates"] or config["replicates"],
                                 seed=config["seed"], n_directions=config["n_directions"], r=config["r"],
                                 x=config.point(), min_bandwidth=grid.min_bandwidth(), jobs=config["jobs"])
    save_csv(tracker.path(CALIBRATION_FILE), COLUMNS, result.rows(), empty=True,
             comments=config.header_lines() + result.header_lines())
    logger.info("Calibrated threshold scale: {}".format(result.scale))
    outcome.check("scale_below_top", not result.hit_top)
    print(result)


if __name__ == "__main__":
    sys.exit(launch("calibrate", run))
