"""
ORACLE: Tabulate the oracle bandwidth h* and the oracle risk bound along the index axis.
Results are stored in 'oracle.csv' with columns y, h_star, risk_bound, floored; h* below the smallest
bandwidth the grid resolves is flagged in the last column.
"""

import sys
import numpy as np

from core.cli.runner import launch
from core.oracle.bias import BiasProfile
from core.oracle.oracle import oracle_bandwidth_table, oracle_risk_bound, hoelder_h_star_floor, H_LEVELS_PER_OCTAVE
from core.risk.constants import INDEX_RANGE
from core.utils.csv_utils import save_csv
from core.utils.errors import ConfigError
from core.utils.logutils import get_logger


# Logging
logger = get_logger(__name__)

# Defaults
TABLE_FILE = "oracle.csv"
COLUMNS = ["y", "h_star", "risk_bound", "floored"]


def run(config, tracker, outcome):
    """
    Execute the experiment.
    :param config: (RunConfig) the configuration.
    :param tracker: (OutputTracker) the output files of the run.
    :param outcome: (RunOutcome) the checks of the run.
    :return: None
    """
    signal = config.signal()
    if signal is None:
        raise ConfigError("The oracle table needs a nonzero signal")
    kernel = config.kernel()
    epsilon = config["epsilon"]

    profile = BiasProfile(kernel.factor, signal.link)
    z, h_star = oracle_bandwidth_table(profile, epsilon, *INDEX_RANGE)
    bounds = [oracle_risk_bound(h, epsilon, config["r"], kernel) for h in h_star]
    min_bandwidth = config.grid().min_bandwidth()
    floored = h_star < min_bandwidth
    if np.any(floored):
        logger.warning("h* is below the smallest resolved bandwidth {} at {} of {} points".format(
            min_bandwidth, int(np.sum(floored)), len(z)))
    save_csv(tracker.path(TABLE_FILE), COLUMNS, zip(z, h_star, bounds, floored), empty=True,
             comments=config.header_lines())

    params = signal.params
    if "beta" in params and "L" in params and "p" not in params:
        floor = hoelder_h_star_floor(params["beta"], params["L"], epsilon)
        # h* is snapped down to the level grid
        outcome.check("hoelder_floor", bool(np.all(h_star >= floor * 2.0 ** (-1.0 / H_LEVELS_PER_OCTAVE))))
        logger.info("Hoelder floor {}: smallest h* {}".format(floor, float(np.min(h_star))))

    logger.info("Tabulated h* at {} points: min={} max={}".format(len(z), float(np.min(h_star)),
                                                                  float(np.max(h_star))))


if __name__ == "__main__":
    sys.exit(launch("oracle", run))
