"""
SIMULATE: Draw one observation of the white-noise model on the grid and dump it as text.
Results are stored in 'field.txt', 'simulate.csv' and 'simulate.txt'.
"""

import math
import sys
import numpy as np

from core.cli.runner import launch
from core.field.noise_field import simulate, sample_field, dump, load
from core.utils.logutils import get_logger
from core.utils.report import SimpleReport


# Logging
logger = get_logger(__name__)

# Defaults
FIELD_FILE = "field.txt"
REPORT_NAME = "simulate"
SDEV_SIGMAS = 5.0


def run(config, tracker, outcome):
    """
    Execute the experiment.
    :param config: (RunConfig) the configuration.
    :param tracker: (OutputTracker) the output files of the run.
    :param outcome: (RunOutcome) the checks of the run.
    :return: None
    """
    signal = config.signal()
    grid = config.grid()
    epsilon = config["epsilon"]
    obs = simulate(signal, epsilon, grid, config["seed"])
    logger.info("Simulated {}".format(obs))

    filename = tracker.path(FIELD_FILE)
    dump(obs, filename)
    outcome.check("dump_round_trip", np.array_equal(load(filename).increments, obs.increments))

    xi = (obs.increments - sample_field(signal, grid) * grid.cell_area) / (epsilon * math.sqrt(grid.cell_area))
    sdev = float(np.std(xi))
    tolerance = SDEV_SIGMAS / math.sqrt(2.0 * xi.size)
    outcome.check("noise_sdev", abs(sdev - 1.0) <= tolerance)

    r = SimpleReport("OBSERVATION")
    r.add_all("grid", {"half_width": grid.half_width, "n_per_axis": grid.n_per_axis, "step": grid.step})
    r.add_all("observation", {"signal": obs.signal_id, "epsilon": epsilon, "seed": obs.seed,
                              "replicate": obs.replicate, "total_increment": float(np.sum(obs.increments))})
    r.add_all("noise", {"mean": float(np.mean(xi)), "sdev": sdev, "tolerance": tolerance})
    r.save_csv(tracker.path(REPORT_NAME + ".csv"), empty=True, comments=config.header_lines())
    r.save_txt(tracker.path(REPORT_NAME + ".txt"), empty=True)

    print(r)


if __name__ == "__main__":
    sys.exit(launch("simulate", run))
