"""
RATE FIT: Refit the convergence rates of a stored sweep.
Input is a 'sweep.csv' (pointwise, grouped by procedure and point) or a 'global_sweep.csv'.
Results are stored in 'rate_fit.csv'.
"""

import os
import sys
from collections import OrderedDict

from core.cli.runner import launch
from core.risk.rates import Regime, rate_fit
from core.utils.csv_utils import read_csv, save_csv
from core.utils.errors import ConfigError
from core.utils.logutils import get_logger
from exp.risk.risk_sweep import POINTWISE_SLOPE_TOL, GLOBAL_SLOPE_TOL


# Logging
logger = get_logger(__name__)

# Defaults
FIT_FILE = "rate_fit.csv"
COLUMNS = ["procedure", "x1", "x2", "slope", "intercept", "residual", "theoretical_exponent", "slope_stderr",
           "n_points", "regime", "deviation"]


def _groups(rows):
    groups = OrderedDict()
    for row in rows:
        key = (row.get("procedure", "global"), row.get("x1", ""), row.get("x2", ""))
        groups.setdefault(key, []).append(row)
    return groups


def run(config, tracker, outcome):
    """
    Execute the experiment.
    :param config: (RunConfig) the configuration; input names the sweep CSV.
    :param tracker: (OutputTracker) the output files of the run.
    :param outcome: (RunOutcome) the checks of the run.
    :return: None
    """
    filename = config["input"]
    if filename is None or not os.path.exists(filename):
        raise ConfigError("rate-fit needs an existing sweep CSV as input. Found: {}".format(filename))
    beta = config.beta()
    if beta is None:
        raise ConfigError("rate-fit needs the smoothness beta")
    rows = read_csv(filename)
    pointwise = len(rows) > 0 and "procedure" in rows[0]
    p = None
    if not pointwise:
        p = config["p"] if config["p"] is not None else 1.0

    data = []
    for (procedure, x1, x2), selected in _groups(rows).items():
        fit = rate_fit([float(row["epsilon"]) for row in selected], [float(row["risk"]) for row in selected], beta,
                       p, config["r"] if p is not None else None)
        values = fit.as_dict()
        data.append([procedure, x1, x2] + [values[c] for c in COLUMNS[3:-1]] + [fit.deviation()])
        logger.info("{} at ({}, {}): {}".format(procedure, x1, x2, fit))
        if fit.regime is Regime.BOUNDARY:
            continue
        tol = POINTWISE_SLOPE_TOL if pointwise else GLOBAL_SLOPE_TOL
        outcome.check("{}_rate_{}_{}".format(procedure, x1, x2), fit.deviation() <= tol)
    save_csv(tracker.path(FIT_FILE), COLUMNS, data, empty=True, comments=config.header_lines())


if __name__ == "__main__":
    sys.exit(launch("rate-fit", run))
