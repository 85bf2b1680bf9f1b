"""
ESTIMATE: Run the two-stage selection rule at one point of one observation.
Results are stored in 'trace.csv' (every R value and the selection summary) and 'estimate.csv'.
"""

import sys

from core.cli.runner import launch
from core.field.noise_field import simulate, dump
from core.risk.calibration import calibrate_threshold
from core.risk.harness import true_value
from core.risk.procedures import OracleProcedure
from core.selection.selector import select_estimate
from core.utils.logutils import get_logger
from core.utils.report import SimpleReport


# Logging
logger = get_logger(__name__)

# Defaults
TRACE_FILE = "trace.csv"
FIELD_FILE = "field.txt"
REPORT_NAME = "estimate"


def resolve_scale(config, epsilon):
    """
    The configured threshold scale, or the one calibrated at epsilon.
    :return: (float, list(string)) the scale and the report comments describing it.
    """
    if config["threshold_scale"] is not None:
        return config["threshold_scale"], ["threshold_scale = {}".format(config["threshold_scale"])]
    calibration = calibrate_threshold(config.kernel(), epsilon, config.grid(),
                                      replicates=config["calibration_replicates"] or config["replicates"],
                                      seed=config["seed"], n_directions=config["n_directions"], r=config["r"],
                                      x=config.point(), min_bandwidth=config.grid().min_bandwidth(), jobs=config["jobs"])
    return calibration.scale, ["threshold_scale = {}".format(calibration.scale)] + calibration.header_lines()


def run(config, tracker, outcome):
    """
    Execute the experiment.
    :param config: (RunConfig) the configuration.
    :param tracker: (OutputTracker) the output files of the run.
    :param outcome: (RunOutcome) the checks of the run.
    :return: None
    """
    kernel = config.kernel()
    signal = config.signal()
    epsilon = config["epsilon"]
    x = config.point()
    config.check_guard(epsilon, signal, kernel)
    scale, scale_lines = resolve_scale(config, epsilon)

    obs = simulate(signal, epsilon, config.grid(), config["seed"])
    if config["dump_field"]:
        dump(obs, tracker.path(FIELD_FILE))

    selector_config = config.selector_config(epsilon, scale)
    value, trace = select_estimate(obs, x, selector_config)
    comments = config.header_lines() + scale_lines
    trace.save_csv(tracker.path(TRACE_FILE), comments=comments)
    outcome.check("trace_complete", trace.is_complete())

    truth = true_value(signal, x)
    r = SimpleReport("ESTIMATE")
    r.add_all("selection", {"theta1": trace.theta_hat.theta1, "theta2": trace.theta_hat.theta2,
                            "h_tilde": trace.h_tilde, "h_hat": trace.h_hat, "fallback": trace.fallback_used,
                            "threshold_scale": scale, "unresolved_levels": len(trace.unresolved_levels)})
    r.add_all("estimate", {"value": value, "truth": truth, "error": value - truth})
    if signal is not None:
        oracle = OracleProcedure(kernel, signal, epsilon, selector_config.min_bandwidth)
        oracle_value, info = oracle.run(obs, x)
        r.add_all("oracle", {"h_star": info["h_star"], "h_used": info["h"], "floored": info["floored"],
                             "value": oracle_value, "error": oracle_value - truth,
                             "alignment": abs(trace.theta_hat.dot(signal.theta0))})
    r.save_csv(tracker.path(REPORT_NAME + ".csv"), empty=True, comments=comments)

    logger.info("Selected {}".format(trace))
    print(r)


if __name__ == "__main__":
    sys.exit(launch("estimate", run))
