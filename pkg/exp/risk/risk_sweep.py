"""
RISK SWEEP: Monte Carlo risks of the adaptive rule and of the oracle across noise levels.

Pointwise mode stores 'sweep.csv' (one row per noise level and procedure), 'summary.csv' (the rate fits)
and 'oracle_ratio.csv' (adaptive risk over the oracle bound with the oracle inequality).
Global mode stores 'global_sweep.csv' and 'summary.csv'.
"""

import sys

from core.cli.runner import launch
from core.field.noise_field import DEFAULT_N_PER_AXIS
from core.risk.harness import risk_sweep, oracle_ratio_study, global_sweep, ACCEPTANCE_REPLICATES, DEFAULT_REPLICATES
from core.risk.rates import Regime
from core.selection.selector import DEFAULT_N_DIRECTIONS
from core.utils.csv_utils import save_csv
from core.utils.errors import ConfigError
from core.utils.logutils import get_logger


# Logging
logger = get_logger(__name__)

# Defaults
SWEEP_FILE = "sweep.csv"
SUMMARY_FILE = "summary.csv"
RATIO_FILE = "oracle_ratio.csv"
GLOBAL_FILE = "global_sweep.csv"
POINTWISE_SLOPE_TOL = 0.12
GLOBAL_SLOPE_TOL = 0.15
GLOBAL_FIT_COLUMNS = ["slope", "intercept", "residual", "theoretical_exponent", "slope_stderr", "n_points", "regime"]


def _risk_config(config):
    risk_config = config.risk_config()
    if config["heavy"]:
        # a quick profile from a configuration file is lifted back to full scale
        risk_config.replicates = max(risk_config.replicates, DEFAULT_REPLICATES)
        risk_config.n_grid = max(risk_config.n_grid, DEFAULT_N_PER_AXIS)
        risk_config.n_directions = max(risk_config.n_directions, DEFAULT_N_DIRECTIONS)
    elif risk_config.replicates < ACCEPTANCE_REPLICATES:
        logger.warning("Rate checks at {} replicates are indicative only".format(risk_config.replicates))
    return risk_config


def run_pointwise(config, signal, risk_config, tracker, outcome):
    sweep = risk_sweep(signal, risk_config, M=config["M"])
    study = oracle_ratio_study(signal, risk_config, M=config["M"], sweep=sweep)
    comments = config.header_lines()
    sweep.save_csv(tracker.path(SWEEP_FILE), comments=comments)
    sweep.save_summary_csv(tracker.path(SUMMARY_FILE), comments=comments)
    study.save_csv(tracker.path(RATIO_FILE), comments=comments)

    outcome.check("adaptive_bound", study.adaptive_bound_holds())
    outcome.check("oracle_ratio_bounded", study.bounded())
    fit = sweep.fit("adaptive")
    if fit is None:
        outcome.check("adaptive_rate", False)
    else:
        logger.info("Adaptive {}".format(fit))
        outcome.check("adaptive_rate", fit.deviation() <= POINTWISE_SLOPE_TOL)


def run_global(config, signal, risk_config, tracker, outcome):
    p = config["p"] if config["p"] is not None else signal.params.get("p")
    if p is None:
        raise ConfigError("A global sweep needs the integrability index p")
    result = global_sweep(signal, risk_config, p, config["n_points"], M=config["M"])
    comments = config.header_lines()
    result.save_csv(tracker.path(GLOBAL_FILE), comments=comments)

    outcome.check("norm_inequalities", result.norms_hold())
    outcome.check("global_oracle_bound", result.bound_holds())
    if result.fit is None:
        outcome.check("global_rate", False)
        return
    values = result.fit.as_dict()
    save_csv(tracker.path(SUMMARY_FILE), GLOBAL_FIT_COLUMNS, [[values[c] for c in GLOBAL_FIT_COLUMNS]], empty=True,
             comments=comments)
    if result.fit.regime is Regime.BOUNDARY:
        logger.info("Global {} in the boundary regime: not checked".format(result.fit))
    else:
        outcome.check("global_rate", result.fit.deviation() <= GLOBAL_SLOPE_TOL)


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
        raise ConfigError("A risk sweep needs a nonzero signal")
    risk_config = _risk_config(config)
    logger.info("Sweeping {} with {}".format(signal, risk_config))
    if config["global_risk"]:
        run_global(config, signal, risk_config, tracker, outcome)
    else:
        run_pointwise(config, signal, risk_config, tracker, outcome)


if __name__ == "__main__":
    sys.exit(launch("risk-sweep", run))
