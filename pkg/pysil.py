#!/usr/bin/env python3

import sys
import click
from colored import fg, attr
from pyfiglet import Figlet
from core.cli import config as cli_config
from core.cli.runner import launch
from core.utils import logutils
from exp.field import simulate as simulate_exp
from exp.estimation import estimate as estimate_exp
from exp.oracle import oracle_table
from exp.risk import risk_sweep as risk_sweep_exp, rate_fit as rate_fit_exp, calibrate as calibrate_exp
from exp.lowerbound import lb_check
from exp.selftest import invariants

logger = logutils.get_logger(__name__)


def get_splash():
    """
    Returns the splash screen as ASCII art.
    :return: (string) the splash screen.
    """
    f = Figlet(font="slant")
    return "%s %s %s" % (fg("yellow"), f.renderText("PySIL"), attr(0))


SHARED_OPTIONS = [
    click.option("--config", "config_file", default=None, type=click.Path(exists=True), help="Configuration file (YAML or key = value)."),
    click.option("--signal", default=None, type=str, help="Signal preset, e.g. cusp:beta=0.5,L=1,theta=30deg."),
    click.option("--kernel", default=None, type=str, help="Kernel preset: parabolic or order<m>."),
    click.option("--epsilon", default=None, type=float, help="Noise level in (0, exp(-1)]."),
    click.option("--epsilons", default=None, type=str, help="Noise levels of a sweep, e.g. '[0.0625, 0.03125]'."),
    click.option("--r", "r", default=None, type=float, help="Risk order, >= 1."),
    click.option("--beta", default=None, type=float, help="Smoothness, overriding the preset."),
    click.option("--L", "L", default=None, type=float, help="Smoothness constant, overriding the preset."),
    click.option("--p", "p", default=None, type=float, help="Integrability index, overriding the preset."),
    click.option("--M", "M", default=None, type=float, help="Bound on the link entering the noise guard."),
    click.option("--theta-deg", default=None, type=float, help="Index angle in degrees, overriding the preset."),
    click.option("--x", "x", default=None, type=str, help="Estimation point, e.g. '[0.1, -0.2]'."),
    click.option("--n-grid", default=None, type=int, help="Grid cells per axis."),
    click.option("--n-directions", default=None, type=int, help="Direction grid of the selector, >= 16."),
    click.option("--replicates", default=None, type=int, help="Monte Carlo replicates."),
    click.option("--calibration-replicates", default=None, type=int, help="Replicates of the threshold calibration."),
    click.option("--seed", default=None, type=int, help="Master seed."),
    click.option("--threshold-scale", default=None, type=float, help="Selector threshold scale; calibrated if unset."),
    click.option("--jobs", default=None, type=int, help="Workers over replicates."),
    click.option("--out-dir", default=None, type=click.Path(exists=False), help="Output directory."),
    click.option("--heavy/--no-heavy", default=None, help="Run at acceptance scale."),
    click.option("--dump-field/--no-dump-field", default=None, help="Dump the simulated observation."),
]


def shared_options(func):
    for option in reversed(SHARED_OPTIONS):
        func = option(func)
    return func


def _run(command, experiment, config_file, flags):
    status = launch(command, experiment, flags, config_file)
    sys.exit(status)


@click.group(invoke_without_command=True, context_settings=dict(max_content_width=120))
@click.option("--debug/--no-debug", default=False, show_default=True, type=bool, help="Activate/Deactivate debug mode.")
@click.pass_context
@click.version_option(version=cli_config.VERSION)
def main(ctx, debug):
    print(get_splash())
    if ctx.invoked_subcommand is None:
        print(ctx.get_help())
    else:
        logutils.set_log_level("DEBUG" if debug else "INFO")
        logger.debug("Debug Mode: {}".format("on" if debug else "off"))


@main.command(help="Simulate one observation and dump it.")
@shared_options
def simulate(config_file, **flags):
    _run("simulate", simulate_exp.run, config_file, flags)


@main.command(help="Run the adaptive selection rule at one point.")
@shared_options
def estimate(config_file, **flags):
    _run("estimate", estimate_exp.run, config_file, flags)


@main.command(help="Tabulate the oracle bandwidth and risk bound along the index axis.")
@shared_options
def oracle(config_file, **flags):
    _run("oracle", oracle_table.run, config_file, flags)


@main.command(name="risk-sweep", help="Sweep Monte Carlo risks across noise levels.")
@shared_options
@click.option("--global/--pointwise", "global_risk", default=None, help="Sweep the global instead of the pointwise risk.")
@click.option("--n-points", default=None, type=int, help="Point grid per axis of global risks.")
def risk_sweep(config_file, **flags):
    _run("risk-sweep", risk_sweep_exp.run, config_file, flags)


@main.command(name="rate-fit", help="Refit the convergence rates of a stored sweep.")
@shared_options
@click.option("--input", "input", default=None, type=click.Path(exists=False), help="Sweep CSV to refit.")
def rate_fit(config_file, **flags):
    _run("rate-fit", rate_fit_exp.run, config_file, flags)


@main.command(name="lb-check", help="Check the hypothesis family of the lower bound.")
@shared_options
@click.option("--b", "b", default=None, type=float, help="Log-cardinality exponent, 0 <= b < 2/(2 beta + 1).")
@click.option("--d", "d", default=None, type=click.Choice(["2", "3"]), help="Dimension of the family.")
@click.option("--c", "c", default=None, type=float, help="Constant of the cross-product condition.")
@click.option("--rho", default=None, type=float, help="Constant of the norm condition.")
def lb_check_command(config_file, **flags):
    _run("lb-check", lb_check.run, config_file, flags)


@main.command(help="Calibrate the threshold scale on pure noise.")
@shared_options
def calibrate(config_file, **flags):
    _run("calibrate", calibrate_exp.run, config_file, flags)


@main.command(help="Run the invariant suites.")
@shared_options
def selftest(config_file, **flags):
    _run("selftest", invariants.run, config_file, flags)


if __name__ == "__main__":
    main(obj={})
