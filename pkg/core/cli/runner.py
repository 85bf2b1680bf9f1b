"""
Execution of a resolved run: argument logging, error mapping, cleanup of partial outputs and the
final summary line.

Exit status: 0 when every requested check passed, 1 on a failed check or a PySILError, 2 on any
other exception.
"""

from collections import OrderedDict

from core.cli.config import parse_config
from core.utils.errors import PySILError
from core.utils.file_utils import OutputTracker
from core.utils.logutils import get_logger, format_arguments


# Logging
logger = get_logger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


class RunOutcome(object):
    """
    The named pass/fail checks of a run.
    """

    def __init__(self, command):
        self.command = command
        self.checks = OrderedDict()

    def check(self, name, passed):
        """
        Record a check.
        :param name: (string) the check name.
        :param passed: (bool) the outcome.
        :return: (bool) the outcome.
        """
        self.checks[name] = bool(passed)
        if not passed:
            logger.warning("Check failed: {}".format(name))
        return bool(passed)

    def n_passed(self):
        return sum(1 for passed in self.checks.values() if passed)

    def passed(self):
        return all(self.checks.values())

    def summary_line(self, status, files):
        """
        :return: (string) the machine-parsable last line of a run.
        """
        return "SUMMARY command={} status={} checks={}/{} files={}".format(
            self.command, "PASS" if status == EXIT_PASS else "FAIL", self.n_passed(), len(self.checks), files)


def execute(config, experiment):
    """
    Run an experiment on a resolved configuration.
    :param config: (RunConfig) the configuration.
    :param experiment: (callable) run(config, tracker, outcome) of the experiment module.
    :return: (int) the exit status.
    """
    tracker = OutputTracker(config["out_dir"])
    outcome = RunOutcome(config.command)
    logger.info("Executing: {}".format(config.command))
    logger.info("Arguments: {}".format(format_arguments(**config.values)))
    errored = True
    try:
        experiment(config, tracker, outcome)
        status = EXIT_PASS if outcome.passed() else EXIT_FAIL
        errored = False
        logger.info("Completed: {}".format(config.command))
    except PySILError as e:
        logger.error("{}: {}".format(type(e).__name__, e))
        status = EXIT_FAIL
    except Exception as e:
        logger.exception("Unexpected error: {}".format(e))
        status = EXIT_ERROR

    if errored:
        removed = tracker.remove_all()
        logger.info("Removed {} partial outputs".format(removed))
    print(outcome.summary_line(status, len(tracker.written())))
    return status


def launch(command, experiment, flags=None, filename=None):
    """
    Resolve the configuration of a command and execute it.
    :param command: (string) the subcommand.
    :param experiment: (callable) the experiment entry point.
    :param flags: (dict) the flag values.
    :param filename: (string) the configuration file, if any.
    :return: (int) the exit status.
    """
    try:
        config = parse_config(command, flags, filename)
    except PySILError as e:
        logger.error("{}: {}".format(type(e).__name__, e))
        print(RunOutcome(command).summary_line(EXIT_FAIL, 0))
        return EXIT_FAIL
    return execute(config, experiment)
