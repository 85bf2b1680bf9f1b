"""
Utilities for logging.
"""

import logging
import sys


FORMATTER = logging.Formatter("%(asctime)-15s [%(levelname)s] %(message)s")
LEVEL = logging.INFO


class ConsoleHandler(logging.StreamHandler):
    """
    A console handler splitting records by severity:
        * ERROR and above go to sys.stderr
        * everything else goes to sys.stdout
    The target stream is looked up at emit time, so redirected streams
    (e.g. the click test runner) are honoured.
    """

    def __init__(self, level=LEVEL, formatter=FORMATTER):
        logging.StreamHandler.__init__(self)
        self.setLevel(level)
        self.setFormatter(formatter)

    def emit(self, record):
        self.stream = sys.stderr if record.levelno >= logging.ERROR else sys.stdout
        logging.StreamHandler.emit(self, record)

    def flush(self):
        if self.stream and hasattr(self.stream, "flush") and not getattr(self.stream, "closed", False):
            logging.StreamHandler.flush(self)


def get_logger(name):
    """
    Return a logger, configuring the root logger on first use.
    :param name: (string) the logger name.
    :return: (logging.Logger) the logger.
    """
    root = logging.getLogger()
    if not any(isinstance(h, ConsoleHandler) for h in root.handlers):
        logging.basicConfig(level=LEVEL, handlers=[ConsoleHandler(LEVEL, FORMATTER)])
    return logging.getLogger(name)


def set_log_level(level):
    """
    Set the level of the root logger and of its console handlers.
    :param level: (string|int) the level, e.g. "DEBUG".
    :return: None
    """
    root = logging.getLogger()
    root.setLevel(level)
    for handler in root.handlers:
        handler.setLevel(level)


def format_arguments(**kwargs):
    """
    Render keyword arguments the way runners log them.
    :param kwargs: the arguments.
    :return: (string) e.g. "epsilon=0.05 | seed=7".
    """
    return " | ".join("{}={}".format(k, v) for k, v in kwargs.items())
