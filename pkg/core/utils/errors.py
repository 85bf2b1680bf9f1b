"""
Exceptions raised by PySIL.
"""


class PySILError(Exception):
    """
    Base class of all the errors raised by the lab.
    """
    pass


class GuardError(PySILError, ValueError):
    """
    A standing condition on the inputs is violated.
    The message always quotes the violated condition.
    """

    def __init__(self, condition, detail):
        """
        Create a new guard error.
        :param condition: (string) the violated condition, e.g. "epsilon <= exp(-1)".
        :param detail: (string) what was found.
        """
        PySILError.__init__(self, "{} (violated condition: {})".format(detail, condition))
        self.condition = condition
        self.detail = detail


class CertificationError(PySILError, RuntimeError):
    """
    A kernel or a link function failed its numerical certification.
    """

    def __init__(self, message, report=None):
        PySILError.__init__(self, message)
        self.report = report


class OracleSetEmptyError(PySILError, RuntimeError):
    """
    No bandwidth satisfies the oracle constraint.
    """
    pass


class ConfigError(PySILError, ValueError):
    """
    Unknown key, malformed value or unknown preset in a run configuration.
    """
    pass


class RateFitError(PySILError, ValueError):
    """
    The sweep cannot support a rate fit.
    """
    pass
