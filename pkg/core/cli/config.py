"""
Run configuration of the command-line surface.

Values are resolved as built-in defaults < configuration file < flags. A file is either YAML
(.yaml/.yml, nested sections are flattened) or line-based "key = value" text, where every
value is read by the YAML scalar parser.
"""

import copy
import numpy
import scipy
import yaml

from core.field.noise_field import GridSpec, EPSILON_MAX, DEFAULT_N_PER_AXIS
from core.kernels.kernel import ProductKernel, kernel_from_preset
from core.risk.harness import RiskConfig, DEFAULT_REPLICATES
from core.selection.selector import SelectorConfig, check_epsilon_guard, MIN_DIRECTIONS, DEFAULT_N_DIRECTIONS
from core.signals.presets import PRESETS, parse_preset, signal_from_preset
from core.utils.errors import ConfigError, GuardError, PySILError
from core.utils.logutils import get_logger


# Logging
logger = get_logger(__name__)

VERSION = "1.0.0"

COMMANDS = ("simulate", "estimate", "oracle", "risk-sweep", "rate-fit", "lb-check", "calibrate", "selftest")

COMMENT = "#"


_default_configuration = {
    "signal": "cusp:beta=0.5,L=1",  # the signal preset
    "kernel": "parabolic",  # the kernel preset
    "epsilon": 2.0 ** -6,  # the noise level of single-level commands
    "epsilons": [2.0 ** -k for k in range(4, 10)],  # the noise levels of sweeps
    "r": 2.0,  # the risk order
    "beta": None,  # overrides the smoothness of the preset
    "L": None,  # overrides the constant of the preset
    "p": None,  # overrides the integrability index of the preset
    "M": None,  # the bound on the link entering the noise guard
    "theta_deg": None,  # overrides the index angle of the preset (degrees)
    "x": [0.0, 0.0],  # the estimation point
    "n_grid": DEFAULT_N_PER_AXIS,  # grid cells per axis
    "n_directions": DEFAULT_N_DIRECTIONS,  # the direction grid of the selector
    "replicates": DEFAULT_REPLICATES,  # Monte Carlo replicates
    "calibration_replicates": None,  # calibration replicates; the run replicates if None
    "seed": 7,  # the master seed
    "threshold_scale": None,  # the selector scale; calibrated if None
    "jobs": 1,  # workers over replicates
    "out_dir": "out",  # the output directory
    "heavy": False,  # run at acceptance scale
    "dump_field": False,  # dump the simulated observation
    "global_risk": False,  # sweep the global instead of the pointwise risk
    "n_points": 8,  # the point grid per axis of global risks
    "b": 0.5,  # the log-cardinality exponent of the lower-bound family
    "d": 2,  # the dimension of the lower-bound family
    "c": 1.0,  # the constant of the lower-bound condition
    "rho": 1.0 / 3.0,  # the norm constant of the lower-bound condition
    "input": None,  # the sweep CSV read by rate-fit
}

_types = {
    "signal": str, "kernel": str, "epsilon": float, "epsilons": "floats", "r": float, "beta": float, "L": float,
    "p": float, "M": float, "theta_deg": float, "x": "floats", "n_grid": int, "n_directions": int, "replicates": int,
    "calibration_replicates": int, "seed": int, "threshold_scale": float, "jobs": int, "out_dir": str, "heavy": bool,
    "dump_field": bool, "global_risk": bool, "n_points": int, "b": float, "d": int, "c": float, "rho": float,
    "input": str,
}


def get_default_configuration():
    """
    Get a copy of default configuration.
    :return: (dict) a copy of default configuration.
    """
    return copy.deepcopy(_default_configuration)


def _flatten(section, into):
    for key, value in section.items():
        if isinstance(value, dict):
            _flatten(value, into)
        else:
            into[str(key)] = value
    return into


def _canonical(key):
    return str(key).strip().replace("-", "_")


def load_configuration(filename):
    """
    Load the configuration from a file.
    :param filename: (string) the file name.
    :return: (dict) the raw (not normalized) values.
    :raise: ConfigError: malformed line or file.
    """
    logger.debug("Loading configuration from {}".format(filename))
    with open(filename, "r") as config_file:
        if filename.endswith((".yaml", ".yml")):
            try:
                content = yaml.load(config_file, Loader=yaml.FullLoader) or {}
            except yaml.YAMLError as e:
                raise ConfigError("Malformed YAML configuration {}: {}".format(filename, e))
            if not isinstance(content, dict):
                raise ConfigError("Configuration {} is not a mapping".format(filename))
            return {_canonical(k): v for k, v in _flatten(content, {}).items()}

        config = {}
        for number, line in enumerate(config_file, 1):
            line = line.split(COMMENT, 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise ConfigError("Malformed line {} of {}: '{}'".format(number, filename, line))
            try:
                config[_canonical(key)] = yaml.safe_load(value.strip())
            except yaml.YAMLError:
                raise ConfigError("Malformed value on line {} of {}: '{}'".format(number, filename, value.strip()))
        return config


def _coerce(key, value):
    kind = _types[key]
    if value is None:
        return None
    try:
        if kind == "floats":
            if isinstance(value, str):
                value = yaml.safe_load(value if value.strip().startswith("[") else "[{}]".format(value))
            if not isinstance(value, (list, tuple)):
                value = [value]
            return [float(v) for v in value]
        if kind is bool:
            if isinstance(value, str):
                value = yaml.safe_load(value)
            if not isinstance(value, bool):
                raise ValueError(value)
            return value
        if kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        return kind(value)
    except (TypeError, ValueError, yaml.YAMLError):
        raise ConfigError("Malformed value '{}' for '{}'".format(value, key))


def _check_epsilon(epsilon, key):
    if not 0.0 < epsilon <= EPSILON_MAX:
        raise GuardError("0 < epsilon <= exp(-1)", "{} out of range: {}".format(key, epsilon))


def normalize(config):
    """
    Normalize the format of the configuration and check it against the module guards.
    :param config: (dict) the configuration, modified in place.
    :return: None
    :raise: ConfigError: unknown key, malformed value or unknown preset.
    :raise: GuardError: a value violates a standing condition.
    """
    unknown = sorted(set(config) - set(_types))
    if unknown:
        raise ConfigError("Unknown configuration keys: {}".format(", ".join(unknown)))
    for key in list(config):
        config[key] = _coerce(key, config[key])

    _check_epsilon(config["epsilon"], "epsilon")
    if not config["epsilons"]:
        raise ConfigError("No noise levels in 'epsilons'")
    for eps in config["epsilons"]:
        _check_epsilon(eps, "epsilons")
    if config["r"] < 1.0:
        raise GuardError("r >= 1", "invalid risk order: {}".format(config["r"]))
    if config["replicates"] < 1:
        raise GuardError("replicates >= 1", "invalid replicate count: {}".format(config["replicates"]))
    if config["n_directions"] < MIN_DIRECTIONS:
        raise GuardError("n_directions >= {}".format(MIN_DIRECTIONS),
                         "direction grid too coarse: {}".format(config["n_directions"]))
    if config["n_grid"] < 8 or config["n_points"] < 1:
        raise GuardError("n_grid >= 8 and n_points >= 1",
                         "invalid grids: n_grid={} n_points={}".format(config["n_grid"], config["n_points"]))
    if config["threshold_scale"] is not None and config["threshold_scale"] <= 0.0:
        raise GuardError("threshold_scale > 0", "invalid threshold scale: {}".format(config["threshold_scale"]))
    if config["jobs"] < 1:
        raise GuardError("jobs >= 1", "invalid worker count: {}".format(config["jobs"]))
    if len(config["x"]) != 2:
        raise ConfigError("The point x needs two coordinates: {}".format(config["x"]))

    name, _ = parse_preset(config["signal"])
    if name not in PRESETS:
        raise ConfigError("Unknown signal preset '{}'. Known: {}".format(name, ", ".join(sorted(PRESETS))))
    try:
        kernel_from_preset(config["kernel"])
    except PySILError:
        raise
    except ValueError as e:
        raise ConfigError(str(e))


def parse_config(command, flags=None, filename=None):
    """
    Resolve a run configuration.
    :param command: (string) the subcommand.
    :param flags: (dict) flag values; None values do not override.
    :param filename: (string) the configuration file, if any.
    :return: (RunConfig) the resolved configuration.
    """
    if command not in COMMANDS:
        raise ConfigError("Unknown command '{}'. Known: {}".format(command, ", ".join(COMMANDS)))
    config = get_default_configuration()
    if filename is not None:
        config.update(load_configuration(filename))
    for key, value in (flags or {}).items():
        if value is not None:
            config[_canonical(key)] = value
    normalize(config)
    return RunConfig(command, config)


class RunConfig(object):
    """
    A resolved run: the command and every configuration value.
    """

    def __init__(self, command, values):
        self.command = command
        self.values = values

    def __getitem__(self, key):
        return self.values[key]

    def kernel(self):
        """
        :return: (ProductKernel) the kernel of the preset.
        """
        return ProductKernel(kernel_from_preset(self.values["kernel"]))

    def signal_preset(self):
        """
        The signal preset with the beta, L and p overrides applied where the preset takes them.
        :return: (string) the preset.
        """
        name, raw = parse_preset(self.values["signal"])
        for key in ("beta", "L", "p"):
            if self.values[key] is not None and key in PRESETS[name]:
                raw[key] = repr(self.values[key])
        if not raw:
            return name
        return "{}:{}".format(name, ",".join("{}={}".format(k, v) for k, v in raw.items()))

    def signal(self):
        """
        :return: (SingleIndexSignal) the signal; None for the zero preset.
        """
        theta = self.values["theta_deg"]
        return signal_from_preset(self.signal_preset(), theta)

    def beta(self):
        """
        :return: (float) the smoothness of the run: the flag, else the preset's, else None.
        """
        if self.values["beta"] is not None:
            return self.values["beta"]
        name, raw = parse_preset(self.values["signal"])
        if "beta" in raw:
            return float(raw["beta"])
        return PRESETS[name].get("beta")

    def check_guard(self, epsilon, signal, kernel):
        """
        Check epsilon against the noise guard. A configured M enforces it; the bound computed
        from the signal only produces a warning.
        :return: (float|None) the guard value.
        """
        if self.values["M"] is not None:
            return check_epsilon_guard(epsilon, self.values["M"], kernel)
        return check_epsilon_guard(epsilon, signal.bound_M if signal is not None else None, kernel, enforce=False)

    def grid(self):
        return GridSpec(n_per_axis=self.values["n_grid"])

    def point(self):
        return tuple(self.values["x"])

    def selector_config(self, epsilon, threshold_scale):
        return SelectorConfig(self.kernel(), epsilon, r=self.values["r"], n_directions=self.values["n_directions"],
                              threshold_scale=threshold_scale, min_bandwidth=self.grid().min_bandwidth(),
                              jobs=self.values["jobs"])

    def risk_config(self):
        return RiskConfig(self.kernel(), r=self.values["r"], points=(self.point(),),
                          replicates=self.values["replicates"], epsilons=self.values["epsilons"],
                          master_seed=self.values["seed"], threshold_scale=self.values["threshold_scale"],
                          n_grid=self.values["n_grid"], n_directions=self.values["n_directions"],
                          calibration_replicates=self.values["calibration_replicates"], jobs=self.values["jobs"])

    def header_lines(self):
        """
        :return: (list(string)) the resolved configuration and the versions, as report comments.
        """
        lines = ["pysil {}".format(VERSION), "numpy {}".format(numpy.__version__),
                 "scipy {}".format(scipy.__version__), "command = {}".format(self.command)]
        lines += ["{} = {}".format(key, self.values[key]) for key in sorted(self.values)]
        return lines

    def __str__(self):
        return "RunConfig(command={}, {})".format(self.command, ", ".join(
            "{}={}".format(k, v) for k, v in sorted(self.values.items())))
