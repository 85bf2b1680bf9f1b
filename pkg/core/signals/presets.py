"""
Named signal presets, written as "name:key=value,key=value".

    cusp:beta=0.5,L=1,theta=30deg
    inhomogeneous:beta=0.5,L=1,w=0.25,u0=0.25,flat=0
    nikolskii:beta=0.75,L=1,p=2

Angles take a "deg" or "rad" suffix; bare numbers are degrees.
"""

import math

from core.estimation.transform import Direction
from core.signals.hoelder import HoelderSpec, NikolskiiSpec, SingleIndexSignal, make_hoelder, make_inhomogeneous, \
    make_nikolskii, constant_link, linear_link
from core.utils.errors import ConfigError


DEFAULT_THETA = "30deg"

PRESETS = {
    "zero": {},
    "constant": {"c": 1.0},
    "linear": {"a": 1.0, "b": 0.0},
    "cusp": {"beta": 0.5, "L": 1.0, "u0": 0.0, "w": 1.0},
    "bump": {"beta": 1.0, "L": 1.0, "u0": 0.0, "w": 0.5},
    "sine": {"beta": 1.0, "L": 1.0, "omega": 2.0 * math.pi},
    "inhomogeneous": {"beta": 0.5, "L": 1.0, "u0": 0.25, "w": 0.25, "flat": 0.0},
    "nikolskii": {"beta": 0.75, "L": 1.0, "p": 2.0, "u0": 0.0, "w": 1.0},
}


def parse_angle(text):
    """
    :param text: (string) e.g. "30deg", "0.5rad" or "30".
    :return: (float) the angle in radians.
    """
    text = str(text).strip()
    try:
        if text.endswith("deg"):
            return math.radians(float(text[:-3]))
        if text.endswith("rad"):
            return float(text[:-3])
        return math.radians(float(text))
    except ValueError:
        raise ConfigError("Malformed angle: {}".format(text))


def parse_preset(text):
    """
    Split a preset string into its name and its parameters.
    :param text: (string) "name" or "name:key=value,...".
    :return: (string, dict) the name and the raw (string) parameters.
    """
    name, _, rest = str(text).strip().partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError("Malformed preset parameter '{}' in '{}'".format(item, text))
        params[key.strip()] = value.strip()
    return name.strip(), params


def _resolve(name, raw):
    if name not in PRESETS:
        raise ConfigError("Unknown signal preset '{}'. Known: {}".format(name, ", ".join(sorted(PRESETS))))
    defaults = PRESETS[name]
    unknown = set(raw) - set(defaults) - {"theta"}
    if unknown:
        raise ConfigError("Unknown parameters {} for signal preset '{}'".format(sorted(unknown), name))
    params = dict(defaults)
    for key, value in raw.items():
        if key == "theta":
            continue
        try:
            params[key] = float(value)
        except ValueError:
            raise ConfigError("Malformed value '{}' for '{}' in signal preset '{}'".format(value, key, name))
    return params


def signal_from_preset(text, theta=None):
    """
    Build the single-index field of a preset.
    :param text: (string) the preset, see the module docstring.
    :param theta: (string|float|Direction) the index vector; overrides the preset's theta.
    :return: (SingleIndexSignal) the signal; None for the zero signal.
    :raise: ConfigError: unknown preset, parameter or malformed value.
    """
    name, raw = parse_preset(text)
    params = _resolve(name, raw)
    if isinstance(theta, Direction):
        theta0 = theta
    elif theta is not None:
        theta0 = Direction.from_angle(math.radians(theta) if isinstance(theta, (int, float)) else parse_angle(theta))
    else:
        theta0 = Direction.from_angle(parse_angle(raw.get("theta", DEFAULT_THETA)))

    if name == "zero":
        return None
    if name == "constant":
        link = constant_link(params["c"])
    elif name == "linear":
        link = linear_link(params["a"], params["b"])
    elif name in ("cusp", "bump", "sine"):
        link = make_hoelder(HoelderSpec(params["beta"], params["L"], shape=name, center=params.get("u0", 0.0),
                                        width=params.get("w", 1.0), omega=params.get("omega", 2.0 * math.pi)))
    elif name == "inhomogeneous":
        link = make_inhomogeneous(params["flat"], HoelderSpec(params["beta"], params["L"]), params["w"], params["u0"])
    else:
        link = make_nikolskii(NikolskiiSpec(params["beta"], params["L"], params["p"], params["u0"], params["w"]))
    return SingleIndexSignal(link, theta0)
