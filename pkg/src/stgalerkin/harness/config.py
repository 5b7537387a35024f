"""INI-style study configuration files.

Grammar (every key optional, unknown sections or keys are rejected)::

    [method]
    scheme = HeatJamet        ; or a kebab alias such as heat-jamet
    q = 1
    p = 2
    nu = 1.0
    c = 1.0
    delta = 0.0
    c_cfl = 0.01              ; omit for the built-in default
    cfl_override = false

    [space]
    a = 0.0
    b = 1.0
    elements = 16

    [time]
    T = 1.0
    slabs = 8

    [study]
    solution = heat_sine
    refine = tau              ; tau | h | none
    levels = 4
    norms = LinfL2, LinfL2@dt ; @dt: time derivative of u, @v: velocity field
    tau_h_ratio = 10          ; optional, ties h to tau during tau refinement
    preflight = true

    [output]
    out = report.json
    format = json             ; json | csv
"""
from __future__ import annotations

import configparser

from ..errors import ConfigInvalid
from ..methods import SCHEMES

SCHEME_ALIASES = {
    "heat-jamet": "HeatJamet",
    "heat-aziz-monk": "HeatAzizMonk",
    "wave-vanilla": "WaveVanilla",
    "wave-french-peterson": "WaveFrenchPeterson",
    "wave-johnson": "WaveJohnson",
    "wave-walkington": "WaveWalkington",
}

# (section, key) -> (StudyConfig field, converter)
_KEYS = {
    ("method", "scheme"): ("scheme", str),
    ("method", "q"): ("q", int),
    ("method", "p"): ("p", int),
    ("method", "nu"): ("nu", float),
    ("method", "c"): ("c", float),
    ("method", "delta"): ("delta", float),
    ("method", "c_cfl"): ("c_cfl", float),
    ("method", "cfl_override"): ("cfl_override", "bool"),
    ("space", "a"): ("a", float),
    ("space", "b"): ("b", float),
    ("space", "elements"): ("M", int),
    ("time", "t"): ("T", float),
    ("time", "slabs"): ("N", int),
    ("study", "solution"): ("solution", str),
    ("study", "refine"): ("refine", str),
    ("study", "levels"): ("levels", int),
    ("study", "norms"): ("norms", "list"),
    ("study", "tau_h_ratio"): ("tau_h_ratio", float),
    ("study", "preflight"): ("preflight", "bool"),
    ("output", "out"): ("out", str),
    ("output", "format"): ("format", str),
}


def canonical_scheme(name: str) -> str:
    if name in SCHEMES:
        return name
    key = name.strip().lower().replace("_", "-")
    if key in SCHEME_ALIASES:
        return SCHEME_ALIASES[key]
    raise ConfigInvalid(f"unknown method {name!r}; use one of {list(SCHEME_ALIASES)}")


def parse_norms(text: str) -> tuple:
    return tuple(s.strip() for s in text.split(",") if s.strip())


def read_config(path) -> dict:
    """Parse a config file into a dict of StudyConfig field values."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc
    out = {}
    for section in parser.sections():
        for key, raw in parser.items(section):
            if (section, key) not in _KEYS:
                raise ConfigInvalid(f"unknown config entry [{section}] {key}")
            name, conv = _KEYS[(section, key)]
            try:
                if conv == "bool":
                    value = parser.getboolean(section, key)
                elif conv == "list":
                    value = parse_norms(raw)
                else:
                    value = conv(raw)
            except ValueError as exc:
                raise ConfigInvalid(f"bad value for [{section}] {key}: {raw!r}") from exc
            out[name] = value
    if "scheme" in out:
        out["scheme"] = canonical_scheme(out["scheme"])
    return out
