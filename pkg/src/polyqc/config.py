"""Run configuration: a small sectioned ``key = value`` format with unit suffixes.

Grammar::

    # comment (also after values)
    [kind name]
    key = value [unit]

``kind`` is one of qubit, resonator, tline, classical, sweep, settings
(``settings`` takes no name). Quantities carry a unit suffix which is
validated against the key's dimension, e.g. ``capacitance = 118.1 fF``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


_PREFIX = {"f": 1e-15, "p": 1e-12, "n": 1e-9, "u": 1e-6, "μ": 1e-6, "µ": 1e-6, "m": 1e-3, "k": 1e3, "M": 1e6, "G": 1e9, "": 1.0}

_BASE = {
    "capacitance": ("F", "fpnuμµm"),
    "inductance": ("H", "fpnuμµm"),
    "current": ("A", "fpnuμµm"),
    "length": ("m", "fpnuμµm"),
    "frequency": ("Hz", "kMG"),
    "voltage": ("V", "fpnuμµm"),
    "time": ("s", "fpnuμµm"),
}


def _unit_table():
    table = {}
    for dim, (base, prefixes) in _BASE.items():
        table[base] = (dim, 1.0)
        for p in prefixes:
            table[p + base] = (dim, _PREFIX[p])
    return table


UNITS = _unit_table()

_NUMBER = re.compile(r"^([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)$")

# key -> dimension ("" for plain numbers, "int", "str", "list")
_SCHEMA = {
    "qubit": {
        "capacitance": "capacitance",
        "inductance": "inductance",
        "critical_current": "current",
        "coupling_capacitance": "capacitance",
        "resonator": "str",
        "potential": "str",
        "fourier": "list",
        "k_max": "int",
        "theta": "",
        "drive_voltage": "voltage",
        "n_max": "int",
        "label": "str",
    },
    "resonator": {
        "inductance": "inductance",
        "capacitance": "capacitance",
        "length": "length",
        "substrate_permittivity": "",
        "eps_eff": "",
    },
    "tline": {"inductance": "inductance", "capacitance": "capacitance", "cells": "int"},
    "classical": {
        "model": "str",
        "capacitance": "capacitance",
        "inductance": "inductance",
        "critical_current": "current",
        "phi0": "",
        "n0": "",
        "periods": "",
        "steps_per_period": "int",
        "drive": "str",
        "drive_amplitude": "voltage",
        "drive_frequency": "frequency",
        "drive_phase": "",
    },
    "sweep": {"qubit": "str", "parameter": "str", "start": "any", "stop": "any", "num": "int"},
    "settings": {"n_max": "int", "converge": "frequency", "detuning_floor": "frequency", "k_max": "int"},
}

SWEEP_PARAMETERS = {
    "inductance": "inductance",
    "capacitance": "capacitance",
    "critical_current": "current",
    "theta": "",
}

_REQUIRED = {
    "qubit": ("capacitance",),
    "resonator": ("inductance", "capacitance"),
    "tline": ("inductance", "capacitance"),
    "classical": ("model", "capacitance"),
    "sweep": ("qubit", "parameter", "start", "stop", "num"),
    "settings": (),
}


@dataclass
class Section:
    kind: str
    name: str
    line: int
    values: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.values.get(key, default)

    def __getitem__(self, key):
        return self.values[key]

    def __contains__(self, key):
        return key in self.values


@dataclass
class RunConfig:
    qubits: dict = field(default_factory=dict)
    resonators: dict = field(default_factory=dict)
    tlines: dict = field(default_factory=dict)
    classical: dict = field(default_factory=dict)
    sweeps: dict = field(default_factory=dict)
    settings: Section = field(default_factory=lambda: Section("settings", "", 0))

    @property
    def n_max(self) -> int:
        return self.settings.get("n_max", 100)


def parse_quantity(text: str, dimension: str, line=None, column=None) -> float:
    """``'118.1 fF'`` -> 1.181e-13 for dimension ``capacitance``."""
    m = _NUMBER.match(text.strip())
    if not m:
        raise ConfigError(f"expected a number, got {text!r}", line, column)
    number, unit = float(m.group(1)), m.group(2)
    if dimension == "":
        if unit:
            raise ConfigError(f"dimensionless value takes no unit, got {unit!r}", line, column)
        return number
    if not unit:
        raise ConfigError(f"missing unit for {dimension} value {text!r}", line, column)
    if unit not in UNITS:
        raise ConfigError(f"unknown unit {unit!r}", line, column)
    dim, scale = UNITS[unit]
    if dim != dimension:
        raise ConfigError(f"unit {unit!r} measures {dim}, expected {dimension}", line, column)
    return number * scale


def _convert(key, raw, dimension, line, column):
    if dimension == "str":
        return raw
    if dimension == "int":
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {raw!r}", line, column) from None
    if dimension == "list":
        try:
            return tuple(float(x) for x in raw.split(","))
        except ValueError:
            raise ConfigError(f"{key} must be a comma-separated list of numbers", line, column) from None
    if dimension == "any":
        return raw  # resolved once the sweep parameter is known
    return parse_quantity(raw, dimension, line, column)


def parse_config(text: str) -> RunConfig:
    sections: list[Section] = []
    current: Optional[Section] = None
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ConfigError("unterminated section header", lineno, indent + 1)
            parts = stripped[1:-1].split()
            if not parts or parts[0] not in _SCHEMA:
                kind = parts[0] if parts else ""
                raise ConfigError(f"unknown section kind {kind!r}", lineno, indent + 2)
            kind = parts[0]
            if kind == "settings":
                if len(parts) != 1:
                    raise ConfigError("[settings] takes no name", lineno, indent + 1)
                name = ""
            elif len(parts) != 2:
                raise ConfigError(f"expected [{kind} <name>]", lineno, indent + 1)
            else:
                name = parts[1]
            current = Section(kind, name, lineno)
            sections.append(current)
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", lineno, indent + 1)
        if current is None:
            raise ConfigError("key outside of any section", lineno, indent + 1)
        key_part, value_part = line.split("=", 1)
        key = key_part.strip()
        value = value_part.strip()
        value_col = len(key_part) + 2 + (len(value_part) - len(value_part.lstrip()))
        schema = _SCHEMA[current.kind]
        if key not in schema:
            raise ConfigError(f"unknown key {key!r} in [{current.kind}]", lineno, indent + 1)
        if key in current.values:
            raise ConfigError(f"duplicate key {key!r}", lineno, indent + 1)
        if not value:
            raise ConfigError(f"empty value for {key!r}", lineno, value_col)
        current.values[key] = _convert(key, value, schema[key], lineno, value_col)
        current.lines[key] = (lineno, value_col)

    cfg = RunConfig()
    buckets = {
        "qubit": cfg.qubits,
        "resonator": cfg.resonators,
        "tline": cfg.tlines,
        "classical": cfg.classical,
        "sweep": cfg.sweeps,
    }
    seen_settings = False
    for sec in sections:
        for key in _REQUIRED[sec.kind]:
            if key not in sec:
                raise ConfigError(f"[{sec.kind} {sec.name}] is missing {key!r}", sec.line, 1)
        if sec.kind == "settings":
            if seen_settings:
                raise ConfigError("duplicate [settings] section", sec.line, 1)
            cfg.settings, seen_settings = sec, True
            continue
        bucket = buckets[sec.kind]
        if sec.name in bucket:
            raise ConfigError(f"duplicate section [{sec.kind} {sec.name}]", sec.line, 1)
        bucket[sec.name] = sec
    _validate(cfg)
    return cfg


def _fail(sec: Section, key: Optional[str], message: str):
    line, col = sec.lines.get(key, (sec.line, 1)) if key else (sec.line, 1)
    raise ConfigError(message, line, col)


def _validate(cfg: RunConfig):
    for sec in cfg.qubits.values():
        if "inductance" not in sec and "critical_current" not in sec:
            _fail(sec, None, f"qubit {sec.name!r}: qubit requires L or I_c")
        potential = sec.get("potential", "cosine")
        if potential not in ("cosine", "arcsin_sin_squared", "fourier"):
            _fail(sec, "potential", f"unknown or non-periodic potential {potential!r}")
        if potential == "fourier" and "fourier" not in sec:
            _fail(sec, "potential", "fourier potential needs a 'fourier = a0, a1, ...' line")
        if "resonator" in sec:
            if sec["resonator"] not in cfg.resonators:
                _fail(sec, "resonator", f"unknown resonator {sec['resonator']!r}")
            if "coupling_capacitance" not in sec:
                _fail(sec, "resonator", "a coupled resonator needs coupling_capacitance")
    for sec in cfg.classical.values():
        model = sec["model"]
        if model not in ("lc", "junction"):
            _fail(sec, "model", f"classical model must be 'lc' or 'junction', got {model!r}")
        need = "inductance" if model == "lc" else "critical_current"
        if need not in sec:
            _fail(sec, None, f"classical {model} run needs {need}")
        drive = sec.get("drive", "zero")
        if drive not in ("zero", "constant", "sinusoid"):
            _fail(sec, "drive", f"unknown drive {drive!r}")
    for sec in cfg.sweeps.values():
        if sec["qubit"] not in cfg.qubits:
            _fail(sec, "qubit", f"unknown qubit {sec['qubit']!r}")
        param = sec["parameter"]
        if param not in SWEEP_PARAMETERS:
            _fail(sec, "parameter", f"cannot sweep {param!r}; choose from {sorted(SWEEP_PARAMETERS)}")
        for key in ("start", "stop"):
            line, col = sec.lines[key]
            sec.values[key] = parse_quantity(sec.values[key], SWEEP_PARAMETERS[param], line, col)
        if sec["num"] < 1:
            _fail(sec, "num", "sweep needs num >= 1")
    for sec in cfg.tlines.values():
        if sec.get("cells", 1000) < 2:
            _fail(sec, "cells", "a line needs at least 2 cells")


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
