"""Physical constants, circuit parameters and circuit energy scales.

Everything in here works in SI base units (farad, henry, ampere, joule).
Conversion to fF / nH / GHz happens only at the CLI and report boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy import constants as _codata


class DomainError(ValueError):
    """Raised when an argument is outside the domain of a physical formula."""


@dataclass(frozen=True)
class PhysicalConstants:
    electron_charge: float
    reduced_planck: float
    planck: float
    flux_quantum: float
    light_speed: float


# CODATA (exact since the 2019 SI redefinition for e, h, c).
_h = _codata.h
_e = _codata.e

CONSTANTS = PhysicalConstants(
    electron_charge=_e,
    reduced_planck=_h / (2.0 * math.pi),
    planck=_h,
    flux_quantum=_h / (2.0 * _e),
    light_speed=_codata.c,
)

E = CONSTANTS.electron_charge
H = CONSTANTS.planck
HBAR = CONSTANTS.reduced_planck
PHI0 = CONSTANTS.flux_quantum
C_LIGHT = CONSTANTS.light_speed


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not value > 0.0 or not math.isfinite(value):
        raise DomainError(f"{name} must be strictly positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class CircuitParams:
    """Element values for one qubit and its readout resonator.

    At least one of ``shunt_inductance`` (meander / linear inductor) or
    ``critical_current`` (Josephson junction) must be given. If both are
    present the inductor takes precedence.
    """

    qubit_capacitance: float
    coupling_capacitance: float
    resonator_inductance: float
    resonator_capacitance: float
    shunt_inductance: Optional[float] = None
    critical_current: Optional[float] = None
    resonator_length: Optional[float] = None
    substrate_dielectric: Optional[float] = None

    def __post_init__(self):
        for name in (
            "qubit_capacitance",
            "coupling_capacitance",
            "resonator_inductance",
            "resonator_capacitance",
        ):
            _require_positive(name, getattr(self, name))
        for name in (
            "shunt_inductance",
            "critical_current",
            "resonator_length",
            "substrate_dielectric",
        ):
            value = getattr(self, name)
            if value is not None:
                _require_positive(name, value)
        if self.shunt_inductance is None and self.critical_current is None:
            raise DomainError("qubit requires L or I_c")

    def energy_scales(self) -> "EnergyScales":
        return EnergyScales.from_elements(
            self.qubit_capacitance,
            inductance=self.shunt_inductance,
            critical_current=self.critical_current,
        )


@dataclass(frozen=True)
class EnergyScales:
    """Charging energy and potential energy scale of a single-mode circuit.

    ``E_pot`` is the inductive energy E_l for a linear inductor and the
    Josephson energy E_j for a junction; ``kind`` records which.
    """

    E_c: float
    E_pot: float
    kind: str = "inductor"

    def __post_init__(self):
        if not self.E_c > 0.0:
            raise DomainError(f"E_c must be positive, got {self.E_c!r}")
        if self.E_pot < 0.0:
            raise DomainError(f"E_pot must be non-negative, got {self.E_pot!r}")
        if self.kind not in ("inductor", "junction"):
            raise DomainError(f"unknown kind {self.kind!r}")

    @property
    def ratio(self) -> float:
        return self.E_pot / self.E_c

    @classmethod
    def from_elements(cls, capacitance, inductance=None, critical_current=None):
        E_c = charging_energy(capacitance)
        if inductance is not None:
            return cls(E_c, inductive_energy(inductance), "inductor")
        if critical_current is not None:
            _, E_j = josephson_params(critical_current)
            return cls(E_c, E_j, "junction")
        raise DomainError("qubit requires L or I_c")

    @classmethod
    def from_ratio(cls, E_c: float, ratio: float, kind: str = "inductor"):
        return cls(E_c, ratio * E_c, kind)


def charging_energy(capacitance: float) -> float:
    """E_c = e^2 / 2C in joule."""
    C = _require_positive("capacitance", capacitance)
    return E**2 / (2.0 * C)


def inductive_energy(inductance: float) -> float:
    """E_l = hbar^2 / (4 e^2 L) in joule."""
    L = _require_positive("inductance", inductance)
    return HBAR**2 / (4.0 * E**2 * L)


def josephson_params(critical_current: float) -> tuple[float, float]:
    """Return the Josephson inductance L_0 = Phi_0/(2 pi I_c) and E_j = I_c^2 L_0."""
    I_c = _require_positive("critical current", critical_current)
    L_0 = PHI0 / (2.0 * math.pi * I_c)
    return L_0, I_c * PHI0 / (2.0 * math.pi)


def effective_offset(theta: float, capacitance: float, drive_voltage: float = 0.0) -> float:
    """Static charge offset n_g = theta - C V_d / (2e).

    The drive enters the charging term as sqrt(C / 8E_c) V_d, which is
    identically C / (2e).
    """
    C = _require_positive("capacitance", capacitance)
    return float(theta) - C * float(drive_voltage) / (2.0 * E)


def drive_charge(capacitance: float, drive_voltage: float) -> float:
    """Charge (in Cooper pairs) induced by a gate voltage, C V_d / (2e)."""
    return capacitance * drive_voltage / (2.0 * E)
