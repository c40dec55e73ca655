"""Classical Hamiltonian dynamics of the driven junction qubit and LC circuit.

Both Hamiltonians split as ``H = T(n, t) + U(phi)`` with

    junction:  T = 4 E_c (n - n_d(t))^2,          U = -E_j cos(phi)
    LC:        T = 4 E_c n^2 - 2e V_d(t) n,       U = E_l phi^2 / 2

where ``n_d = C V_d / 2e``.  With the bracket {n, phi} = 1/hbar the
equations of motion are

    dn/dt   = +(1/hbar) dH/dphi
    dphi/dt = -(1/hbar) dH/dn

This sign pairing is the one for which Q = 2e n, P_Q = hbar phi / 2e obey
dQ/dt = dH/dP_Q, and it reproduces the LC frequency 1/(2 pi sqrt(LC)).
The drive coefficient is 2e in both models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import E, HBAR, DomainError, EnergyScales


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class PhaseState:
    n: float
    phi: float


@dataclass(frozen=True)
class DriveWaveform:
    """Gate voltage V_d(t): ``zero``, ``constant`` or ``sinusoid``."""

    kind: str = "zero"
    amplitude: float = 0.0
    frequency: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if self.kind not in ("zero", "constant", "sinusoid"):
            raise DomainError(f"unknown drive kind {self.kind!r}")

    def __call__(self, t):
        if self.kind == "zero":
            return 0.0 * t
        if self.kind == "constant":
            return self.amplitude + 0.0 * t
        return self.amplitude * np.sin(2.0 * np.pi * self.frequency * t + self.phase)


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    n: np.ndarray
    phi: np.ndarray
    energy: np.ndarray
    notes: tuple = ()

    def __post_init__(self):
        if not (len(self.times) == len(self.n) == len(self.phi) == len(self.energy)):
            raise ValueError("trajectory columns must have equal length")

    def __len__(self):
        return len(self.times)

    def energy_drift(self) -> float:
        """Max relative excursion of the energy from its initial value."""
        e0 = self.energy[0]
        return float(np.max(np.abs(self.energy - e0)) / abs(e0))

    def secular_drift(self, window: int) -> float:
        """Relative change of the energy averaged over the first and last ``window`` samples."""
        first = np.mean(self.energy[:window])
        last = np.mean(self.energy[-window:])
        return float(abs(last - first) / abs(first))


@dataclass(frozen=True)
class CircuitModel:
    """A split Hamiltonian: kinetic part in n, potential part in phi.

    ``dT_dn(n, t)`` and ``dU_dphi(phi)`` are derivatives in joule; the
    integrator only needs these plus ``energy`` for bookkeeping.
    """

    name: str
    scales: EnergyScales
    capacitance: float
    drive: DriveWaveform = field(default_factory=DriveWaveform)

    def offset(self, t: float) -> float:
        return self.capacitance * self.drive(t) / (2.0 * E)

    def dT_dn(self, n, t):
        if self.name == "junction":
            return 8.0 * self.scales.E_c * (n - self.offset(t))
        return 8.0 * self.scales.E_c * n - 2.0 * E * self.drive(t)

    def dU_dphi(self, phi):
        if self.name == "junction":
            return self.scales.E_pot * np.sin(phi)
        return self.scales.E_pot * phi

    def energy(self, n, phi, t):
        if self.name == "junction":
            return -self.scales.E_pot * np.cos(phi) + 4.0 * self.scales.E_c * (n - self.offset(t)) ** 2
        return 0.5 * self.scales.E_pot * phi**2 + 4.0 * self.scales.E_c * n**2 - 2.0 * E * self.drive(t) * n

    def small_oscillation_frequency(self) -> float:
        """sqrt(8 E_pot E_c) / (2 pi hbar) in hertz."""
        return math.sqrt(8.0 * self.scales.E_pot * self.scales.E_c) / (2.0 * math.pi * HBAR)


def junction_model(scales: EnergyScales, capacitance: float, drive: Optional[DriveWaveform] = None) -> CircuitModel:
    if scales.kind != "junction":
        raise DomainError("junction dynamics need junction energy scales")
    return CircuitModel("junction", scales, capacitance, drive or DriveWaveform())


def lc_model(scales: EnergyScales, capacitance: float, drive: Optional[DriveWaveform] = None) -> CircuitModel:
    if scales.kind != "inductor":
        raise DomainError("LC dynamics need inductor energy scales")
    return CircuitModel("lc", scales, capacitance, drive or DriveWaveform())


def junction_equations(state: PhaseState, scales: EnergyScales, drive: DriveWaveform, t: float, capacitance: float):
    """Time derivative (dn/dt, dphi/dt) for the driven junction qubit."""
    model = junction_model(scales, capacitance, drive)
    return _derivative(model, state, t)


def lc_equations(state: PhaseState, scales: EnergyScales, drive: DriveWaveform, t: float, capacitance: float):
    """Time derivative (dn/dt, dphi/dt) for the driven LC circuit."""
    model = lc_model(scales, capacitance, drive)
    return _derivative(model, state, t)


def _derivative(model: CircuitModel, state: PhaseState, t: float) -> PhaseState:
    return PhaseState(
        n=float(model.dU_dphi(state.phi) / HBAR),
        phi=float(-model.dT_dn(state.n, t) / HBAR),
    )


def leapfrog_step(model: CircuitModel, n, phi, t: float, dt: float):
    """One kick-drift-kick step. Works on complex input (used for complex-step Jacobians)."""
    n = n + 0.5 * dt * model.dU_dphi(phi) / HBAR
    phi = phi - dt * model.dT_dn(n, t + 0.5 * dt) / HBAR
    n = n + 0.5 * dt * model.dU_dphi(phi) / HBAR
    return n, phi


def integrate(model: CircuitModel, initial: PhaseState, dt: float, steps: int, t0: float = 0.0) -> Trajectory:
    """Fixed-step symplectic integration, sampling every step."""
    if not dt > 0.0:
        raise DomainError("dt must be positive")
    if steps < 1:
        raise DomainError("steps must be >= 1")
    times = t0 + dt * np.arange(steps + 1)
    n_out = np.empty(steps + 1)
    phi_out = np.empty(steps + 1)
    n, phi = float(initial.n), float(initial.phi)
    n_out[0], phi_out[0] = n, phi
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(steps):
            n, phi = leapfrog_step(model, n, phi, times[i], dt)
            if not (math.isfinite(n) and math.isfinite(phi)):
                raise IntegrationError(f"non-finite state at step {i + 1}")
            n_out[i + 1], phi_out[i + 1] = n, phi
    energy = model.energy(n_out, phi_out, times)
    notes = ()
    if model.name == "junction" and np.max(np.abs(np.sin(phi_out))) > 0.99:
        notes = ("current |I| = I_c |sin(phi)| exceeded 0.99 I_c",)
    return Trajectory(times, n_out, phi_out, energy, notes)


def oscillation_frequency(traj: Trajectory) -> float:
    """Frequency of phi from the mean spacing of interpolated zero crossings of phi - mean(phi)."""
    x = traj.phi - np.mean(traj.phi)
    t = traj.times
    idx = np.flatnonzero(np.signbit(x[:-1]) != np.signbit(x[1:]))
    if idx.size < 5:
        raise DomainError(f"need at least 5 zero crossings, found {idx.size}")
    crossings = t[idx] - x[idx] * (t[idx + 1] - t[idx]) / (x[idx + 1] - x[idx])
    half_period = (crossings[-1] - crossings[0]) / (crossings.size - 1)
    return 1.0 / (2.0 * half_period)


def step_jacobian(model: CircuitModel, state: PhaseState, dt: float, t: float = 0.0, h: float = 1e-30) -> np.ndarray:
    """Jacobian of one leapfrog step by complex-step differentiation."""
    jac = np.empty((2, 2))
    for col, (dn, dphi) in enumerate(((1j * h, 0.0), (0.0, 1j * h))):
        n, phi = leapfrog_step(model, state.n + dn, state.phi + dphi, t, dt)
        jac[:, col] = np.imag([n, phi]) / h
    return jac


def run_periods(model: CircuitModel, initial: PhaseState, periods: float = 100, steps_per_period: int = 1000) -> Trajectory:
    """Integrate for a number of small-oscillation periods."""
    period = 1.0 / model.small_oscillation_frequency()
    dt = period / steps_per_period
    return integrate(model, initial, dt, int(round(periods * steps_per_period)))


def pendulum_period(model: CircuitModel, amplitude: float) -> float:
    """Exact junction oscillation period at phase amplitude ``amplitude`` (complete elliptic integral)."""
    from scipy.special import ellipk

    return 2.0 * ellipk(math.sin(0.5 * amplitude) ** 2) / (math.pi * model.small_oscillation_frequency())
