"""First-order continuum perturbation theory for the arcsin(sin phi)^2 potential.

In the continuum approximation the Hamiltonian splits into a harmonic part
``E_l phi^2 / 2 + 4 E_c n^2`` and a perturbation
``E_l (T(phi)^2 - phi^2) / 2`` with ``T = arcsin(sin(.))`` the triangle wave.
The perturbation vanishes on |phi| <= pi/2, so all level shifts are
negative and die off as the oscillator ground state localizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
from scipy import integrate

from .core import DomainError
from .spectrum import ConvergenceError, triangle_wave

MAX_LEVEL = 10
TAIL_WIDTHS = 12.0


def oscillator_width(ratio: float) -> float:
    """s = (E_l / 8 E_c)^(1/4), the inverse phase width of the harmonic ground state."""
    if not ratio > 0.0:
        raise DomainError(f"E_l/E_c must be positive, got {ratio!r}")
    return (ratio / 8.0) ** 0.25


def hermite_mode_value(n: int, s: float, phi):
    """Normalized oscillator eigenfunction N H_n(s phi) exp(-s^2 phi^2 / 2).

    Evaluated with the three-term recurrence for normalized functions, so
    nothing overflows; points with |s phi| > 30 are returned as 0.
    """
    if not 0 <= n <= MAX_LEVEL:
        raise DomainError(f"level must be in 0..{MAX_LEVEL}, got {n}")
    if not s > 0.0:
        raise DomainError("width parameter s must be positive")
    x = s * np.asarray(phi, dtype=float)
    inside = np.abs(x) <= 30.0
    xs = np.where(inside, x, 0.0)
    prev = np.zeros_like(xs)
    cur = math.sqrt(s) * math.pi**-0.25 * np.exp(-0.5 * xs**2)
    for k in range(n):
        prev, cur = cur, math.sqrt(2.0 / (k + 1)) * xs * cur - math.sqrt(k / (k + 1)) * prev
    out = np.where(inside, cur, 0.0)
    return out if out.ndim else float(out)


def perturbation_integrand(n: int, s: float, phi):
    psi = hermite_mode_value(n, s, phi)
    return psi**2 * (triangle_wave(phi) ** 2 - np.asarray(phi) ** 2)


def _shift_integral(n: int, s: float, rtol: float = 1e-10) -> float:
    # Even integrand, zero on [0, pi/2]; kinks of T at pi/2 + k pi.
    upper = 0.5 * math.pi + TAIL_WIDTHS / s
    edges = list(np.arange(0.5 * math.pi, upper, math.pi)) + [upper]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        value, err = integrate.quad(
            lambda p: perturbation_integrand(n, s, p), a, b, epsabs=0.0, epsrel=rtol, limit=200
        )
        if not err <= max(1e-8 * abs(value), 1e-300):
            raise ConvergenceError(f"level-shift quadrature for n={n} did not converge ({err:.2e})")
        total += value
    return 2.0 * total


def perturbation_shift(n: int, E_l: float, E_c: float) -> float:
    """First-order shift Delta_n in the same energy units as E_l and E_c."""
    if n not in (0, 1, 2):
        raise DomainError("shifts are defined for levels 0, 1, 2")
    if not (E_l > 0.0 and E_c > 0.0):
        raise DomainError("E_l and E_c must be positive")
    s = oscillator_width(E_l / E_c)
    return 0.5 * E_l * _shift_integral(n, s)


@dataclass(frozen=True)
class PerturbationResult:
    ratio: float
    delta0: float
    delta1: float
    delta2: float
    error: Optional[str] = None

    @property
    def alpha_over_Ec(self) -> float:
        return (self.delta2 - self.delta1) - (self.delta1 - self.delta0)


def perturbative_alpha(ratio: float) -> PerturbationResult:
    """Level shifts and anharmonicity, all in units of E_c, at one E_l/E_c."""
    if not 0.0 < ratio <= 1e4:
        raise DomainError(f"ratio must be in (0, 1e4], got {ratio!r}")
    d0, d1, d2 = (perturbation_shift(n, ratio, 1.0) for n in range(3))
    return PerturbationResult(float(ratio), d0, d1, d2)


def perturbative_alpha_curve(ratios: Iterable[float] = range(1, 101)) -> list[PerturbationResult]:
    """One result per ratio; a failing point is kept with NaN shifts and an error note."""
    results = []
    for r in ratios:
        try:
            results.append(perturbative_alpha(r))
        except (ConvergenceError, DomainError) as exc:
            nan = float("nan")
            results.append(PerturbationResult(float(r), nan, nan, nan, error=str(exc)))
    return results


def transmon_quartic_alpha(E_c: float) -> float:
    """Anharmonicity of the quartic-expanded cosine potential to first order: -E_c."""
    if E_c < 0.0:
        raise DomainError("E_c must be non-negative")
    return -float(E_c)
