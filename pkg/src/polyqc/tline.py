"""Fundamental-mode reduction of a polymer-quantized transmission line.

The line is N cells with the cosine effective potential expanded to fourth
order. Projecting onto the quarter-wave fundamental mode gives a
transmon-like single-mode Hamiltonian with renormalized energies

    E_l~ = (4/3)(N/2) E_l,    E_c~ = (3/4)(pi/4)(2/N)^3 E_c,

and mode anharmonicity alpha = -E_c~.  ``E_l`` and ``E_c`` are per-cell
energies; for a line of total capacitance C each cell carries C/N, so the
per-cell E_c is N e^2 / 2C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DomainError, charging_energy, inductive_energy, H

JTWPA_CELLS = 1000
MEASURABLE_ALPHA_HZ = 1e3


def _check_cells(N: int) -> int:
    if int(N) != N or N < 2:
        raise DomainError(f"cell count must be an integer >= 2, got {N!r}")
    return int(N)


def participation_ratio(E_l: float, E_c: float, N: int) -> float:
    """Mode charge participation ratio (16/9)(4/pi)(N/2)^3 E_l/E_c."""
    N = _check_cells(N)
    return (16.0 / 9.0) * (4.0 / math.pi) * (N / 2.0) ** 3 * (E_l / E_c)


@dataclass(frozen=True)
class ModeReduction:
    N: int
    E_l: float
    E_c: float
    E_l_mode: float
    E_c_mode: float
    participation: float

    @property
    def line_ratio(self) -> float:
        return self.E_l / self.E_c

    @property
    def alpha(self) -> float:
        return -self.E_c_mode

    @property
    def energy_ratio(self) -> float:
        """E_l~ / E_c~ from the stored energies; equals participation * N/2."""
        return self.E_l_mode / self.E_c_mode


def renormalize_mode(E_l: float, E_c: float, N: int) -> ModeReduction:
    N = _check_cells(N)
    if not (E_l > 0.0 and E_c > 0.0):
        raise DomainError("E_l and E_c must be positive")
    return ModeReduction(
        N=N,
        E_l=E_l,
        E_c=E_c,
        E_l_mode=(4.0 / 3.0) * (N / 2.0) * E_l,
        E_c_mode=0.75 * (math.pi / 4.0) * (2.0 / N) ** 3 * E_c,
        participation=participation_ratio(E_l, E_c, N),
    )


def mode_anharmonicity(N: int, capacitance: float) -> float:
    """alpha = -(3/4)(pi/2)(2/N)^2 e^2/2C for a line of total capacitance C, in joule."""
    N = _check_cells(N)
    return -0.75 * (math.pi / 2.0) * (2.0 / N) ** 2 * charging_energy(capacitance)


def mode_report(inductance: float, capacitance: float, N: int = JTWPA_CELLS) -> dict:
    """Reduction of a line with total L and C into its fundamental mode.

    Energies are in joule except the ``*_hz`` entries.
    """
    N = _check_cells(N)
    E_l_line = inductive_energy(inductance)
    E_c_line = charging_energy(capacitance)
    # per-cell energies: L/N and C/N per cell
    mode = renormalize_mode(N * E_l_line, N * E_c_line, N)
    alpha = mode_anharmonicity(N, capacitance)
    notes = [
        "quartic model: cosine effective potential expanded to O(phi^4); "
        "single-mode Hamiltonian has transmon form with alpha = -E_c~",
    ]
    if N == JTWPA_CELLS:
        notes.append("N = 1000 cells is typical for JTWPAs")
    if abs(alpha) / H < MEASURABLE_ALPHA_HZ:
        notes.append("mode anharmonicity below 1 kHz: unmeasurable within a typical 100 us qubit lifetime")
    return {
        "N": N,
        "E_l_line": E_l_line,
        "E_c_line": E_c_line,
        "line_ratio": E_l_line / E_c_line,
        "E_l_mode": mode.E_l_mode,
        "E_c_mode": mode.E_c_mode,
        "participation": mode.participation,
        "alpha": alpha,
        "alpha_hz": alpha / H,
        "notes": notes,
    }
