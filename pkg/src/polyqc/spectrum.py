"""Charge-basis Hamiltonians for 2 pi-periodic effective phase potentials.

The Hamiltonian is

    H = 4 E_c (n + n_g)^2 + E_pot * V(phi),

where V is any even 2 pi-periodic function.  In the Cooper-pair-number
basis only periodic functions of phi exist as operators, so V enters
through its cosine series: ``<m|cos(k phi)|n> = (delta_{m,n+k} + delta_{m,n-k}) / 2``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .core import DomainError, EnergyScales


class NotPolymerRepresentable(DomainError):
    """The potential is not 2 pi-periodic and has no charge-basis operator."""


class ConvergenceError(RuntimeError):
    """A numerical procedure failed to converge."""


class TruncationWarning(UserWarning):
    pass


JOSEPHSON_COSINE = "cosine"
ARCSIN_SIN_SQUARED = "arcsin_sin_squared"
QUARTIC_EXPANSION = "quartic"
CUSTOM_FOURIER = "fourier"

_VARIANTS = (JOSEPHSON_COSINE, ARCSIN_SIN_SQUARED, QUARTIC_EXPANSION, CUSTOM_FOURIER)


def triangle_wave(phi):
    """arcsin(sin(phi)) by exact branch reduction of phi mod 2 pi."""
    phi = np.asarray(phi, dtype=float)
    reduced = np.mod(phi + 0.5 * np.pi, 2.0 * np.pi) - 0.5 * np.pi
    return np.where(reduced <= 0.5 * np.pi, reduced, np.pi - reduced)


@dataclass(frozen=True)
class PhasePotential:
    """An effective phase potential V(phi), in units of E_pot.

    ``coefficients`` is only used by the ``fourier`` variant and holds
    ``(a_0, a_1, ..., a_K)`` of ``V = sum a_k cos(k phi)``.
    """

    variant: str = JOSEPHSON_COSINE
    coefficients: tuple = ()
    even: bool = True

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise DomainError(f"unknown potential variant {self.variant!r}")
        if self.variant == CUSTOM_FOURIER and len(self.coefficients) < 2:
            raise DomainError("fourier potential needs at least a_0 and a_1")
        if not self.even:
            raise DomainError("only even potentials (cosine series) are supported")

    @classmethod
    def cosine(cls):
        return cls(JOSEPHSON_COSINE)

    @classmethod
    def arcsin_sin_squared(cls):
        return cls(ARCSIN_SIN_SQUARED)

    @classmethod
    def quartic(cls):
        return cls(QUARTIC_EXPANSION)

    @classmethod
    def fourier(cls, coefficients: Sequence[float]):
        return cls(CUSTOM_FOURIER, tuple(float(c) for c in coefficients))

    @property
    def periodic(self) -> bool:
        return self.variant != QUARTIC_EXPANSION

    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        if self.variant == JOSEPHSON_COSINE:
            return 1.0 - np.cos(phi)
        if self.variant == ARCSIN_SIN_SQUARED:
            return 0.5 * triangle_wave(phi) ** 2
        if self.variant == QUARTIC_EXPANSION:
            return 0.5 * phi**2 - phi**4 / 24.0
        k = np.arange(len(self.coefficients))
        return np.cos(np.multiply.outer(phi, k)) @ np.asarray(self.coefficients)


@dataclass(frozen=True)
class FourierSeries:
    """Cosine series ``V(phi) = sum_{k=0}^{k_max} a_k cos(k phi)``."""

    coefficients: np.ndarray
    reconstruction_error: float = 0.0
    warnings: tuple = ()

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=float)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def a0(self) -> float:
        return float(self.coefficients[0])

    @property
    def k_max(self) -> int:
        return len(self.coefficients) - 1

    @property
    def bandwidth(self) -> int:
        nonzero = np.flatnonzero(self.coefficients[1:])
        return int(nonzero[-1] + 1) if nonzero.size else 0

    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        k = np.arange(len(self.coefficients))
        return np.cos(np.multiply.outer(phi, k)) @ self.coefficients


def cosine_coefficients(func: Callable, k_max: int, breakpoints=(), tol: float = 1e-12):
    """Cosine coefficients of an even 2 pi-periodic ``func`` by adaptive quadrature.

    Integrates over [0, pi] only (even symmetry); ``breakpoints`` are kinks
    inside that interval the quadrature should split at.
    """
    points = sorted(p for p in breakpoints if 0.0 < p < math.pi)
    edges = [0.0, *points, math.pi]
    coeffs = np.empty(k_max + 1)
    for k in range(k_max + 1):
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            value, err = integrate.quad(
                lambda p: func(p) * math.cos(k * p), a, b, epsabs=tol, epsrel=0.0, limit=200
            )
            if not err <= max(tol, 1e-15):
                raise ConvergenceError(f"cosine coefficient a_{k}: quadrature error {err:.2e}")
            total += value
        coeffs[k] = total / math.pi if k == 0 else 2.0 * total / math.pi
    return coeffs


def potential_fourier(potential: PhasePotential, k_max: int = 32, tol: float = 1e-10) -> FourierSeries:
    """Represent a periodic potential by its cosine series.

    The returned series records the max reconstruction error on a 2048-point
    grid; when it exceeds ``tol`` a :class:`TruncationWarning` is issued and
    the message is kept in ``FourierSeries.warnings``.
    """
    if not potential.periodic:
        raise NotPolymerRepresentable(
            f"{potential.variant} potential is not 2pi-periodic: not polymer-representable"
        )
    if k_max < 1:
        raise DomainError("k_max must be >= 1")

    if potential.variant == JOSEPHSON_COSINE:
        coeffs = np.zeros(k_max + 1)
        coeffs[0], coeffs[1] = 1.0, -1.0
    elif potential.variant == CUSTOM_FOURIER:
        coeffs = np.asarray(potential.coefficients, dtype=float)
        if len(coeffs) - 1 > k_max:
            coeffs = coeffs[: k_max + 1]
    else:
        coeffs = cosine_coefficients(potential, k_max, breakpoints=(0.5 * math.pi,), tol=tol * 1e-2)
        # T(phi)^2 has period pi, so odd harmonics vanish identically.
        coeffs[1::2] = 0.0

    grid = np.linspace(-math.pi, math.pi, 2048, endpoint=False)
    series = np.cos(np.multiply.outer(grid, np.arange(len(coeffs)))) @ coeffs
    error = float(np.max(np.abs(series - potential(grid))))
    notes = ()
    if error > tol:
        msg = (
            f"k_max={len(coeffs) - 1} reconstructs {potential.variant} only to "
            f"{error:.2e} (requested {tol:.0e})"
        )
        warnings.warn(msg, TruncationWarning, stacklevel=2)
        notes = (msg,)
    return FourierSeries(coeffs, reconstruction_error=error, warnings=notes)


@dataclass(frozen=True)
class ChargeHamiltonian:
    matrix: np.ndarray
    n_max: int
    n_g: float
    E_c: float
    E_pot: float
    bandwidth: int

    @property
    def charges(self) -> np.ndarray:
        return np.arange(-self.n_max, self.n_max + 1)

    @property
    def dim(self) -> int:
        return 2 * self.n_max + 1


def build_charge_hamiltonian(
    scales: EnergyScales, series: FourierSeries, n_g: float = 0.0, n_max: int = 100
) -> ChargeHamiltonian:
    """Dense symmetric matrix of dimension 2 n_max + 1 in the charge basis."""
    bandwidth = series.bandwidth
    if n_max < max(1, bandwidth):
        raise DomainError(f"n_max={n_max} is smaller than the potential bandwidth {bandwidth}")
    charges = np.arange(-n_max, n_max + 1)
    dim = charges.size
    a = series.coefficients
    M = np.diag(4.0 * scales.E_c * (charges + n_g) ** 2 + scales.E_pot * a[0])
    for k in range(1, bandwidth + 1):
        if a[k] == 0.0:
            continue
        off = np.full(dim - k, 0.5 * scales.E_pot * a[k])
        M += np.diag(off, k) + np.diag(off, -k)
    M.setflags(write=False)
    return ChargeHamiltonian(M, n_max, float(n_g), scales.E_c, scales.E_pot, bandwidth)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    charges: np.ndarray
    n_max: int
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def E01(self) -> float:
        return float(self.eigenvalues[1] - self.eigenvalues[0])

    @property
    def E12(self) -> float:
        return float(self.eigenvalues[2] - self.eigenvalues[1])

    @property
    def alpha(self) -> float:
        return anharmonicity(self)


def eigendecompose(H) -> Spectrum:
    """Full eigendecomposition of a real-symmetric charge Hamiltonian.

    Accepts a :class:`ChargeHamiltonian` or a bare symmetric array. The
    eigenvector sign is fixed by making the largest-magnitude component
    positive.
    """
    if isinstance(H, ChargeHamiltonian):
        M, charges, n_max = H.matrix, H.charges, H.n_max
    else:
        M = np.asarray(H, dtype=float)
        n_max = (M.shape[0] - 1) // 2
        charges = np.arange(M.shape[0]) - n_max
    if not np.all(np.isfinite(M)):
        raise DomainError("Hamiltonian has non-finite entries")
    if not np.array_equal(M, M.T):
        raise DomainError("Hamiltonian is not symmetric")
    try:
        values, vectors = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigensolver did not converge: {exc}") from exc

    pivot = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivot, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    vectors = vectors * signs
    values.setflags(write=False)
    vectors.setflags(write=False)
    return Spectrum(values, vectors, charges, n_max)


def anharmonicity(spec: Spectrum) -> float:
    """(E_2 - E_1) - (E_1 - E_0) on the sorted eigenvalue list, multiplicities kept.

    Negative for the cosine potential: the qubit ladder compresses.
    """
    w = spec.eigenvalues
    if len(w) < 3:
        raise DomainError("anharmonicity needs at least three levels")
    return float((w[2] - w[1]) - (w[1] - w[0]))


def number_matrix_element(spec: Spectrum, i: int, j: int) -> float:
    levels = spec.eigenvectors.shape[1]
    if not (0 <= i < levels and 0 <= j < levels):
        raise IndexError(f"levels ({i}, {j}) out of range for {levels} computed states")
    v = spec.eigenvectors
    return float(abs(v[:, i] @ (spec.charges * v[:, j])))


def solve(
    scales: EnergyScales,
    potential: PhasePotential | FourierSeries = None,
    n_g: float = 0.0,
    n_max: int = 100,
) -> Spectrum:
    """Build and diagonalize in one call (cosine potential by default)."""
    if potential is None:
        potential = PhasePotential.cosine()
    series = potential if isinstance(potential, FourierSeries) else potential_fourier(potential)
    return eigendecompose(build_charge_hamiltonian(scales, series, n_g, n_max))


def converge_truncation(
    scales: EnergyScales,
    series: FourierSeries,
    n_g: float,
    tol: float,
    start: int = 8,
    cap: int = 512,
) -> int:
    """Smallest n_max in a doubling search for which E01 and alpha agree with 2 n_max.

    ``tol`` is an absolute energy in joule.
    """
    if not tol > 0.0:
        raise DomainError("tolerance must be positive")
    n_max = max(start, series.bandwidth)
    previous: Optional[Spectrum] = None
    while 2 * n_max <= cap:
        coarse = previous or eigendecompose(build_charge_hamiltonian(scales, series, n_g, n_max))
        fine = eigendecompose(build_charge_hamiltonian(scales, series, n_g, 2 * n_max))
        if abs(coarse.E01 - fine.E01) <= tol and abs(coarse.alpha - fine.alpha) <= tol:
            return n_max
        previous, n_max = fine, 2 * n_max
    raise ConvergenceError(f"truncation did not converge to {tol:.3e} J below n_max cap {cap}")


def charge_dispersion(scales: EnergyScales, series: FourierSeries, n_max: int = 60, points: int = 21):
    """Peak-to-peak variation of E01 over n_g in [0, 1)."""
    offsets = np.linspace(0.0, 1.0, points, endpoint=False)
    e01 = [eigendecompose(build_charge_hamiltonian(scales, series, g, n_max)).E01 for g in offsets]
    return float(np.ptp(e01))
