import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from polyqc.core import H, DomainError, EnergyScales
from polyqc.spectrum import (
    ConvergenceError,
    NotPolymerRepresentable,
    PhasePotential,
    anharmonicity,
    build_charge_hamiltonian,
    charge_dispersion,
    converge_truncation,
    eigendecompose,
    number_matrix_element,
    potential_fourier,
    solve,
    triangle_wave,
    TruncationWarning,
)

COS = potential_fourier(PhasePotential.cosine())
ASIN = potential_fourier(PhasePotential.arcsin_sin_squared())


def test_triangle_wave_matches_arcsin_sin():
    phi = np.linspace(-20, 20, 4001)
    assert np.allclose(triangle_wave(phi), np.arcsin(np.sin(phi)), atol=1e-12)


class TestFourier:
    def test_cosine_exact(self):
        assert COS.coefficients[0] == 1.0 and COS.coefficients[1] == -1.0
        assert not np.any(COS.coefficients[2:])
        assert COS.reconstruction_error < 1e-12

    def test_arcsin_mean(self):
        # independent oracle: (1/2pi) integral of T^2/2 over one period
        oracle = integrate.quad(lambda p: 0.5 * math.asin(math.sin(p)) ** 2, -math.pi, math.pi, points=[-math.pi / 2, math.pi / 2])[0] / (2 * math.pi)
        assert ASIN.a0 == pytest.approx(oracle, abs=1e-10)
        assert ASIN.a0 == pytest.approx(math.pi**2 / 24, abs=1e-10)

    def test_arcsin_harmonics_closed_form(self):
        # x^2/2 on [-pi/2, pi/2] extended with period pi: a_2m = (-1)^m / (2 m^2)
        k = np.arange(1, ASIN.k_max + 1)
        expected = np.where(k % 2 == 0, (-1.0) ** (k // 2) / (2.0 * (k / 2) ** 2), 0.0)
        assert np.allclose(ASIN.coefficients[1:], expected, atol=1e-10)

    def test_arcsin_truncation_recorded(self):
        with pytest.warns(TruncationWarning):
            potential_fourier(PhasePotential.arcsin_sin_squared(), k_max=8)
        # polynomial decay: 32 terms cannot meet 1e-10 pointwise
        assert ASIN.reconstruction_error > 1e-10
        assert ASIN.warnings
        fine = potential_fourier(PhasePotential.arcsin_sin_squared(), k_max=256, tol=1e-2)
        assert fine.reconstruction_error < ASIN.reconstruction_error
        assert not fine.warnings

    def test_decay_beyond_four(self):
        nonzero = np.abs(ASIN.coefficients[4:][ASIN.coefficients[4:] != 0])
        assert np.all(np.diff(nonzero) <= 0)
        assert np.all(np.diff(np.abs(COS.coefficients[4:])) <= 0)

    def test_custom_identity(self):
        s = potential_fourier(PhasePotential.fourier([1.0, -1.0]))
        assert list(s.coefficients) == [1.0, -1.0]

    def test_quartic_rejected(self):
        with pytest.raises(NotPolymerRepresentable, match="not polymer-representable"):
            potential_fourier(PhasePotential.quartic())


class TestBuild:
    def test_pure_charging(self):
        H_ = build_charge_hamiltonian(EnergyScales(1.0, 0.0), COS, 0.0, 1)
        assert np.array_equal(H_.matrix, np.diag([4.0, 0.0, 4.0]))

    def test_cosine_offdiagonal(self):
        Ej = 3.0
        M = build_charge_hamiltonian(EnergyScales(1.0, Ej), COS, 0.0, 5).matrix
        assert np.all(np.diag(M, 1) == -Ej / 2)
        assert np.all(np.diag(M, 2) == 0)

    def test_half_offset_diagonal(self):
        s = EnergyScales(1.3, 0.7)
        M = build_charge_hamiltonian(s, COS, 0.5, 4).matrix
        assert M[4, 4] == pytest.approx(1.3 + 0.7 * 1.0)

    def test_too_small(self):
        with pytest.raises(DomainError):
            build_charge_hamiltonian(EnergyScales(1.0, 1.0), ASIN, 0.0, 10)

    @given(
        ratio=st.one_of(st.just(0.0), st.floats(1e-6, 200.0)),
        n_g=st.floats(-1.0, 1.0),
        n_max=st.integers(32, 60),
    )
    @settings(max_examples=25, deadline=None)
    def test_structure(self, ratio, n_g, n_max):
        s = EnergyScales(1.0, ratio)
        H_ = build_charge_hamiltonian(s, ASIN, n_g, n_max)
        M = H_.matrix
        assert np.array_equal(M, M.T)
        n = H_.charges
        assert np.allclose(np.diag(M), 4 * (n + n_g) ** 2 + ratio * ASIN.a0, rtol=1e-15)
        for k in range(1, H_.bandwidth + 1):
            assert np.all(np.diag(M, k) == 0.5 * ratio * ASIN.coefficients[k])
        i, j = np.indices(M.shape)
        assert np.all(M[np.abs(i - j) > H_.bandwidth] == 0)


class TestEigen:
    def test_pair(self):
        spec = eigendecompose(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert np.allclose(spec.eigenvalues, [-1.0, 1.0])

    def test_rejects_asymmetric(self):
        with pytest.raises(DomainError):
            eigendecompose(np.array([[0.0, 1.0], [0.5, 0.0]]))

    def test_meander(self, meander_scales):
        spec = solve(meander_scales)
        assert spec.E01 / H == pytest.approx(3.26e9, abs=10e6)
        assert abs(anharmonicity(spec)) / H == pytest.approx(187e6, abs=2e6)

    def test_transmon(self, transmon_scales):
        spec = solve(transmon_scales)
        assert spec.E01 / H == pytest.approx(4.25e9, abs=10e6)
        assert abs(spec.alpha) / H == pytest.approx(171.5e6, abs=2e6)

    @pytest.mark.parametrize("fixture", ["meander_scales", "transmon_scales"])
    def test_orthonormal_and_residual(self, fixture, request):
        H_ = build_charge_hamiltonian(request.getfixturevalue(fixture), COS, 0.0, 100)
        spec = eigendecompose(H_)
        V = spec.eigenvectors
        assert np.allclose(V.T @ V, np.eye(V.shape[0]), atol=1e-10)
        assert np.all(np.diff(spec.eigenvalues) >= 0)
        norm = np.linalg.norm(H_.matrix, 2)
        for i in range(5):
            r = H_.matrix @ V[:, i] - spec.eigenvalues[i] * V[:, i]
            assert np.linalg.norm(r) <= 1e-9 * norm

    def test_phase_convention(self, meander_scales):
        V = solve(meander_scales).eigenvectors
        for i in range(5):
            assert V[np.argmax(np.abs(V[:, i])), i] > 0

    def test_degenerate_charging_ladder(self):
        # levels 0, 4, 4, 16, 16: the sorted list gives (4-4) - (4-0) = -4 E_c
        spec = eigendecompose(build_charge_hamiltonian(EnergyScales(1.0, 0.0), COS, 0.0, 8))
        assert np.allclose(spec.eigenvalues[:5], [0, 4, 4, 16, 16])
        assert anharmonicity(spec) == pytest.approx(-4.0)

    def test_too_few_levels(self):
        with pytest.raises(DomainError):
            anharmonicity(eigendecompose(np.eye(2)))


class TestNumberElement:
    def test_parity(self, meander_scales):
        assert number_matrix_element(solve(meander_scales), 0, 0) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("fixture", ["meander_scales", "transmon_scales"])
    def test_asymptotic(self, fixture, request):
        s = request.getfixturevalue(fixture)
        n01 = number_matrix_element(solve(s), 0, 1)
        assert n01 > 0
        assert n01 == pytest.approx((s.ratio / 32) ** 0.25, rel=0.05)

    def test_out_of_range(self, meander_scales):
        with pytest.raises(IndexError):
            number_matrix_element(solve(meander_scales, n_max=3), 0, 7)


class TestConvergence:
    def test_meander(self, meander_scales):
        tol = 1e3 * H
        n = converge_truncation(meander_scales, COS, 0.0, tol)
        assert n <= 100
        at_n = solve(meander_scales, n_max=n).E01
        assert abs(at_n - solve(meander_scales, n_max=100).E01) <= tol

    def test_free_rotor(self):
        assert converge_truncation(EnergyScales(1.0, 0.0), COS, 0.0, 1e-12) == 8

    def test_heuristic(self, heuristic_scales):
        n = converge_truncation(heuristic_scales, COS, 0.0, 1e3 * H)
        assert solve(heuristic_scales, n_max=n).E01 / H == pytest.approx(5.37e9, abs=10e6)

    def test_cap(self, meander_scales):
        with pytest.raises(ConvergenceError):
            converge_truncation(meander_scales, COS, 0.0, 1e-60, cap=32)

    def test_monotone(self, transmon_scales):
        errors = []
        for n in (4, 8, 16):
            ref = solve(transmon_scales, n_max=4 * n).E01
            errors.append(abs(solve(transmon_scales, n_max=n).E01 - ref))
        assert errors[0] > errors[1] > errors[2] or errors[2] == 0


class TestSymmetries:
    @pytest.mark.parametrize("n_g", [0.0, 0.13, 0.5, 0.77])
    def test_offset_periodicity(self, transmon_scales, n_g):
        a = eigendecompose(build_charge_hamiltonian(transmon_scales, COS, n_g, 60)).eigenvalues[:20]
        b = eigendecompose(build_charge_hamiltonian(transmon_scales, COS, n_g + 1, 60)).eigenvalues[:20]
        assert np.allclose(a, b, rtol=1e-9, atol=0)

    @pytest.mark.parametrize("series", [COS, ASIN], ids=["cos", "asin"])
    def test_offset_parity(self, meander_scales, series):
        a = eigendecompose(build_charge_hamiltonian(meander_scales, series, 0.31, 60)).eigenvalues
        b = eigendecompose(build_charge_hamiltonian(meander_scales, series, -0.31, 60)).eigenvalues
        assert np.allclose(a, b, rtol=1e-9, atol=0)

    @pytest.mark.parametrize("ratio", [50, 80, 120, 200])
    def test_transmon_limit(self, ratio):
        s = EnergyScales.from_ratio(1.0, ratio)
        spec = solve(s, n_max=60)
        assert spec.E01 == pytest.approx(math.sqrt(8 * ratio) - 1.0, rel=0.03)
        assert spec.alpha == pytest.approx(-1.0, rel=0.15)

    def test_charge_dispersion_decays(self):
        spread = [charge_dispersion(EnergyScales.from_ratio(1.0, r), COS, n_max=40) for r in (10, 30, 50, 100)]
        assert all(a > b for a, b in zip(spread, spread[1:]))
