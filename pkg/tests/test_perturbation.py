import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_hermite, factorial

from polyqc.core import DomainError
from polyqc.perturbation import (
    hermite_mode_value,
    oscillator_width,
    perturbation_shift,
    perturbative_alpha,
    perturbative_alpha_curve,
    transmon_quartic_alpha,
)


def trapezoid_shift(n, ratio, points=1_000_001):
    """Independent oracle: plain trapezoid on a dense uniform grid, textbook Hermite functions."""
    s = (ratio / 8) ** 0.25
    upper = math.pi / 2 + 12 / s
    phi = np.linspace(-upper, upper, points)
    norm = math.sqrt(s) / (math.pi**0.25 * math.sqrt(2.0**n * factorial(n)))
    psi = norm * eval_hermite(n, s * phi) * np.exp(-0.5 * (s * phi) ** 2)
    f = psi**2 * (np.arcsin(np.sin(phi)) ** 2 - phi**2)
    return 0.5 * ratio * np.trapezoid(f, phi)


class TestHermite:
    def test_peak(self):
        assert hermite_mode_value(0, 1.0, 0.0) == pytest.approx(math.pi**-0.25, rel=1e-15)

    @pytest.mark.parametrize("s", [0.3, 1.0, 2.7])
    def test_odd_at_origin(self, s):
        assert hermite_mode_value(1, s, 0.0) == 0.0

    @pytest.mark.parametrize("s", [0.59, 1.0, 1.88])
    def test_orthonormal(self, s):
        phi = np.linspace(-40 / s, 40 / s, 400_001)
        psi = [hermite_mode_value(n, s, phi) for n in range(4)]
        gram = np.array([[np.trapezoid(a * b, phi) for b in psi] for a in psi])
        assert np.allclose(gram, np.eye(4), atol=1e-8)

    @pytest.mark.parametrize("n", range(4))
    def test_sign_changes(self, n):
        phi = np.linspace(-8, 8, 20_001)
        v = hermite_mode_value(n, 1.0, phi)
        v = v[np.abs(v) > 1e-12]
        assert np.count_nonzero(np.diff(np.sign(v))) == n

    def test_matches_textbook(self):
        phi = np.linspace(-5, 5, 101)
        for n in range(11):
            ref = eval_hermite(n, 1.3 * phi) * np.exp(-0.5 * (1.3 * phi) ** 2)
            ref *= math.sqrt(1.3) / (math.pi**0.25 * math.sqrt(2.0**n * factorial(n)))
            assert np.allclose(hermite_mode_value(n, 1.3, phi), ref, atol=1e-12)

    def test_far_tail_zero(self):
        assert hermite_mode_value(10, 1.0, 31.0) == 0.0

    def test_domain(self):
        with pytest.raises(DomainError):
            hermite_mode_value(11, 1.0, 0.0)


class TestShifts:
    @pytest.mark.parametrize("n", [0, 1, 2])
    @pytest.mark.parametrize("ratio", [1, 8, 10, 100])
    def test_trapezoid_oracle(self, n, ratio):
        assert perturbation_shift(n, ratio, 1.0) == pytest.approx(trapezoid_shift(n, ratio), rel=1e-6)

    def test_width(self):
        assert oscillator_width(8.0) == 1.0

    @given(ratio=st.floats(0.5, 500), scale=st.floats(1e-26, 1e-20))
    @settings(max_examples=15, deadline=None)
    def test_scale_invariance(self, ratio, scale):
        for n in range(3):
            a = perturbation_shift(n, ratio * scale, scale) / scale
            b = perturbation_shift(n, ratio, 1.0)
            assert a == pytest.approx(b, rel=1e-10)

    @pytest.mark.parametrize("ratio", [0.5, 1, 5, 10, 54.9, 100, 1000])
    def test_ordering(self, ratio):
        d = [perturbation_shift(n, ratio, 1.0) for n in range(3)]
        assert all(x <= 0 for x in d)
        assert abs(d[2]) >= abs(d[1]) >= abs(d[0])

    def test_localization(self):
        assert abs(perturbation_shift(0, 1e4, 1.0)) < 1e-20

    def test_bad_level(self):
        with pytest.raises(DomainError):
            perturbation_shift(3, 1.0, 1.0)


def test_result_recomputes():
    r = perturbative_alpha(54.9)
    assert r.alpha_over_Ec == (r.delta2 - r.delta1) - (r.delta1 - r.delta0)


def test_curve_shape():
    curve = perturbative_alpha_curve()
    assert len(curve) == 100
    mag = np.array([abs(r.alpha_over_Ec) for r in curve])
    assert np.all(np.isfinite(mag))
    ratios = np.array([r.ratio for r in curve])
    assert np.all(np.diff(mag[ratios >= 10]) < 0)
    assert mag.max() > 1.0
    assert mag[-1] < 0.2


def test_curve_marks_failures():
    (bad,) = perturbative_alpha_curve([-1.0])
    assert bad.error and math.isnan(bad.delta0)


def test_quartic_alpha():
    from polyqc.core import H

    assert transmon_quartic_alpha(164e6 * H) / H == pytest.approx(-164e6)
    assert transmon_quartic_alpha(156.4e6) == -156.4e6
    assert transmon_quartic_alpha(0.0) == 0.0
