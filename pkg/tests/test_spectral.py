import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curveflow.curve import Curve
from curveflow.generators import circle, ellipse, random_field
from curveflow.spectral import (
    SpectralError,
    analyze,
    frac_inner,
    sobolev_transfer,
    spectral_derivative,
    synthesize,
)

TWO_PI = 2.0 * np.pi


def _field(c, fn):
    s = c.cumulative_length[:-1]
    return fn(s)


class TestAnalyze:
    def test_constant_field(self, unit_circle):
        h = np.tile([2.0, -1.0], (256, 1))
        sf = analyze(h, unit_circle)
        assert np.abs(sf.coeffs[0] - [2.0, -1.0]).max() < 1e-12
        assert np.abs(sf.coeffs[1:]).max() < 1e-12

    def test_single_harmonic(self, unit_circle):
        i = np.arange(256)
        h = np.column_stack([1.7 * np.cos(TWO_PI * i / 256), np.zeros(256)])
        sf = analyze(h, unit_circle)
        assert sf.coeffs[1, 0] == pytest.approx(0.85, abs=1e-12)
        assert sf.coeffs[-1, 0] == pytest.approx(0.85, abs=1e-12)
        others = np.abs(sf.coeffs)
        others[1] = others[-1] = 0.0
        assert others.max() < 1e-12

    def test_hermitian_and_parseval(self, rng, unit_circle):
        h = random_field(rng, unit_circle)
        sf = analyze(h, unit_circle)
        assert sf.hermitian_defect() < 1e-12
        direct = float(
            unit_circle.weights @ np.einsum("ij,ij->i", h, h) / unit_circle.length
        )
        assert sf.power() == pytest.approx(direct, rel=1e-10)

    def test_rejects_nonuniform(self, rng):
        c = ellipse(128)
        with pytest.raises(SpectralError, match="resample"):
            analyze(random_field(rng, c), c)

    def test_rejects_odd_n(self):
        c = circle(255)
        with pytest.raises(SpectralError, match="even"):
            analyze(np.ones((255, 2)), c)


class TestSynthesize:
    def test_constant(self, unit_circle):
        sf = analyze(np.tile([0.3, 0.4], (256, 1)), unit_circle)
        out = synthesize(sf)
        assert np.abs(out - [0.3, 0.4]).max() < 1e-13

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_roundtrip(self, seed, unit_circle):
        h = random_field(np.random.default_rng(seed), unit_circle)
        assert np.abs(synthesize(analyze(h, unit_circle)) - h).max() < 1e-10

    def test_cosine_from_coefficients(self, unit_circle):
        sf = analyze(np.zeros((256, 2)), unit_circle)
        coeffs = np.array(sf.coeffs)
        coeffs[1, 0] = coeffs[-1, 0] = 0.5
        from curveflow.spectral import SpectralField

        out = synthesize(SpectralField(coeffs, sf.host_length, 256))
        assert np.abs(out[:, 0] - np.cos(TWO_PI * np.arange(256) / 256)).max() < 1e-12

    def test_asymmetric_input_flagged(self, unit_circle):
        from curveflow.spectral import SpectralField

        coeffs = np.zeros((256, 2), dtype=complex)
        coeffs[3, 0] = 1.0  # no conjugate partner
        with pytest.raises(SpectralError, match="asymmetric"):
            synthesize(SpectralField(coeffs, TWO_PI, 256))


class TestFracInner:
    def test_constant_is_in_kernel(self, unit_circle):
        sf = analyze(np.tile([5.0, 5.0], (256, 1)), unit_circle)
        assert frac_inner(sf, sf, 1.0) == 0.0

    def test_single_harmonic_value(self, unit_circle):
        h = _field(
            unit_circle,
            lambda s: np.column_stack(
                [np.cos(TWO_PI * s / unit_circle.length), np.zeros_like(s)]
            ),
        )
        sf = analyze(h, unit_circle)
        # two coefficients of modulus 1/2 at |l| = 1: sum = 2*(2 pi)^2/4
        assert frac_inner(sf, sf, 1.0) == pytest.approx((TWO_PI**2) / 2, rel=1e-10)

    def test_unit_coefficient_pair(self, unit_circle):
        from curveflow.spectral import SpectralField

        coeffs = np.zeros((256, 2), dtype=complex)
        coeffs[1, 0] = 1.0
        sf = SpectralField(coeffs, TWO_PI, 256)
        assert frac_inner(sf, sf, 1.0) == pytest.approx(TWO_PI**2, rel=1e-10)

    @pytest.mark.parametrize("j", [1, 2])
    def test_integer_alpha_matches_quadrature(self, rng, unit_circle, j):
        h = random_field(rng, unit_circle, band=32)
        sf = analyze(h, unit_circle)
        deriv = synthesize(spectral_derivative(sf, j))
        total = unit_circle.length
        quad = total ** (2 * j - 1) * float(
            unit_circle.weights @ np.einsum("ij,ij->i", deriv, deriv)
        )
        assert frac_inner(sf, sf, float(j)) == pytest.approx(quad, rel=1e-6)

    def test_scaling_invariance_bit_equal(self, rng, unit_circle):
        h = random_field(rng, unit_circle)
        big = Curve(unit_circle.points * 3.0)
        a = frac_inner(analyze(h, unit_circle), analyze(h, unit_circle), 1.5)
        b = frac_inner(analyze(h, big), analyze(h, big), 1.5)
        assert a == b

    def test_host_mismatch(self, rng, unit_circle):
        h = random_field(rng, unit_circle)
        other = circle(128)
        with pytest.raises(SpectralError):
            frac_inner(analyze(h, unit_circle), analyze(h[:128], other), 1.0)


class TestSobolevTransfer:
    def test_zero_frequency_passthrough(self, unit_circle):
        sf = analyze(np.tile([1.0, 2.0], (256, 1)), unit_circle)
        for variant in ("H", "Htilde"):
            out = sobolev_transfer(sf, 1.0, 1.0, variant)
            assert np.abs(out.coeffs - sf.coeffs).max() < 1e-14

    def test_first_mode_division(self, unit_circle):
        i = np.arange(256)
        h = np.column_stack([np.cos(TWO_PI * i / 256), np.zeros(256)])
        sf = analyze(h, unit_circle)
        out = sobolev_transfer(sf, 1.0, 1.0, "H")
        assert out.coeffs[1, 0] == pytest.approx(0.5 / (1 + 4 * np.pi**2), rel=1e-12)

    def test_high_frequency_attenuation_monotone(self, rng, unit_circle):
        g = random_field(rng, unit_circle, band=100, decay=0.0)
        sf = analyze(g, unit_circle)
        out = sobolev_transfer(sf, 0.5, 1.0, "H")
        ratios = []
        for l in range(1, 100):
            a = np.linalg.norm(out.coeffs[l])
            b = np.linalg.norm(sf.coeffs[l])
            if b > 1e-12:
                ratios.append(a / b)
        ratios = np.array(ratios)
        assert np.all(np.diff(ratios) < 0)

    def test_duality_contract(self, rng, unit_circle):
        g = random_field(rng, unit_circle)
        h = random_field(rng, unit_circle)
        gf = analyze(g, unit_circle)
        hf = analyze(h, unit_circle)
        out = sobolev_transfer(gf, 0.7, 1.3, "H")
        l = np.abs(gf.freqs()).astype(float)
        mult = 1.0 + 0.7 * (TWO_PI * l) ** 2.6
        lhs = np.sum(mult[:, None] * out.coeffs * np.conj(hf.coeffs)).real
        rhs = np.sum(gf.coeffs * np.conj(hf.coeffs)).real
        assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_lambda_validation(self, unit_circle):
        sf = analyze(np.ones((256, 2)), unit_circle)
        with pytest.raises(ValueError):
            sobolev_transfer(sf, -1.0, 1.0, "H")

    def test_hermitian_symmetry_preserved_by_operations(self, rng, unit_circle):
        sf = analyze(random_field(rng, unit_circle), unit_circle)
        assert sobolev_transfer(sf, 0.5, 1.5, "H").hermitian_defect() < 1e-12
        assert sobolev_transfer(sf, 0.5, 1.0, "Htilde").hermitian_defect() < 1e-12
        assert spectral_derivative(sf, 1).hermitian_defect() < 1e-8
        assert spectral_derivative(sf, 2).hermitian_defect() < 1e-8
