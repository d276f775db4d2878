import numpy as np
import pytest

from curveflow.curve import Curve, CurveError, ds_derivative, mean_field
from curveflow.energies import (
    average_energy,
    center_of_mass_energy,
    elastic_energy,
    evaluate,
    grad_h0,
    grad_sobolev,
    length_energy,
    std_dev_energy,
)
from curveflow.generators import circle, perturbed_circle, random_field, random_smooth_curve
from curveflow.metrics import MetricError, MetricSpec, inner
from curveflow.spectral import analyze

TWO_PI = 2.0 * np.pi

H0 = MetricSpec.h0()


def _all_kinds():
    g = lambda p: np.sin(p[:, 0]) + p[:, 1] ** 2
    grad_g = lambda p: np.column_stack([np.cos(p[:, 0]), 2.0 * p[:, 1]])
    return {
        "length": length_energy(),
        "elastic": elastic_energy(),
        "center_of_mass": center_of_mass_energy((0.4, -0.1)),
        "std_dev": std_dev_energy(),
        "avg_g": average_energy(g, grad_g),
    }


class TestEvaluate:
    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_elastic_circle(self, r):
        c = circle(256, radius=r)
        assert evaluate(elastic_energy(), c) == pytest.approx(
            TWO_PI / r, rel=30.0 / 256**2
        )

    def test_center_of_mass_at_centroid(self, wobbly):
        m = mean_field(wobbly.points, wobbly)
        assert evaluate(center_of_mass_energy(m), wobbly) < 1e-12

    @pytest.mark.parametrize("r", [1.0, 1.7])
    def test_std_dev_circle(self, r):
        c = circle(256, radius=r, center=(2.0, -3.0))
        assert evaluate(std_dev_energy(), c) == pytest.approx(r**2, rel=1e-3)

    def test_avg_g_quadrature(self, unit_circle):
        kind = average_energy(lambda p: p[:, 0] ** 2, lambda p: np.column_stack(
            [2 * p[:, 0], np.zeros(p.shape[0])]))
        # mean of cos^2 over the circle
        assert evaluate(kind, unit_circle) == pytest.approx(0.5, rel=1e-3)

    def test_config_roundtrip(self):
        from curveflow.energies import energy_from_config, energy_to_config

        kind = energy_from_config('{"energy": "center_of_mass", "target": [0.0, 0.0]}')
        assert kind.tag == "center_of_mass" and kind.target == (0.0, 0.0)
        assert energy_to_config(kind) == {"energy": "center_of_mass", "target": [0.0, 0.0]}
        assert energy_from_config({"energy": "length"}).tag == "length"
        with pytest.raises(ValueError):
            energy_to_config(average_energy(lambda p: p[:, 0], lambda p: p))


class TestGradH0:
    def test_length_gradient_on_circle(self, unit_circle):
        g = grad_h0(length_energy(), unit_circle)
        assert np.abs(g - TWO_PI * unit_circle.points).max() < 1e-3

    def test_center_of_mass_stationary(self, wobbly):
        m = mean_field(wobbly.points, wobbly)
        g = grad_h0(center_of_mass_energy(m), wobbly)
        assert np.abs(g).max() < 1e-10

    @pytest.mark.parametrize("name", sorted(_all_kinds()))
    def test_finite_difference_duality(self, rng, name):
        kind = _all_kinds()[name]
        c = random_smooth_curve(rng, 128)
        g = grad_h0(kind, c)
        eps = 1e-5
        for _ in range(20):
            h = random_field(rng, c)
            fd = (
                evaluate(kind, Curve(c.points + eps * h))
                - evaluate(kind, Curve(c.points - eps * h))
            ) / (2 * eps)
            pairing = inner(H0, c, g, h)
            assert pairing == pytest.approx(fd, rel=1e-4, abs=1e-9)

    def test_elastic_needs_resolution(self):
        with pytest.raises(CurveError):
            grad_h0(elastic_energy(), circle(16))

    @pytest.mark.parametrize("n", [256, 512])
    def test_elastic_gradient_closed_form_on_circle(self, n):
        # L * D_s(2 D_s^3 c + 3 |D_s^2 c|^2 D_s c) = -2 pi c on the unit circle
        c = circle(n)
        g = grad_h0(elastic_energy(), c)
        assert np.abs(g + TWO_PI * c.points).max() < 600.0 / n**2

    def test_elastic_gradient_matches_closed_form(self):
        # the printed gradient, discretized with the same centered
        # differences; agreement is limited by fourth-derivative noise
        c = perturbed_circle(1024, amplitude=0.05, seed=4)
        g = grad_h0(elastic_energy(), c)
        d1 = ds_derivative(c.points, c, 1)
        d2 = ds_derivative(c.points, c, 2)
        d3 = ds_derivative(c.points, c, 3)
        inner_field = 2.0 * d3 + 3.0 * np.einsum("ij,ij->i", d2, d2)[:, None] * d1
        closed = c.length * ds_derivative(inner_field, c, 1)
        num = np.sqrt(float(c.weights @ np.einsum("ij,ij->i", g - closed, g - closed)))
        den = np.sqrt(float(c.weights @ np.einsum("ij,ij->i", closed, closed)))
        assert num / den < 0.05

    def test_translation_equivariance(self, rng):
        c = random_smooth_curve(rng, 128)
        moved = c.translate([2.0, -1.0])
        for kind in (length_energy(), elastic_energy(), std_dev_energy()):
            a = grad_h0(kind, c)
            b = grad_h0(kind, moved)
            assert np.abs(a - b).max() < 1e-9 * max(1.0, np.abs(a).max())
        # center of mass: equivariant when the target moves along
        a = grad_h0(center_of_mass_energy((0.3, 0.3)), c)
        b = grad_h0(center_of_mass_energy((2.3, -0.7)), moved)
        assert np.abs(a - b).max() < 1e-9 * max(1.0, np.abs(a).max())


class TestGradSobolev:
    @pytest.mark.parametrize(
        "spec",
        [
            MetricSpec.hj(1, 1.0),
            MetricSpec.hj(2, 0.25),
            MetricSpec.hj_tilde(1, 1.0),
            MetricSpec.h_alpha(1.5, 0.5),
            MetricSpec.h_alpha(0.8, 1.0, tilde=True),
        ],
    )
    def test_duality_all_transferable_variants(self, rng, spec):
        c = perturbed_circle(128, seed=9)
        kind = std_dev_energy()
        g0 = grad_h0(kind, c)
        gs = grad_sobolev(kind, c, spec)
        for _ in range(5):
            h = random_field(rng, c)
            assert inner(spec, c, gs, h) == pytest.approx(
                inner(H0, c, g0, h), rel=1e-8
            )

    def test_zero_frequency_content_unchanged(self, unit_circle):
        # gradient of center-of-mass at a symmetric curve is mean-only
        kind = center_of_mass_energy((0.5, 0.0))
        g0 = grad_h0(kind, unit_circle)
        sf = analyze(g0, unit_circle)
        gs = grad_sobolev(kind, unit_circle, MetricSpec.hj_tilde(1, 1.0))
        sf2 = analyze(gs, unit_circle)
        assert np.abs(sf2.coeffs[0] - sf.coeffs[0]).max() < 1e-12

    def test_unsupported_transfer(self, unit_circle):
        with pytest.raises(MetricError, match="unsupported"):
            grad_sobolev(length_energy(), unit_circle, MetricSpec.mm_gn(1))

    def test_elastic_spectral_decay_bound(self):
        # tilde-H1 gradient coefficients sit two powers of l below H0's
        lam = 1.0
        c = perturbed_circle(256, amplitude=0.08, seed=5)
        g0 = analyze(grad_h0(elastic_energy(), c), c)
        g1 = analyze(grad_sobolev(elastic_energy(), c, MetricSpec.hj_tilde(1, lam)), c)
        freqs = g0.freqs()
        for l in range(1, 128):
            a = np.linalg.norm(g1.coeffs[freqs == l])
            b = np.linalg.norm(g0.coeffs[freqs == l])
            if b > 1e-9:
                assert a <= b / (lam * (TWO_PI * l) ** 2) * (1 + 1e-6)

    def test_mean_passes_through_tilde_transfer(self, rng):
        c = perturbed_circle(128, seed=11)
        kind = length_energy()
        g0 = grad_h0(kind, c)
        gs = grad_sobolev(kind, c, MetricSpec.hj_tilde(2, 0.5))
        assert np.abs(mean_field(gs, c) - mean_field(g0, c)).max() < 1e-10
