"""Operations whose contracts are dimension-free, exercised in R^3."""

import numpy as np
import pytest

import curveflow as cf
from curveflow.curve import Curve
from curveflow.generators import random_field, random_smooth_curve
from curveflow.metrics import MetricSpec

TWO_PI = 2.0 * np.pi


@pytest.fixture
def ring_3d(rng):
    return random_smooth_curve(rng, 128, dim=3)


def test_curve_basics(ring_3d):
    assert ring_3d.dim == 3
    t = cf.unit_tangent(ring_3d)
    assert np.abs(np.linalg.norm(t, axis=1) - 1.0).max() < 1e-12


def test_sandwich_holds(rng, ring_3d):
    h = random_field(rng, ring_3d)
    for j, lam in ((1, 0.25), (2, 1.0)):
        a = cf.norm(MetricSpec.hj_tilde(j, lam), ring_3d, h)
        b = cf.norm(MetricSpec.hj(j, lam), ring_3d, h)
        upper = cf.equivalence_bounds(j, lam)[1]
        assert a <= b + 1e-9
        assert b <= upper * a + 1e-9


def test_gradient_duality(rng, ring_3d):
    kind = cf.std_dev_energy()
    g0 = cf.grad_h0(kind, ring_3d)
    spec = MetricSpec.hj(1, 1.0)
    gs = cf.grad_sobolev(kind, ring_3d, spec)
    eps = 1e-5
    for _ in range(5):
        h = random_field(rng, ring_3d)
        fd = (
            cf.evaluate(kind, Curve(ring_3d.points + eps * h))
            - cf.evaluate(kind, Curve(ring_3d.points - eps * h))
        ) / (2 * eps)
        pairing = cf.inner(MetricSpec.h0(), ring_3d, g0, h)
        assert pairing == pytest.approx(fd, rel=1e-5)
        assert cf.inner(spec, ring_3d, gs, h) == pytest.approx(pairing, rel=1e-8)


def test_linf_and_frechet(rng, ring_3d):
    h = random_field(rng, ring_3d)
    assert cf.linf_finsler(ring_3d, h) <= np.linalg.norm(h, axis=1).max() + 1e-15
    w = np.array([0.3, -0.1, 0.2])
    moved = ring_3d.translate(w)
    assert cf.frechet_distance(ring_3d, moved) <= np.linalg.norm(w) + 1e-12
    assert cf.dinf_distance(ring_3d, moved) <= np.linalg.norm(w) + 1e-12


def test_geodesic_translation(ring_3d):
    w = np.array([0.0, 0.0, 0.4])
    res = cf.geodesic_distance(ring_3d, ring_3d.translate(w), MetricSpec.hj_tilde(1, 1.0), k_rows=6)
    assert res.distance == pytest.approx(0.4, abs=1e-4)


def test_planar_only_guards(ring_3d):
    with pytest.raises(cf.CurveError):
        cf.tangent_normal_curvature(ring_3d)
    from curveflow.smoothing import SmoothingError, direction_function

    with pytest.raises(SmoothingError):
        direction_function(ring_3d)
