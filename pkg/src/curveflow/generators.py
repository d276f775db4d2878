"""Canonical test curves and seeded random curves/fields."""

from __future__ import annotations

import numpy as np

from .curve import TWO_PI, Curve, resample_arclength

CANONICAL = ("circle", "ellipse", "rounded_square", "flat_segment", "perturbed_circle")


def circle(n: int = 256, radius: float = 1.0, center=(0.0, 0.0)) -> Curve:
    th = TWO_PI * np.arange(n) / n
    pts = np.column_stack([np.cos(th), np.sin(th)]) * radius + np.asarray(center)
    return Curve(pts)


def ellipse(n: int = 256, a: float = 2.0, b: float = 1.0, center=(0.0, 0.0)) -> Curve:
    """Ellipse sampled uniformly in angle, so speeds are non-uniform."""
    th = TWO_PI * np.arange(n) / n
    pts = np.column_stack([a * np.cos(th), b * np.sin(th)]) + np.asarray(center)
    return Curve(pts)


def _smoothstep(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


def rounded_square(n: int = 256, size: float = 2.0, corner: float = 0.35) -> Curve:
    """Square with smoothly rounded corners, sampled arc-uniformly.

    Built from a 4-fold symmetric raised-cosine curvature profile: each
    corner turns by pi/2 over a window of `corner` * (quarter perimeter).
    The symmetry closes the polygon exactly, and the C^1 curvature keeps
    the Fourier coefficients decaying fast enough for smoothing tests.
    """
    if n % 4:
        raise ValueError("rounded_square needs n divisible by 4")
    if not 0.0 < corner <= 1.0:
        raise ValueError("corner fraction must be in (0, 1]")
    perimeter = 4.0 * size
    ds = perimeter / n
    # midpoints of chords, so samples inherit the exact 4-fold symmetry
    s = (np.arange(n) + 0.5) * ds
    quarter = perimeter / 4.0
    width = corner * quarter
    kappa = np.zeros(n)
    for j in range(4):
        center = (2 * j + 1) * quarter / 2.0
        x = (s - center) / width
        mask = np.abs(x) < 0.5
        kappa[mask] += (np.pi / 2.0 / width) * (1.0 + np.cos(TWO_PI * x[mask]))
    # turning angle; cumulative trapezoid of the curvature profile
    tau = np.concatenate([[0.0], np.cumsum(kappa[:-1] + kappa[1:]) * ds / 2.0])
    tau += kappa[0] * ds / 2.0  # offset to chord midpoints
    pts = np.zeros((n, 2))
    pts[1:] = np.cumsum(np.column_stack([np.cos(tau), np.sin(tau)])[:-1] * ds, axis=0)
    pts -= pts.mean(axis=0)
    return Curve(pts)


def flat_segment(n: int = 256, span: float = 2.0) -> Curve:
    """Back-and-forth traversal of a straight segment on the x-axis.

    The image is contained in a line (a flat curve); the discrete chords
    all have equal length, so the sampling is arc-uniform.
    """
    if n % 2:
        raise ValueError("flat_segment needs even n")
    half = n // 2
    fwd = -span / 2.0 + span * np.arange(half + 1) / half
    back = fwd[-2:0:-1]
    x = np.concatenate([fwd, back])
    return Curve(np.column_stack([x, np.zeros(n)]))


def perturbed_circle(
    n: int = 256,
    amplitude: float = 0.12,
    modes=(2, 3, 5),
    seed: int = 0,
    radius: float = 1.0,
) -> Curve:
    """Circle with a seeded radial perturbation, resampled arc-uniformly."""
    rng = np.random.default_rng(seed)
    th = TWO_PI * np.arange(4 * n) / (4 * n)
    r = np.full_like(th, radius)
    for m in modes:
        phase = rng.uniform(0.0, TWO_PI)
        r += amplitude * radius * rng.uniform(0.3, 1.0) * np.cos(m * th + phase)
    pts = np.column_stack([r * np.cos(th), r * np.sin(th)])
    return resample_arclength(Curve(pts), n)


def make_canonical(name: str, n: int = 256, seed: int = 0, **kwargs) -> Curve:
    if name == "circle":
        return circle(n, **kwargs)
    if name == "ellipse":
        return ellipse(n, **kwargs)
    if name == "rounded_square":
        return rounded_square(n, **kwargs)
    if name == "flat_segment":
        return flat_segment(n, **kwargs)
    if name == "perturbed_circle":
        return perturbed_circle(n, seed=seed, **kwargs)
    raise ValueError(f"unknown curve name {name!r}; choose from {CANONICAL}")


def random_smooth_curve(
    rng: np.random.Generator,
    n: int = 256,
    n_modes: int = 5,
    amplitude: float = 0.15,
    dim: int = 2,
) -> Curve:
    """Random star-shaped smooth curve (dim=2) or perturbed ring (dim>2)."""
    th = TWO_PI * np.arange(4 * n) / (4 * n)
    if dim == 2:
        r = np.ones_like(th)
        for m in range(2, 2 + n_modes):
            amp = amplitude * rng.standard_normal() / m
            r += amp * np.cos(m * th + rng.uniform(0.0, TWO_PI))
        r = np.maximum(r, 0.2)
        pts = np.column_stack([r * np.cos(th), r * np.sin(th)])
    else:
        pts = np.zeros((th.size, dim))
        pts[:, 0] = np.cos(th)
        pts[:, 1] = np.sin(th)
        for k in range(dim):
            for m in range(2, 2 + n_modes):
                amp = amplitude * rng.standard_normal() / m
                pts[:, k] += amp * np.cos(m * th + rng.uniform(0.0, TWO_PI))
    return resample_arclength(Curve(pts), n)


def random_field(
    rng: np.random.Generator,
    c: Curve,
    band: int | None = None,
    decay: float = 1.0,
) -> np.ndarray:
    """Band-limited random field: Gaussian Fourier coefficients up to `band`.

    Coefficient scale falls off as (1+l)^-decay; band defaults to N/4 so
    quadrature error stays far below the inequality slacks.
    """
    n = c.n_samples
    if band is None:
        band = max(1, n // 4)
    band = min(band, n // 2 - 1)
    coeffs = np.zeros((n, c.dim), dtype=complex)
    coeffs[0] = rng.standard_normal(c.dim)
    for l in range(1, band + 1):
        scale = (1.0 + l) ** (-decay)
        z = scale * (rng.standard_normal(c.dim) + 1j * rng.standard_normal(c.dim))
        coeffs[l] = z / 2.0
        coeffs[-l] = np.conj(z) / 2.0
    return np.real(np.fft.ifft(coeffs * n, axis=0))
