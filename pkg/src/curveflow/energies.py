"""Energy functionals on curves, their H0 gradients and Sobolev gradients.

Gradients are exact Riesz representatives of the *discrete* energies:
grad_h0 returns the field G with (1/L) sum_i w_i <G_i, h_i> equal to the
directional derivative of evaluate() for every direction h, to rounding.
The classical closed-form gradients (tangent/normal expressions) are
recovered in the O(N^-2) limit and are exercised as oracles in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .curve import TWO_PI, Curve, CurveError, ds_derivative, resample_positions, to_arc_uniform
from .metrics import TRANSFERABLE, MetricError, MetricSpec, frequency_multiplier
from .spectral import SpectralField, analyze, synthesize

KINDS = ("length", "elastic", "center_of_mass", "std_dev", "avg_g")


@dataclass(frozen=True)
class EnergyKind:
    """Selects an energy functional.

    center_of_mass carries a target point; avg_g carries a scalar
    function g (vectorized over an (N, n) array of points) together with
    its gradient grad_g returning an (N, n) array.
    """

    tag: str
    target: tuple | None = None
    g: Callable | None = None
    grad_g: Callable | None = None

    def __post_init__(self):
        if self.tag not in KINDS:
            raise ValueError(f"unknown energy {self.tag!r}")
        if self.tag == "center_of_mass":
            if self.target is None or not np.all(np.isfinite(self.target)):
                raise ValueError("center_of_mass needs a finite target point")
            object.__setattr__(self, "target", tuple(float(x) for x in self.target))
        if self.tag == "avg_g" and (self.g is None or self.grad_g is None):
            raise ValueError("avg_g needs g and grad_g handles")


def length_energy() -> EnergyKind:
    return EnergyKind("length")


def elastic_energy() -> EnergyKind:
    return EnergyKind("elastic")


def center_of_mass_energy(target) -> EnergyKind:
    return EnergyKind("center_of_mass", target=tuple(target))


def std_dev_energy() -> EnergyKind:
    return EnergyKind("std_dev")


def average_energy(g: Callable, grad_g: Callable) -> EnergyKind:
    return EnergyKind("avg_g", g=g, grad_g=grad_g)


def energy_from_config(data) -> EnergyKind:
    """Build an energy from the CLI config shape, e.g.
    {"energy": "center_of_mass", "target": [0.0, 0.0]}.

    avg_g is library-only (it carries function handles)."""
    if isinstance(data, str):
        import json

        data = json.loads(data)
    tag = data["energy"]
    if tag == "center_of_mass":
        return center_of_mass_energy(tuple(data["target"]))
    if tag == "avg_g":
        raise ValueError("avg_g carries function handles and has no config form")
    return EnergyKind(tag)


def energy_to_config(kind: EnergyKind) -> dict:
    if kind.tag == "avg_g":
        raise ValueError("avg_g carries function handles and has no config form")
    data = {"energy": kind.tag}
    if kind.target is not None:
        data["target"] = list(kind.target)
    return data


def _arc_mean_point(c: Curve) -> np.ndarray:
    return c.weights @ c.points / c.length


def evaluate(kind: EnergyKind, c: Curve) -> float:
    """Value of the discrete energy on c."""
    if kind.tag == "length":
        return c.length
    if kind.tag == "elastic":
        k2 = ds_derivative(c.points, c, 2)
        return float(c.weights @ np.einsum("ij,ij->i", k2, k2))
    if kind.tag == "center_of_mass":
        m = _arc_mean_point(c)
        return 0.5 * float(np.sum((m - np.asarray(kind.target)) ** 2))
    if kind.tag == "std_dev":
        m = _arc_mean_point(c)
        d = c.points - m
        return float(c.weights @ np.einsum("ij,ij->i", d, d) / c.length)
    values = np.asarray(kind.g(c.points), dtype=float)
    if values.shape != (c.n_samples,):
        raise ValueError("g must map (N, n) points to N scalars")
    return float(c.weights @ values / c.length)


def _chord_grad_terms(c: Curve, gamma: np.ndarray) -> np.ndarray:
    """Gradient of sum_i gamma_i * l_i with respect to the points."""
    u = c.chords / c.chord_lengths[:, None]
    gu = gamma[:, None] * u
    return np.roll(gu, 1, axis=0) - gu


def _grad_points(kind: EnergyKind, c: Curve) -> np.ndarray:
    """Exact derivative of evaluate(kind, .) with respect to the sample points."""
    p = c.points
    w = c.weights
    total = c.length
    if kind.tag == "length":
        return _chord_grad_terms(c, np.ones(c.n_samples))
    if kind.tag == "center_of_mass":
        m = _arc_mean_point(c)
        diff = m - np.asarray(kind.target)
        mid = (p + np.roll(p, -1, axis=0)) / 2.0
        alpha = (mid - m) @ diff / total
        return w[:, None] * diff / total + _chord_grad_terms(c, alpha)
    if kind.tag == "std_dev":
        m = _arc_mean_point(c)
        d = p - m
        sq = np.einsum("ij,ij->i", d, d)
        energy = float(w @ sq / total)
        beta = ((sq + np.roll(sq, -1)) / 2.0 - energy) / total
        return 2.0 * w[:, None] * d / total + _chord_grad_terms(c, beta)
    if kind.tag == "avg_g":
        values = np.asarray(kind.g(p), dtype=float)
        grads = np.asarray(kind.grad_g(p), dtype=float)
        energy = float(w @ values / total)
        gamma = ((values + np.roll(values, -1)) / 2.0 - energy) / total
        return w[:, None] * grads / total + _chord_grad_terms(c, gamma)
    # elastic: reverse-mode through a = Dtheta(p)/s, k = Dtheta(a)/s,
    # E = sum |k|^2 w, with s and w functions of the chord lengths.
    n = c.n_samples
    dtheta = TWO_PI / n
    s = c.speeds

    def d_theta(x):
        return (np.roll(x, -1, axis=0) - np.roll(x, 1, axis=0)) / (2.0 * dtheta)

    a = d_theta(p) / s[:, None]
    k = d_theta(a) / s[:, None]
    q = 2.0 * w[:, None] * k
    r = -d_theta(q / s[:, None])
    grad = -d_theta(r / s[:, None])
    # scalar coefficients of ds_i and dw_i collected per chord length
    phi = -(np.einsum("ij,ij->i", q, k) + np.einsum("ij,ij->i", r, a)) / s
    chi = phi / dtheta + np.einsum("ij,ij->i", k, k)
    gamma = (chi + np.roll(chi, -1)) / 2.0
    return grad + _chord_grad_terms(c, gamma)


def grad_h0(kind: EnergyKind, c: Curve) -> np.ndarray:
    """H0 gradient: the field G with <G, h>_{H0} = dE[h] for every h."""
    if kind.tag == "elastic" and c.n_samples < 32:
        raise CurveError("elastic gradient needs at least 32 samples")
    return c.length * _grad_points(kind, c) / c.weights[:, None]


def _spec_transfer(spec: MetricSpec, sf: SpectralField) -> SpectralField:
    mult = frequency_multiplier(spec, sf.freqs(), sf.host_length)
    return SpectralField(sf.coeffs / mult[:, None], sf.host_length, sf.n_samples)


def grad_sobolev(kind: EnergyKind, c: Curve, spec: MetricSpec) -> np.ndarray:
    """Sobolev gradient via the frequency-domain transfer of grad_h0.

    Satisfies <grad_sobolev, h>_spec = <grad_h0, h>_{H0} for all h; exact
    on arc-uniform curves, up to interpolation error otherwise.
    """
    if spec.variant not in TRANSFERABLE:
        raise MetricError(f"unsupported transfer for variant {spec.variant!r}")
    g0 = grad_h0(kind, c)
    if c.is_arc_uniform() and c.n_samples % 2 == 0:
        return synthesize(_spec_transfer(spec, analyze(g0, c)))
    cu, g0u = to_arc_uniform(c, g0)
    gu = synthesize(_spec_transfer(spec, analyze(g0u, cu)))
    # interpolate back: the transferred field lives at the arc-uniform
    # parameter positions u_new, nonuniform in the original parameter
    u_new = resample_positions(c, c.n_samples)
    order = np.argsort(u_new)
    u_sorted = u_new[order]
    g_sorted = gu[order]
    u_ext = np.concatenate([u_sorted, [u_sorted[0] + TWO_PI]])
    g_ext = np.vstack([g_sorted, g_sorted[:1]])
    spline = CubicSpline(u_ext, g_ext, axis=0, bc_type="periodic")
    return spline(c.thetas)
