"""Randomized verification of the analytic inequalities, with extremizers.

Every check is evaluated in a discretely rigorous form (frequency sums,
chord total variation), so the proven inequalities hold structurally and
the slack budget only absorbs floating-point rounding.  Random fields
are band-limited (band N/4) to keep quadrature error below the slacks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._util import parallel_map
from .curve import TWO_PI, Curve, mean_field
from .generators import circle, random_field, random_smooth_curve
from .metrics import MetricSpec, equivalence_bounds, linf_finsler, norm
from .spectral import analyze, spectral_derivative, synthesize

DEFAULT_SLACK = 1e-8

# Test-only hook: added to every margin before the pass check, so the
# harness can verify that corrupted slack is detected as a failure.
_SLACK_OFFSET = 0.0


@dataclass
class InequalityReport:
    name: str
    samples: int
    worst_margin: float
    extremizer_error: float
    passed: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "samples": self.samples,
            "worst_margin": self.worst_margin,
            "extremizer_error": self.extremizer_error,
            "passed": self.passed,
            "details": self.details,
        }


def _report(name, samples, margins, extremizer_error=float("nan"), slack=DEFAULT_SLACK, **details):
    worst = float(np.min(margins)) + _SLACK_OFFSET
    passed = worst >= -slack
    if np.isfinite(extremizer_error):
        passed = passed and abs(extremizer_error) <= details.get(
            "extremizer_tol", 1e-6
        )
    return InequalityReport(name, int(samples), worst, float(extremizer_error), bool(passed), details)


def _sample_pairs(rng, samples, n, curve_every=25, dim=2):
    c = None
    for i in range(samples):
        if i % curve_every == 0:
            c = random_smooth_curve(rng, n, dim=dim)
        yield c, random_field(rng, c)


def check_poincare_sup(samples: int = 1000, seed: int = 0, n: int = 256) -> InequalityReport:
    """sup |h - mean| <= (1/2) integral |h'| ds, with the mollified
    two-step extremizer family approaching the constant 1/2."""
    if samples < 100:
        raise ValueError("need at least 100 samples")
    rng = np.random.default_rng(seed)
    margins = np.empty(samples)
    for i, (c, h) in enumerate(_sample_pairs(rng, samples, n)):
        dev = np.linalg.norm(h - mean_field(h, c), axis=1).max()
        tv = np.linalg.norm(np.roll(h, -1, axis=0) - h, axis=1).sum()
        margins[i] = 0.5 * tv - dev
    # extremizer sweep on a fine grid
    host = circle(4096)
    total = host.length
    ratios = []
    eps_grid = [0.08, 0.04, 0.02, 0.01]
    for frac in eps_grid:
        eps = frac * total
        h = _two_step_bump(host, eps)
        dev = np.linalg.norm(h - mean_field(h, host), axis=1).max()
        tv = np.linalg.norm(np.roll(h, -1, axis=0) - h, axis=1).sum()
        ratios.append(dev / tv)
    ratios = np.array(ratios)
    return _report(
        "poincare_sup",
        samples,
        margins,
        extremizer_error=float(0.5 - ratios[-1]),
        extremizer_tol=0.05,
        ratios={f"{e:g}": float(r) for e, r in zip(eps_grid, ratios)},
        ratio_final=float(ratios[-1]),
    )


def _two_step_bump(c: Curve, eps: float) -> np.ndarray:
    """Mollified tent whose derivative is the two-step extremizer profile."""
    s = c.cumulative_length[:-1]
    x = s / eps
    smooth = lambda y: np.clip(y, 0.0, 1.0) ** 2 * (3.0 - 2.0 * np.clip(y, 0.0, 1.0))
    profile = np.where(x <= 1.0, smooth(x), smooth(2.0 - x))
    profile[x > 2.0] = 0.0
    h = np.zeros((c.n_samples, c.dim))
    h[:, 0] = eps * profile
    return h


def check_poincare_l2(j: int = 1, samples: int = 1000, seed: int = 0, n: int = 256) -> InequalityReport:
    """integral |h - mean|^2 <= (L/2pi)^{2j} integral |h^(j)|^2, achieved
    by the single-harmonic extremizers; includes the i < j chain form."""
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    rng = np.random.default_rng(seed)
    margins = np.empty(2 * samples)
    for i, (c, h) in enumerate(_sample_pairs(rng, samples, n)):
        w, total = c.weights, c.length
        sf = analyze(h, c)
        centered = h - mean_field(h, c)
        lhs = float(w @ np.einsum("ij,ij->i", centered, centered))
        hj = synthesize(spectral_derivative(sf, j))
        top = float(w @ np.einsum("ij,ij->i", hj, hj))
        rhs = (total / TWO_PI) ** (2 * j) * top
        margins[2 * i] = rhs - lhs
        if j >= 2:
            # chain form for 1 <= i < j on the mean-free derivative field
            h1 = synthesize(spectral_derivative(sf, 1))
            lhs_chain = float(w @ np.einsum("ij,ij->i", h1, h1))
            margins[2 * i + 1] = (total / TWO_PI) ** (2 * (j - 1)) * top - lhs_chain
        else:
            margins[2 * i + 1] = margins[2 * i]
    # extremizers: sine in one component, and the planar rotational field
    host = circle(256)
    s = host.cumulative_length[:-1]
    total = host.length
    errs = []
    for extremal in (
        np.column_stack([1.3 * np.sin(TWO_PI * s / total), np.zeros_like(s)]),
        np.column_stack([np.cos(TWO_PI * s / total), np.sin(TWO_PI * s / total)]),
    ):
        w = host.weights
        sf = analyze(extremal, host)
        centered = extremal - mean_field(extremal, host)
        lhs = float(w @ np.einsum("ij,ij->i", centered, centered))
        hj = synthesize(spectral_derivative(sf, j))
        rhs = (total / TWO_PI) ** (2 * j) * float(w @ np.einsum("ij,ij->i", hj, hj))
        errs.append(abs(rhs / lhs - 1.0))
    return _report(
        "poincare_l2_j%d" % j,
        samples,
        margins,
        extremizer_error=float(max(errs)),
        extremizer_tol=1e-8,
    )


def check_fundamental_h1(samples: int = 1000, seed: int = 0, n: int = 256, lam: float = 1.0) -> InequalityReport:
    """norm_{H1}(h) >= sqrt(lambda) * sum |d(h)| over the parameter."""
    rng = np.random.default_rng(seed)
    spec = MetricSpec.hj(1, lam)
    margins = np.empty(samples)
    for i, (c, h) in enumerate(_sample_pairs(rng, samples, n)):
        lhs = norm(spec, c, h)
        rhs = np.sqrt(lam) * np.linalg.norm(np.roll(h, -1, axis=0) - h, axis=1).sum()
        margins[i] = lhs - rhs
    return _report("fundamental_h1", samples, margins, lam=lam)


def check_norm_sandwich(samples: int = 500, seed: int = 0, n: int = 128) -> InequalityReport:
    """norm_tilde <= norm <= upper(j, lambda) * norm_tilde."""
    rng = np.random.default_rng(seed)
    margins = []
    for j in (1, 2):
        for lam in (0.25, 1.0):
            upper = equivalence_bounds(j, lam)[1]
            plain = MetricSpec.hj(j, lam)
            tilde = MetricSpec.hj_tilde(j, lam)
            for c, h in _sample_pairs(rng, samples, n):
                a = norm(tilde, c, h)
                b = norm(plain, c, h)
                margins.append(b - a)
                margins.append(upper * a - b)
    return _report("norm_sandwich", 4 * samples, np.array(margins), slack=1e-9)


def check_linf_bound(samples: int = 500, seed: int = 0, n: int = 128) -> InequalityReport:
    """F_inf(c, h) <= sqrt(2) * norm_{H1~, lambda=1/4}(h)."""
    rng = np.random.default_rng(seed)
    spec = MetricSpec.hj_tilde(1, 0.25)
    margins = np.empty(samples)
    for i, (c, h) in enumerate(_sample_pairs(rng, samples, n)):
        margins[i] = np.sqrt(2.0) * norm(spec, c, h) - linf_finsler(c, h)
    return _report("linf_bound", samples, margins, slack=1e-9)


def check_all(seed: int = 0, samples: int = 500) -> list[InequalityReport]:
    """Run every inequality check; aggregate for the verify command."""
    samples = max(samples, 100)
    jobs = [
        lambda: check_poincare_sup(samples, seed),
        lambda: check_poincare_l2(1, samples, seed + 1),
        lambda: check_poincare_l2(2, samples, seed + 2),
        lambda: check_fundamental_h1(samples, seed + 3),
        lambda: check_norm_sandwich(max(samples // 2, 50), seed + 4),
        lambda: check_linf_bound(samples, seed + 5),
    ]
    return parallel_map(lambda job: job(), jobs)
