"""Explicit gradient descent of curve energies under a chosen metric.

Flows are explicit Euler steps c <- c - dt * grad.  The adaptive policy
enforces the parabolic stability bound for H0 flows and backtracks on
energy increase; the fixed policy takes steps verbatim, so unstable
flows are allowed to express themselves (that is the point of the
ill-posedness probes).  Degenerate flows are recorded, not raised.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._util import parallel_map
from .curve import Curve, CurveError, resample_arclength, tangent_normal_curvature, unit_tangent
from .energies import EnergyKind, evaluate, grad_h0, grad_sobolev
from .metrics import TRANSFERABLE, MetricError, MetricSpec, norm
from .spectral import SpectralError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class FlowConfig:
    energy: EnergyKind
    metric: MetricSpec
    dt: float
    steps: int
    adaptive: bool = False
    cfl: float = 0.25
    normal_projection: bool = False
    conformal: bool = False
    resample_every: int = 10
    max_halvings: int = 30
    t_end: float | None = None

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.steps < 1:
            raise ValueError("steps must be at least 1")


@dataclass
class FlowTrajectory:
    times: list[float]
    curves: list[Curve]
    energies: list[float]
    step_norms: list[float]
    failure: str | None = None

    @property
    def degenerate(self) -> bool:
        return self.failure is not None

    def lengths(self) -> np.ndarray:
        return np.array([c.length for c in self.curves])

    def records(self):
        """One dict per recorded state (step 0 is the initial curve)."""
        out = []
        for i, (t, c, e) in enumerate(zip(self.times, self.curves, self.energies)):
            rec = {"step": i, "t": t, "length": c.length, "energy": e}
            rec["step_norm"] = self.step_norms[i - 1] if i > 0 else 0.0
            out.append(rec)
        return out


def _descent_field(cfg: FlowConfig, c: Curve) -> np.ndarray:
    if cfg.metric.variant == "H0":
        g = grad_h0(cfg.energy, c)
    elif cfg.metric.variant in TRANSFERABLE:
        g = grad_sobolev(cfg.energy, c, cfg.metric)
    else:
        raise MetricError(f"no gradient flow for metric {cfg.metric.variant!r}")
    if cfg.normal_projection:
        t = unit_tangent(c)
        g = g - np.einsum("ij,ij->i", g, t)[:, None] * t
    if cfg.conformal:
        g = g / c.length
    return g


def _cfl_dt(cfg: FlowConfig, c: Curve) -> float:
    if cfg.metric.variant != "H0":
        return cfg.dt
    bound = cfg.cfl * float(c.chord_lengths.min()) ** 2
    if not cfg.conformal:
        # the plain H0 length gradient carries an extra factor L
        bound /= c.length
    return min(cfg.dt, bound)


def run_flow(c0: Curve, cfg: FlowConfig) -> FlowTrajectory:
    """Explicit Euler descent; stops early when a curve invariant breaks."""
    c = c0
    t = 0.0
    traj = FlowTrajectory([0.0], [c0], [evaluate(cfg.energy, c0)], [])
    for step in range(cfg.steps):
        try:
            g = _descent_field(cfg, c)
        except (CurveError, SpectralError, FloatingPointError) as exc:
            # curves folding out of the spectral grid are a recorded
            # outcome, not an exception
            traj.failure = f"flow degenerate at step {step}: {exc}"
            break
        dt_k = _cfl_dt(cfg, c) if cfg.adaptive else cfg.dt
        if cfg.t_end is not None:
            dt_k = min(dt_k, cfg.t_end - t)
            if dt_k <= 0:
                break
        e_prev = traj.energies[-1]
        new_c = None
        halvings = 0
        while True:
            candidate = c.points - dt_k * g
            try:
                trial = Curve(candidate)
            except CurveError:
                trial = None
            if trial is not None:
                e_new = evaluate(cfg.energy, trial)
                if not cfg.adaptive or e_new <= e_prev + 1e-12:
                    new_c = trial
                    break
            if not cfg.adaptive or halvings >= cfg.max_halvings:
                break
            dt_k /= 2.0
            halvings += 1
        if new_c is None:
            traj.failure = f"flow degenerate at step {step}"
            break
        try:
            step_norm = norm(cfg.metric, c, new_c.points - c.points)
        except (MetricError, ValueError):
            step_norm = float(np.linalg.norm(new_c.points - c.points))
        t += dt_k
        c = new_c
        if cfg.resample_every and (step + 1) % cfg.resample_every == 0:
            c = resample_arclength(c, c.n_samples)
        traj.times.append(t)
        traj.curves.append(c)
        traj.energies.append(evaluate(cfg.energy, c))
        traj.step_norms.append(step_norm)
        if cfg.t_end is not None and t >= cfg.t_end - 1e-15:
            break
    return traj


@dataclass
class AmplificationReport:
    mode: int
    eps: float
    amplitudes: np.ndarray
    per_step_ratios: np.ndarray
    mean_ratio: float
    diverged: bool


def _mode_amplitude(delta: np.ndarray, base: Curve, mode: int) -> float:
    """Mode amplitude of the normal component of a trajectory difference.

    Projecting onto the base normal first matters: the normal field is
    itself frequency-1 content, so the ambient difference of a frequency-k
    normal perturbation lives at modes k +/- 1.
    """
    nrm = tangent_normal_curvature(base)[1]
    normal_part = np.einsum("ij,ij->i", delta, nrm)
    coeffs = np.fft.fft(normal_part) / normal_part.size
    return float(
        np.sqrt(np.abs(coeffs[mode]) ** 2 + np.abs(coeffs[-mode]) ** 2)
    )


def stability_probe(
    c0: Curve, cfg: FlowConfig, mode_k: int, eps: float | None = None
) -> AmplificationReport:
    """Growth of a frequency-k normal perturbation along a short flow.

    Runs the flow for c0 and for c0 plus eps*cos(k theta)*N, with fixed
    dt and no internal resampling, and tracks the mode-k amplitude of
    the trajectory difference.  Divergence is reported, not raised.
    """
    if mode_k < 2:
        raise ValueError("mode_k must be at least 2")
    if c0.dim != 2:
        raise CurveError("stability probes are planar")
    if eps is None:
        eps = 1e-3 * c0.length
    probe_cfg = replace(cfg, adaptive=False, resample_every=0, t_end=None)
    nrm = tangent_normal_curvature(c0)[1]
    pert = Curve(c0.points + eps * np.cos(mode_k * c0.thetas)[:, None] * nrm)
    base = run_flow(c0, probe_cfg)
    moved = run_flow(pert, probe_cfg)
    steps = min(len(base.curves), len(moved.curves))
    amps = np.array(
        [
            _mode_amplitude(
                moved.curves[m].points - base.curves[m].points,
                base.curves[m],
                mode_k,
            )
            for m in range(steps)
        ]
    )
    diverged = base.degenerate or moved.degenerate or not np.all(np.isfinite(amps))
    valid = amps[np.isfinite(amps) & (amps > 0)]
    ratios = valid[1:] / valid[:-1] if valid.size > 1 else np.array([np.inf])
    mean_ratio = (
        float((valid[-1] / valid[0]) ** (1.0 / (valid.size - 1)))
        if valid.size > 1
        else float("inf")
    )
    return AmplificationReport(mode_k, eps, amps, ratios, mean_ratio, diverged)


def stability_sweep(
    c0: Curve, cfg: FlowConfig, modes, eps: float | None = None
) -> dict[int, AmplificationReport]:
    """stability_probe across a sweep of modes (parallel when configured)."""
    reports = parallel_map(lambda k: stability_probe(c0, cfg, k, eps), list(modes))
    return {rep.mode: rep for rep in reports}
