"""Fourier representation of deformation fields on arc-uniform curves.

Coefficients carry the 1/N factor, so coeff(0) is the field mean and
Parseval reads (1/L) * integral |h|^2 ds = sum_l |coeff(l)|^2.  Only even
sample counts are accepted (symmetric frequency range).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import ARC_UNIFORM_TOL, Curve, check_field

TWO_PI = 2.0 * np.pi

TRANSFER_VARIANTS = ("H", "Htilde")


class SpectralError(ValueError):
    """Spectral-space contract violation."""


@dataclass(frozen=True, eq=False)
class SpectralField:
    """DFT coefficients of a field along an arc-uniform host curve.

    coeffs is (N, n) complex in numpy fft order; freqs() gives the
    integer frequencies l = 0, 1, ..., N/2-1, -N/2, ..., -1.
    """

    coeffs: np.ndarray
    host_length: float
    n_samples: int

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim != 2 or coeffs.shape[0] != self.n_samples:
            raise SpectralError("coeffs must be (N, n) with N matching n_samples")
        if self.n_samples % 2:
            raise SpectralError("even sample count required")
        if not self.host_length > 0.0:
            raise SpectralError("host length must be positive")
        object.__setattr__(self, "coeffs", coeffs)

    def freqs(self) -> np.ndarray:
        return np.fft.fftfreq(self.n_samples, 1.0 / self.n_samples).astype(int)

    def hermitian_defect(self) -> float:
        """Max |coeff(-l) - conj(coeff(l))|; ~0 for real fields."""
        flipped = np.conj(self.coeffs[(-np.arange(self.n_samples)) % self.n_samples])
        return float(np.abs(self.coeffs - flipped).max())

    def power(self) -> float:
        """Total spectral power sum_l |coeff(l)|^2."""
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def tail_fraction(self, cutoff: int) -> float:
        """Fraction of power carried by frequencies |l| > cutoff."""
        mask = np.abs(self.freqs()) > cutoff
        total = self.power()
        if total == 0.0:
            return 0.0
        return float(np.sum(np.abs(self.coeffs[mask]) ** 2) / total)


def _require_compatible(a: SpectralField, b: SpectralField) -> None:
    if a.n_samples != b.n_samples:
        raise SpectralError("sample counts differ")
    if abs(a.host_length - b.host_length) > 1e-9 * max(a.host_length, b.host_length):
        raise SpectralError("host lengths differ")


def analyze(h: np.ndarray, c: Curve, tol: float = ARC_UNIFORM_TOL) -> SpectralField:
    """DFT of a field on an arc-uniform curve: coeff(l) = (1/N) sum h_i e^{-2pi i l i/N}."""
    h = check_field(h, c)
    if c.n_samples % 2:
        raise SpectralError("even sample count required")
    if not c.is_arc_uniform(tol):
        raise SpectralError("resample first: curve is not arc-uniform")
    coeffs = np.fft.fft(h, axis=0) / c.n_samples
    return SpectralField(coeffs, c.length, c.n_samples)


def synthesize(sf: SpectralField, require_real: bool = True) -> np.ndarray:
    """Inverse transform.  With require_real, checks the imaginary residue.

    The residue threshold is scale-relative with headroom for roundoff
    amplified by high-order derivative multipliers; genuinely asymmetric
    coefficients produce residues comparable to the signal itself.
    """
    values = np.fft.ifft(sf.coeffs * sf.n_samples, axis=0)
    if not require_real:
        return values
    scale = max(1.0, float(np.abs(values.real).max()))
    residue = float(np.abs(values.imag).max())
    if residue > 1e-8 * scale:
        raise SpectralError(
            f"asymmetric coefficients: imaginary residue {residue:.3e}"
        )
    return values.real


def frac_inner(hh: SpectralField, hk: SpectralField, alpha: float) -> float:
    """Fractional seminorm pairing sum_l (2 pi |l|)^{2 alpha} Re(h(l) . conj(k(l))).

    Independent of the host curve scale; vanishes on constant fields.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    _require_compatible(hh, hk)
    l = np.abs(hh.freqs()).astype(float)
    mult = np.zeros_like(l)
    nonzero = l > 0
    mult[nonzero] = (TWO_PI * l[nonzero]) ** (2.0 * alpha)
    pair = np.real(np.sum(hh.coeffs * np.conj(hk.coeffs), axis=1))
    return float(mult @ pair)


def transfer_multiplier(
    freqs: np.ndarray, lam: float, alpha: float, variant: str
) -> np.ndarray:
    """Frequency multiplier of the Sobolev inner product, per variant."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if variant not in TRANSFER_VARIANTS:
        raise ValueError(f"variant must be one of {TRANSFER_VARIANTS}")
    l = np.abs(np.asarray(freqs, dtype=float))
    if variant == "H":
        return 1.0 + lam * (TWO_PI * l) ** (2.0 * alpha)
    mult = lam * (TWO_PI * l) ** (2.0 * alpha)
    mult[l == 0] = 1.0  # zero frequency passes through unchanged
    return mult


def sobolev_transfer(
    g0: SpectralField, lam: float, alpha: float, variant: str = "H"
) -> SpectralField:
    """Convert an L2-type gradient into a Sobolev gradient in frequency space.

    H variant divides by 1 + lambda (2 pi l)^{2 alpha}; the tilde variant
    divides by lambda (2 pi l)^{2 alpha} for l != 0 and keeps coeff(0).
    """
    mult = transfer_multiplier(g0.freqs(), lam, alpha, variant)
    return SpectralField(g0.coeffs / mult[:, None], g0.host_length, g0.n_samples)


def spectral_derivative(sf: SpectralField, order: int = 1) -> SpectralField:
    """Arc-length derivative in frequency space: multiply by (2 pi i l / L)^order.

    For odd orders the Nyquist mode is zeroed so real fields stay real.
    """
    l = sf.freqs().astype(float)
    factor = (TWO_PI * 1j * l / sf.host_length) ** order
    if order % 2:
        factor[sf.n_samples // 2] = 0.0
    return SpectralField(sf.coeffs * factor[:, None], sf.host_length, sf.n_samples)
