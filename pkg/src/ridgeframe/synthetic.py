"""Seeded synthetic fields and signals with closed-form oracles.

Fields are finite sums of (optionally modulated) Gaussian bumps, so their
continuous Fourier transform and Radon profiles have exact expressions:

    b(x)  = a·e^{2πi ξ·x}·e^{-π|x-c|²/s²}
    b̂(γ)  = a·s^n·e^{-2πi c·(γ-ξ)}·e^{-πs²|γ-ξ|²}
    R_u b = a·s^{n-1}·e^{2πi (t·(ξ·u) + c·ξ - (ξ·u)(c·u))}
              ·e^{-π((t-c·u)² + s⁴|ξ_⊥|²)/s²}   (general form used below)

which makes them independent oracles for the transform and Radon kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ridge_radon import Direction, GridField
from .spectral import SampledSignal, Spectrum, centered_frequencies, inverse_ft

__all__ = ["BumpField", "random_field", "random_band_signal"]


@dataclass(frozen=True)
class BumpField:
    """Sum of modulated Gaussian bumps with exact spectrum and Radon data."""

    amplitudes: np.ndarray   # complex (k,)
    centers: np.ndarray      # (k, n)
    widths: np.ndarray       # (k,)
    carriers: np.ndarray     # (k, n)

    @property
    def n(self) -> int:
        return self.centers.shape[1]

    def values_at(self, *coords) -> np.ndarray:
        out = np.zeros(np.broadcast(*coords).shape, dtype=np.complex128)
        for a, c, s, xi in zip(self.amplitudes, self.centers, self.widths,
                               self.carriers):
            r2 = sum((x - ci) ** 2 for x, ci in zip(coords, c))
            phase = sum(x * xij for x, xij in zip(coords, xi))
            out += a * np.exp(2j * np.pi * phase) * np.exp(-np.pi * r2 / s**2)
        return out

    def field(self, count: int) -> GridField:
        axis = -1.0 + (2.0 / count) * np.arange(count)
        grids = np.meshgrid(*([axis] * self.n), indexing="ij")
        return GridField(self.values_at(*grids))

    def spectrum_at(self, gammas: np.ndarray) -> np.ndarray:
        """Exact continuous transform at points gammas (shape (m, n))."""
        gammas = np.atleast_2d(gammas)
        out = np.zeros(gammas.shape[0], dtype=np.complex128)
        for a, c, s, xi in zip(self.amplitudes, self.centers, self.widths,
                               self.carriers):
            d = gammas - xi
            out += (a * s**self.n
                    * np.exp(-2j * np.pi * d @ c)
                    * np.exp(-np.pi * s**2 * np.sum(d**2, axis=1)))
        return out

    def radon_profile(self, u: Direction, t: np.ndarray) -> np.ndarray:
        """Exact Radon transform R_u f at offsets t."""
        uu = u.coords
        out = np.zeros(t.shape, dtype=np.complex128)
        for a, c, s, xi in zip(self.amplitudes, self.centers, self.widths,
                               self.carriers):
            xi_par = float(xi @ uu)
            xi_perp2 = float(xi @ xi) - xi_par**2
            c_par = float(c @ uu)
            phase_const = float(c @ xi) - xi_par * c_par
            out += (a * s ** (self.n - 1)
                    * np.exp(-np.pi * s**2 * xi_perp2)
                    * np.exp(2j * np.pi * (t * xi_par + phase_const))
                    * np.exp(-np.pi * (t - c_par) ** 2 / s**2))
        return out


def random_field(seed: int, n: int = 2, bumps: int = 6,
                 width_range: tuple[float, float] = (0.38, 0.46),
                 center_box: float = 0.22,
                 carrier_band: tuple[float, float] | None = None) -> BumpField:
    """Seeded random bump field; carrier_band=(lo,hi) modulates each bump
    with a random carrier of that radial frequency (None = no modulation)."""
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=bumps) + 1j * rng.normal(size=bumps)
    centers = rng.uniform(-center_box, center_box, size=(bumps, n))
    widths = rng.uniform(*width_range, size=bumps)
    if carrier_band is None:
        carriers = np.zeros((bumps, n))
    else:
        radii = rng.uniform(*carrier_band, size=bumps)
        dirs = rng.normal(size=(bumps, n))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        carriers = radii[:, None] * dirs
    return BumpField(amps, centers, widths, carriers)


def random_band_signal(seed: int, x0: float, dx: float, count: int,
                       band: tuple[float, float] = (0.5, 2.0),
                       localize: float = 4.0) -> SampledSignal:
    """Seeded random 1-D signal with spectrum confined to lo <= |γ| <= hi.

    The spectral profile is a smooth random combination tapered to zero at
    the band edges; ``localize`` applies a Gaussian time-domain scale by
    smoothing the spectrum with that correlation length.
    """
    rng = np.random.default_rng(seed)
    freqs = centered_frequencies(count, dx)
    lo, hi = band
    a = np.abs(freqs)
    taper = np.zeros_like(a)
    inside = (a >= lo) & (a <= hi)
    taper[inside] = np.sin(np.pi * (a[inside] - lo) / (hi - lo)) ** 2
    noise = rng.normal(size=count) + 1j * rng.normal(size=count)
    # correlate the noise over ~1/localize in frequency for time localization
    width = max(1, int(round(1.0 / (localize * (freqs[1] - freqs[0])))))
    kernel = np.exp(-0.5 * (np.arange(-3 * width, 3 * width + 1) / width) ** 2)
    smooth = np.convolve(noise, kernel / kernel.sum(), mode="same")
    sig = inverse_ft(Spectrum(smooth * taper, freqs, origin=x0))
    scale = sig.norm()
    return SampledSignal(sig.samples / scale, x0, dx)
