"""Analytic 1-D generator families with exact spectral evaluation.

Two concrete families are provided: the Meyer wavelet (compactly supported
spectrum, orthonormal dyadic basis) and complex B-splines with their
orthonormalized scaling function and wavelet.  A generator is described by
a :class:`GeneratorSpec`, whose ``spectrum`` method is the single source of
truth; time-domain samples are always produced by inverse transform of the
spectrum, never by recursion or interpolation of stored samples.

The module also hosts the wavelet admissibility integral and the checker
for the three multiscale setup conditions (integrability of |ĝ|²/|γ|^n,
positivity of the dyadic partial sums, and a power-law spectral envelope).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta

from .errors import (
    InvalidInputError,
    InvalidParameterError,
    NotAdmissibleError,
    ResolutionError,
    SingularEvaluationError,
)
from .spectral import SampledSignal, Spectrum, centered_frequencies, inverse_ft

__all__ = [
    "GeneratorSpec",
    "MeyerWavelet",
    "GaborWindow",
    "ComplexBSplineScaling",
    "ComplexBSplineWavelet",
    "TabulatedSpectrum",
    "SetupReport",
    "meyer_nu",
    "meyer_window",
    "meyer_psi_hat",
    "meyer_basis_element",
    "complex_bspline_hat",
    "complex_bspline_hat_factored",
    "autocorrelation_filter",
    "orthonormal_scaling_hat",
    "scaling_filter",
    "bspline_wavelet_hat",
    "admissibility_constant",
    "check_general_setup",
    "sample_generator",
    "generator_from_manifest",
]


# ---------------------------------------------------------------------------
# Meyer family

def meyer_nu(y):
    """Smooth sigmoid: 0 for y <= 0, 1 for y >= 1, degree-7 polynomial between.

    Satisfies nu(y) + nu(1-y) = 1 and is C^3 at both endpoints.
    """
    y = np.asarray(y, dtype=np.float64)
    core = y**4 * (35.0 - 84.0 * y + 70.0 * y**2 - 20.0 * y**3)
    out = np.where(y <= 0.0, 0.0, np.where(y >= 1.0, 1.0, core))
    return out if out.ndim else float(out)


def meyer_window(y, nu=meyer_nu):
    """Meyer spectral window: sine branch on [2π/3, 4π/3], cosine branch on
    [4π/3, 8π/3], zero elsewhere.

    The cosine branch uses the argument 3y/(4π) - 1, which makes the window
    continuous at 4π/3 (value 1) and at 8π/3 (value 0).
    """
    y = np.asarray(y, dtype=np.float64)
    third = 2.0 * np.pi / 3.0
    sine = np.sin(0.5 * np.pi * np.asarray(nu(3.0 * y / (2.0 * np.pi) - 1.0)))
    cosine = np.cos(0.5 * np.pi * np.asarray(nu(3.0 * y / (4.0 * np.pi) - 1.0)))
    out = np.where((y >= third) & (y <= 2 * third), sine, 0.0)
    out = np.where((y > 2 * third) & (y <= 4 * third), cosine, out)
    return out if out.ndim else float(out)


def meyer_psi_hat(gamma, nu=meyer_nu):
    """Spectrum of the Meyer wavelet: e^{-iπγ}·(w(2πγ) + w(-2πγ)).

    |ψ̂| is supported in 1/3 <= |γ| <= 4/3.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    w = meyer_window(2.0 * np.pi * gamma, nu) + meyer_window(-2.0 * np.pi * gamma, nu)
    out = np.exp(-1j * np.pi * gamma) * w
    return out if out.ndim else complex(out)


# ---------------------------------------------------------------------------
# Complex B-splines

def _omega(gamma):
    """Ω(γ) = (1 - e^{-2πiγ})/(2πiγ) = e^{-iπγ}·sinc(γ), with Ω(0) = 1."""
    gamma = np.asarray(gamma, dtype=np.float64)
    out = np.exp(-1j * np.pi * gamma) * np.sinc(gamma)
    # sinc(k) for integer k != 0 is sin(πk)/πk up to rounding; pin the zeros
    exact_zero = (gamma == np.round(gamma)) & (gamma != 0.0)
    if np.any(exact_zero):
        out = np.where(exact_zero, 0.0 + 0.0j, out)
    return out


def _require_bspline_z(z):
    z = complex(z)
    if not z.real > 1.0:
        raise InvalidParameterError(f"complex B-spline needs Re z > 1, got z={z}")
    return z


def complex_bspline_hat(z, gamma):
    """Spectrum of the complex B-spline: Ω(γ)^z on the principal log branch.

    Ω never meets the negative real axis, so the principal branch is
    globally consistent; zeros of Ω (nonzero integers) map to 0.
    """
    z = _require_bspline_z(z)
    gamma = np.asarray(gamma, dtype=np.float64)
    om = _omega(gamma)
    out = np.zeros(om.shape, dtype=np.complex128)
    nz = om != 0.0
    out[nz] = np.exp(z * np.log(om[nz]))
    return out if out.ndim else complex(out)


def complex_bspline_hat_factored(z, gamma):
    """Same spectrum via the modulation–damping factorization
    β̂_{Re z}(γ)·e^{i·Im z·ln|Ω|}·e^{-Im z·arg Ω}; cross-check route."""
    z = _require_bspline_z(z)
    gamma = np.asarray(gamma, dtype=np.float64)
    om = _omega(gamma)
    out = np.zeros(om.shape, dtype=np.complex128)
    nz = om != 0.0
    mag = np.abs(om[nz])
    arg = np.angle(om[nz])
    real_part = mag**z.real * np.exp(1j * z.real * arg)
    out[nz] = real_part * np.exp(1j * z.imag * np.log(mag)) * np.exp(-z.imag * arg)
    return out if out.ndim else complex(out)


def _autocorrelation_k(z, gamma_max, tail_tol):
    """Symmetric truncation radius with analytic tail below tail_tol."""
    a, b = z.real, z.imag
    # |β̂_z(γ+k)|² <= e^{2π|b|}(π|γ+k|)^{-2a}; integral-compare the tail.
    rhs = math.exp(2.0 * math.pi * abs(b)) * math.pi ** (-2.0 * a)
    rhs *= 2.0 / ((2.0 * a - 1.0) * tail_tol)
    j = 1.0 + rhs ** (1.0 / (2.0 * a - 1.0))
    return int(math.ceil(j + gamma_max + 2.0))


def autocorrelation_filter(z, gamma, tail_tol: float = 1e-12):
    """Periodized squared spectrum A_z(γ) = Σ_k |β̂_z(γ+k)|².

    Truncated symmetrically with the truncation radius chosen from the
    O(|k|^{-2 Re z}) tail estimate so the dropped tail is below tail_tol.
    """
    z = _require_bspline_z(z)
    if not tail_tol > 0:
        raise InvalidParameterError(f"tail_tol must be positive, got {tail_tol}")
    gamma = np.asarray(gamma, dtype=np.float64)
    g = np.atleast_1d(gamma - np.floor(gamma))  # A_z is 1-periodic
    k = _autocorrelation_k(z, 1.0, tail_tol)
    # For γ in (0,1): |β̂_z(γ+k)|² = (sin πγ/π)^{2a}·|γ+k|^{-2a}·e^{-2b·argΩ},
    # where argΩ(γ+k) is -πγ for k >= 0 and π-πγ for k < 0.  The |k|<=K
    # partial sums then telescope into Hurwitz-zeta differences.
    a, b = z.real, z.imag
    s = 2.0 * a
    total = np.ones(g.shape, dtype=np.float64)
    interior = g > 0.0
    if np.any(interior):
        q = g[interior]
        pos = zeta(s, q) - zeta(s, q + k + 1.0)       # k = 0..K
        neg = zeta(s, 1.0 - q) - zeta(s, 1.0 - q + k)  # k = -K..-1
        total[interior] = ((np.sin(np.pi * q) / np.pi) ** s
                           * np.exp(2.0 * b * np.pi * q)
                           * (pos + math.exp(-2.0 * math.pi * b) * neg))
    return total.reshape(np.shape(gamma)) if np.ndim(gamma) else float(total[0])


def orthonormal_scaling_hat(z, gamma, tail_tol: float = 1e-12):
    """Spectrum of the orthonormalized scaling function β̂_z/√A_z."""
    z = _require_bspline_z(z)
    num = complex_bspline_hat(z, gamma)
    return num / np.sqrt(autocorrelation_filter(z, gamma, tail_tol))


_SINGULAR_TOL = 1e-14


def scaling_filter(z, gamma, tail_tol: float = 1e-12):
    """Two-scale filter H_z at the requested argument (doubled internally):
    H_z(γ) = β̂_{z,⊥}(2γ)/β̂_{z,⊥}(γ)."""
    z = _require_bspline_z(z)
    gamma = np.asarray(gamma, dtype=np.float64)
    den = np.atleast_1d(orthonormal_scaling_hat(z, gamma, tail_tol))
    bad = np.abs(den) < _SINGULAR_TOL
    if np.any(bad):
        g = float(np.atleast_1d(gamma)[np.argmax(bad)])
        raise SingularEvaluationError(
            f"scaling filter denominator vanishes at gamma={g}", g)
    num = orthonormal_scaling_hat(z, 2.0 * gamma, tail_tol)
    out = num / den.reshape(np.shape(num))
    return out if np.ndim(gamma) else complex(np.atleast_1d(out)[0])


def _wavelet_hat_raw(z, gamma, tail_tol):
    """ψ̂_{z,⊥} by the ratio formula; only valid away from odd integers."""
    h_arg = 0.5 * (gamma + 1.0)
    h = orthonormal_scaling_hat(z, 2.0 * h_arg, tail_tol) / \
        orthonormal_scaling_hat(z, h_arg, tail_tol)
    return -np.exp(-1j * np.pi * gamma) * np.conj(h) * \
        orthonormal_scaling_hat(z, 0.5 * gamma, tail_tol)


def bspline_wavelet_hat(z, gamma, tail_tol: float = 1e-12):
    """Spectrum of the orthonormal B-spline wavelet
    -e^{-iπγ}·conj(H_z((γ+1)/2))·β̂_{z,⊥}(γ/2).

    The filter ratio has removable 0/0 singularities where (γ+1)/2 hits a
    nonzero integer (γ at odd integers other than -1); those points are
    evaluated by symmetric linear interpolation from just outside the
    cancellation window instead of raising.
    """
    z = _require_bspline_z(z)
    gamma = np.asarray(gamma, dtype=np.float64)
    flat = np.atleast_1d(gamma).astype(np.float64).ravel()
    # distance of (γ+1)/2 to its nearest nonzero integer
    h_arg = 0.5 * (flat + 1.0)
    nearest = np.round(h_arg)
    dist = np.abs(h_arg - nearest)
    delta = max(10.0 ** (-12.0 / z.real), 1e-8)
    bad = (dist < delta) & (nearest != 0.0)
    out = np.empty(flat.shape, dtype=np.complex128)
    good = ~bad
    if np.any(good):
        out[good] = _wavelet_hat_raw(z, flat[good], tail_tol)
    if np.any(bad):
        lo = _wavelet_hat_raw(z, flat[bad] - 2.0 * delta, tail_tol)
        hi = _wavelet_hat_raw(z, flat[bad] + 2.0 * delta, tail_tol)
        out[bad] = 0.5 * (lo + hi)
    out = out.reshape(np.shape(gamma)) if np.ndim(gamma) else out[0]
    return out if np.ndim(gamma) else complex(out)


# ---------------------------------------------------------------------------
# Generator specs

class GeneratorSpec:
    """Analytic descriptor of a 1-D generator.

    Subclasses implement ``spectrum`` (vectorized, deterministic) and
    report an effective spectral support used to size quadratures and
    sampling grids.
    """

    kind: str = "abstract"

    def spectrum(self, gamma):
        raise NotImplementedError

    def spectral_support(self) -> tuple[float, float] | None:
        """Exact support interval of the spectrum, or None if unbounded."""
        return None

    def spectral_knots(self) -> tuple[float, ...]:
        """Interior breakpoints where the spectrum is not smooth."""
        return ()

    def effective_support(self, tol: float = 1e-12) -> tuple[float, float]:
        """Interval outside which |spectrum| stays below tol."""
        sup = self.spectral_support()
        if sup is not None:
            return sup
        # generic outward scan on a dyadic ladder
        edge = 1.0
        while edge < 2.0**60:
            probe = np.array([-edge, -0.75 * edge, 0.75 * edge, edge])
            if np.all(np.abs(self.spectrum(probe)) < tol):
                return (-edge, edge)
            edge *= 2.0
        raise InvalidParameterError("spectrum does not decay below tol")

    def manifest(self) -> dict:
        return {"kind": self.kind, "params": {}}


@dataclass(frozen=True)
class MeyerWavelet(GeneratorSpec):
    """Classical Meyer wavelet; spectrum supported in 1/3 <= |γ| <= 4/3."""

    kind = "meyer"

    def spectrum(self, gamma):
        return meyer_psi_hat(gamma)

    def spectral_support(self):
        return (-4.0 / 3.0, 4.0 / 3.0)

    def spectral_knots(self):
        return (-4.0 / 3.0, -2.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0)

    def manifest(self):
        return {"kind": self.kind, "params": {}}


@dataclass(frozen=True)
class GaborWindow(GeneratorSpec):
    """Gaussian window e^{-πx²/width²}, optionally scaled to unit L² norm."""

    width: float = 1.0
    normalized: bool = True

    kind = "gabor_gaussian"

    def __post_init__(self):
        if not self.width > 0:
            raise InvalidParameterError(f"width must be positive, got {self.width}")

    def _amplitude(self) -> float:
        # ||e^{-πx²/w²}||² = w/√2
        return (2.0**0.25 / math.sqrt(self.width)) if self.normalized else 1.0

    def spectrum(self, gamma):
        gamma = np.asarray(gamma, dtype=np.float64)
        out = (self._amplitude() * self.width
               * np.exp(-np.pi * self.width**2 * gamma**2)).astype(np.complex128)
        return out if out.ndim else complex(out)

    def time_values(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = (self._amplitude() * np.exp(-np.pi * x**2 / self.width**2)
               ).astype(np.complex128)
        return out if out.ndim else complex(out)

    def effective_support(self, tol: float = 1e-12):
        edge = math.sqrt(math.log(max(self._amplitude() * self.width, 1.0) / tol)
                         / math.pi) / self.width
        return (-edge, edge)

    def manifest(self):
        return {"kind": self.kind,
                "params": {"width": self.width, "normalized": self.normalized}}


@dataclass(frozen=True)
class ComplexBSplineScaling(GeneratorSpec):
    """Complex B-spline β_z, Re z > 1."""

    z: complex

    kind = "cbspline_scaling"

    def __post_init__(self):
        object.__setattr__(self, "z", _require_bspline_z(self.z))

    def spectrum(self, gamma):
        return complex_bspline_hat(self.z, gamma)

    def effective_support(self, tol: float = 1e-12):
        # |β̂_z(γ)| <= e^{π|Im z|}(π|γ|)^{-Re z}
        edge = (math.exp(math.pi * abs(self.z.imag)) / tol) ** (1.0 / self.z.real) / math.pi
        return (-edge, edge)

    def manifest(self):
        return {"kind": self.kind, "z": [self.z.real, self.z.imag], "params": {}}


@dataclass(frozen=True)
class ComplexBSplineWavelet(GeneratorSpec):
    """Orthonormal wavelet built from the β_z multiresolution, Re z > 1."""

    z: complex
    tail_tol: float = 1e-12

    kind = "cbspline_wavelet"

    def __post_init__(self):
        object.__setattr__(self, "z", _require_bspline_z(self.z))

    def spectrum(self, gamma):
        return bspline_wavelet_hat(self.z, gamma, self.tail_tol)

    def effective_support(self, tol: float = 1e-12):
        # dominated by β̂_{z,⊥}(γ/2); A_z >= A_min > 0 absorbed into margin
        edge = 2.0 * (4.0 * math.exp(math.pi * abs(self.z.imag)) / tol) \
            ** (1.0 / self.z.real) / math.pi
        return (-edge, edge)

    def manifest(self):
        return {"kind": self.kind, "z": [self.z.real, self.z.imag],
                "params": {"tail_tol": self.tail_tol}}


@dataclass(frozen=True)
class TabulatedSpectrum(GeneratorSpec):
    """Piecewise-linear spectrum from tabulated (frequency, value) samples;
    zero outside the tabulated range."""

    frequencies: np.ndarray
    values: np.ndarray

    kind = "tabulated"

    def __post_init__(self):
        freqs = np.asarray(self.frequencies, dtype=np.float64)
        vals = np.asarray(self.values, dtype=np.complex128)
        if freqs.ndim != 1 or freqs.size < 2 or vals.shape != freqs.shape:
            raise InvalidInputError("need matching 1-D frequency/value tables")
        if np.any(np.diff(freqs) <= 0):
            raise InvalidInputError("frequency table must be strictly increasing")
        freqs.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "values", vals)

    def spectrum(self, gamma):
        gamma = np.asarray(gamma, dtype=np.float64)
        re = np.interp(gamma, self.frequencies, self.values.real, left=0.0, right=0.0)
        im = np.interp(gamma, self.frequencies, self.values.imag, left=0.0, right=0.0)
        out = re + 1j * im
        return out if out.ndim else complex(out)

    def spectral_support(self):
        return (float(self.frequencies[0]), float(self.frequencies[-1]))

    def spectral_knots(self):
        return tuple(float(f) for f in self.frequencies)

    def manifest(self):
        return {"kind": self.kind,
                "params": {"frequencies": self.frequencies.tolist(),
                           "values_re": self.values.real.tolist(),
                           "values_im": self.values.imag.tolist()}}


def band_spectrum(lo: float = 1.0, hi: float = 2.0, ramp: float = 1e-9,
                  two_sided: bool = True) -> TabulatedSpectrum:
    """Indicator-like spectrum, 1 on lo <= |γ| <= hi, with ramps of the given
    width at the edges."""
    knots = [lo - ramp, lo, hi, hi + ramp]
    vals = [0.0, 1.0, 1.0, 0.0]
    if two_sided:
        knots = [-k for k in knots[::-1]] + knots
        vals = vals[::-1] + vals
    return TabulatedSpectrum(np.array(knots), np.array(vals, dtype=complex))


def generator_from_manifest(manifest: dict) -> GeneratorSpec:
    """Rebuild a GeneratorSpec from its JSON manifest."""
    kind = manifest.get("kind")
    params = manifest.get("params", {}) or {}
    if kind == "meyer":
        return MeyerWavelet()
    if kind == "gabor_gaussian":
        return GaborWindow(**params)
    if kind in ("cbspline_scaling", "cbspline_wavelet"):
        zre, zim = manifest["z"]
        z = complex(zre, zim)
        if kind == "cbspline_scaling":
            return ComplexBSplineScaling(z)
        return ComplexBSplineWavelet(z, **params)
    if kind == "tabulated":
        return TabulatedSpectrum(
            np.asarray(params["frequencies"], dtype=float),
            np.asarray(params["values_re"], dtype=float)
            + 1j * np.asarray(params["values_im"], dtype=float))
    raise InvalidInputError(f"unknown generator kind {kind!r}")


# ---------------------------------------------------------------------------
# Sampling

def sample_generator(spec: GeneratorSpec, x0: float, dx: float, n: int) -> SampledSignal:
    """Sample a generator on a uniform grid by inverse transform of its
    spectrum evaluated on the conjugate frequency grid."""
    freqs = centered_frequencies(n, dx)
    gmax = float(np.max(np.abs(freqs)))
    sup = spec.spectral_support()
    if sup is not None and max(abs(sup[0]), abs(sup[1])) > gmax * (1 + 1e-12):
        raise ResolutionError(
            f"grid Nyquist {gmax:g} below spectral support "
            f"{max(abs(sup[0]), abs(sup[1])):g}")
    sp = Spectrum(spec.spectrum(freqs), freqs, origin=x0)
    return inverse_ft(sp)


def meyer_basis_element(k: int, m: int, x0: float = -64.0, dx: float = 1.0 / 128.0,
                        n: int = 16384) -> SampledSignal:
    """Samples of the dyadic Meyer atom 2^{-m/2}·ψ(2^{-m}x - k).

    The atom is synthesized from its analytic spectrum
    2^{m/2}·e^{-2πik·2^m·γ}·ψ̂(2^m γ) on the grid's frequency lattice.
    """
    freqs = centered_frequencies(n, dx)
    band_edge = 4.0 / 3.0 * 2.0 ** (-m)
    gmax = float(np.max(np.abs(freqs)))
    if band_edge > gmax * (1 + 1e-12):
        raise ResolutionError(
            f"scale m={m} needs Nyquist >= {band_edge:g}, grid has {gmax:g}")
    scaled = 2.0**m * freqs
    values = 2.0 ** (m / 2.0) * np.exp(-2j * np.pi * k * scaled) * meyer_psi_hat(scaled)
    return inverse_ft(Spectrum(values, freqs, origin=x0))


# ---------------------------------------------------------------------------
# Admissibility and the multiscale setup conditions

_GL_LO = np.polynomial.legendre.leggauss(10)
_GL_HI = np.polynomial.legendre.leggauss(21)


def _vec_quad(f, lo: float, hi: float, knots=(), rel_tol: float = 1e-11,
              abs_tol: float = 1e-15, max_depth: int = 30) -> float:
    """Adaptive Gauss–Legendre quadrature driven by vectorized evaluations.

    Panels whose 10- vs 21-node estimates disagree are bisected; all panel
    evaluations at a given depth happen in one call to f.
    """
    edges = sorted({lo, hi, *(k for k in knots if lo < k < hi)})
    panels = np.array([edges[:-1], edges[1:]], dtype=np.float64).T
    total = 0.0
    for _ in range(max_depth):
        if panels.size == 0:
            return total
        mid = 0.5 * (panels[:, 0] + panels[:, 1])
        half = 0.5 * (panels[:, 1] - panels[:, 0])
        x_lo = mid[:, None] + half[:, None] * _GL_LO[0]
        x_hi = mid[:, None] + half[:, None] * _GL_HI[0]
        f_lo = f(x_lo.ravel()).reshape(x_lo.shape)
        f_hi = f(x_hi.ravel()).reshape(x_hi.shape)
        est_lo = half * (f_lo * _GL_LO[1]).sum(axis=1)
        est_hi = half * (f_hi * _GL_HI[1]).sum(axis=1)
        err = np.abs(est_hi - est_lo)
        ok = err <= abs_tol + rel_tol * np.abs(est_hi)
        total += float(est_hi[ok].sum())
        bad = panels[~ok]
        mid_bad = 0.5 * (bad[:, 0] + bad[:, 1])
        panels = np.concatenate([
            np.stack([bad[:, 0], mid_bad], axis=1),
            np.stack([mid_bad, bad[:, 1]], axis=1),
        ]) if bad.size else bad
    return total + float(est_hi[~ok].sum())


def _weighted_spectral_integral(spec: GeneratorSpec, weight_exponent: float,
                                divergence_tol: float = 1e-12):
    """∫ |spectrum(γ)|²/|γ|^p dγ over dyadic shells, with divergence
    detection at the origin.  Returns the value or raises NotAdmissibleError."""
    knots = spec.spectral_knots()
    p = weight_exponent

    def integrand(g):
        return np.abs(spec.spectrum(g)) ** 2 / np.abs(g) ** p

    def shell(j):
        lo, hi = 2.0**j, 2.0 ** (j + 1)
        return (_vec_quad(integrand, lo, hi, knots)
                + _vec_quad(integrand, -hi, -lo, knots))

    total = 0.0
    # outward shells until three in a row are negligible
    quiet = 0
    for j in range(0, 64):
        c = shell(j)
        total += c
        quiet = quiet + 1 if c < 1e-15 * (1.0 + total) else 0
        if quiet >= 3:
            break
    # inward shells; contributions must die out, else the integral diverges
    recent = []
    for j in range(-1, -46, -1):
        c = shell(j)
        total += c
        recent.append(c)
        if len(recent) >= 4 and sum(recent[-4:]) < divergence_tol * (1.0 + total):
            return total
    tail = sum(recent[-5:])
    if tail > max(divergence_tol * 10, 1e-9 * (1.0 + total)):
        raise NotAdmissibleError(
            f"integrand shows no decay near γ=0 (last shells contribute {tail:.3e})")
    return total


def admissibility_constant(spec: GeneratorSpec) -> float:
    """Wavelet admissibility integral ∫ |ψ̂(γ)|²/|γ| dγ.

    Raises NotAdmissibleError when the integrand fails to decay near 0
    (spectrum bounded away from zero at the origin).
    """
    return _weighted_spectral_integral(spec, 1.0)


@dataclass(frozen=True)
class ConditionResult:
    holds: bool
    value: float


@dataclass(frozen=True)
class EnvelopeResult:
    holds: bool
    K: float
    alpha: float
    beta: float


@dataclass(frozen=True)
class SetupReport:
    """Outcome of the three multiscale setup conditions for a generator."""

    condition_i: ConditionResult
    condition_ii: ConditionResult
    condition_iii: EnvelopeResult
    a0: float
    n: int

    @property
    def ok(self) -> bool:
        return (self.condition_i.holds and self.condition_ii.holds
                and self.condition_iii.holds)


def _envelope_slope(spec: GeneratorSpec, lo: float, hi: float,
                    bins: int = 16, per_bin: int = 96):
    """Log-log slope of the two-sided envelope sup|ĝ| over [lo, hi].

    The envelope is taken as per-bin maxima over dense samples, so
    oscillating magnitudes (e.g. |sin|-type factors) fit their peaks rather
    than their dips.  Returns None if the spectrum is numerically zero.
    """
    edges = np.geomspace(lo, hi, bins + 1)
    centers, env = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        g = np.linspace(a, b, per_bin)
        peak = max(float(np.max(np.abs(spec.spectrum(g)))),
                   float(np.max(np.abs(spec.spectrum(-g)))))
        centers.append(math.sqrt(a * b))
        env.append(peak)
    centers, env = np.array(centers), np.array(env)
    keep = env > 1e-13
    if np.count_nonzero(keep) < 3:
        return None
    slope = np.polyfit(np.log(centers[keep]), np.log(env[keep]), 1)[0]
    return float(slope)


def check_general_setup(spec: GeneratorSpec, a0: float, n: int) -> SetupReport:
    """Check the three conditions a generator must satisfy before the
    multiscale ridge discretization: finiteness of ∫|ĝ|²/|γ|^n, positivity
    of the dyadic partial sums on 1 <= |γ| <= a0, and a certified power-law
    envelope K·|γ|^α·(1+|γ|)^{-β} with α > (n-1)/2, β > α + (n+3)/2.
    """
    if not a0 > 1:
        raise InvalidParameterError(f"a0 must exceed 1, got {a0}")
    if n < 2:
        raise InvalidParameterError(f"dimension must be >= 2, got {n}")

    # (i) weighted integrability
    try:
        val_i = _weighted_spectral_integral(spec, float(n))
        cond_i = ConditionResult(True, val_i)
    except NotAdmissibleError:
        cond_i = ConditionResult(False, math.inf)

    # (ii) infimum of the dyadic partial sums over 1 <= |γ| <= a0
    g = np.concatenate([np.linspace(1.0, a0, 401), -np.linspace(1.0, a0, 401)])
    sums = np.zeros_like(g)
    quiet = 0
    for k in range(0, 400):
        x = a0 ** (-k) * g
        term = np.abs(spec.spectrum(x)) ** 2 * np.abs(x) ** (-2.0 * (n - 1))
        sums += term
        if np.max(term) < 1e-15 * (1.0 + np.min(sums)):
            quiet += 1
            if quiet >= 8:
                break
        else:
            quiet = 0
    inf_ii = float(np.min(sums))
    cond_ii = ConditionResult(inf_ii > 1e-12, inf_ii)

    # (iii) power-law envelope witness
    s0 = _envelope_slope(spec, 1e-4, 1e-2)
    s_inf = _envelope_slope(spec, 1e2, 1e4)
    alpha_req = 0.5 * (n - 1)
    if s0 is None:
        alpha = alpha_req + 1.0
    else:
        alpha = s0 - max(1e-3 * abs(s0), 1e-6)
    if s_inf is None:
        beta = alpha + 0.5 * (n + 3) + 1.0
    else:
        beta = alpha - s_inf - max(1e-3 * abs(s_inf), 1e-6)
    probe = np.geomspace(1e-6, 1e6, 4001)
    probe = np.concatenate([-probe[::-1], probe])
    env = np.abs(spec.spectrum(probe))
    mask = env > 0.0
    with np.errstate(divide="ignore", over="ignore"):
        bound = np.abs(probe) ** alpha * (1.0 + np.abs(probe)) ** (-beta)
        ratios = env[mask] / bound[mask]
    k_fit = float(np.max(ratios)) if ratios.size else 0.0
    holds = bool(np.isfinite(k_fit) and alpha > alpha_req
                 and beta > alpha + 0.5 * (n + 3))
    cond_iii = EnvelopeResult(holds, k_fit, alpha, beta)

    return SetupReport(cond_i, cond_ii, cond_iii, float(a0), int(n))
