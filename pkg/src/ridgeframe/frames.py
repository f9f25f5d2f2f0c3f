"""Frame-system descriptors, Gabor/wavelet atoms and resolution identities,
dual-pair construction, and sampling-based frame-bound estimation.

Continuous systems carry their truncated quadrature (uniform (a,b) cells
for Gabor; log-uniform |a| of both signs times uniform b for wavelets,
matching the measure da db/a²).  Frame bounds are estimated as min/max
Rayleigh quotients over a family of test signals; they are empirical
estimates, not certified bounds.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import (
    CoverageError,
    DomainError,
    InvalidInputError,
    InvalidParameterError,
    PerpendicularWindowsError,
)
from .generators import GeneratorSpec, admissibility_constant
from .spectral import SampledSignal, Spectrum, centered_frequencies, forward_ft, inverse_ft

__all__ = [
    "gabor_atom",
    "wavelet_atom",
    "gabor_resolution_check",
    "wavelet_resolution_check",
    "make_dual_gabor_pair",
    "estimate_frame_bounds",
    "GaborQuadrature",
    "WaveletQuadrature",
    "ContinuousGabor",
    "ContinuousWavelet",
    "DiscreteWaveletGrid",
    "DiscreteCustom",
    "BoundsEstimate",
]


# ---------------------------------------------------------------------------
# Atoms

def _window_spectrum(g, freqs: np.ndarray) -> np.ndarray:
    """Spectrum of a window at the requested frequencies.

    GeneratorSpecs evaluate analytically; sampled windows on the matching
    grid reuse their FFT, otherwise the transform sum is evaluated directly
    at the requested points (the windows are short, so this stays cheap).
    """
    if isinstance(g, GeneratorSpec):
        return np.asarray(g.spectrum(freqs))
    sp = forward_ft(g)
    if sp.frequencies.shape == freqs.shape and np.allclose(
            sp.frequencies, freqs, rtol=0.0, atol=1e-9 * abs(freqs[1] - freqs[0])):
        return sp.values
    x = g.x
    out = np.zeros(freqs.size, dtype=np.complex128)
    # the sampled window defines nothing beyond its own Nyquist; evaluating
    # the transform sum there would alias back to the low frequencies
    inside = np.flatnonzero(np.abs(freqs) <= 0.5 / g.dx)
    block = max(1, 4_000_000 // max(x.size, 1))
    for i in range(0, inside.size, block):
        idx = inside[i:i + block]
        out[idx] = np.exp(-2j * np.pi * np.outer(freqs[idx], x)) @ g.samples
    return g.dx * out


def _check_support(samples: np.ndarray, center: float, grid, what: str):
    """Reject atoms whose center left the grid or whose edge mass is heavy.

    Spectral sampling wraps translations periodically, so an escaped atom
    reappears inside the grid; the center test catches that, the edge test
    catches atoms merely leaking over the boundary.
    """
    x0, dx, count = grid
    if not x0 <= center <= x0 + dx * (count - 1):
        raise DomainError(f"{what} centered at {center:g} lies outside the grid")
    peak = float(np.max(np.abs(samples)))
    edge = float(max(np.max(np.abs(samples[:4])), np.max(np.abs(samples[-4:]))))
    if peak > 0 and edge > 1e-2 * peak:
        raise DomainError(
            f"{what} escapes the grid (edge/peak = {edge / peak:.2e})")


def gabor_atom(g, a: float, b: float, grid) -> SampledSignal:
    """Time-frequency atom E_b T_a g sampled on the grid
    (modulation applied after translation)."""
    x0, dx, count = grid
    freqs = centered_frequencies(count, dx)
    shifted = _window_spectrum(g, freqs - b) * np.exp(-2j * np.pi * a * (freqs - b))
    atom = inverse_ft(Spectrum(shifted, freqs, origin=x0))
    _check_support(atom.samples, a, grid, "translated window")
    return atom


def wavelet_atom(psi, a: float, b: float, grid) -> SampledSignal:
    """Wavelet atom D_a T_b ψ = |a|^{1/2}·ψ(a·x - b) sampled on the grid."""
    if a == 0:
        raise InvalidParameterError("scale a must be nonzero")
    x0, dx, count = grid
    freqs = centered_frequencies(count, dx)
    vals = (abs(a) ** -0.5 * np.exp(-2j * np.pi * b * freqs / a)
            * _window_spectrum(psi, freqs / a))
    atom = inverse_ft(Spectrum(vals, freqs, origin=x0))
    _check_support(atom.samples, b / a, grid, "scaled atom")
    return atom


# ---------------------------------------------------------------------------
# Quadratures over the continuous parameter sets

@dataclass(frozen=True)
class GaborQuadrature:
    """Midpoint rule on uniform (a,b) cells over [-a_max,a_max]x[-b_max,b_max]."""

    a_max: float = 6.0
    b_max: float = 6.0
    na: int = 64
    nb: int = 64

    @property
    def a_nodes(self) -> np.ndarray:
        da = 2.0 * self.a_max / self.na
        return -self.a_max + da * (np.arange(self.na) + 0.5)

    @property
    def b_nodes(self) -> np.ndarray:
        db = 2.0 * self.b_max / self.nb
        return -self.b_max + db * (np.arange(self.nb) + 0.5)

    @property
    def cell(self) -> float:
        return (2.0 * self.a_max / self.na) * (2.0 * self.b_max / self.nb)


@dataclass(frozen=True)
class WaveletQuadrature:
    """Log-uniform |a| (both signs) times uniform b.

    Atoms are D_a T_b ψ = |a|^{1/2}ψ(ax-b); under this parametrization the
    scale measure making the wavelet system a tight frame with bound C_ψ is
    da/|a| (equivalent to the conventional da/a² for |a|^{-1/2}ψ((x-b)/a)
    atoms), so the per-node weight is Δln|a|·Δb.
    """

    a_min: float = 1.0 / 16.0
    a_max: float = 16.0
    na: int = 64
    b_max: float = 8.0
    nb: int = 128

    def scale_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """(a values over both signs, measure weights Δln|a|)."""
        dln = np.log(self.a_max / self.a_min) / self.na
        mags = self.a_min * np.exp(dln * (np.arange(self.na) + 0.5))
        a = np.concatenate([mags, -mags])
        w = np.full(a.shape, dln)
        return a, w

    @property
    def b_nodes(self) -> np.ndarray:
        db = 2.0 * self.b_max / self.nb
        return -self.b_max + db * (np.arange(self.nb) + 0.5)

    @property
    def db(self) -> float:
        return 2.0 * self.b_max / self.nb


def _gabor_coefficients(f: SampledSignal, g, quad: GaborQuadrature) -> np.ndarray:
    """V(a,b) = ⟨f, E_b T_a g⟩ on the quadrature nodes, shape (na, nb)."""
    x = f.x
    mod = np.exp(-2j * np.pi * np.outer(x, quad.b_nodes))  # conj(e^{2πibx})
    sp = forward_ft(f) if not isinstance(f, Spectrum) else f
    freqs = sp.frequencies
    gs = _window_spectrum(g, freqs)
    out = np.empty((quad.na, quad.nb), dtype=np.complex128)
    for i, a in enumerate(quad.a_nodes):
        shifted = inverse_ft(Spectrum(gs * np.exp(-2j * np.pi * a * freqs),
                                      freqs, origin=f.x0))
        w = f.samples * np.conj(shifted.samples)
        out[i] = f.dx * (w @ mod)
    return out


def _wavelet_coefficients(f: SampledSignal, psi, quad: WaveletQuadrature):
    """W(a,b) = ⟨f, D_a T_b ψ⟩ on the nodes; returns (W, a_weights)."""
    sp = forward_ft(f)
    freqs = sp.frequencies
    a_vals, a_w = quad.scale_nodes()
    b = quad.b_nodes
    out = np.empty((a_vals.size, b.size), dtype=np.complex128)
    for i, a in enumerate(a_vals):
        atom_spec = abs(a) ** -0.5 * np.conj(_window_spectrum(psi, freqs / a))
        weighted = sp.values * atom_spec
        keep = np.abs(weighted) > 1e-300
        ph = np.exp(2j * np.pi * np.outer(b, freqs[keep] / a))
        out[i] = sp.dgamma * (ph @ weighted[keep])
    return out, a_w


def _ring_mass_ratio(coeff2: np.ndarray) -> float:
    """Mass fraction of |coeff|² on the outermost quadrature ring."""
    total = float(coeff2.sum())
    if total == 0.0:
        return 0.0
    inner = float(coeff2[1:-1, 1:-1].sum())
    return (total - inner) / total


# ---------------------------------------------------------------------------
# Resolution identities

def gabor_resolution_check(f1, f2, g1, g2, quadrature: GaborQuadrature | None = None):
    """Double quadrature of ⟨f1,E_bT_ag1⟩·conj(⟨f2,E_bT_ag2⟩) against the
    product ⟨f1,f2⟩⟨g2,g1⟩; returns (lhs, rhs)."""
    quad = quadrature or GaborQuadrature()
    v1 = _gabor_coefficients(f1, g1, quad)
    v2 = _gabor_coefficients(f2, g2, quad)
    prod = v1 * np.conj(v2)
    ring = _ring_mass_ratio(np.abs(v1) ** 2 + np.abs(v2) ** 2)
    if ring > 1e-6:
        raise CoverageError(
            f"(a,b) window too small: boundary ring holds {ring:.2e} of the mass")
    lhs = complex(prod.sum() * quad.cell)
    grid = (f1.x0, f1.dx, f1.length)
    g1s = g1 if isinstance(g1, SampledSignal) else _sample_window(g1, grid)
    g2s = g2 if isinstance(g2, SampledSignal) else _sample_window(g2, grid)
    rhs = f1.inner(f2) * g2s.inner(g1s)
    return lhs, rhs


def wavelet_resolution_check(f, g, psi, quadrature: WaveletQuadrature | None = None):
    """Quadrature of the wavelet double integral with measure da db/a²
    against C_ψ·⟨f,g⟩; returns (lhs, rhs)."""
    quad = quadrature or WaveletQuadrature()
    c_psi = admissibility_constant(psi)  # raises NotAdmissibleError if divergent
    wf, a_w = _wavelet_coefficients(f, psi, quad)
    wg, _ = _wavelet_coefficients(g, psi, quad)
    lhs = complex(((wf * np.conj(wg)).sum(axis=1) * quad.db * a_w).sum())
    rhs = c_psi * f.inner(g)
    return lhs, rhs


def _sample_window(g: GeneratorSpec, grid) -> SampledSignal:
    x0, dx, count = grid
    freqs = centered_frequencies(count, dx)
    return inverse_ft(Spectrum(g.spectrum(freqs), freqs, origin=x0))


# ---------------------------------------------------------------------------
# Frame systems

@dataclass(frozen=True)
class ContinuousGabor:
    """Gabor system {E_b T_a g} over R² with Lebesgue measure (truncated)."""

    window: object
    quadrature: GaborQuadrature = dc_field(default_factory=GaborQuadrature)

    kind = "continuous_gabor"

    def frame_sum(self, f: SampledSignal) -> tuple[float, float]:
        v2 = np.abs(_gabor_coefficients(f, self.window, self.quadrature)) ** 2
        return float(v2.sum() * self.quadrature.cell), _ring_mass_ratio(v2)


@dataclass(frozen=True)
class ContinuousWavelet:
    """Wavelet system {D_a T_b ψ}, a ≠ 0, with Haar measure da db/a²."""

    mother: GeneratorSpec
    quadrature: WaveletQuadrature = dc_field(default_factory=WaveletQuadrature)

    kind = "continuous_wavelet"

    def frame_sum(self, f: SampledSignal) -> tuple[float, float]:
        w, a_w = _wavelet_coefficients(f, self.mother, self.quadrature)
        w2 = np.abs(w) ** 2
        return float((w2.sum(axis=1) * self.quadrature.db * a_w).sum()), \
            _ring_mass_ratio(w2)


@dataclass(frozen=True)
class DiscreteWaveletGrid:
    """Discrete wavelet system {D_{a0^k} T_{ℓb} ψ} over finite index ranges."""

    mother: GeneratorSpec
    a0: float
    k_range: tuple[int, int]
    b: float
    l_range: tuple[int, int]

    kind = "discrete_wavelet_grid"

    def __post_init__(self):
        if not self.a0 > 1:
            raise InvalidParameterError(f"a0 must exceed 1, got {self.a0}")
        if not self.b > 0:
            raise InvalidParameterError(f"b must be positive, got {self.b}")
        if self.k_range[1] < self.k_range[0] or self.l_range[1] < self.l_range[0]:
            raise InvalidInputError("index ranges must be nonempty")

    def frame_sum(self, f: SampledSignal) -> tuple[float, float]:
        sp = forward_ft(f)
        freqs = sp.frequencies
        ells = np.arange(self.l_range[0], self.l_range[1] + 1)
        total = 0.0
        for k in range(self.k_range[0], self.k_range[1] + 1):
            a = self.a0**k
            atom_spec = abs(a) ** -0.5 * np.conj(self.mother.spectrum(freqs / a))
            weighted = sp.values * atom_spec
            keep = np.abs(weighted) > 1e-300
            ph = np.exp(2j * np.pi * np.outer(ells * self.b, freqs[keep] / a))
            coeffs = sp.dgamma * (ph @ weighted[keep])
            total += float(np.sum(np.abs(coeffs) ** 2))
        return total, 0.0


@dataclass(frozen=True)
class DiscreteCustom:
    """Finite list of explicit generators with counting measure."""

    generators: tuple

    kind = "discrete_custom"

    def __post_init__(self):
        if len(self.generators) == 0:
            raise InvalidInputError("need at least one generator")
        object.__setattr__(self, "generators", tuple(self.generators))

    def frame_sum(self, f: SampledSignal) -> tuple[float, float]:
        total = 0.0
        for g in self.generators:
            total += abs(f.inner(g)) ** 2
        return total, 0.0


def make_dual_gabor_pair(g1, g2, grid=None):
    """Dual pair of continuous Gabor frames from two non-perpendicular
    windows; the dual generator is g2 scaled by 1/⟨g1,g2⟩."""
    if isinstance(g1, GeneratorSpec) or isinstance(g2, GeneratorSpec):
        if grid is None:
            raise InvalidParameterError("grid required for GeneratorSpec windows")
        g1 = g1 if isinstance(g1, SampledSignal) else _sample_window(g1, grid)
        g2 = g2 if isinstance(g2, SampledSignal) else _sample_window(g2, grid)
    overlap = g1.inner(g2)
    if abs(overlap) <= 1e-10:
        raise PerpendicularWindowsError(
            f"windows are perpendicular (|<g1,g2>| = {abs(overlap):.2e})")
    dual_window = SampledSignal(g2.samples / np.conj(overlap), g2.x0, g2.dx)
    return ContinuousGabor(g1), ContinuousGabor(dual_window)


# ---------------------------------------------------------------------------
# Empirical frame bounds

@dataclass(frozen=True)
class BoundsEstimate:
    """Empirical (sampling-based) frame-bound estimates."""

    lower: float
    upper: float
    trials: int
    test_family: str
    seed: int | None = None
    coverage_defect: float = 0.0

    def __post_init__(self):
        if self.lower > self.upper:
            raise InvalidInputError("lower bound exceeds upper bound")

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "trials": self.trials,
                "seed": self.seed if self.seed is not None else 0,
                "coverage_defect": self.coverage_defect}


def estimate_frame_bounds(sys, tests, test_family: str = "user-supplied",
                          seed: int | None = None,
                          min_trials: int = 30) -> BoundsEstimate:
    """Min/max of (frame sum)/||f||² over the test family.

    ``sys`` is any object exposing frame_sum(f) -> (value, coverage_defect);
    degenerate tests (zero norm) are skipped with a warning.
    """
    ratios = []
    defect = 0.0
    for f in tests:
        nrm = f.norm()
        if nrm == 0.0:
            warnings.warn("skipping zero-norm test function", stacklevel=2)
            continue
        out = sys.frame_sum(f)
        value, cov = out if isinstance(out, tuple) else (out, 0.0)
        ratios.append(value / nrm**2)
        defect = max(defect, cov)
    if not ratios:
        raise InvalidInputError("all test functions were degenerate")
    if len(ratios) < min_trials:
        raise InvalidInputError(
            f"need at least {min_trials} usable test functions, got {len(ratios)}")
    return BoundsEstimate(lower=float(min(ratios)), upper=float(max(ratios)),
                          trials=len(ratios), test_family=test_family,
                          seed=seed, coverage_defect=defect)
