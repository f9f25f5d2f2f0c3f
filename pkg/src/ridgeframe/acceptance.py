"""The acceptance suite: numerical certifications of the identities and
inequalities the library implements, with pinned tolerances.

Each criterion is a plain function returning a CriterionResult; the CLI
selftest and the pytest suite both run these.  Reports contain no wall
times, so re-runs with the same seed are byte-identical regardless of
thread count.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field as dc_field
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from . import decomposition as dec
from . import frames
from . import generators as gen
from . import sphere_net as net
from .ridge_radon import Direction, GridField, field_from_function, radon_direct, ridge_inner, ridge_lift
from .spectral import forward_ft
from .synthetic import random_band_signal, random_field

__all__ = ["CriterionResult", "CRITERIA", "run_criteria", "to_junit_xml",
           "QUICK_SET", "DETERMINISM_SET"]


@dataclass
class CriterionResult:
    name: str
    passed: bool
    details: dict = dc_field(default_factory=dict)

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        body = ", ".join(f"{k}={_fmt(v)}" for k, v in sorted(self.details.items()))
        return f"[{status}] {self.name}: {body}"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


# ---------------------------------------------------------------------------
# Shared fixtures (all seeded)

_FIELD_N = 256


def _slice_fixture_fields(count: int = 20):
    return [random_field(100 + s) for s in range(count)]


def _fixture_directions(count: int = 16):
    rng = np.random.default_rng(7)
    return [Direction.from_angle(t) for t in rng.uniform(0.0, 2.0 * np.pi, count)]


def _unit_gaussian_field(n_samples: int = _FIELD_N) -> GridField:
    f = field_from_function(
        lambda x, y: np.exp(-np.pi * (x**2 + y**2) / 0.09), n_samples)
    return GridField(f.values / f.norm())


def _benchmark_gaussian(n_samples: int = _FIELD_N) -> GridField:
    return field_from_function(
        lambda x, y: np.exp(-np.pi * ((x - 0.15) ** 2 + 1.3 * (y + 0.1) ** 2)
                            * 16.0), n_samples)


_SIGNAL_GRID = (-16.0, 1.0 / 64.0, 2048)


def _band_signals(count: int, seed0: int = 200):
    x0, dx, n = _SIGNAL_GRID
    return [random_band_signal(seed0 + s, x0, dx, n, band=(0.5, 2.0), localize=1.0)
            for s in range(count)]


# ---------------------------------------------------------------------------
# Criteria

def criterion_01_fourier_slice(quick: bool = False) -> CriterionResult:
    """Spectrum of the direct Radon transform against the exact field
    transform along the direction ray; rel L2 < 1e-3 per case."""
    fields = _slice_fixture_fields(5 if quick else 20)
    dirs = _fixture_directions(4 if quick else 16)
    worst = 0.0
    for bf in fields:
        f = bf.field(_FIELD_N)
        for u in dirs:
            rd = radon_direct(f, u)
            sp = forward_ft(rd)
            oracle = bf.spectrum_at(sp.frequencies[:, None] * u.coords[None, :])
            err = float(np.linalg.norm(sp.values - oracle)
                        / np.linalg.norm(oracle))
            worst = max(worst, err)
    return CriterionResult("c01_fourier_slice", worst < 1e-3,
                           {"max_rel_l2": worst, "tolerance": 1e-3,
                            "fields": len(fields), "directions": len(dirs)})


def criterion_02_radon_duality(quick: bool = False) -> CriterionResult:
    """<f, g_u> = <R_u f, g> with the Meyer generator; rel error < 1e-6."""
    fields = _slice_fixture_fields(5 if quick else 20)
    dirs = _fixture_directions(4 if quick else 16)
    g = gen.MeyerWavelet()
    worst = 0.0
    for bf in fields:
        f = bf.field(_FIELD_N)
        for u in dirs:
            one_d = ridge_inner(f, g, u)
            lifted = ridge_lift(g, u, f.samples_per_axis)
            n_d = f.inner(lifted)
            rel = abs(one_d - n_d) / max(abs(one_d), abs(n_d))
            worst = max(worst, rel)
    return CriterionResult("c02_radon_duality", worst < 1e-6,
                           {"max_rel": worst, "tolerance": 1e-6,
                            "fields": len(fields), "directions": len(dirs)})


def criterion_03_norm_identity(quick: bool = False) -> CriterionResult:
    """Direction quadrature of ||D^(1/2) R_u f||² on the unit Gaussian,
    64 directions; value within [1.98, 2.02]."""
    f = _unit_gaussian_field()
    value = dec.norm_identity_check(f, dec.uniform_circle(64))
    ok = 1.98 <= value <= 2.02
    return CriterionResult("c03_norm_identity", ok,
                           {"value": value, "low": 1.98, "high": 2.02})


def criterion_04_meyer_orthonormality(quick: bool = False) -> CriterionResult:
    """25-atom Gram matrix vs identity (<1e-5) and the dyadic partition of
    unity (<1e-10 on 1000 sampled frequencies)."""
    atoms = [gen.meyer_basis_element(k, m) for m in range(-2, 3)
             for k in range(-2, 3)]
    mat = np.stack([a.samples for a in atoms])
    gram = atoms[0].dx * (mat @ mat.conj().T)
    gram_err = float(np.max(np.abs(gram - np.eye(25))))
    m_half = 6
    gammas = np.geomspace(2.0 ** (-m_half + 2) / 3.0, 2.0 ** (m_half - 2), 1000)
    total = np.zeros_like(gammas)
    for m in range(-m_half, m_half + 1):
        total += np.abs(gen.meyer_psi_hat(2.0**m * gammas)) ** 2
    part_err = float(np.max(np.abs(total - 1.0)))
    ok = gram_err < 1e-5 and part_err < 1e-10
    return CriterionResult("c04_meyer_orthonormality", ok,
                           {"gram_max_err": gram_err, "gram_tol": 1e-5,
                            "partition_max_err": part_err, "partition_tol": 1e-10})


def criterion_05_bspline_suite(quick: bool = False) -> CriterionResult:
    """Complex B-spline identities at z = 3.5 + i."""
    z = 3.5 + 1.0j
    rng = np.random.default_rng(11)
    g = rng.uniform(-8.0, 8.0, 10_000)
    fact_err = float(np.max(np.abs(gen.complex_bspline_hat(z, g)
                                   - gen.complex_bspline_hat_factored(z, g))))
    ks = np.arange(-500, 501)
    period_err = 0.0
    for g0 in (0.137, 0.5, 0.871):
        s = float(np.sum(np.abs(gen.orthonormal_scaling_hat(z, g0 + ks)) ** 2))
        period_err = max(period_err, abs(s - 1.0))
    wavelet_zero = abs(gen.bspline_wavelet_hat(z, 0.0))
    spec = gen.ComplexBSplineWavelet(z)
    sig = gen.sample_generator(spec, x0=-64.0, dx=1.0 / 256.0, n=32768)
    sp = forward_ft(sig)
    shift = np.exp(-2j * np.pi * sp.frequencies)
    translate_inner = abs(complex(
        sp.dgamma * np.sum(sp.values * np.conj(sp.values * shift))))
    ok = (fact_err < 1e-12 and period_err < 1e-8
          and wavelet_zero < 1e-10 and translate_inner < 1e-6)
    return CriterionResult("c05_bspline_suite", ok,
                           {"factorization_err": fact_err,
                            "orthonormal_sum_err": period_err,
                            "wavelet_at_zero": wavelet_zero,
                            "translate_inner": translate_inner})


def criterion_06_gabor_tight_bound(quick: bool = False) -> CriterionResult:
    """Empirical Gabor frame ratio for the unit Gaussian within 3% of 1."""
    tests = _band_signals(30)
    est = frames.estimate_frame_bounds(
        frames.ContinuousGabor(gen.GaborWindow()), tests,
        "seeded band signals", seed=200)
    ok = abs(est.lower - 1.0) <= 0.03 and abs(est.upper - 1.0) <= 0.03
    return CriterionResult("c06_gabor_tight_bound", ok,
                           {"lower": est.lower, "upper": est.upper,
                            "target": 1.0, "rel_tol": 0.03,
                            "coverage_defect": est.coverage_defect})


def criterion_07_wavelet_resolution(quick: bool = False) -> CriterionResult:
    """Wavelet resolution identity for the Meyer mother within 2%."""
    x0, dx, n = _SIGNAL_GRID
    f = random_band_signal(207, x0, dx, n, band=(0.5, 2.0), localize=1.0)
    g = random_band_signal(208, x0, dx, n, band=(0.5, 2.0), localize=1.0)
    lhs, rhs = frames.wavelet_resolution_check(f, g, gen.MeyerWavelet())
    ratio = abs(lhs / rhs)
    ok = abs(ratio - 1.0) <= 0.02
    return CriterionResult("c07_wavelet_resolution", ok,
                           {"ratio": ratio, "rel_tol": 0.02,
                            "lhs_abs": abs(lhs), "rhs_abs": abs(rhs)})


def criterion_08_semidiscrete_roundtrip(quick: bool = False) -> CriterionResult:
    """Analyze/synthesize round trip on the benchmark Gaussian: < 5% at 64
    directions and strictly smaller at 128."""
    f = _benchmark_gaussian()
    sys = dec.build_meyer_system(f)
    fn2 = float(np.sum(np.abs(f.values) ** 2))

    def trip(count):
        rec = dec.synthesize(dec.analyze(f, sys, dec.uniform_circle(count)),
                             sys, f.samples_per_axis)
        return float(np.sqrt(np.sum(np.abs(rec.values - f.values) ** 2) / fn2))

    err64 = trip(64)
    err128 = trip(32 if quick else 128)
    ok = err64 < 0.05 and (quick or err128 < err64)
    details = {"err_64": err64, "tolerance": 0.05, "atoms": sys.atom_count(),
               "truncation_defect": sys.truncation_defect}
    details["err_32" if quick else "err_128"] = err128
    if not quick:
        details["refinement_decreases"] = err128 < err64
    return CriterionResult("c08_semidiscrete_roundtrip", ok, details)


def criterion_09_frame_inequality(quick: bool = False) -> CriterionResult:
    """Direction-integrated coefficient energy within [0.95, 1.05]·2||f||²
    for the orthonormal system (A = B = 1)."""
    f = _benchmark_gaussian()
    sys = dec.build_meyer_system(f)
    value, lower, upper = dec.frame_inequality_check(f, sys, dec.uniform_circle(64))
    ratio = value / (2.0 * f.norm() ** 2)
    ok = 0.95 <= ratio <= 1.05 and lower <= value
    return CriterionResult("c09_frame_inequality", ok,
                           {"ratio_to_2norm2": ratio, "low": 0.95, "high": 1.05,
                            "value": value, "a_norm2": lower, "b_norm2": upper})


def criterion_10_epsilon_nets(quick: bool = False) -> CriterionResult:
    """Multiscale circle nets for a0 = 2, k0 = 0, k <= 4: separation,
    covering, and cardinality bounds with C/c <= 16."""
    worst_ratio = 0.0
    all_ok = True
    sizes = []
    for k in range(0, 5):
        built = net.build_net(2, k, 2.0, 0)
        report = net.verify_net(built)
        card = net.verify_card_bounds(built)
        sizes.append(len(built))
        all_ok = all_ok and report.ok and card.passed
        worst_ratio = max(worst_ratio, card.ratio)
    return CriterionResult("c10_epsilon_nets", all_ok and worst_ratio <= 16.0,
                           {"worst_card_ratio": worst_ratio, "ratio_tol": 16.0,
                            "net_sizes": "/".join(str(s) for s in sizes)})


def criterion_11_discrete_system(quick: bool = False) -> CriterionResult:
    """Monte-Carlo frame interval of the discrete Meyer ridge system:
    positive lower ratio, finite upper, stable across two seed families."""
    system = net.build_discrete_system(gen.MeyerWavelet(), 2, 2.0, 0, 3, 0.5)
    per_seed = 8 if quick else 30

    def interval(seed0):
        ratios = []
        for s in range(per_seed):
            bf = random_field(seed0 + s, carrier_band=(0.8, 3.0))
            f = bf.field(128)
            ratios.append(net.discrete_frame_energy(f, system) / f.norm() ** 2)
        return min(ratios), max(ratios)

    lo1, hi1 = interval(300)
    lo2, hi2 = interval(400)
    stable = (abs(lo1 - lo2) <= 0.1 * max(lo1, lo2)
              and abs(hi1 - hi2) <= 0.1 * max(hi1, hi2))
    ok = (lo1 > 1e-3 * hi1 and math.isfinite(hi1)
          and lo2 > 1e-3 * hi2 and math.isfinite(hi2) and stable)
    return CriterionResult("c11_discrete_system", ok,
                           {"lower_a": lo1, "upper_a": hi1,
                            "lower_b": lo2, "upper_b": hi2,
                            "stable_within_10pct": stable,
                            "fields_per_seed": per_seed,
                            "prune_defect": system.prune_defect})


DETERMINISM_SET = ("c02", "c03", "c04", "c05", "c06", "c09", "c10")


def _tag(criterion) -> str:
    return "c" + criterion.__name__[10:12]


def criterion_12_determinism(quick: bool = False) -> CriterionResult:
    """Byte-identical reports across thread counts 1 and 2 for the
    deterministic sub-suite (fresh fixtures per pass)."""
    subset = [c for c in CRITERIA if _tag(c) in DETERMINISM_SET]
    if quick:
        subset = subset[:3]
    saved = os.environ.get("RIDGEFRAME_THREADS")
    blobs = []
    try:
        for threads in ("1", "2"):
            os.environ["RIDGEFRAME_THREADS"] = threads
            results = [c(quick=quick) for c in subset]
            blobs.append(to_junit_xml(results))
    finally:
        if saved is None:
            os.environ.pop("RIDGEFRAME_THREADS", None)
        else:
            os.environ["RIDGEFRAME_THREADS"] = saved
    identical = blobs[0] == blobs[1]
    return CriterionResult("c12_determinism", identical,
                           {"identical_reports": identical,
                            "criteria_covered": "/".join(_tag(c) for c in subset),
                            "report_bytes": len(blobs[0])})


CRITERIA = [
    criterion_01_fourier_slice,
    criterion_02_radon_duality,
    criterion_03_norm_identity,
    criterion_04_meyer_orthonormality,
    criterion_05_bspline_suite,
    criterion_06_gabor_tight_bound,
    criterion_07_wavelet_resolution,
    criterion_08_semidiscrete_roundtrip,
    criterion_09_frame_inequality,
    criterion_10_epsilon_nets,
    criterion_11_discrete_system,
    criterion_12_determinism,
]

QUICK_SET = ("c02", "c03", "c04", "c05", "c06", "c09", "c10", "c12")


def run_criteria(names=None, quick: bool = False, echo=print):
    """Run (a subset of) the acceptance criteria; returns CriterionResults.

    ``names`` filters by the cNN prefix; quick mode runs reduced fixture
    sizes on the slow criteria and the quick subset by default.
    """
    selected = []
    for c in CRITERIA:
        tag = _tag(c)
        if names is not None:
            if tag in names or c.__name__ in names:
                selected.append(c)
        elif quick:
            if tag in QUICK_SET:
                selected.append(c)
        else:
            selected.append(c)
    results = []
    for c in selected:
        result = c(quick=quick)
        results.append(result)
        if echo:
            echo(result.summary_line())
    return results


def to_junit_xml(results) -> bytes:
    """JUnit-style report; deliberately carries no timing attributes so the
    bytes are reproducible."""
    failures = sum(0 if r.passed else 1 for r in results)
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<testsuite name="ridgeframe-acceptance" tests="{len(results)}" '
             f'failures="{failures}">']
    for r in results:
        detail = json.dumps({k: _fmt(v) for k, v in sorted(r.details.items())},
                            sort_keys=True)
        lines.append(f"  <testcase name={quoteattr(r.name)}>")
        if not r.passed:
            lines.append(f"    <failure message={quoteattr(detail)}/>")
        lines.append(f"    <system-out>{escape(detail)}</system-out>")
        lines.append("  </testcase>")
    lines.append("</testsuite>")
    return ("\n".join(lines) + "\n").encode("utf-8")
