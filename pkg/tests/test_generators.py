import numpy as np
import pytest

from ridgeframe import generators as gen
from ridgeframe.errors import (
    InvalidParameterError,
    NotAdmissibleError,
    ResolutionError,
    SingularEvaluationError,
)
from ridgeframe.spectral import forward_ft

Z = 3.5 + 1.0j

# frozen from the brute-force doubling oracle (verified again below)
A_Z_HALF = 0.9829970648991987


# ---------------------------------------------------------------------------
# Meyer family

def test_nu_endpoints_and_midpoint():
    assert gen.meyer_nu(0.0) == 0.0
    assert gen.meyer_nu(1.0) == 1.0
    assert gen.meyer_nu(0.5) == pytest.approx(0.5, abs=1e-15)
    assert gen.meyer_nu(-3.0) == 0.0 and gen.meyer_nu(7.0) == 1.0


def test_nu_symmetry():
    y = np.linspace(-0.5, 1.5, 101)
    assert np.max(np.abs(gen.meyer_nu(y) + gen.meyer_nu(1 - y) - 1.0)) < 1e-14


def test_nu_smooth_at_junctions():
    # one-sided difference quotients vanish at both endpoints
    h = 1e-5
    assert abs(gen.meyer_nu(h) - gen.meyer_nu(0.0)) / h < 1e-10
    assert abs(gen.meyer_nu(1.0) - gen.meyer_nu(1.0 - h)) / h < 1e-10


def test_window_branch_values():
    third = 2.0 * np.pi / 3.0
    assert gen.meyer_window(third) == 0.0
    assert gen.meyer_window(2 * third) == pytest.approx(1.0, abs=1e-15)
    assert gen.meyer_window(-1.0) == 0.0
    assert gen.meyer_window(4 * third) == pytest.approx(0.0, abs=1e-15)


def test_window_continuity_across_branches():
    # both branch formulas agree where they meet and the window is continuous
    y0 = 4.0 * np.pi / 3.0
    eps = 1e-9
    assert abs(gen.meyer_window(y0 - eps) - gen.meyer_window(y0 + eps)) < 1e-7
    y1 = 8.0 * np.pi / 3.0
    assert abs(gen.meyer_window(y1 - eps) - gen.meyer_window(y1 + eps)) < 1e-7


def test_psi_hat_values_and_support():
    assert gen.meyer_psi_hat(0.0) == 0.0
    assert abs(gen.meyer_psi_hat(0.5)) == pytest.approx(np.sqrt(2) / 2, abs=1e-14)
    g = np.linspace(-3, 3, 1201)
    vals = np.abs(gen.meyer_psi_hat(g))
    outside = (np.abs(g) < 1.0 / 3.0 - 1e-9) | (np.abs(g) > 4.0 / 3.0 + 1e-9)
    assert np.max(vals[outside]) == 0.0
    assert np.max(np.abs(vals - np.abs(gen.meyer_psi_hat(-g)))) < 1e-14


def test_partition_of_unity():
    m_half = 6
    g = np.geomspace(2.0 ** (-m_half + 2) / 3.0, 2.0 ** (m_half - 2), 1000)
    total = np.zeros_like(g)
    for m in range(-m_half, m_half + 1):
        total += np.abs(gen.meyer_psi_hat(2.0**m * g)) ** 2
    assert np.max(np.abs(total - 1.0)) < 1e-10


def test_basis_element_identity_indices():
    e00 = gen.meyer_basis_element(0, 0, x0=-32.0, dx=1.0 / 128.0, n=8192)
    direct = gen.sample_generator(gen.MeyerWavelet(), x0=-32.0, dx=1.0 / 128.0, n=8192)
    assert np.max(np.abs(e00.samples - direct.samples)) < 1e-12


def test_basis_element_orthonormality_spotcheck():
    kwargs = dict(x0=-32.0, dx=1.0 / 128.0, n=8192)
    e00 = gen.meyer_basis_element(0, 0, **kwargs)
    e10 = gen.meyer_basis_element(1, 0, **kwargs)
    e01 = gen.meyer_basis_element(0, 1, **kwargs)
    assert abs(e00.inner(e10)) < 1e-6
    assert abs(e00.inner(e01)) < 1e-6
    for e in (e00, e10, e01):
        assert abs(e.norm() - 1.0) < 1e-6


def test_basis_element_nyquist_rejected():
    with pytest.raises(ResolutionError):
        gen.meyer_basis_element(0, -8, x0=-32.0, dx=1.0 / 128.0, n=8192)


# ---------------------------------------------------------------------------
# complex B-splines

def test_bspline_hat_at_zero_and_integers():
    for z in (2.0, 2.5, Z):
        assert gen.complex_bspline_hat(z, 0.0) == 1.0
    assert gen.complex_bspline_hat(2.0, 1.0) == 0.0
    assert gen.complex_bspline_hat(Z, -3.0) == 0.0


def test_bspline_requires_re_z_above_one():
    with pytest.raises(InvalidParameterError):
        gen.complex_bspline_hat(1.0, 0.5)
    with pytest.raises(InvalidParameterError):
        gen.ComplexBSplineScaling(0.5 + 2j)


@pytest.mark.parametrize("z", [2.5, 3.5 + 1j, 3.5 - 1j])
def test_bspline_factorization_routes_agree(z):
    rng = np.random.default_rng(1)
    g = rng.uniform(-8.0, 8.0, 10_000)
    a = gen.complex_bspline_hat(z, g)
    b = gen.complex_bspline_hat_factored(z, g)
    assert np.max(np.abs(a - b)) < 1e-12


def test_bspline_factored_matches_explicit_formula():
    g = 0.5
    om = np.exp(-1j * np.pi * g) * np.sinc(g)
    expected = (gen.complex_bspline_hat(3.5, g)
                * np.exp(1j * 1.0 * np.log(abs(om)))
                * np.exp(-1.0 * np.angle(om)))
    assert abs(gen.complex_bspline_hat(Z, g) - expected) < 1e-14


def test_autocorrelation_trivial_and_periodic():
    assert gen.autocorrelation_filter(2.0, 0.0) == 1.0
    g = np.linspace(-2.0, 2.0, 41)
    a0 = gen.autocorrelation_filter(Z, g)
    a1 = gen.autocorrelation_filter(Z, g + 1.0)
    assert np.max(np.abs(a1 - a0)) < 1e-12
    assert np.all(a0 > 0)


def test_autocorrelation_against_brute_force_oracle():
    def brute(z, g, k):
        ks = np.arange(-k, k + 1)
        return float(np.sum(np.abs(gen.complex_bspline_hat(z, g + ks)) ** 2))

    prev, k = brute(Z, 0.5, 64), 128
    while True:
        cur = brute(Z, 0.5, k)
        if abs(cur - prev) < 1e-14 * cur:
            break
        prev, k = cur, 2 * k
    val = gen.autocorrelation_filter(Z, 0.5, tail_tol=1e-12)
    assert abs(val - cur) < 1e-12
    assert val == pytest.approx(A_Z_HALF, abs=1e-12)  # regression constant


def test_autocorrelation_bad_tolerance():
    with pytest.raises(InvalidParameterError):
        gen.autocorrelation_filter(Z, 0.5, tail_tol=0.0)


def test_orthonormal_scaling_identities():
    assert gen.orthonormal_scaling_hat(Z, 0.0) == 1.0
    assert gen.orthonormal_scaling_hat(2.0, 1.0) == 0.0
    ks = np.arange(-500, 501)
    for g0 in (0.137, 0.5, 0.871):
        total = np.sum(np.abs(gen.orthonormal_scaling_hat(Z, g0 + ks)) ** 2)
        assert abs(total - 1.0) < 1e-8


def test_scaling_filter_values():
    assert gen.scaling_filter(Z, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert abs(gen.scaling_filter(2.0, 0.5)) < 1e-12


def test_scaling_filter_quadrature_mirror():
    g = np.linspace(0.003, 0.497, 200)
    q = (np.abs(gen.scaling_filter(Z, g)) ** 2
         + np.abs(gen.scaling_filter(Z, g + 0.5)) ** 2)
    assert np.max(np.abs(q - 1.0)) < 1e-8


def test_scaling_filter_singularity():
    with pytest.raises(SingularEvaluationError) as err:
        gen.scaling_filter(Z, 1.0)  # denominator vanishes at the integer
    assert err.value.gamma == 1.0


def test_wavelet_hat_zero_and_orthonormality():
    assert abs(gen.bspline_wavelet_hat(Z, 0.0)) < 1e-10
    spec = gen.ComplexBSplineWavelet(Z)
    sig = gen.sample_generator(spec, x0=-64.0, dx=1.0 / 256.0, n=32768)
    assert abs(sig.norm() - 1.0) < 1e-6
    sp = forward_ft(sig)
    shift = np.exp(-2j * np.pi * sp.frequencies)
    inner = sp.dgamma * np.sum(sp.values * np.conj(sp.values * shift))
    assert abs(inner) < 1e-6


def test_wavelet_hat_smooth_through_odd_integers():
    # the 0/0 filter singularity at odd integers is removable
    vals = gen.bspline_wavelet_hat(Z, np.array([3.0 - 1e-3, 3.0, 3.0 + 1e-3]))
    assert abs(vals[1] - 0.5 * (vals[0] + vals[2])) < 1e-4


def test_spectral_shift_asymmetry():
    g = np.linspace(1e-4, 64.0, 400_000)
    for z, sign in ((3.5 + 1j, 1.0), (3.5 - 1j, -1.0)):
        pos = np.sum(np.abs(gen.complex_bspline_hat(z, g)) ** 2)
        neg = np.sum(np.abs(gen.complex_bspline_hat(z, -g)) ** 2)
        assert sign * (pos - neg) > 0


def test_spectral_evaluators_are_pure():
    g = np.linspace(-5, 5, 101)
    for spec in (gen.MeyerWavelet(), gen.ComplexBSplineScaling(Z),
                 gen.ComplexBSplineWavelet(Z), gen.GaborWindow()):
        a = spec.spectrum(g)
        b = spec.spectrum(g)
        assert np.array_equal(a, b)


# ---------------------------------------------------------------------------
# admissibility

def test_admissibility_band_spectrum():
    c = gen.admissibility_constant(gen.band_spectrum(1.0, 2.0))
    assert c == pytest.approx(2.0 * np.log(2.0), abs=1e-6)


def test_admissibility_meyer():
    # the dyadic partition of unity forces the value 2 ln 2 exactly
    c = gen.admissibility_constant(gen.MeyerWavelet())
    assert c == pytest.approx(2.0 * np.log(2.0), abs=1e-8)


def test_admissibility_gaussian_diverges():
    with pytest.raises(NotAdmissibleError):
        gen.admissibility_constant(gen.GaborWindow())


# ---------------------------------------------------------------------------
# setup conditions

def test_setup_meyer_passes():
    rep = gen.check_general_setup(gen.MeyerWavelet(), 2.0, 2)
    assert rep.ok
    assert rep.condition_iii.alpha > 0.5
    assert rep.condition_iii.beta > rep.condition_iii.alpha + 2.5


def test_setup_gaussian_fails_condition_i():
    rep = gen.check_general_setup(gen.GaborWindow(), 2.0, 2)
    assert not rep.condition_i.holds
    assert not rep.ok


def test_setup_band_condition_ii_value():
    rep = gen.check_general_setup(gen.band_spectrum(1.0, 2.0), 2.0, 2)
    assert rep.condition_ii.holds
    assert rep.condition_ii.value >= 2.0 ** (-2 * (2 - 1))


def test_setup_bspline_wavelet_passes():
    rep = gen.check_general_setup(gen.ComplexBSplineWavelet(Z), 2.0, 2)
    assert rep.ok


def test_setup_parameter_validation():
    with pytest.raises(InvalidParameterError):
        gen.check_general_setup(gen.MeyerWavelet(), 1.0, 2)
    with pytest.raises(InvalidParameterError):
        gen.check_general_setup(gen.MeyerWavelet(), 2.0, 1)


# ---------------------------------------------------------------------------
# manifests

@pytest.mark.parametrize("spec", [
    gen.MeyerWavelet(),
    gen.GaborWindow(width=2.0, normalized=False),
    gen.ComplexBSplineScaling(Z),
    gen.ComplexBSplineWavelet(Z),
    gen.band_spectrum(1.0, 2.0),
])
def test_manifest_roundtrip(spec):
    clone = gen.generator_from_manifest(spec.manifest())
    g = np.linspace(-4, 4, 257)
    assert np.max(np.abs(clone.spectrum(g) - spec.spectrum(g))) < 1e-14
