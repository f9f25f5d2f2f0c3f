import numpy as np
import pytest

from ridgeframe import generators as gen
from ridgeframe.errors import (
    ConsistencyError,
    DomainError,
    InvalidInputError,
    InvalidParameterError,
)
from ridgeframe.ridge_radon import (
    Direction,
    GridField,
    default_s_grid,
    field_from_function,
    radon_direct,
    radon_slice,
    ridge_coefficient,
    ridge_inner,
    ridge_lift,
    slice_spectrum,
    weighted_generator,
)
from ridgeframe.spectral import SampledSignal, forward_ft
from ridgeframe.synthetic import random_field

# frozen two-route value: decayed Gaussian field, Meyer generator, u = (1,0)
GAUSS_MEYER_COEFF = -0.04771081620217417


def _gauss_field(n=256, s2=0.09):
    return field_from_function(lambda x, y: np.exp(-np.pi * (x**2 + y**2) / s2), n)


# ---------------------------------------------------------------------------
# types

def test_direction_normalization_and_rejection():
    u = Direction(np.array([3.0, 4.0]) / 5.0 * (1 + 5e-7))
    assert np.linalg.norm(u.coords) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(InvalidParameterError):
        Direction(np.array([1.0, 1.0]))
    with pytest.raises(InvalidParameterError):
        Direction(np.array([1.0, 0.0, 0.0, 0.0]))


def test_perp_basis_orthonormal():
    for coords in ([0.6, 0.8], [0.0, 0.0, 1.0], [0.48, -0.6, 0.64]):
        u = Direction(np.array(coords) / np.linalg.norm(coords))
        basis = u.perp_basis()
        for v in basis:
            assert abs(np.dot(v, u.coords)) < 1e-12
            assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
        if len(basis) == 2:
            assert abs(np.dot(basis[0], basis[1])) < 1e-12


def test_gridfield_invariants():
    with pytest.raises(InvalidInputError):
        GridField(np.zeros((8, 8)))  # too coarse
    with pytest.raises(InvalidInputError):
        GridField(np.zeros((32, 16)))  # unequal axes
    with pytest.raises(InvalidInputError):
        GridField(np.zeros((32, 32)), spacing=0.5)  # inconsistent spacing
    f = GridField(np.ones((32, 32)))
    assert f.spacing == pytest.approx(2.0 / 32)
    assert f.norm() == pytest.approx(2.0)  # sqrt(h^2 * 32^2) = sqrt(4)
    with pytest.raises(ValueError):
        f.values[0, 0] = 0.0


# ---------------------------------------------------------------------------
# ridge lifting

def test_ridge_lift_axis_aligned_constant_rows():
    lifted = ridge_lift(gen.GaborWindow(), Direction(np.array([1.0, 0.0])), 64)
    assert np.max(np.abs(lifted.values - lifted.values[:, :1])) == 0.0


def test_ridge_lift_constant_signal():
    ones = SampledSignal(np.ones(512), x0=-4.0, dx=8.0 / 512)
    lifted = ridge_lift(ones, Direction.from_angle(0.7), 32)
    assert np.max(np.abs(lifted.values - 1.0)) < 1e-12


def test_ridge_lift_linear_ridge():
    x0, dx, n = -4.0, 8.0 / 4096, 4096
    s = SampledSignal(x0 + dx * np.arange(n), x0, dx)
    u = Direction(np.array([1.0, 1.0]) / np.sqrt(2))
    lifted = ridge_lift(s, u, 64)
    axis = -1.0 + (2.0 / 64) * np.arange(64)
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    assert np.max(np.abs(lifted.values - (xx + yy) / np.sqrt(2))) < 1e-10


def test_ridge_lift_domain_error():
    short = SampledSignal(np.ones(64), x0=-0.5, dx=1.0 / 64)
    with pytest.raises(DomainError):
        ridge_lift(short, Direction.from_angle(0.3), 32)


def test_weighted_generator_contracts():
    with pytest.raises(InvalidParameterError):
        weighted_generator(gen.MeyerWavelet(), 1, grid=(-8.0, 1 / 64.0, 1024))
    # Meyer weighted spectrum keeps its support
    w = weighted_generator(gen.MeyerWavelet(), 2, grid=(-16.0, 1 / 64.0, 2048))
    sp = forward_ft(w)
    outside = np.abs(sp.frequencies) > 4.0 / 3.0 + 1e-9
    assert np.max(np.abs(sp.values[outside])) < 1e-10
    expected = (gen.meyer_psi_hat(sp.frequencies)
                * np.sqrt(np.abs(sp.frequencies)))
    assert np.max(np.abs(sp.values - expected)) < 1e-10


def test_weighted_generator_gaussian_n3():
    # quadrature oracle: D^1 of the Gaussian at the origin is
    # ∫|γ|e^{-πγ²}dγ = 1/π (the |γ| kink limits the grid rate to dγ²)
    from scipy.integrate import quad
    oracle = 2.0 * quad(lambda g: g * np.exp(-np.pi * g**2), 0, np.inf)[0]
    assert oracle == pytest.approx(1.0 / np.pi, abs=1e-12)
    x0, dx, n = -32.0, 1.0 / 64.0, 4096
    g = SampledSignal(np.exp(-np.pi * (x0 + dx * np.arange(n)) ** 2), x0, dx)
    w = weighted_generator(g, 3)
    i0 = int(np.argmin(np.abs(w.x)))
    assert w.samples[i0].real == pytest.approx(oracle, abs=1e-4)


# ---------------------------------------------------------------------------
# Radon transform

def test_radon_direct_gaussian_profile():
    s2 = 0.09
    f = _gauss_field(512, s2)
    for ang in (0.0, 0.35, 1.1):
        r = radon_direct(f, Direction.from_angle(ang))
        expected = np.sqrt(s2) * np.exp(-np.pi * r.x**2 / s2)
        assert np.max(np.abs(r.samples - expected)) < 1e-4


def test_radon_direct_disk_chord():
    # discontinuous integrand: the error peaks at the tangent offsets and
    # decays slowly with the grid, so this one runs on a fine field
    f = field_from_function(lambda x, y: (x**2 + y**2 <= 0.25).astype(float), 2048)
    r = radon_direct(f, Direction.from_angle(0.7))
    chord = np.where(np.abs(r.x) <= 0.5,
                     2.0 * np.sqrt(np.maximum(0.25 - r.x**2, 0.0)), 0.0)
    assert np.max(np.abs(r.samples - chord)) < 2e-2


def test_radon_zero_field():
    f = GridField(np.zeros((64, 64)))
    assert radon_direct(f, Direction.from_angle(0.3)).norm() == 0.0
    assert radon_slice(f, Direction.from_angle(0.3)).norm() == 0.0


def test_radon_slice_gaussian_profile():
    s2 = 0.09
    f = _gauss_field(256, s2)
    for ang in (0.0, 0.35):
        r = radon_slice(f, Direction.from_angle(ang))
        expected = np.sqrt(s2) * np.exp(-np.pi * r.x**2 / s2)
        assert np.max(np.abs(r.samples - expected)) < 1e-10


def test_radon_slice_matches_direct_on_random_fields():
    worst = 0.0
    for seed in range(6):
        bf = random_field(seed)
        f = bf.field(256)
        for j in range(4):
            u = Direction.from_angle(0.13 + 2 * np.pi * (4 * seed + j) / 24)
            a = radon_direct(f, u)
            b = radon_slice(f, u)
            worst = max(worst, float(np.linalg.norm(a.samples - b.samples)
                                     / np.linalg.norm(b.samples)))
    assert worst < 1e-3


def test_radon_slice_tensor_separability():
    # u = (1,0): R_u f(s) = f1(s) * integral of f2
    f = field_from_function(
        lambda x, y: np.exp(-np.pi * x**2 / 0.09) * np.exp(-np.pi * y**2 / 0.04), 256)
    r = radon_slice(f, Direction(np.array([1.0, 0.0])))
    expected = np.exp(-np.pi * r.x**2 / 0.09) * 0.2  # integral of the y factor
    assert np.max(np.abs(r.samples - expected)) < 1e-10


def test_fourier_slice_theorem_direct_vs_exact():
    worst = 0.0
    for seed in range(4):
        bf = random_field(30 + seed)
        f = bf.field(256)
        for j in range(4):
            u = Direction.from_angle(0.4 + 0.77 * j + 0.1 * seed)
            sp = forward_ft(radon_direct(f, u))
            oracle = bf.spectrum_at(sp.frequencies[:, None] * u.coords[None, :])
            worst = max(worst, float(np.linalg.norm(sp.values - oracle)
                                     / np.linalg.norm(oracle)))
    assert worst < 1e-3


def test_rotation_equivariance():
    # rotating the field and the direction together leaves the profile fixed
    s2x, s2y = 0.06, 0.11

    def rotated_field(theta):
        c, s = np.cos(theta), np.sin(theta)
        return field_from_function(
            lambda x, y: np.exp(-np.pi * ((c * x + s * y) ** 2 / s2x
                                          + (-s * x + c * y) ** 2 / s2y)), 256)

    base = radon_direct(rotated_field(0.0), Direction.from_angle(0.2))
    for theta in (np.pi / 12, np.pi / 6, np.pi / 4):
        rot = radon_direct(rotated_field(theta), Direction.from_angle(0.2 + theta))
        err = np.linalg.norm(rot.samples - base.samples) / np.linalg.norm(base.samples)
        assert err < 1e-3


def test_radon_linearity():
    f1 = random_field(41).field(128)
    f2 = random_field(42).field(128)
    a, b = 0.7 - 0.2j, 1.1 + 0.9j
    combo = GridField(a * f1.values + b * f2.values)
    u = Direction.from_angle(1.234)
    lhs = radon_slice(combo, u).samples
    rhs = a * radon_slice(f1, u).samples + b * radon_slice(f2, u).samples
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * np.max(np.abs(rhs))


# ---------------------------------------------------------------------------
# n = 3

def test_radon_direct_gaussian_3d():
    s2 = 0.09
    f = field_from_function(
        lambda x, y, z: np.exp(-np.pi * (x**2 + y**2 + z**2) / s2), 48, n=3)
    u = Direction(np.array([0.48, -0.6, 0.64]) / np.linalg.norm([0.48, -0.6, 0.64]))
    r = radon_direct(f, u)
    expected = s2 * np.exp(-np.pi * r.x**2 / s2)
    assert np.max(np.abs(r.samples - expected)) < 2e-3


def test_radon_slice_matches_direct_3d():
    # the slice route is exact; the trilinear oracle converges like h²
    bf = random_field(5, n=3, center_box=0.15)
    f = bf.field(48)
    u = Direction(np.array([2.0, -1.0, 2.0]) / 3.0)
    a = radon_direct(f, u)
    b = radon_slice(f, u)
    exact = bf.radon_profile(u, a.x)
    den = np.linalg.norm(exact)
    assert np.linalg.norm(b.samples - exact) < 1e-5 * den
    assert np.linalg.norm(a.samples - b.samples) < 2e-2 * den


# ---------------------------------------------------------------------------
# inner products

def test_ridge_inner_zero_field():
    f = GridField(np.zeros((64, 64)))
    assert ridge_inner(f, gen.MeyerWavelet(), Direction.from_angle(0.5)) == 0.0


def test_ridge_inner_gaussian_pair():
    s = 0.35
    f = _gauss_field(256, s * s)
    g = gen.GaborWindow(width=s, normalized=False)
    val = ridge_inner(f, g, Direction.from_angle(1.1))
    assert val.real == pytest.approx(s * s / np.sqrt(2.0), abs=1e-8)
    assert abs(val.imag) < 1e-12


def test_ridge_inner_debug_two_route():
    f = random_field(3).field(256)
    for ang in (0.35, 2.1):
        ridge_inner(f, gen.MeyerWavelet(), Direction.from_angle(ang), debug=True)


def test_ridge_inner_debug_detects_mismatch(monkeypatch):
    import ridgeframe.ridge_radon as rr
    f = random_field(3).field(256)
    u = Direction.from_angle(0.35)
    true_slice = rr.radon_slice

    def skewed(field, direction, s_grid=None):
        r = true_slice(field, direction, s_grid)
        return SampledSignal(1.001 * r.samples, r.x0, r.dx)

    monkeypatch.setattr(rr, "radon_slice", skewed)
    with pytest.raises(ConsistencyError):
        rr.ridge_inner(f, gen.MeyerWavelet(), u, debug=True)


def test_ridge_coefficient_zero_and_regression():
    zero = GridField(np.zeros((64, 64)))
    assert ridge_coefficient(zero, gen.MeyerWavelet(), Direction.from_angle(0.1)) == 0.0
    f = _gauss_field(256, 0.09)
    u = Direction(np.array([1.0, 0.0]))
    val = ridge_coefficient(f, gen.MeyerWavelet(), u)
    assert val == pytest.approx(GAUSS_MEYER_COEFF, abs=1e-12)


def test_ridge_coefficient_bracket_placements_agree():
    f = random_field(9).field(256)
    for ang in (0.9, 2.7):
        u = Direction.from_angle(ang)
        c1 = ridge_coefficient(f, gen.MeyerWavelet(), u)
        c2 = ridge_coefficient(f, gen.MeyerWavelet(), u, weight_on_generator=True)
        assert abs(c1 - c2) <= 1e-8 * max(abs(c1), 1e-300)


def test_ridge_coefficient_dimension_check():
    f = _gauss_field(64)
    with pytest.raises(InvalidParameterError):
        ridge_coefficient(f, gen.MeyerWavelet(), Direction.from_angle(0.2), n=3)


def test_slice_spectrum_matches_brute_sum():
    f = random_field(17).field(128)
    u = Direction.from_angle(0.9)
    eta = np.linspace(-3.0, 3.0, 7)
    vals = slice_spectrum(f, u, eta)
    axis = f.axis_points()
    xx, yy = np.meshgrid(axis, axis, indexing="ij")
    proj = (u.coords[0] * xx + u.coords[1] * yy).ravel()
    for i, e in enumerate(eta):
        brute = f.spacing**2 * np.sum(f.values.ravel()
                                      * np.exp(-2j * np.pi * e * proj))
        assert abs(vals[i] - brute) < 1e-11


def test_radon_slice_cache_returns_identical_values():
    f = random_field(23).field(128)
    u = Direction.from_angle(0.77)
    grid = default_s_grid(f)
    a = radon_slice(f, u, grid)
    b = radon_slice(f, u, grid)
    assert np.array_equal(a.samples, b.samples)
