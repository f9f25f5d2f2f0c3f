import numpy as np
import pytest

from ridgeframe import decomposition as dec
from ridgeframe import frames as fr
from ridgeframe import generators as gen
from ridgeframe.errors import CoverageError, InvalidInputError
from ridgeframe.ridge_radon import Direction, GridField, field_from_function, ridge_lift
from ridgeframe.spectral import frac_diff
from ridgeframe.synthetic import random_field


@pytest.fixture(scope="module")
def meyer_system(benchmark_field):
    return dec.build_meyer_system(benchmark_field)


@pytest.fixture(scope="module")
def table64(benchmark_field, meyer_system):
    return dec.analyze(benchmark_field, meyer_system, dec.uniform_circle(64))


# ---------------------------------------------------------------------------
# direction sets

def test_uniform_circle_weights():
    d = dec.uniform_circle(64)
    assert len(d) == 64
    assert d.weights.sum() == pytest.approx(2 * np.pi, abs=1e-12)


def test_fibonacci_sphere_weights():
    d = dec.fibonacci_sphere_directions(100)
    assert len(d) == 100
    assert d.weights.sum() == pytest.approx(4 * np.pi, abs=1e-12)
    for u in d.directions:
        assert np.linalg.norm(u.coords) == pytest.approx(1.0, abs=1e-12)


def test_direction_set_validation():
    dirs = dec.uniform_circle(8).directions
    with pytest.raises(InvalidInputError):
        dec.DirectionSet(dirs, np.full(8, 1.0))  # wrong total measure
    with pytest.raises(InvalidInputError):
        dec.DirectionSet(dirs, np.full(7, 2 * np.pi / 8))


# ---------------------------------------------------------------------------
# system construction

def test_meyer_system_covers_field_band(benchmark_field, meyer_system):
    assert meyer_system.truncation_defect < 1e-5
    # scale bands must cover the field's weighted energy band
    assert min(meyer_system.scales) <= -4
    assert max(meyer_system.scales) >= 3
    for m in meyer_system.scales:
        lo, hi = meyer_system.k_ranges[m]
        assert lo == -hi and hi >= 12


def test_analyze_zero_field(meyer_system):
    zero = GridField(np.zeros((256, 256)))
    table = dec.analyze(zero, meyer_system, dec.uniform_circle(8))
    assert np.all(table.coeffs == 0.0)


def test_analyze_linearity(meyer_system):
    f1 = random_field(61).field(256)
    f2 = random_field(62).field(256)
    a, b = 0.8 - 0.3j, -1.1 + 0.5j
    dirs = dec.uniform_circle(8)
    t1 = dec.analyze(f1, meyer_system, dirs)
    t2 = dec.analyze(f2, meyer_system, dirs)
    combo = dec.analyze(GridField(a * f1.values + b * f2.values),
                        meyer_system, dirs)
    expected = a * t1.coeffs + b * t2.coeffs
    scale = np.max(np.abs(expected))
    assert np.max(np.abs(combo.coeffs - expected)) < 1e-10 * scale


def test_analyze_matches_direct_nd_inner_products(benchmark_field, meyer_system,
                                                  table64):
    # two-route oracle: lift the weighted atom and take the grid inner
    # product; candidates are limited to atoms the [-32,32] rendering grid
    # can hold without periodization and to non-negligible coefficients
    rng = np.random.default_rng(5)
    energies = np.sum(np.abs(table64.coeffs) ** 2, axis=1)
    fits = np.array([2.0**m * (abs(k) + 14.0) <= 31.0
                     for k, m in table64.atom_keys])
    order = [i for i in np.argsort(energies) if fits[i]]
    picks = rng.choice(order[-40:], 10, replace=False)
    for idx in picks:
        k, m = table64.atom_keys[idx]
        j = int(rng.integers(0, 64))
        atom = gen.meyer_basis_element(k, m, x0=-32.0, dx=1.0 / 2048.0, n=131072)
        weighted = frac_diff(atom, 0.5)
        lifted = ridge_lift(weighted, table64.direction_set.directions[j], 256)
        direct = benchmark_field.inner(lifted)
        tabulated = table64.coeffs[idx, j]
        assert abs(direct - tabulated) <= 1e-6 * abs(tabulated)


def test_self_coefficient_dominance(meyer_system):
    # a windowed weighted ridge atom is analyzed back onto itself
    key = (0, 0)
    u0_index = 5
    dirs = dec.uniform_circle(16)
    atom = gen.meyer_basis_element(*key, x0=-32.0, dx=1.0 / 2048.0, n=131072)
    weighted = frac_diff(atom, 0.5)
    lifted = ridge_lift(weighted, dirs.directions[u0_index], 256)
    window = field_from_function(
        lambda x, y: np.exp(-np.pi * (x**2 + y**2) / 0.4), 256)
    f = GridField(lifted.values * window.values)
    table = dec.analyze(f, meyer_system, dirs)
    column = np.abs(table.coeffs[:, u0_index])
    assert table.atom_keys[int(np.argmax(column))] == key


# ---------------------------------------------------------------------------
# synthesis

def test_synthesize_zero_table(meyer_system):
    dirs = dec.uniform_circle(8)
    zero = dec.CoefficientTable(
        tuple(meyer_system.atom_keys()),
        np.zeros((meyer_system.atom_count(), 8), dtype=complex),
        dirs, frame_ref=meyer_system.kind)
    rec = dec.synthesize(zero, meyer_system, 64)
    assert rec.norm() == 0.0


def test_synthesize_rejects_mismatched_system(table64, benchmark_field):
    other = dec.build_meyer_system(benchmark_field, translation_margin=20.0)
    with pytest.raises(InvalidInputError):
        dec.synthesize(table64, other, 256)


def test_round_trip_and_direction_refinement(benchmark_field, meyer_system):
    fn2 = float(np.sum(np.abs(benchmark_field.values) ** 2))

    def trip(count):
        table = dec.analyze(benchmark_field, meyer_system,
                            dec.uniform_circle(count))
        rec = dec.synthesize(table, meyer_system, 256)
        return float(np.sqrt(np.sum(np.abs(rec.values
                                           - benchmark_field.values) ** 2) / fn2))

    err16, err32 = trip(16), trip(32)
    assert err32 < err16
    assert err32 < 0.1


def test_round_trip_64_under_five_percent(benchmark_field, meyer_system, table64):
    rec = dec.synthesize(table64, meyer_system, 256)
    err = np.sqrt(np.sum(np.abs(rec.values - benchmark_field.values) ** 2)
                  / np.sum(np.abs(benchmark_field.values) ** 2))
    assert err < 0.05


# ---------------------------------------------------------------------------
# identity checks

def test_frame_inequality_tightness(benchmark_field, meyer_system, table64):
    value = float(np.dot(table64.direction_energies(),
                         table64.direction_set.weights))
    ratio = value / (2.0 * benchmark_field.norm() ** 2)
    assert 0.95 <= ratio <= 1.05


def test_frame_inequality_homogeneity(meyer_system):
    f = random_field(71).field(256)
    dirs = dec.uniform_circle(8)
    v1, _, _ = dec.frame_inequality_check(f, meyer_system, dirs)
    v3, _, _ = dec.frame_inequality_check(GridField(3.0 * f.values),
                                          meyer_system, dirs)
    assert v3 == pytest.approx(9.0 * v1, rel=1e-12)
    zero = GridField(np.zeros((256, 256)))
    v0, _, _ = dec.frame_inequality_check(zero, meyer_system, dirs)
    assert v0 == 0.0


def test_per_direction_sandwich(benchmark_field, meyer_system, table64):
    # orthonormal 1-D system: per-direction coefficient energy equals the
    # weighted slice norm (same grid on both sides)
    grid = dec.analysis_grid(benchmark_field)
    energies = table64.direction_energies()
    for j in (0, 7, 23, 41):
        u = table64.direction_set.directions[j]
        ref = dec.weighted_radon(benchmark_field, u, grid).norm() ** 2
        assert energies[j] == pytest.approx(ref, rel=1e-3)


def test_norm_identity_gaussian(unit_gaussian_field):
    value = dec.norm_identity_check(unit_gaussian_field, dec.uniform_circle(64))
    assert abs(value - 2.0) < 0.02


def test_norm_identity_zero_field():
    zero = GridField(np.zeros((64, 64)))
    assert dec.norm_identity_check(zero, dec.uniform_circle(8)) == 0.0


def test_norm_identity_rotation_invariance():
    def rotated(theta):
        c, s = np.cos(theta), np.sin(theta)
        f = field_from_function(
            lambda x, y: np.exp(-np.pi * ((c * x + s * y) ** 2 / 0.05
                                          + (-s * x + c * y) ** 2 / 0.11)), 256)
        return GridField(f.values / f.norm())

    dirs = dec.uniform_circle(64)
    v0 = dec.norm_identity_check(rotated(0.0), dirs)
    v45 = dec.norm_identity_check(rotated(np.pi / 4), dirs)
    assert abs(v45 - v0) < 1e-3


def test_norm_identity_warns_on_boundary_mass():
    f = field_from_function(lambda x, y: np.exp(-(x**2 + y**2)), 64)
    with pytest.warns(UserWarning):
        dec.norm_identity_check(f, dec.uniform_circle(4))


def test_norm_identity_span_refinement(unit_gaussian_field):
    dirs = dec.uniform_circle(32)
    e1 = abs(dec.norm_identity_check(unit_gaussian_field, dirs, refine=1) - 2.0)
    e2 = abs(dec.norm_identity_check(unit_gaussian_field, dirs, refine=2) - 2.0)
    assert e2 <= e1


# ---------------------------------------------------------------------------
# continuous reconstruction

def test_continuous_reconstruct_gaussian(unit_gaussian_field):
    g = fr.gabor_atom(gen.GaborWindow(), 0.0, 0.0, (-16.0, 1.0 / 64.0, 2048))
    pair = fr.make_dual_gabor_pair(g, g)
    rec = dec.continuous_reconstruct(unit_gaussian_field, pair,
                                     dec.uniform_circle(64),
                                     fr.GaborQuadrature(na=48, nb=48))
    err = np.sqrt(np.sum(np.abs(rec.values - unit_gaussian_field.values) ** 2)
                  / np.sum(np.abs(unit_gaussian_field.values) ** 2))
    assert err < 0.10


def test_continuous_reconstruct_zero_field():
    zero = GridField(np.zeros((64, 64)))
    g = fr.gabor_atom(gen.GaborWindow(), 0.0, 0.0, (-16.0, 1.0 / 64.0, 2048))
    pair = fr.make_dual_gabor_pair(g, g)
    rec = dec.continuous_reconstruct(zero, pair, dec.uniform_circle(8))
    assert rec.norm() == 0.0


def test_continuous_reconstruct_refinement(unit_gaussian_field):
    g = fr.gabor_atom(gen.GaborWindow(), 0.0, 0.0, (-16.0, 1.0 / 64.0, 2048))
    pair = fr.make_dual_gabor_pair(g, g)

    def err(nd, cells):
        rec = dec.continuous_reconstruct(unit_gaussian_field, pair,
                                         dec.uniform_circle(nd),
                                         fr.GaborQuadrature(na=cells, nb=cells))
        return np.sqrt(np.sum(np.abs(rec.values - unit_gaussian_field.values) ** 2)
                       / np.sum(np.abs(unit_gaussian_field.values) ** 2))

    coarse = err(16, 24)
    fine = err(32, 48)
    assert fine < coarse


def test_continuous_reconstruct_coverage_error(unit_gaussian_field):
    g = fr.gabor_atom(gen.GaborWindow(), 0.0, 0.0, (-16.0, 1.0 / 64.0, 2048))
    pair = fr.make_dual_gabor_pair(g, g)
    with pytest.raises(CoverageError):
        dec.continuous_reconstruct(unit_gaussian_field, pair,
                                   dec.uniform_circle(8),
                                   fr.GaborQuadrature(a_max=0.75, b_max=0.75,
                                                      na=8, nb=8))
