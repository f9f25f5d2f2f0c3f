"""ε-nets on S^(n-1), the multiscale sphere discretization with its
cardinality-bound checks, and the fully discrete ridge system whose frame
energy is the triple sum over scales, net directions, and translations.

Distances are Euclidean chord distances throughout; nets store their scale
bookkeeping (level k, base a0, reference level k0) so that
ε_k = a0^(k0-k)/2 is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.spatial import cKDTree
from scipy.spatial.distance import pdist

from ._parallel import map_ordered
from .errors import ConstructionError, InvalidInputError, InvalidParameterError, SetupError
from .generators import GeneratorSpec, check_general_setup
from .ridge_radon import Direction, Grid1D, GridField, radon_slice
from .spectral import Spectrum, abs_power_multiplier, centered_frequencies, inverse_ft

__all__ = [
    "EpsilonNet",
    "NetReport",
    "CardinalityReport",
    "build_net",
    "verify_net",
    "verify_card_bounds",
    "DiscreteRidgeSystem",
    "build_discrete_system",
    "discrete_frame_energy",
]


# ---------------------------------------------------------------------------
# ε-nets

@dataclass(frozen=True)
class EpsilonNet:
    """Finite ε-net on S^(n-1) under the chord metric: pairwise separation
    >= ε and covering radius <= ε."""

    points: tuple  # of Direction
    epsilon: float
    level: int = 0
    a0: float = 2.0
    k0: int = 0

    def __post_init__(self):
        if len(self.points) == 0:
            raise InvalidInputError("net needs at least one point")
        if not 0.0 < self.epsilon <= 2.0:
            raise InvalidParameterError(f"epsilon must lie in (0, 2], got {self.epsilon}")
        object.__setattr__(self, "points", tuple(self.points))

    @property
    def n(self) -> int:
        return self.points[0].n

    def coords(self) -> np.ndarray:
        return np.stack([p.coords for p in self.points])

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class NetReport:
    min_separation: float
    covering_radius: float
    epsilon: float
    separation_ok: bool
    covering_ok: bool

    @property
    def ok(self) -> bool:
        return self.separation_ok and self.covering_ok


def _circle_size_window(epsilon: float) -> tuple[int, int]:
    """Admissible uniform-circle sizes: covering needs 2·sin(π/(2N)) <= ε,
    separation needs 2·sin(π/N) >= ε."""
    half_angle = math.asin(epsilon / 2.0)
    n_min = max(2, math.ceil(math.pi / (2.0 * half_angle)))
    n_max = math.floor(math.pi / half_angle)
    return n_min, n_max


def _fibonacci_points(count: int) -> np.ndarray:
    i = np.arange(count) + 0.5
    phi = math.pi * (1.0 + math.sqrt(5.0)) * i
    cos_t = 1.0 - 2.0 * i / count
    sin_t = np.sqrt(np.maximum(0.0, 1.0 - cos_t**2))
    return np.stack([sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t], axis=1)


def _greedy_sphere_net(epsilon: float) -> np.ndarray:
    """Farthest-point selection over a probe-resolution Fibonacci candidate
    set: points are added only at distance > ε (separation), and the loop
    stops once every candidate sits within ε of the net (covering at the
    same resolution the verifier probes with)."""
    cand = _probe_points(3, epsilon)
    chosen = [0]
    dist = np.linalg.norm(cand - cand[0], axis=1)
    while True:
        far = int(np.argmax(dist))
        if dist[far] <= epsilon:
            break
        chosen.append(far)
        dist = np.minimum(dist, np.linalg.norm(cand - cand[far], axis=1))
    return cand[chosen]


def build_net(n: int, k: int, a0: float, k0: int = 0,
              size: int | None = None) -> EpsilonNet:
    """ε_k-net at level k of the multiscale ladder, ε_k = a0^(k0-k)/2.

    For the circle the smallest admissible uniform net is used (a size
    override may pick any admissible size); for S² a greedy farthest-point
    packing over a fine Fibonacci candidate set.
    """
    if n not in (2, 3):
        raise InvalidParameterError(f"dimension must be 2 or 3, got {n}")
    if not a0 > 1:
        raise InvalidParameterError(f"a0 must exceed 1, got {a0}")
    if k < k0:
        raise InvalidParameterError(f"level k={k} below base level k0={k0}")
    epsilon = 0.5 * a0 ** (k0 - k)
    if not 0.0 < epsilon <= 2.0:
        raise ConstructionError(f"epsilon {epsilon} outside (0, 2]")
    if n == 2:
        n_min, n_max = _circle_size_window(epsilon)
        count = n_min if size is None else size
        if not n_min <= count <= n_max:
            raise ConstructionError(
                f"size {count} outside the admissible window [{n_min}, {n_max}]")
        thetas = 2.0 * np.pi * np.arange(count) / count
        pts = tuple(Direction.from_angle(t) for t in thetas)
    else:
        if size is not None:
            raise ConstructionError("size override is only supported on the circle")
        pts = tuple(Direction(p) for p in _greedy_sphere_net(epsilon))
    net = EpsilonNet(pts, epsilon, level=k, a0=a0, k0=k0)
    report = verify_net(net)
    if not report.ok:
        raise ConstructionError(f"constructed net fails verification: {report}")
    return net


def _probe_points(n: int, epsilon: float) -> np.ndarray:
    """Probe set roughly 10x finer than ε."""
    if n == 2:
        step = 2.0 * math.asin(min(epsilon / 20.0, 1.0))
        count = int(math.ceil(2.0 * math.pi / step))
        thetas = 2.0 * np.pi * np.arange(count) / count
        return np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    m = int(min((68.0 / epsilon) ** 2, 4_000_000))
    return _fibonacci_points(m)


def verify_net(net: EpsilonNet) -> NetReport:
    """Check separation (exact pairwise) and covering (probe estimate)."""
    pts = net.coords()
    sep = float(np.min(pdist(pts))) if len(net) > 1 else math.inf
    probes = _probe_points(net.n, net.epsilon)
    tree = cKDTree(pts)
    covering = float(np.max(tree.query(probes, k=1)[0]))
    tol = 1e-9
    return NetReport(
        min_separation=sep,
        covering_radius=covering,
        epsilon=net.epsilon,
        separation_ok=bool(sep >= net.epsilon * (1.0 - tol)),
        covering_ok=bool(covering <= net.epsilon * (1.0 + tol)),
    )


@dataclass(frozen=True)
class CardinalityReport:
    c_hat: float
    C_hat: float
    ratio: float
    passed: bool
    size_bound_ok: bool


def verify_card_bounds(net: EpsilonNet, r_samples=None, u_samples=None,
                       max_ratio: float = 16.0) -> CardinalityReport:
    """Sample card(B_r(u) ∩ net)/(r/ε)^(n-1) over radii and centers.

    c_hat/C_hat are the extreme ratios; the check passes when c_hat > 0 and
    C_hat/c_hat stays below max_ratio.  Also verifies the whole-sphere size
    bound c_hat·(2/ε)^(n-1) <= N at r = 2.
    """
    eps = net.epsilon
    if r_samples is None:
        r_samples = np.unique(np.concatenate([
            np.geomspace(eps, 2.0, 9), [2.0]]))
    r_samples = np.asarray(r_samples, dtype=np.float64)
    if np.any(r_samples < eps * (1.0 - 1e-12)) or np.any(r_samples > 2.0 + 1e-12):
        raise InvalidInputError("radii must lie in [epsilon, 2]")
    if u_samples is None:
        if net.n == 2:
            thetas = 2.0 * np.pi * (np.arange(181) + 0.37) / 181
            u_samples = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
        else:
            u_samples = _fibonacci_points(400)
    else:
        u_samples = np.stack([u.coords if isinstance(u, Direction) else np.asarray(u)
                              for u in u_samples])
    tree = cKDTree(net.coords())
    c_hat, big_c = math.inf, 0.0
    dim = net.n - 1
    for r in r_samples:
        counts = tree.query_ball_point(u_samples, r * (1.0 + 1e-12),
                                       return_length=True)
        ratios = counts / (r / eps) ** dim
        c_hat = min(c_hat, float(np.min(ratios)))
        big_c = max(big_c, float(np.max(ratios)))
    size_ok = c_hat * (2.0 / eps) ** dim <= len(net) * (1.0 + 1e-12)
    ratio = big_c / c_hat if c_hat > 0 else math.inf
    return CardinalityReport(c_hat=c_hat, C_hat=big_c, ratio=ratio,
                             passed=bool(c_hat > 0 and np.isfinite(big_c)
                                         and ratio <= max_ratio and size_ok),
                             size_bound_ok=bool(size_ok))


# ---------------------------------------------------------------------------
# Fully discrete ridge system

_profile_cache: dict = {}


def _weighted_profile(g: GeneratorSpec, alpha: float):
    """Spline of D^alpha g on a wide fine grid, plus its tail-energy table."""
    key = (repr(g.manifest()), round(alpha, 12))
    hit = _profile_cache.get(key)
    if hit is not None:
        return hit
    span, dx = 256.0, 1.0 / 2048.0
    count = 1 << math.ceil(math.log2(2.0 * span / dx))
    x0 = -0.5 * count * dx
    freqs = centered_frequencies(count, dx)
    vals = g.spectrum(freqs) * abs_power_multiplier(freqs, alpha)
    sig = inverse_ft(Spectrum(vals, freqs, origin=x0))
    if float(np.max(np.abs(sig.samples.imag))) < 1e-9 * float(np.max(np.abs(sig.samples))):
        spline = CubicSpline(sig.x, sig.samples.real)
        complex_profile = False
    else:
        spline = CubicSpline(sig.x, sig.samples)
        complex_profile = True
    # tail energy of the weighted profile beyond |x| > d
    e = np.abs(sig.samples) ** 2 * sig.dx
    half = e.size // 2
    sym = e[half:] + e[half - 1::-1]
    tail = np.concatenate([np.cumsum(sym[::-1])[::-1], [0.0]])
    dist = np.concatenate([np.abs(sig.x[half:]), [1e9]])
    hit = (spline, complex_profile, (dist, tail), span)
    _profile_cache[key] = hit
    return hit


@dataclass(frozen=True)
class DiscreteRidgeSystem:
    """Atoms (D_{a_k} T_{ℓb} G)(u·x) with G = D^((n-1)/2) g, scales
    a_k = a0^k, per-level ε_k-nets, and translations pruned to atoms whose
    essential support meets the ridge range of Q."""

    generator: GeneratorSpec
    n: int
    a0: float
    k0: int
    k_max: int
    b: float
    nets: dict  # k -> EpsilonNet
    l_ranges: dict  # k -> (l_lo, l_hi)
    prune_defect: float
    _cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    kind = "discrete_ridge"

    def scales(self):
        return range(self.k0, self.k_max + 1)

    def atom_count(self) -> int:
        return sum((self.l_ranges[k][1] - self.l_ranges[k][0] + 1) * len(self.nets[k])
                   for k in self.scales())

    def atom_samples(self, k: int, grid: Grid1D) -> np.ndarray:
        """Matrix of D_{a_k}T_{ℓb}G over the level's ℓ-range, sampled on the
        offset grid (cached, write-once)."""
        key = ("atoms", k, grid)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        spline, _, _, span = _weighted_profile(self.generator, 0.5 * (self.n - 1))
        a_k = self.a0**k
        l_lo, l_hi = self.l_ranges[k]
        ells = np.arange(l_lo, l_hi + 1, dtype=np.float64)
        t = a_k * grid.points[None, :] - self.b * ells[:, None]
        out = np.zeros(t.shape, dtype=np.float64)
        inside = np.abs(t) <= span - 1.0
        out[inside] = spline(t[inside])
        out = math.sqrt(a_k) * out
        out.flags.writeable = False
        self._cache[key] = out
        return out

    def frame_sum(self, f: GridField) -> tuple[float, float]:
        return discrete_frame_energy(f, self), 0.0

    def manifest(self) -> dict:
        return {"kind": self.kind, "generator": self.generator.manifest(),
                "n": self.n, "a0": self.a0, "k0": self.k0, "k_max": self.k_max,
                "b": self.b,
                "net_sizes": {str(k): len(self.nets[k]) for k in self.scales()},
                "l_ranges": {str(k): list(self.l_ranges[k]) for k in self.scales()},
                "prune_defect": self.prune_defect}


def build_discrete_system(g: GeneratorSpec, n: int, a0: float, k0: int,
                          k_max: int, b: float,
                          translation_margin: float = 28.0,
                          override_setup: bool = False) -> DiscreteRidgeSystem:
    """Materialize the multiscale discrete ridge system for a generator that
    passes the setup conditions (or with an explicit override).

    Translations at level k are kept while the atom support
    (ℓb ± margin)/a_k meets the ridge range; the pruned atoms' residual
    energy on the range is reported as the prune defect.
    """
    if not b > 0:
        raise InvalidParameterError(f"translation step b must be positive, got {b}")
    if k_max < k0:
        raise InvalidInputError("empty scale range")
    if not override_setup:
        report = check_general_setup(g, a0, n)
        if not report.ok:
            raise SetupError(
                f"generator fails the setup conditions "
                f"(i={report.condition_i.holds}, ii={report.condition_ii.holds}, "
                f"iii={report.condition_iii.holds}); pass override_setup=True "
                "to build anyway")
    _, _, (dist, tail), _ = _weighted_profile(g, 0.5 * (n - 1))
    rho = math.sqrt(n) + 0.2
    nets, l_ranges = {}, {}
    defect = 0.0
    for k in range(k0, k_max + 1):
        nets[k] = build_net(n, k, a0, k0)
        a_k = a0**k
        l_hi = int(math.floor((rho * a_k + translation_margin) / b))
        l_ranges[k] = (-l_hi, l_hi)
        edge = b * np.arange(l_hi + 1, l_hi + 257, dtype=np.float64) - rho * a_k
        per_atom = np.interp(edge, dist, tail)
        defect += 2.0 * len(nets[k]) * float(np.sum(per_atom))
    return DiscreteRidgeSystem(g, n, a0, k0, k_max, b, nets, l_ranges, defect)


def discrete_frame_energy(f: GridField, sys: DiscreteRidgeSystem,
                          grid: Grid1D | None = None) -> float:
    """Triple sum Σ_k Σ_u Σ_ℓ |⟨f, (D_{a_k}T_{ℓb}G)_u⟩|².

    Coefficients go through the 1-D Radon route: one slice per distinct
    direction, then batched inner products against the tabulated atoms.
    Summation order is fixed (scales, then net order, then ℓ).
    """
    if f.n != sys.n:
        raise InvalidInputError("field dimension does not match the system")
    if grid is None:
        # R_u f is supported on the ridge range; a span-8 grid leaves head
        # room without periodization artifacts
        half = 8.0
        count = 1 << math.ceil(math.log2(2.0 * half / f.spacing))
        grid = Grid1D(-0.5 * count * f.spacing, f.spacing, count)

    def level_energy(k: int) -> float:
        atoms = sys.atom_samples(k, grid)
        total = 0.0
        for u in sys.nets[k].points:
            r = radon_slice(f, u, grid)
            coeffs = grid.dx * (atoms @ r.samples)
            total += float(np.sum(np.abs(coeffs) ** 2))
        return total

    return float(np.sum(map_ordered(level_energy, list(sys.scales()))))
