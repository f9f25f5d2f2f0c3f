"""Batch command-line front end.

Subcommands: generator, decompose, reconstruct, framebounds, spherenet,
selftest.  Exit codes: 0 ok, 1 acceptance failure, 2 usage, 3 input
format, 4 consistency, 5 degenerate result.  All randomness flows from the
--seed flag and is recorded in every JSON artifact; outputs are
byte-identical across re-runs with the same configuration.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import acceptance, decomposition as dec, fileio, frames
from . import generators as gen
from . import sphere_net as net
from .errors import ConsistencyError, FormatError, RidgeFrameError
from .ridge_radon import Direction, GridField, ridge_lift
from .spectral import Spectrum, centered_frequencies, forward_ft, inverse_ft
from .synthetic import random_band_signal, random_field

EXIT_OK = 0
EXIT_ACCEPTANCE = 1
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_CONSISTENCY = 4
EXIT_DEGENERATE = 5


def _parse_complex(text: str) -> complex:
    return complex(text.replace("i", "j").replace(" ", ""))


def _make_generator(args) -> gen.GeneratorSpec:
    kind = args.kind
    if kind == "meyer":
        return gen.MeyerWavelet()
    if kind == "gabor":
        return gen.GaborWindow()
    if kind in ("cbspline", "cbspline-wavelet"):
        if args.z is None:
            raise _UsageError(f"--z is required for kind {kind}")
        z = _parse_complex(args.z)
        if kind == "cbspline":
            return gen.ComplexBSplineScaling(z)
        return gen.ComplexBSplineWavelet(z)
    raise _UsageError(f"unknown generator kind {kind!r}")


class _UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Commands

def cmd_generator(args) -> int:
    spec = _make_generator(args)
    half = float(args.span)
    count = int(args.grid)
    dx = 2.0 * half / count
    sig = gen.sample_generator(spec, x0=-half, dx=dx, n=count)
    fileio.write_signal_csv(f"{args.out}_time.csv", sig)
    freqs = centered_frequencies(count, dx)
    spectrum = Spectrum(spec.spectrum(freqs), freqs, origin=-half)
    fileio.write_spectrum_csv(f"{args.out}_spectrum.csv", spectrum)
    asym = float(np.sum(np.abs(spectrum.values[freqs > 0]) ** 2)
                 - np.sum(np.abs(spectrum.values[freqs < 0]) ** 2)) * spectrum.dgamma
    manifest = spec.manifest()
    manifest.update({"seed": args.seed, "grid": count, "span": half,
                     "spectral_asymmetry": asym})
    fileio.dump_json(f"{args.out}_manifest.json", manifest)
    if args.ridge:
        u = Direction(np.array([float(c) for c in args.direction.split(",")]))
        lifted = ridge_lift(spec, u, int(args.field_grid))
        fileio.write_field(f"{args.out}_ridge.rfgrid", lifted)
        fileio.write_field_pgm(f"{args.out}_ridge.pgm", lifted)
    return EXIT_OK


def _load_field(path) -> GridField:
    if str(path).endswith(".csv"):
        try:
            data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        except ValueError as exc:
            raise FormatError(f"malformed field CSV {path}: {exc}") from exc
        if data.shape[1] != 4:
            raise FormatError(f"{path}: field CSV needs columns x1,x2,re,im")
        count = int(round(np.sqrt(data.shape[0])))
        if count * count != data.shape[0]:
            raise FormatError(f"{path}: {data.shape[0]} rows is not a square grid")
        values = (data[:, 2] + 1j * data[:, 3]).reshape(count, count)
        return GridField(values)
    return fileio.read_field(path)


def cmd_decompose(args) -> int:
    f = _load_field(args.field)
    system = dec.build_meyer_system(f, energy_drop=args.energy_drop,
                                    translation_margin=args.margin)
    dirs = dec.uniform_circle(int(args.directions)) if f.n == 2 else \
        dec.fibonacci_sphere_directions(int(args.directions))
    table = dec.analyze(f, system, dirs)
    energy = float(np.dot(table.direction_energies(), dirs.weights))
    fileio.write_table(f"{args.out}_table.csv", f"{args.out}_table.json", table,
                       extra={"frame": system.manifest(),
                              "direction_energy_integral": energy,
                              "field_norm": f.norm(),
                              "seed": args.seed})
    return EXIT_OK


def _system_from_manifest(manifest: dict) -> dec.MeyerRidgeSystem:
    if manifest.get("kind") != dec.MeyerRidgeSystem.kind:
        raise ConsistencyError(
            f"cannot rebuild synthesis system of kind {manifest.get('kind')!r}")
    scales = tuple(int(m) for m in manifest["scales"])
    k_ranges = {int(m): tuple(v) for m, v in manifest["k_ranges"].items()}
    return dec.MeyerRidgeSystem(scales, k_ranges,
                                float(manifest.get("truncation_defect", 0.0)),
                                n=int(manifest.get("n", 2)))


def cmd_reconstruct(args) -> int:
    table, sidecar = fileio.read_table(f"{args.table}_table.csv",
                                       f"{args.table}_table.json")
    system = _system_from_manifest(sidecar.get("frame", {}))
    if tuple(system.atom_keys()) != table.atom_keys:
        raise ConsistencyError("table atoms do not match the sidecar manifest")
    rec = dec.synthesize(table, system, int(args.grid))
    fileio.write_field(args.out, rec)
    report = {"seed": args.seed, "directions": len(table.direction_set),
              "atoms": len(table.atom_keys), "output": str(args.out)}
    if args.reference:
        ref = _load_field(args.reference)
        if ref.values.shape != rec.values.shape:
            raise ConsistencyError("reference grid does not match the output grid")
        err = float(np.sqrt(np.sum(np.abs(rec.values - ref.values) ** 2)
                            / np.sum(np.abs(ref.values) ** 2)))
        report["rel_l2_error"] = err
    fileio.dump_json(f"{args.out}.report.json", report)
    return EXIT_OK


def _bounds_tests(args, need_fields: bool):
    trials = int(args.trials)
    if need_fields:
        return [random_field(int(args.seed) + s, carrier_band=(0.8, 3.0)).field(128)
                for s in range(trials)]
    x0, dx, n = -16.0, 1.0 / 64.0, 2048
    return [random_band_signal(int(args.seed) + s, x0, dx, n,
                               band=(0.5, 2.0), localize=1.0)
            for s in range(trials)]


def cmd_framebounds(args) -> int:
    kind = args.system
    sweep_rows = []
    if kind == "gabor":
        sys_obj = frames.ContinuousGabor(gen.GaborWindow())
        tests = _bounds_tests(args, need_fields=False)
    elif kind == "wavelet":
        sys_obj = frames.ContinuousWavelet(gen.MeyerWavelet())
        tests = _bounds_tests(args, need_fields=False)
    elif kind == "meyer-onb":
        atoms = tuple(gen.meyer_basis_element(k, m, x0=-16.0, dx=1.0 / 64.0, n=2048)
                      for m in range(-3, 4) for k in range(-3, 4))
        sys_obj = frames.DiscreteCustom(atoms)
        tests = _bounds_tests(args, need_fields=False)
    elif kind == "discrete-ridge":
        sys_obj = net.build_discrete_system(gen.MeyerWavelet(), 2, args.a0,
                                            args.k0, args.k, args.b)
        tests = _bounds_tests(args, need_fields=True)
    else:
        raise _UsageError(f"unknown system kind {kind!r}")

    est = frames.estimate_frame_bounds(sys_obj, tests, f"{kind} seeded tests",
                                       seed=int(args.seed),
                                       min_trials=min(30, int(args.trials)))
    payload = est.to_dict()
    payload["system"] = kind
    if args.b_sweep:
        if kind != "discrete-ridge":
            raise _UsageError("--b-sweep applies to the discrete-ridge system")
        for b in sorted((float(x) for x in args.b_sweep.split(",")), reverse=True):
            sb = net.build_discrete_system(gen.MeyerWavelet(), 2, args.a0,
                                           args.k0, args.k, b)
            eb = frames.estimate_frame_bounds(sb, tests, "b sweep",
                                              seed=int(args.seed),
                                              min_trials=min(30, int(args.trials)))
            sweep_rows.append((b, eb.lower, eb.upper))
        payload["b_sweep"] = [{"b": b, "lower": lo, "upper": hi}
                              for b, lo, hi in sweep_rows]
        payload["lower_monotone_in_finer_b"] = all(
            sweep_rows[i][1] <= sweep_rows[i + 1][1] + 1e-12
            for i in range(len(sweep_rows) - 1))
    fileio.dump_json(args.out, payload)
    if est.lower <= 1e-12:
        print("degenerate system: empirical lower bound is zero", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_spherenet(args) -> int:
    nets = [net.build_net(int(args.n), k, float(args.a0), int(args.k0))
            for k in range(int(args.k0), int(args.k) + 1)]
    fileio.write_net_csv(f"{args.out}_nets.csv", nets)
    levels = []
    for built in nets:
        rep = net.verify_net(built)
        card = net.verify_card_bounds(built)
        levels.append({"k": built.level, "size": len(built),
                       "epsilon": built.epsilon,
                       "min_separation": rep.min_separation,
                       "covering_radius": rep.covering_radius,
                       "separation_ok": rep.separation_ok,
                       "covering_ok": rep.covering_ok,
                       "card_c": card.c_hat, "card_C": card.C_hat,
                       "card_ratio": card.ratio, "card_ok": card.passed})
    fileio.dump_json(f"{args.out}_report.json",
                     {"n": int(args.n), "a0": float(args.a0),
                      "k0": int(args.k0), "k_max": int(args.k),
                      "seed": args.seed, "levels": levels})
    return EXIT_OK


def cmd_selftest(args) -> int:
    if args.inject_fault:
        # test hook: perturb the fractional-derivative exponent slightly so
        # the acceptance identities must fail
        from . import spectral
        original = spectral.abs_power_multiplier

        def faulty(freqs, alpha):
            return original(freqs, alpha * 1.001 if alpha else alpha)

        spectral.abs_power_multiplier = faulty
        dec._profile_cache.clear()
    names = None
    if args.criteria:
        names = tuple(x.strip() for x in args.criteria.split(","))
    results = acceptance.run_criteria(names=names, quick=args.quick)
    xml = acceptance.to_junit_xml(results)
    with open(args.out, "wb") as fh:
        fh.write(xml)
    failures = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failures)}/{len(results)} criteria passed; "
          f"report: {args.out}")
    return EXIT_ACCEPTANCE if failures else EXIT_OK


# ---------------------------------------------------------------------------
# Parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ridgeframe",
        description="Directional frame decompositions via ridge functions "
                    "and the Radon transform")
    parser.add_argument("--config", help="JSON file with default option values "
                                         "(explicit flags win)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generator", help="export a 1-D generator and spectra")
    p.add_argument("--kind", required=True,
                   choices=["meyer", "gabor", "cbspline", "cbspline-wavelet"])
    p.add_argument("--z", help="complex parameter, e.g. 3.5+1i")
    p.add_argument("--grid", type=int, default=8192)
    p.add_argument("--span", type=float, default=64.0)
    p.add_argument("--ridge", action="store_true",
                   help="also export the weighted ridge field")
    p.add_argument("--direction", default="1,0")
    p.add_argument("--field-grid", type=int, default=256)
    p.add_argument("--out", default="generator")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generator)

    p = sub.add_parser("decompose", help="analyze a field into ridge coefficients")
    p.add_argument("--field", required=True)
    p.add_argument("--directions", type=int, default=64)
    p.add_argument("--energy-drop", type=float, default=1e-4)
    p.add_argument("--margin", type=float, default=12.0)
    p.add_argument("--out", default="decomposition")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reconstruct", help="synthesize a field from a table")
    p.add_argument("--table", required=True, help="prefix used by decompose")
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--reference", help="reference RFGRID for the error report")
    p.add_argument("--out", default="reconstruction.rfgrid")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("framebounds", help="empirical frame-bound estimation")
    p.add_argument("--system", required=True,
                   choices=["gabor", "wavelet", "meyer-onb", "discrete-ridge"])
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--a0", type=float, default=2.0)
    p.add_argument("--k0", type=int, default=0)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--b", type=float, default=0.5)
    p.add_argument("--b-sweep", help="comma-separated b values to sweep")
    p.add_argument("--out", default="bounds.json")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_framebounds)

    p = sub.add_parser("spherenet", help="build and verify multiscale nets")
    p.add_argument("--n", type=int, default=2, choices=[2, 3])
    p.add_argument("--a0", type=float, default=2.0)
    p.add_argument("--k0", type=int, default=0)
    p.add_argument("--k", type=int, default=3, help="finest level (inclusive)")
    p.add_argument("--out", default="spherenet")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_spherenet)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    p.add_argument("--quick", action="store_true",
                   help="reduced fixture sizes and the fast criterion subset")
    p.add_argument("--criteria", help="comma-separated cNN filters")
    p.add_argument("--out", default="acceptance.xml")
    p.add_argument("--inject-fault", action="store_true",
                   help=argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args, remaining = parser.parse_known_args(argv)
    if remaining:
        parser.error(f"unrecognized arguments: {' '.join(remaining)}")
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                defaults = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"cannot read config: {exc}", file=sys.stderr)
            return EXIT_FORMAT
        parser.set_defaults(**defaults)
        args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except ConsistencyError as exc:
        print(f"consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except FileNotFoundError as exc:
        print(f"format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except RidgeFrameError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
