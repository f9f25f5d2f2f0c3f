"""File formats: signal/spectrum/field CSV, the RFGRID binary container,
PGM magnitude renders, coefficient tables with JSON sidecars, and net CSV.

All floating-point text is written with 17 significant digits so re-runs
are byte-identical.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .decomposition import CoefficientTable, DirectionSet
from .errors import ConsistencyError, FormatError
from .ridge_radon import Direction, GridField
from .spectral import SampledSignal, Spectrum

__all__ = [
    "write_signal_csv",
    "read_signal_csv",
    "write_spectrum_csv",
    "write_field",
    "read_field",
    "write_field_csv",
    "write_field_pgm",
    "write_table",
    "read_table",
    "write_net_csv",
    "dump_json",
]

_MAGIC = b"RFGRID\x00"


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def dump_json(path, payload: dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# 1-D CSV

def write_signal_csv(path, s: SampledSignal):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,re,im\n")
        for x, v in zip(s.x, s.samples):
            fh.write(f"{_fmt(x)},{_fmt(v.real)},{_fmt(v.imag)}\n")


def read_signal_csv(path) -> SampledSignal:
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1, dtype=np.float64, ndmin=2)
    except ValueError as exc:
        raise FormatError(f"malformed signal CSV {path}: {exc}") from exc
    if data.shape[1] != 3 or data.shape[0] < 2:
        raise FormatError(f"signal CSV {path} needs columns x,re,im and >= 2 rows")
    x = data[:, 0]
    steps = np.diff(x)
    if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9):
        raise FormatError(f"signal CSV {path} grid is not uniform")
    return SampledSignal(data[:, 1] + 1j * data[:, 2], float(x[0]), float(steps[0]))


def write_spectrum_csv(path, sp: Spectrum):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("gamma,re,im\n")
        for g, v in zip(sp.frequencies, sp.values):
            fh.write(f"{_fmt(g)},{_fmt(v.real)},{_fmt(v.imag)}\n")


# ---------------------------------------------------------------------------
# RFGRID binary fields

def write_field(path, f: GridField):
    count = f.samples_per_axis
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(b"\x00")  # pad to 8 bytes
        fh.write(struct.pack("<II", 1, f.n))
        fh.write(struct.pack(f"<{f.n}I", *([count] * f.n)))
        fh.write(struct.pack("<d", f.spacing))
        inter = np.empty(f.values.size * 2, dtype="<f8")
        inter[0::2] = f.values.real.ravel()
        inter[1::2] = f.values.imag.ravel()
        fh.write(inter.tobytes())


def read_field(path) -> GridField:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < 8 or raw[:7] != _MAGIC:
        raise FormatError(f"{path}: bad magic, not an RFGRID file")
    off = 8
    try:
        version, n = struct.unpack_from("<II", raw, off)
        off += 8
        if version != 1:
            raise FormatError(f"{path}: unsupported RFGRID version {version}")
        if n not in (2, 3):
            raise FormatError(f"{path}: invalid dimension {n}")
        counts = struct.unpack_from(f"<{n}I", raw, off)
        off += 4 * n
        (spacing,) = struct.unpack_from("<d", raw, off)
        off += 8
    except struct.error as exc:
        raise FormatError(f"{path}: truncated header") from exc
    total = int(np.prod(counts))
    need = off + 16 * total
    if len(raw) < need:
        raise FormatError(f"{path}: truncated payload "
                          f"({len(raw)} bytes, need {need})")
    inter = np.frombuffer(raw, dtype="<f8", count=2 * total, offset=off)
    values = (inter[0::2] + 1j * inter[1::2]).reshape(counts)
    return GridField(values, spacing=spacing)


def write_field_csv(path, f: GridField):
    if f.n != 2:
        raise FormatError("CSV export is defined for 2-D fields only")
    axis = f.axis_points()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x1,x2,re,im\n")
        for i, x1 in enumerate(axis):
            for j, x2 in enumerate(axis):
                v = f.values[i, j]
                fh.write(f"{_fmt(x1)},{_fmt(x2)},{_fmt(v.real)},{_fmt(v.imag)}\n")


def write_field_pgm(path, f: GridField):
    """8-bit P5 magnitude render, linear scaling with max |value| -> 255."""
    if f.n != 2:
        raise FormatError("PGM export is defined for 2-D fields only")
    mag = np.abs(f.values)
    peak = float(mag.max())
    img = np.zeros_like(mag, dtype=np.uint8) if peak == 0 else \
        np.minimum(np.round(mag / peak * 255.0), 255).astype(np.uint8)
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


# ---------------------------------------------------------------------------
# Coefficient tables

def write_table(path_csv, path_json, table: CoefficientTable,
                extra: dict | None = None):
    """Table rows `k,m,l,u_index,u coords,re,im` plus a JSON sidecar with
    the frame manifest and direction quadrature."""
    nd = table.direction_set.n
    coord_cols = ",".join(f"c{i}" for i in range(nd))
    with open(path_csv, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"k,m,l,u_index,{coord_cols},re,im\n")
        for i, key in enumerate(table.atom_keys):
            if len(key) == 2:
                k_col, m_col, l_col = str(key[0]), str(key[1]), ""
            else:
                k_col, m_col, l_col = str(key[0]), "", str(key[1])
            for j, u in enumerate(table.direction_set.directions):
                v = table.coeffs[i, j]
                coords = ",".join(_fmt(c) for c in u.coords)
                fh.write(f"{k_col},{m_col},{l_col},{j},{coords},"
                         f"{_fmt(v.real)},{_fmt(v.imag)}\n")
    sidecar = {
        "frame": extra.pop("frame") if extra and "frame" in extra else
                 {"kind": table.frame_ref},
        "directions": len(table.direction_set),
        "weights": "uniform",
        "truncation_defect": table.truncation_defect,
    }
    if extra:
        sidecar.update(extra)
    dump_json(path_json, sidecar)


def read_table(path_csv, path_json) -> tuple[CoefficientTable, dict]:
    with open(path_json, encoding="utf-8") as fh:
        sidecar = json.load(fh)
    with open(path_csv, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    if header[:4] != ["k", "m", "l", "u_index"]:
        raise FormatError(f"{path_csv}: unexpected header {header}")
    nd = len(header) - 6
    if nd not in (2, 3):
        raise FormatError(f"{path_csv}: cannot infer dimension from header")
    keys, key_index = [], {}
    dir_coords: dict[int, tuple] = {}
    entries = {}
    for row in rows:
        if len(row) != len(header):
            raise FormatError(f"{path_csv}: ragged row {row}")
        k_col, m_col, l_col = row[0], row[1], row[2]
        key = (int(k_col), int(m_col)) if m_col != "" else (int(k_col), int(l_col))
        j = int(row[3])
        dir_coords[j] = tuple(float(c) for c in row[4:4 + nd])
        if key not in key_index:
            key_index[key] = len(keys)
            keys.append(key)
        entries[(key_index[key], j)] = complex(float(row[4 + nd]),
                                               float(row[5 + nd]))
    n_dirs = max(dir_coords) + 1
    if sidecar.get("directions") != n_dirs:
        raise ConsistencyError(
            f"sidecar lists {sidecar.get('directions')} directions, "
            f"table has {n_dirs}")
    if sidecar.get("weights", "uniform") != "uniform":
        raise ConsistencyError("only uniform direction weights are supported")
    sphere = 2.0 * np.pi if nd == 2 else 4.0 * np.pi
    dirs = DirectionSet(
        tuple(Direction(np.array(dir_coords[j])) for j in range(n_dirs)),
        np.full(n_dirs, sphere / n_dirs))
    coeffs = np.zeros((len(keys), n_dirs), dtype=np.complex128)
    for (i, j), v in entries.items():
        coeffs[i, j] = v
    table = CoefficientTable(tuple(keys), coeffs, dirs,
                             frame_ref=sidecar.get("frame", {}).get("kind", "unknown"),
                             truncation_defect=sidecar.get("truncation_defect", 0.0))
    return table, sidecar


# ---------------------------------------------------------------------------
# Nets

def write_net_csv(path, nets):
    """One row per net point: `k,u_index,c0,c1[,c2]`."""
    nets = list(nets)
    nd = nets[0].n
    coord_cols = ",".join(f"c{i}" for i in range(nd))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"k,u_index,{coord_cols}\n")
        for net in nets:
            for j, p in enumerate(net.points):
                coords = ",".join(_fmt(c) for c in p.coords)
                fh.write(f"{net.level},{j},{coords}\n")
