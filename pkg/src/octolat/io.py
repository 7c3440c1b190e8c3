"""On-disk formats for kernels and boundary data.

Binary kernel layout (all little endian)::

    b"OCT8"  u32 version  u8 variant  u8 direction  8 x u32 sizes  f64 h
    u32 count  count x (8 x u32) singular node indices
    values: row-major over m0..m7 (m7 fastest), 8 components, each (f64 re, f64 im)

CSV files carry a header row, integer lattice indices and ``%.17g``
floats, so every double round-trips exactly.
"""

from __future__ import annotations

import csv
import json
import struct
from dataclasses import dataclass

import numpy as np

from octolat.errors import FormatError
from octolat.lattice import DIM, GridFunction, GridSpec
from octolat.layer import LAYER_DIM, BoundaryData

MAGIC = b"OCT8"
VERSION = 1
VARIANTS = ("paper", "exact")
DIRECTIONS = ("+", "-")
_HEADER = struct.Struct("<4sIBB8IdI")
FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class KernelMeta:
    variant: str
    direction: str
    sizes: tuple
    h: float
    singular_nodes: tuple

    def to_dict(self):
        return {
            "variant": self.variant,
            "direction": self.direction,
            "sizes": list(self.sizes),
            "h": self.h,
            "singular_nodes": [list(n) for n in self.singular_nodes],
        }


def kernel_bytes(E, variant, direction, singular_nodes=()):
    """Serialize a torus kernel to the binary format."""
    if variant not in VARIANTS or direction not in DIRECTIONS:
        raise ValueError(f"bad variant/direction {variant!r}/{direction!r}")
    spec = E.spec
    nodes = [tuple(int(v) for v in n) for n in singular_nodes]
    head = _HEADER.pack(MAGIC, VERSION, VARIANTS.index(variant), DIRECTIONS.index(direction),
                        *spec.sizes, spec.h, len(nodes))
    node_bytes = np.asarray(nodes, dtype="<u4").reshape(-1, DIM).tobytes()
    vals = np.asarray(E.values, dtype=complex)
    pairs = np.empty(vals.shape + (2,), dtype="<f8")
    pairs[..., 0] = vals.real
    pairs[..., 1] = vals.imag
    return head + node_bytes + pairs.tobytes()


def write_kernel_bin(path, E, variant, direction, singular_nodes=()):
    with open(path, "wb") as fp:
        fp.write(kernel_bytes(E, variant, direction, singular_nodes))


def read_kernel_bin(path):
    """Load a binary kernel; returns ``(GridFunction, KernelMeta)``.

    Values come back real if every imaginary part is exactly zero.
    """
    with open(path, "rb") as fp:
        data = fp.read()
    if len(data) < _HEADER.size:
        raise FormatError("file too short for a kernel header")
    magic, version, var, dirn, *rest = _HEADER.unpack_from(data, 0)
    sizes, h, count = tuple(rest[:DIM]), rest[DIM], rest[DIM + 1]
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise FormatError(f"unsupported version {version}")
    if var >= len(VARIANTS) or dirn >= len(DIRECTIONS):
        raise FormatError("bad variant or direction code")
    off = _HEADER.size
    node_len = count * DIM * 4
    npts = int(np.prod(sizes))
    if len(data) != off + node_len + npts * 8 * 16:
        raise FormatError("file length does not match its header")
    nodes = np.frombuffer(data, dtype="<u4", count=count * DIM, offset=off).reshape(-1, DIM)
    pairs = np.frombuffer(data, dtype="<f8", offset=off + node_len).reshape(tuple(sizes) + (8, 2))
    vals = pairs[..., 0] + 1j * pairs[..., 1]
    if not np.any(pairs[..., 1]):
        vals = pairs[..., 0].copy()
    spec = GridSpec(tuple(sizes), h)
    meta = KernelMeta(VARIANTS[var], DIRECTIONS[dirn], tuple(sizes), h, tuple(tuple(int(v) for v in n) for n in nodes))
    return GridFunction(spec, vals), meta


def kernel_csv_header():
    cols = [f"m{j}" for j in range(DIM)]
    for c in range(8):
        cols += [f"c{c}_re", f"c{c}_im"]
    return cols


def write_kernel_csv(path, E, variant, direction, singular_nodes=()):
    """Write a kernel as CSV (8 index + 16 value columns) plus ``<path>.meta.json``."""
    spec = E.spec
    idx = np.indices(spec.sizes).reshape(DIM, -1).T
    vals = np.asarray(E.values, dtype=complex).reshape(-1, 8)
    pairs = np.empty((vals.shape[0], 16))
    pairs[:, 0::2] = vals.real
    pairs[:, 1::2] = vals.imag
    with open(path, "w", newline="") as fp:
        fp.write(",".join(kernel_csv_header()) + "\n")
        fmt = ",".join(["%d"] * DIM + [FLOAT_FMT] * 16)
        np.savetxt(fp, np.hstack([idx, pairs]), fmt=fmt)
    meta = KernelMeta(variant, direction, spec.sizes, spec.h, tuple(tuple(int(v) for v in n) for n in singular_nodes))
    with open(str(path) + ".meta.json", "w") as fp:
        json.dump(meta.to_dict(), fp)
        fp.write("\n")


def read_kernel_csv(path):
    with open(str(path) + ".meta.json") as fp:
        m = json.load(fp)
    meta = KernelMeta(m["variant"], m["direction"], tuple(m["sizes"]), float(m["h"]),
                      tuple(tuple(n) for n in m["singular_nodes"]))
    raw = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if raw.shape[1] != DIM + 16:
        raise FormatError(f"expected {DIM + 16} columns, got {raw.shape[1]}")
    spec = GridSpec(meta.sizes, meta.h)
    vals = np.zeros(spec.shape, dtype=complex)
    idx = tuple(raw[:, :DIM].astype(int).T)
    vals[idx] = raw[:, DIM::2] + 1j * raw[:, DIM + 1::2]
    if not np.any(vals.imag):
        vals = vals.real.copy()
    return GridFunction(spec, vals), meta


# --- boundary data -------------------------------------------------------------

BOUNDARY_COLUMNS = [f"m{j}" for j in range(LAYER_DIM)] + [f"c{c}" for c in range(8)]


def write_boundary_csv(path_or_fp, bd):
    """CSV with ``# layer``, ``# h`` and ``# sizes`` comment lines, columns m0..m6, c0..c7."""
    if np.iscomplexobj(bd.values):
        if np.any(bd.values.imag):
            raise ValueError("boundary CSV holds real data only")
        values = bd.values.real
    else:
        values = bd.values
    idx = np.indices(bd.sizes).reshape(LAYER_DIM, -1).T
    own = isinstance(path_or_fp, (str, bytes)) or hasattr(path_or_fp, "__fspath__")
    fp = open(path_or_fp, "w", newline="") if own else path_or_fp
    try:
        fp.write(f"# layer: {bd.layer}\n")
        fp.write(f"# h: {bd.h!r}\n")
        fp.write(f"# sizes: {','.join(str(n) for n in bd.sizes)}\n")
        fp.write(",".join(BOUNDARY_COLUMNS) + "\n")
        fmt = ",".join(["%d"] * LAYER_DIM + [FLOAT_FMT] * 8)
        np.savetxt(fp, np.hstack([idx, values.reshape(-1, 8)]), fmt=fmt)
    finally:
        if own:
            fp.close()


def read_boundary_csv(path, layer=None, h=None):
    """Parse boundary data; ``layer``/``h`` override the comment tags.

    Missing points read as zero.  Sizes come from ``# sizes`` or from the
    largest index present.

    Raises
    ------
    FormatError
        On any malformed content.
    """
    meta = {}
    rows = []
    try:
        with open(path, newline="") as fp:
            lines = fp.read().splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    body = []
    for line in lines:
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            key, _, val = s[1:].partition(":")
            meta[key.strip().lower()] = val.strip()
        else:
            body.append(s)
    if not body:
        raise FormatError("no header row")
    header = [c.strip() for c in next(csv.reader([body[0]]))]
    if header != BOUNDARY_COLUMNS:
        raise FormatError(f"expected columns {BOUNDARY_COLUMNS}, got {header}")
    for lineno, rec in enumerate(csv.reader(body[1:]), start=2):
        if len(rec) != len(BOUNDARY_COLUMNS):
            raise FormatError(f"row {lineno}: expected {len(BOUNDARY_COLUMNS)} fields, got {len(rec)}")
        try:
            ints = [int(v) for v in rec[:LAYER_DIM]]
            floats = [float(v) for v in rec[LAYER_DIM:]]
        except ValueError as exc:
            raise FormatError(f"row {lineno}: {exc}") from exc
        if any(i < 0 for i in ints):
            raise FormatError(f"row {lineno}: negative index")
        if not all(np.isfinite(floats)):
            raise FormatError(f"row {lineno}: non-finite value")
        rows.append((ints, floats))
    if not rows:
        raise FormatError("no data rows")
    try:
        if layer is None:
            layer = int(meta["layer"]) if "layer" in meta else None
        if layer is None:
            raise FormatError("layer tag missing; pass it explicitly")
        if h is None:
            h = float(meta.get("h", 1.0))
        if "sizes" in meta:
            sizes = tuple(int(v) for v in meta["sizes"].split(","))
        else:
            sizes = tuple(max(r[0][j] for r in rows) + 1 for j in range(LAYER_DIM))
    except ValueError as exc:
        raise FormatError(f"bad metadata: {exc}") from exc
    if len(sizes) != LAYER_DIM:
        raise FormatError(f"sizes must list {LAYER_DIM} values")
    vals = np.zeros(sizes + (8,))
    for ints, floats in rows:
        if any(i >= n for i, n in zip(ints, sizes)):
            raise FormatError(f"index {ints} outside sizes {sizes}")
        vals[tuple(ints)] = floats
    try:
        return BoundaryData(sizes, h, vals, layer)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
