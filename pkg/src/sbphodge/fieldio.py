"""Field (de)serialization: CSV and a compact binary format.

Binary layout (little endian):
    magic  b"SBPH"
    u8     format version (1)
    u8     dim (2 or 3)
    u8     kind (0 scalar, 1 vector)
    u32*d  shape
    f64*2d bounds (lo, hi per axis)
    f64*   payload, C order, component axis outermost for vector fields

CSV files carry one metadata comment line, a header row, and one row per node
with the node coordinates followed by the component values.  Floats are
written with ``repr`` so a read-back reproduces the payload bit for bit.
"""

from __future__ import annotations

import csv
import struct

import numpy as np

from .tensor import GridField

_MAGIC = b"SBPH"
_VERSION = 1


def write_field_binary(path, field: GridField) -> None:
    d = field.dim
    kind = 0 if field.kind == "scalar" else 1
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<BBB", _VERSION, d, kind))
        fh.write(struct.pack(f"<{d}I", *field.shape))
        flat_bounds = [x for pair in field.bounds for x in pair]
        fh.write(struct.pack(f"<{2 * d}d", *flat_bounds))
        fh.write(np.ascontiguousarray(field.data, dtype="<f8").tobytes())


def read_field_binary(path) -> GridField:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _MAGIC:
            raise ValueError(f"not a field file (magic {magic!r})")
        version, d, kind = struct.unpack("<BBB", fh.read(3))
        if version != _VERSION:
            raise ValueError(f"unsupported format version {version}")
        shape = struct.unpack(f"<{d}I", fh.read(4 * d))
        flat = struct.unpack(f"<{2 * d}d", fh.read(16 * d))
        bounds = tuple((flat[2 * i], flat[2 * i + 1]) for i in range(d))
        count = int(np.prod(shape)) * (d if kind else 1)
        data = np.frombuffer(fh.read(8 * count), dtype="<f8").astype(np.float64)
    full_shape = (d, *shape) if kind else shape
    return GridField(data.reshape(full_shape), bounds)


def _node_coordinates(shape, bounds):
    axes = [
        lo + (hi - lo) / (n - 1) * np.arange(n) for (lo, hi), n in zip(bounds, shape)
    ]
    return np.meshgrid(*axes, indexing="ij")


def dump_field_csv(stream, field: GridField) -> None:
    d = field.dim
    comps = field.data[None] if field.kind == "scalar" else field.data
    names = ["value"] if field.kind == "scalar" else [f"c{i + 1}" for i in range(d)]
    coords = _node_coordinates(field.shape, field.bounds)
    meta = {
        "dim": d,
        "kind": field.kind,
        "shape": "x".join(str(n) for n in field.shape),
        "bounds": ",".join(f"{repr(lo)}:{repr(hi)}" for lo, hi in field.bounds),
    }
    stream.write("# field " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    writer = csv.writer(stream)
    writer.writerow([f"x{i + 1}" for i in range(d)] + names)
    for row in zip(*(c.ravel() for c in coords), *(c.ravel() for c in comps)):
        writer.writerow([repr(float(x)) for x in row])


def write_field_csv(path, field: GridField) -> None:
    with open(path, "w", newline="") as fh:
        dump_field_csv(fh, field)


def read_field_csv(path) -> GridField:
    with open(path, "r", newline="") as fh:
        header = fh.readline()
        if not header.startswith("# field "):
            raise ValueError("missing field metadata line")
        meta = dict(item.split("=", 1) for item in header[len("# field ") :].split())
        d = int(meta["dim"])
        kind = meta["kind"]
        shape = tuple(int(s) for s in meta["shape"].split("x"))
        bounds = tuple(
            tuple(float(x) for x in pair.split(":"))
            for pair in meta["bounds"].split(",")
        )
        reader = csv.reader(fh)
        next(reader)  # column header
        ncomp = 1 if kind == "scalar" else d
        values = [[float(x) for x in row[d : d + ncomp]] for row in reader if row]
    data = np.array(values, dtype=np.float64).T
    full_shape = shape if kind == "scalar" else (d, *shape)
    return GridField(data.reshape(full_shape), bounds)
