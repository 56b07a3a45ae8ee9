"""Point-set loading, tree and stats output, and synthetic data generation.

Two input formats: CSV for interoperability and a small binary matrix
container for speed. Trees go out as diff-friendly tab-separated text.
All readers reject non-finite coordinates and say where they were.
"""

from __future__ import annotations

import csv
import json
import math
import struct
from dataclasses import dataclass

import numpy as np

from .errors import DataError, UsageError
from .geometry import PointSet
from .mst import SpanningTree
from .pipeline import RunStats

__all__ = [
    "BlobSpec",
    "load_csv",
    "load_matrix",
    "save_matrix",
    "load_points",
    "gen_blobs",
    "write_tree",
    "read_tree",
    "write_stats",
]

_MAGIC = b"FMAT"
_HEADER = struct.Struct("<4sBBQQ")  # magic, version, precision, n, d


def _looks_like_header(row) -> bool:
    # labels are whatever float() refuses; "nan"/"inf" still count as data
    for cell in row:
        try:
            float(cell)
        except ValueError:
            return True
    return False


def load_csv(path) -> PointSet:
    """Read a numeric CSV; a single non-numeric first row is treated as a
    header. Errors carry 1-based row/column locations."""
    with open(path, newline="") as fh:
        raw = [row for row in csv.reader(fh) if row]
    if not raw:
        raise DataError(f"{path}: empty file")

    def parse_row(row, lineno):
        values = []
        for c, cell in enumerate(row, start=1):
            try:
                value = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: row {lineno}, column {c}: not numeric: {cell!r}"
                ) from None
            if not math.isfinite(value):
                raise DataError(
                    f"{path}: row {lineno}, column {c}: non-finite value {cell!r}"
                )
            values.append(value)
        return values

    start = 1 if _looks_like_header(raw[0]) else 0
    if start == len(raw):
        raise DataError(f"{path}: header only, no data rows")
    width = len(raw[0])
    rows = []
    for i in range(start, len(raw)):
        row = raw[i]
        if len(row) != width:
            raise DataError(
                f"{path}: row {i + 1}: expected {width} columns, got {len(row)}"
            )
        rows.append(parse_row(row, i + 1))
    return PointSet(np.array(rows, dtype=np.float64))


def save_matrix(path, x: PointSet, precision: int | None = None) -> None:
    """Write the binary matrix container; precision 4 or 8 bytes per value
    (default: whatever the point set already stores)."""
    if precision is None:
        precision = 4 if x.dtype == np.float32 else 8
    if precision not in (4, 8):
        raise UsageError(f"precision must be 4 or 8, got {precision}")
    dtype = np.dtype("<f4") if precision == 4 else np.dtype("<f8")
    header = _HEADER.pack(_MAGIC, 1, precision, x.n, x.d)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(x.data, dtype=dtype).tobytes())


def load_matrix(path) -> PointSet:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise DataError(f"{path}: truncated header ({len(blob)} bytes)")
    magic, version, precision, n, d = _HEADER.unpack_from(blob)
    if magic != _MAGIC:
        raise DataError(f"{path}: bad magic {magic!r}")
    if version != 1:
        raise DataError(f"{path}: unsupported version {version}")
    if precision not in (4, 8):
        raise DataError(f"{path}: unsupported precision {precision}")
    if n < 1 or d < 1:
        raise DataError(f"{path}: header declares empty matrix n={n}, d={d}")
    expected = n * d * precision
    payload = blob[_HEADER.size :]
    if len(payload) != expected:
        raise DataError(
            f"{path}: payload is {len(payload)} bytes, header implies {expected}"
        )
    dtype = np.dtype("<f4") if precision == 4 else np.dtype("<f8")
    arr = np.frombuffer(payload, dtype=dtype).reshape(n, d)
    arr = arr.astype(dtype.newbyteorder("="), copy=True)
    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        r, c = bad[0]
        raise DataError(f"{path}: non-finite value at row {r + 1}, column {c + 1}")
    return PointSet(arr)


def load_points(path) -> PointSet:
    """Load either supported format, sniffing the binary magic."""
    with open(path, "rb") as fh:
        head = fh.read(len(_MAGIC))
    if head == _MAGIC:
        return load_matrix(path)
    return load_csv(path)


@dataclass(frozen=True)
class BlobSpec:
    """Synthetic benchmark data: isotropic Gaussian clusters around
    uniformly drawn centers in a [-box_scale, box_scale]^d box."""

    n: int
    d: int
    centers: int = 10
    std: float = 1.0
    box_scale: float = 10.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 1 or self.d < 1:
            raise UsageError(f"n and d must be >= 1, got n={self.n}, d={self.d}")
        if not (1 <= self.centers <= self.n):
            raise UsageError(
                f"centers must be in [1, n], got {self.centers} with n={self.n}"
            )
        if self.std < 0:
            raise UsageError(f"std must be >= 0, got {self.std}")
        if self.box_scale <= 0:
            raise UsageError(f"box_scale must be > 0, got {self.box_scale}")


def gen_blobs(spec: BlobSpec) -> PointSet:
    """Deterministic per seed; points are assigned to centers in contiguous
    near-equal blocks (first n % centers blocks get the extra point)."""
    rng = np.random.default_rng(spec.seed)
    centers = rng.uniform(-spec.box_scale, spec.box_scale, (spec.centers, spec.d))
    counts = np.full(spec.centers, spec.n // spec.centers, dtype=np.int64)
    counts[: spec.n % spec.centers] += 1
    assign = np.repeat(np.arange(spec.centers), counts)
    noise = rng.normal(0.0, spec.std, (spec.n, spec.d)) if spec.std > 0 else 0.0
    return PointSet(centers[assign] + noise)


def write_tree(path, tree: SpanningTree) -> None:
    """One "u<TAB>v<TAB>weight" line per edge (u < v, sorted by (u, v)),
    then a "# total_weight W" trailer. Weights use the shortest decimal
    that round-trips, so rewriting a parsed file is byte-identical."""
    with open(path, "w", newline="\n") as fh:
        for a, b, w in zip(tree.u, tree.v, tree.w):
            fh.write(f"{int(a)}\t{int(b)}\t{float(w)!r}\n")
        fh.write(f"# total_weight {float(tree.total_weight)!r}\n")


def read_tree(path) -> SpanningTree:
    us: list = []
    vs: list = []
    ws: list = []
    trailer = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                parts = line.split()
                if len(parts) != 3 or parts[1] != "total_weight":
                    raise DataError(f"{path}: line {lineno}: bad trailer {line!r}")
                trailer = float(parts[2])
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataError(f"{path}: line {lineno}: expected 3 fields")
            try:
                a, b, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise DataError(
                    f"{path}: line {lineno}: unparseable edge {line!r}"
                ) from None
            us.append(a)
            vs.append(b)
            ws.append(w)
    if trailer is None:
        raise DataError(f"{path}: missing total_weight trailer")
    if not us:
        raise DataError(f"{path}: no edges")
    n = max(max(us), max(vs)) + 1
    total = math.fsum(ws)
    if abs(total - trailer) > 1e-9 * max(1.0, abs(total)):
        raise DataError(
            f"{path}: trailer weight {trailer} does not match edge sum {total}"
        )
    return SpanningTree(
        n=n,
        u=np.array(us, dtype=np.int64),
        v=np.array(vs, dtype=np.int64),
        w=np.array(ws, dtype=np.float64),
        total_weight=total,
    )


def write_stats(path, stats: RunStats) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(stats.to_dict(), fh, indent=2)
        fh.write("\n")
