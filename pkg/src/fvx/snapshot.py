"""FVX1 field snapshot files.

Little-endian layout: magic "FVX1", u32 version=1, u8 system tag, u8 ndim,
u32 dims[ndim], u32 component count, f64 time, component-major f64 interior
values (row-major cells, no halos), f64 grid metadata (extents for Cartesian
grids; radius followed by the full vertex array for the sphere), u32 CRC32
of all preceding bytes.
"""

import struct
import zlib
from dataclasses import dataclass

import numpy as np

from .equations import SYSTEM_FROM_TAG, SYSTEM_TAGS
from .errors import FormatError
from .grid import Grid1D, Grid2D, SphereGrid, build_sphere_grid

MAGIC = b"FVX1"
VERSION = 1


@dataclass
class Snapshot:
    system: str
    time: float
    q: np.ndarray  # (ncomp, nx[, ny]) interior cell averages
    grid: object


def _grid_metadata(grid):
    if isinstance(grid, Grid1D):
        return np.array([grid.x_left, grid.x_right], dtype="<f8")
    if isinstance(grid, Grid2D):
        return np.array(
            [grid.x_left, grid.x_right, grid.y_bottom, grid.y_top], dtype="<f8"
        )
    meta = np.empty(1 + grid.vertices.size, dtype="<f8")
    meta[0] = grid.radius
    meta[1:] = grid.vertices.ravel()
    return meta


def write_snapshot(q, grid, time, system, path):
    """Serialize interior cell averages plus grid metadata."""
    q = np.asarray(q, dtype=float)
    dims = q.shape[1:]
    blob = bytearray()
    blob += MAGIC
    blob += struct.pack("<IBB", VERSION, SYSTEM_TAGS[system], len(dims))
    blob += struct.pack(f"<{len(dims)}I", *dims)
    blob += struct.pack("<Id", q.shape[0], float(time))
    blob += np.ascontiguousarray(q, dtype="<f8").tobytes()
    blob += _grid_metadata(grid).tobytes()
    blob += struct.pack("<I", zlib.crc32(bytes(blob)) & 0xFFFFFFFF)
    with open(path, "wb") as f:
        f.write(bytes(blob))


class _Reader:
    def __init__(self, raw):
        self.raw = raw
        self.pos = 0

    def take(self, n, what):
        if self.pos + n > len(self.raw):
            raise FormatError(
                f"truncated snapshot: needed {n} bytes for {what} at offset "
                f"{self.pos}, file has {len(self.raw)}"
            )
        chunk = self.raw[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt, what):
        size = struct.calcsize(fmt)
        return struct.unpack(fmt, self.take(size, what))


def read_snapshot(path):
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < 4 or raw[:4] != MAGIC:
        raise FormatError("not a FVX1 snapshot (bad magic)")
    if len(raw) < 8:
        raise FormatError("truncated snapshot header")
    stored_crc = struct.unpack("<I", raw[-4:])[0]
    actual_crc = zlib.crc32(raw[:-4]) & 0xFFFFFFFF
    if stored_crc != actual_crc:
        raise FormatError(
            f"snapshot checksum mismatch (stored {stored_crc:#010x}, "
            f"computed {actual_crc:#010x})"
        )
    r = _Reader(raw[:-4])
    r.pos = 4
    version, tag, ndim = r.unpack("<IBB", "header")
    if version != VERSION:
        raise FormatError(
            f"unsupported snapshot version {version} "
            "(file must be little-endian FVX1 v1)"
        )
    if tag not in SYSTEM_FROM_TAG:
        raise FormatError(f"unknown system tag {tag}")
    if ndim not in (1, 2):
        raise FormatError(f"unsupported ndim {ndim}")
    dims = r.unpack(f"<{ndim}I", "dims")
    ncomp, time = r.unpack("<Id", "component count / time")
    cells = int(np.prod(dims))
    data = np.frombuffer(r.take(8 * ncomp * cells, "field data"), dtype="<f8")
    q = data.reshape((ncomp,) + tuple(dims)).astype(float)
    system = SYSTEM_FROM_TAG[tag]

    if system == "swe_sphere":
        nx, ny = dims
        meta = np.frombuffer(
            r.take(8 * (1 + 3 * (nx + 1) * (ny + 1)), "sphere metadata"), dtype="<f8"
        )
        grid = build_sphere_grid(nx, ny, float(meta[0]))
    elif ndim == 1:
        meta = np.frombuffer(r.take(16, "grid extents"), dtype="<f8")
        grid = Grid1D(float(meta[0]), float(meta[1]), dims[0])
    else:
        meta = np.frombuffer(r.take(32, "grid extents"), dtype="<f8")
        grid = Grid2D(
            float(meta[0]), float(meta[1]), float(meta[2]), float(meta[3]), *dims
        )
    if r.pos != len(r.raw):
        raise FormatError(f"trailing bytes after grid metadata at offset {r.pos}")
    return Snapshot(system=system, time=float(time), q=q, grid=grid)
