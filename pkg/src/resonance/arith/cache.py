"""Versioned binary cache for coefficient series.

Layout (little-endian)::

    magic   8 bytes   b"RESCOEF\\0"
    version u16
    labellen u16, label utf-8
    n_max   u64
    crc32   u32       of the record block
    records n_max x (u64 n, f64 re, f64 im)
"""

from __future__ import annotations

import os
import struct
import zlib
from pathlib import Path

import numpy as np

from resonance.arith.cuspforms import CoefficientSeries
from resonance.errors import CacheMissError, IntegrityError

MAGIC = b"RESCOEF\0"
VERSION = 1
CACHE_ENV = "RESONANCE_CACHE_DIR"
_RECORD = np.dtype([("n", "<u8"), ("re", "<f8"), ("im", "<f8")])


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "resonance"


def cache_path(directory, label: str, n_max: int) -> Path:
    return Path(directory) / f"{label}-{int(n_max)}.coef"


def cache_write(directory, series: CoefficientSeries) -> Path:
    """Write ``series`` and return the file path (atomic rename)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    n_max = series.n_max
    rec = np.empty(n_max, dtype=_RECORD)
    rec["n"] = np.arange(1, n_max + 1)
    rec["re"] = series.values[1:].real
    rec["im"] = series.values[1:].imag
    body = rec.tobytes()
    label = series.label.encode("utf-8")
    header = MAGIC + struct.pack("<HH", VERSION, len(label)) + label
    header += struct.pack("<QI", n_max, zlib.crc32(body))
    path = cache_path(directory, series.label, n_max)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(header + body)
    os.replace(tmp, path)
    return path


def cache_read(directory, label: str, n_max: int) -> CoefficientSeries:
    """Load a cached series.

    Raises:
        CacheMissError: no file for ``(label, n_max)``.
        IntegrityError: bad magic, version, header or checksum, or a
            truncated file.
    """
    path = cache_path(directory, label, n_max)
    if not path.exists():
        raise CacheMissError(f"no cached coefficients for {label} up to {n_max} in {directory}")
    data = path.read_bytes()
    if data[:8] != MAGIC:
        raise IntegrityError(f"{path}: bad magic")
    try:
        version, llen = struct.unpack_from("<HH", data, 8)
        if version != VERSION:
            raise IntegrityError(f"{path}: version {version}, expected {VERSION}")
        file_label = data[12 : 12 + llen].decode("utf-8")
        stored_n, crc = struct.unpack_from("<QI", data, 12 + llen)
    except (struct.error, UnicodeDecodeError) as exc:
        raise IntegrityError(f"{path}: unreadable header ({exc})") from None
    if file_label != label or stored_n != n_max:
        raise IntegrityError(f"{path}: header says {file_label!r}/{stored_n}")
    body = data[12 + llen + 12 :]
    if len(body) != n_max * _RECORD.itemsize:
        raise IntegrityError(f"{path}: truncated ({len(body)} record bytes)")
    if zlib.crc32(body) != crc:
        raise IntegrityError(f"{path}: checksum mismatch")
    rec = np.frombuffer(body, dtype=_RECORD)
    if not np.array_equal(rec["n"], np.arange(1, n_max + 1, dtype=np.uint64)):
        raise IntegrityError(f"{path}: record indices out of order")
    vals = np.zeros(n_max + 1, dtype=complex)
    vals[1:] = rec["re"] + 1j * rec["im"]
    vals.setflags(write=False)
    return CoefficientSeries(label, vals)
