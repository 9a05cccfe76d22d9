"""Writer for the PGRS binary embedding format.

Little-endian; header = magic "PGRS", format version u32 (=1), n u64,
d u32, dtype code u8 (=1, float32), 3 reserved zero bytes; body = n
records of (id u64, d float32 values). This mirrors, byte for byte, the
format the selection engine reads.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"PGRS"
FORMAT_VERSION = 1
DTYPE_FLOAT32 = 1
_HEADER = struct.Struct("<4sIQIB3x")


def write_pgrs(ids: np.ndarray, rows: np.ndarray, path: str | Path) -> None:
    ids = np.ascontiguousarray(ids, dtype=np.uint64)
    rows = np.ascontiguousarray(rows, dtype=np.float32)
    if rows.ndim != 2 or rows.shape[0] != ids.shape[0]:
        raise ValueError("ids and rows must align")
    n, d = rows.shape
    if n < 1 or d < 1:
        raise ValueError("nothing to write")
    if not np.all(np.isfinite(rows)):
        raise ValueError("non-finite embedding value")
    rec = struct.Struct(f"<Q{d}f")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, n, d, DTYPE_FLOAT32))
        for i in range(n):
            fh.write(rec.pack(int(ids[i]), *rows[i].tolist()))
