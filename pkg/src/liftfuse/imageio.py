"""Image file I/O: binary PGM and a raw little-endian float format.

PGM (P5, 8- or 16-bit) samples are normalized to [0, 1] on read and
denormalized with clipping on write, so transforms of PGM input operate on
unit-range data.

The raw format is lossless and head-simple: a 16-byte header of magic
``LFRW``, little-endian uint32 width, uint32 height and uint32 bytes per
sample (4 for float32, 8 for float64), followed by row-major little-endian
samples.
"""

from __future__ import annotations

import re
import struct

import numpy as np

from .engine import Image2D

__all__ = ["read_image", "write_image", "read_pgm", "write_pgm", "read_raw", "write_raw"]

RAW_MAGIC = b"LFRW"


def read_pgm(path) -> Image2D:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM file")
    # Header: magic, width, height, maxval; comments may appear between tokens.
    tokens = []
    pos = 2
    while len(tokens) < 3:
        m = re.match(rb"(?:\s+|\s*#[^\n]*\n)*(\d+)", data[pos:])
        if not m:
            raise ValueError(f"{path}: malformed PGM header")
        tokens.append(int(m.group(1)))
        pos += m.end()
    width, height, maxval = tokens
    pos += 1  # single whitespace after maxval
    if maxval <= 0 or maxval >= 65536:
        raise ValueError(f"{path}: unsupported PGM maxval {maxval}")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height
    if len(data) - pos < count * dtype.itemsize:
        raise ValueError(f"{path}: truncated PGM data")
    samples = np.frombuffer(data, dtype=dtype, count=count, offset=pos)
    arr = samples.reshape(height, width).astype(np.float64) / float(maxval)
    return Image2D(arr)


def write_pgm(path, image: Image2D, maxval: int = 255) -> None:
    if maxval <= 0 or maxval >= 65536:
        raise ValueError(f"unsupported PGM maxval {maxval}")
    arr = np.clip(image.data.astype(np.float64), 0.0, 1.0)
    q = np.rint(arr * maxval)
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    with open(path, "wb") as fh:
        fh.write(f"P5\n{image.width} {image.height}\n{maxval}\n".encode())
        fh.write(q.astype(dtype).tobytes())


def read_raw(path) -> Image2D:
    with open(path, "rb") as fh:
        header = fh.read(16)
        if len(header) != 16 or header[:4] != RAW_MAGIC:
            raise ValueError(f"{path}: not a raw image file (bad magic)")
        width, height, sample_bytes = struct.unpack("<III", header[4:16])
        if sample_bytes == 4:
            dtype = np.dtype("<f4")
        elif sample_bytes == 8:
            dtype = np.dtype("<f8")
        else:
            raise ValueError(f"{path}: unsupported sample width {sample_bytes}")
        payload = fh.read(width * height * sample_bytes)
    if len(payload) < width * height * sample_bytes:
        raise ValueError(f"{path}: truncated raw data")
    samples = np.frombuffer(payload, dtype=dtype, count=width * height)
    return Image2D(samples.reshape(height, width).astype(dtype.newbyteorder("=")))


def write_raw(path, image: Image2D) -> None:
    arr = image.data
    sample_bytes = arr.dtype.itemsize
    with open(path, "wb") as fh:
        fh.write(RAW_MAGIC)
        fh.write(struct.pack("<III", image.width, image.height, sample_bytes))
        fh.write(arr.astype(arr.dtype.newbyteorder("<")).tobytes())


def read_image(path) -> Image2D:
    """Read PGM or raw, sniffing the magic bytes."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic[:2] == b"P5":
        return read_pgm(path)
    if magic == RAW_MAGIC:
        return read_raw(path)
    raise ValueError(f"{path}: unrecognized image format (expected PGM or raw)")


def write_image(path, image: Image2D) -> None:
    """Write by extension: ``.pgm`` clips to [0, 1], anything else is raw."""
    if str(path).lower().endswith(".pgm"):
        write_pgm(path, image)
    else:
        write_raw(path, image)
