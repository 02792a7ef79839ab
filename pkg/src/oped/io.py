"""Binary sinogram and image files, PGM export and CSV dumps.

All multi-byte fields are little-endian except PGM samples (big-endian, as
the format requires).

Sinogram file::

    b"OPEDSINO" | u32 version=1 | u32 m | u8 variant | 3 zero bytes | f64[views * detectors]

Raw image file::

    b"OPEDIMG0" | u32 version=1 | u32 M | f64 roi | f64 fill | f64[M * M]
"""

from __future__ import annotations

import json
import struct
from os import PathLike

import numpy as np

from .geometry import Sinogram, build_geometry
from .grid import ImageGrid

SINO_MAGIC = b"OPEDSINO"
IMAGE_MAGIC = b"OPEDIMG0"
VERSION = 1

_SINO_HEADER = struct.Struct("<8sIIB3x")
_IMAGE_HEADER = struct.Struct("<8sIIdd")
_F64 = np.dtype("<f8")


class OpedFileError(Exception):
    """Base class for file-format errors."""


class FormatError(OpedFileError):
    """Wrong magic bytes or malformed header."""


class VersionError(OpedFileError):
    pass


class TruncatedError(OpedFileError):
    """Payload shorter (or longer) than the header implies."""


class NonFiniteError(OpedFileError):
    pass


def _read_bytes(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _payload(raw: bytes, offset: int, count: int) -> np.ndarray:
    expected = count * _F64.itemsize
    if len(raw) - offset != expected:
        raise TruncatedError(f"expected {expected} payload bytes, found {len(raw) - offset}")
    data = np.frombuffer(raw, dtype=_F64, count=count, offset=offset).astype(np.float64)
    if not np.all(np.isfinite(data)):
        raise NonFiniteError("payload contains non-finite values")
    return data


def _check_magic(raw: bytes, magic: bytes, header: struct.Struct):
    if len(raw) < len(magic) or raw[: len(magic)] != magic:
        raise FormatError(f"bad magic: expected {magic!r}")
    if len(raw) < header.size:
        raise TruncatedError("file shorter than its header")
    fields = header.unpack_from(raw)
    if fields[1] != VERSION:
        raise VersionError(f"unsupported version {fields[1]} (expected {VERSION})")
    return fields


def sinogram_to_bytes(s: Sinogram) -> bytes:
    g = s.geometry
    head = _SINO_HEADER.pack(SINO_MAGIC, VERSION, g.m, int(g.variant))
    return head + np.ascontiguousarray(s.data, dtype=_F64).tobytes()


def sinogram_from_bytes(raw: bytes) -> Sinogram:
    _, _, m, variant = _check_magic(raw, SINO_MAGIC, _SINO_HEADER)
    try:
        g = build_geometry(m, variant)
    except ValueError as exc:
        raise FormatError(str(exc)) from exc
    data = _payload(raw, _SINO_HEADER.size, g.n_views * g.n_detectors)
    return Sinogram(g, data.reshape(g.shape))


def write_sinogram(s: Sinogram, path: str | PathLike) -> None:
    with open(path, "wb") as fh:
        fh.write(sinogram_to_bytes(s))


def read_sinogram(path: str | PathLike) -> Sinogram:
    return sinogram_from_bytes(_read_bytes(path))


def image_to_bytes(img: ImageGrid) -> bytes:
    head = _IMAGE_HEADER.pack(IMAGE_MAGIC, VERSION, img.M, img.roi, img.fill)
    return head + np.ascontiguousarray(img.values, dtype=_F64).tobytes()


def image_from_bytes(raw: bytes) -> ImageGrid:
    _, _, M, roi, fill = _check_magic(raw, IMAGE_MAGIC, _IMAGE_HEADER)
    if M < 1:
        raise FormatError(f"invalid image size {M}")
    data = _payload(raw, _IMAGE_HEADER.size, M * M)
    img = ImageGrid(data.reshape(M, M), roi=roi, fill=fill)
    if not np.array_equal(img.values, data.reshape(M, M)):
        raise FormatError("pixels outside the ROI do not hold the fill value")
    return img


def write_image(img: ImageGrid, path: str | PathLike) -> None:
    with open(path, "wb") as fh:
        fh.write(image_to_bytes(img))


def read_image(path: str | PathLike) -> ImageGrid:
    return image_from_bytes(_read_bytes(path))


def pgm_samples(values: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Map ``[min, max]`` linearly onto ``[0, 65535]``; constant images map to 0."""
    v = np.asarray(values, dtype=np.float64)
    lo, hi = float(v.min()), float(v.max())
    if hi > lo:
        q = np.round(65535.0 * (v - lo) / (hi - lo))
    else:
        q = np.zeros(v.shape)
    return q.astype(">u2"), lo, hi


def export_pgm(img: ImageGrid | np.ndarray, path: str | PathLike, sidecar: str | PathLike | None = None) -> None:
    """Write a 16-bit binary PGM plus a JSON sidecar ``{"min": ..., "max": ...}``.

    The sidecar defaults to ``<path>.json``.
    """
    values = img.values if isinstance(img, ImageGrid) else np.asarray(img)
    q, lo, hi = pgm_samples(values)
    rows, cols = q.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n65535\n".encode("ascii"))
        fh.write(q.tobytes())
    with open(sidecar if sidecar is not None else f"{path}.json", "w") as fh:
        json.dump({"min": lo, "max": hi}, fh)


def read_pgm(path: str | PathLike) -> np.ndarray:
    """Read back the 16-bit samples of a PGM written by :func:`export_pgm`."""
    raw = _read_bytes(path)
    fields, pos = [], 0
    while len(fields) < 4:
        while pos < len(raw) and raw[pos : pos + 1].isspace():
            pos += 1
        end = pos
        while end < len(raw) and not raw[end : end + 1].isspace():
            end += 1
        if end == pos:
            raise FormatError("PGM header is incomplete")
        fields.append(raw[pos:end])
        pos = end
    if fields[0] != b"P5":
        raise FormatError("not a binary PGM file")
    cols, rows, maxval = (int(f) for f in fields[1:])
    if maxval != 65535:
        raise FormatError(f"expected maxval 65535, got {maxval}")
    body = raw[pos + 1 :]
    if len(body) != 2 * rows * cols:
        raise TruncatedError("PGM sample data has the wrong length")
    return np.frombuffer(body, dtype=">u2").reshape(rows, cols).astype(np.uint16)


def export_sinogram_csv(s: Sinogram, path: str | PathLike) -> None:
    """Debug dump with header ``nu,j,phi,t,value``; ``j`` is the variant's detector index."""
    g = s.geometry
    first = 0 if g.variant == 1 else 1
    with open(path, "w") as fh:
        fh.write("nu,j,phi,t,value\n")
        for nu in range(g.n_views):
            for jj in range(g.n_detectors):
                fh.write(f"{nu},{jj + first},{float(g.phi[nu])!r},{float(g.t[jj])!r},{float(s.data[nu, jj])!r}\n")
