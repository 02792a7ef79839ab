"""Image comparison metrics.

``rse(X, XR)`` is normalized by the *second* argument (the reconstruction),
not by the reference image: ``sum (XR - X)^2 / sum XR^2``. It is therefore
not symmetric. :func:`rse_reference` offers the conventional normalization.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .grid import ImageGrid


def _values(a) -> np.ndarray:
    return a.values if isinstance(a, ImageGrid) else np.asarray(a, dtype=np.float64)


def _pair(a, b, mask=None):
    va, vb = _values(a), _values(b)
    if va.shape != vb.shape:
        raise ValueError(f"image shapes differ: {va.shape} vs {vb.shape}")
    if mask is not None:
        return va[mask], vb[mask]
    return va.ravel(), vb.ravel()


def rse(x, xr, mask=None) -> float:
    """Relative square error ``sum (xr - x)^2 / sum xr^2``; ``x`` is the reference."""
    va, vb = _pair(x, xr, mask)
    den = float(np.dot(vb, vb))
    if den == 0.0:
        raise ValueError("RSE is undefined for an all-zero reconstructed image")
    d = vb - va
    return float(np.dot(d, d)) / den


def rse_reference(x, xr, mask=None) -> float:
    """Relative square error normalized by the reference image ``x``."""
    va, vb = _pair(x, xr, mask)
    den = float(np.dot(va, va))
    if den == 0.0:
        raise ValueError("relative error is undefined for an all-zero reference image")
    d = vb - va
    return float(np.dot(d, d)) / den


def me(a, b, mask=None) -> float:
    """Mean absolute pixel difference."""
    va, vb = _pair(a, b, mask)
    return float(np.mean(np.abs(va - vb)))


def max_abs(a, b, mask=None) -> float:
    va, vb = _pair(a, b, mask)
    return float(np.max(np.abs(va - vb)))


def diff_image(a: ImageGrid, b: ImageGrid) -> ImageGrid:
    """Pixelwise ``a - b``, masked to the smaller of the two ROIs."""
    if a.values.shape != b.values.shape:
        raise ValueError(f"image shapes differ: {a.values.shape} vs {b.values.shape}")
    return ImageGrid(a.values - b.values, roi=min(a.roi, b.roi), fill=a.fill - b.fill)


@dataclass(frozen=True)
class ErrorReport:
    rse: float
    me: float
    max_abs: float
    n_pixels: int
    roi_only: bool

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def compare(reference, reconstructed, roi_only: bool = False) -> ErrorReport:
    """All metrics between a reference and a reconstruction.

    With ``roi_only`` the comparison is restricted to pixels inside both
    images' ROI disks; otherwise all ``M**2`` pixels count.
    """
    mask = None
    if roi_only:
        if not (isinstance(reference, ImageGrid) and isinstance(reconstructed, ImageGrid)):
            raise TypeError("roi_only needs ImageGrid inputs")
        mask = reference.mask & reconstructed.mask
    va, _ = _pair(reference, reconstructed, mask)
    return ErrorReport(
        rse=rse(reference, reconstructed, mask),
        me=me(reference, reconstructed, mask),
        max_abs=max_abs(reference, reconstructed, mask),
        n_pixels=int(va.size),
        roi_only=roi_only,
    )
