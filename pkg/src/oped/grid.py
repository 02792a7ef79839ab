"""Square pixel grids over ``[-1, 1]^2``.

Pixel ``(r, c)`` of an ``M x M`` grid has its center at
``x = (2c+1)/M - 1`` and ``y = 1 - (2r+1)/M``: row-major, top row has the
largest ``y``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def pixel_centers(M: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(x, y)`` arrays of shape ``(M, M)`` with the pixel-center coordinates."""
    if M < 1:
        raise ValueError(f"grid size must be >= 1, got {M}")
    k = np.arange(M, dtype=np.float64)
    xs = (2.0 * k + 1.0) / M - 1.0
    ys = 1.0 - (2.0 * k + 1.0) / M
    x, y = np.meshgrid(xs, ys)
    return x, y


def roi_mask(M: int, radius: float) -> np.ndarray:
    x, y = pixel_centers(M)
    return x * x + y * y <= radius * radius


@dataclass(frozen=True, eq=False)
class ImageGrid:
    """An ``M x M`` image; pixels outside the disk of radius ``roi`` hold ``fill``."""

    values: np.ndarray
    roi: float
    fill: float = 0.0

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, copy=True)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"image must be square, got shape {v.shape}")
        v[~roi_mask(v.shape[0], self.roi)] = self.fill
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def M(self) -> int:
        return self.values.shape[0]

    @property
    def mask(self) -> np.ndarray:
        return roi_mask(self.M, self.roi)
