"""Parallel-beam sampling geometry for OPED reconstruction.

All views, detector offsets and interpolation nodes live on the unit disk.
View angles are ``phi_nu = 2*pi*nu/(2m+1)``; detector offsets are
``t_j = cos(psi_j)`` with ``psi_j`` chosen per :class:`Variant`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

MAX_M = 2**15


class Variant(enum.IntEnum):
    """Quadrature family used for the detector offsets.

    ``TYPE_I`` places detectors at zeros of the Chebyshev polynomial of the
    first kind (2m+1 detectors, j = 0..2m); ``TYPE_II`` at zeros of the
    second kind (2m detectors, j = 1..2m).
    """

    TYPE_I = 1
    TYPE_II = 2


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ScanGeometry:
    """Node sets for a given ``m`` and variant. Build with :func:`build_geometry`."""

    m: int
    variant: Variant
    phi: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)
    t: np.ndarray = field(repr=False)
    xi: np.ndarray = field(repr=False)

    @property
    def n_views(self) -> int:
        return 2 * self.m + 1

    @property
    def n_detectors(self) -> int:
        return self.psi.size

    @property
    def shape(self) -> tuple[int, int]:
        """Sinogram shape, ``(views, detectors)``."""
        return (self.n_views, self.n_detectors)

    @property
    def node_spacing(self) -> float:
        return math.pi / (2 * self.m + 1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScanGeometry):
            return NotImplemented
        return self.m == other.m and self.variant == other.variant

    def __hash__(self) -> int:
        return hash((self.m, int(self.variant)))


def build_geometry(m: int, variant: Variant | int = Variant.TYPE_I, *, max_m: int = MAX_M) -> ScanGeometry:
    """Construct the OPED scan geometry.

    Parameters
    ----------
    m : int
        Resolution parameter; the scan uses ``2m+1`` views.
    variant : Variant or int
        ``Variant.TYPE_I`` (default) or ``Variant.TYPE_II``.
    max_m : int
        Upper bound accepted for ``m``.

    Returns
    -------
    ScanGeometry
        Lengths of ``(phi, psi, xi)`` are ``(2m+1, 2m+1, 2m)`` for type I and
        ``(2m+1, 2m, 2m+1)`` for type II.

    Raises
    ------
    ValueError
        If ``m`` is not an integer in ``[1, max_m]`` or the variant is unknown.
    """
    if isinstance(m, bool) or int(m) != m:
        raise ValueError(f"m must be an integer, got {m!r}")
    m = int(m)
    if m < 1 or m > max_m:
        raise ValueError(f"m must lie in [1, {max_m}], got {m}")
    try:
        variant = Variant(variant)
    except ValueError:
        raise ValueError(f"unknown variant {variant!r}; expected 1 or 2") from None

    n = 2 * m + 1
    nu = np.arange(n, dtype=np.float64)
    phi = 2.0 * np.pi * nu / n
    if variant is Variant.TYPE_I:
        j = np.arange(n, dtype=np.float64)
        psi = (2.0 * j + 1.0) * np.pi / (2.0 * n)
        xi = (np.arange(n - 1, dtype=np.float64) + 1.0) * np.pi / n
    else:
        j = np.arange(1, n, dtype=np.float64)
        psi = j * np.pi / n
        xi = (np.arange(n, dtype=np.float64) + 0.5) * np.pi / n
    t = np.cos(psi)
    return ScanGeometry(m, variant, _frozen(phi), _frozen(psi), _frozen(t), _frozen(xi))


def theta(geometry: ScanGeometry, nu, x, y):
    """Angle ``arccos(x cos(phi_nu) + y sin(phi_nu))`` in ``[0, pi]``.

    Broadcasts over ``nu``, ``x`` and ``y``. The inner product is clamped to
    ``[-1, 1]`` before ``arccos``.
    """
    phi = geometry.phi[np.asarray(nu)]
    c = np.asarray(x) * np.cos(phi) + np.asarray(y) * np.sin(phi)
    out = np.arccos(np.clip(c, -1.0, 1.0))
    return out if np.ndim(out) else float(out)


def roi_radius(m: int) -> float:
    """Largest disk radius on which the fast algorithm is well defined: ``cos(pi/(2m+1))``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    return math.cos(math.pi / (2 * m + 1))


@dataclass(frozen=True, eq=False)
class Sinogram:
    """Radon line integrals ``data[nu, j] = Rf(phi_nu, t_j)`` sampled on ``geometry``."""

    geometry: ScanGeometry
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64, copy=True)
        if data.shape != self.geometry.shape:
            raise ValueError(
                f"sinogram shape {data.shape} does not match geometry {self.geometry.shape}"
            )
        if not np.all(np.isfinite(data)):
            raise ValueError("sinogram contains non-finite values")
        object.__setattr__(self, "data", _frozen(data))

    def __add__(self, other: Sinogram) -> Sinogram:
        if other.geometry != self.geometry:
            raise ValueError("geometries differ")
        return Sinogram(self.geometry, self.data + other.data)

    def __mul__(self, c: float) -> Sinogram:
        return Sinogram(self.geometry, c * self.data)

    __rmul__ = __mul__
