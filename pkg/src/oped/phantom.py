"""Analytic phantoms with exact Radon projections.

Two families are supported: sums of constant-intensity ellipses (the
Shepp-Logan head phantom among them) and bivariate polynomials restricted to
the unit disk. Both project exactly onto a :class:`~oped.geometry.ScanGeometry`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from os import PathLike
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as P

from .geometry import ScanGeometry, Sinogram
from .grid import ImageGrid, pixel_centers

_CONTAIN_TOL = 1e-12


@dataclass(frozen=True)
class Ellipse:
    """Constant-intensity ellipse; ``alpha`` rotates the ``a`` axis off the x axis (radians)."""

    cx: float
    cy: float
    a: float
    b: float
    alpha: float
    rho: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError(f"semi-axes must be positive, got a={self.a}, b={self.b}")
        if math.hypot(self.cx, self.cy) + max(self.a, self.b) > 1.0 + _CONTAIN_TOL:
            raise ValueError(f"ellipse {self} is not contained in the unit disk")


@dataclass(frozen=True)
class EllipsePhantom:
    ellipses: tuple[Ellipse, ...]

    def __post_init__(self):
        object.__setattr__(self, "ellipses", tuple(self.ellipses))
        if not self.ellipses:
            raise ValueError("phantom needs at least one ellipse")

    def scaled(self, c: float) -> EllipsePhantom:
        return EllipsePhantom(tuple(Ellipse(e.cx, e.cy, e.a, e.b, e.alpha, c * e.rho) for e in self.ellipses))

    def rotated(self, angle: float) -> EllipsePhantom:
        """The phantom rotated counter-clockwise by ``angle`` about the origin."""
        ca, sa = math.cos(angle), math.sin(angle)
        return EllipsePhantom(tuple(
            Ellipse(ca * e.cx - sa * e.cy, sa * e.cx + ca * e.cy, e.a, e.b, e.alpha + angle, e.rho)
            for e in self.ellipses
        ))

    @property
    def sup_norm(self) -> float:
        """Upper bound on ``max |f|``: the sum of ``|rho|``."""
        return float(sum(abs(e.rho) for e in self.ellipses))


class PolynomialField:
    """Bivariate polynomial ``sum c[i, j] x**i y**j`` with ``i + j <= degree``, zero off the disk."""

    def __init__(self, coefficients):
        c = np.atleast_2d(np.array(coefficients, dtype=np.float64))
        if c.ndim != 2:
            raise ValueError("coefficients must be a 2-D table indexed by (i, j)")
        nz = np.nonzero(c)
        self.degree = int((nz[0] + nz[1]).max()) if nz[0].size else 0
        d = self.degree + 1
        full = np.zeros((d, d))
        i, j = nz
        full[i, j] = c[i, j]
        self.coefficients = full
        self.coefficients.setflags(write=False)

    def __call__(self, x, y):
        return P.polyval2d(np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64), self.coefficients)

    def __repr__(self):
        return f"PolynomialField(degree={self.degree})"

    @classmethod
    def random(cls, degree: int, rng: np.random.Generator, l1_norm: float = 1.0) -> PolynomialField:
        """Random polynomial of total degree ``degree`` with ``||coefficients||_1 == l1_norm``."""
        d = degree + 1
        c = rng.standard_normal((d, d))
        i, j = np.indices(c.shape)
        c[i + j > degree] = 0.0
        c *= l1_norm / np.abs(c).sum()
        return cls(c)

    @property
    def l1_norm(self) -> float:
        return float(np.abs(self.coefficients).sum())

    @property
    def sup_norm(self) -> float:
        """Upper bound on ``max |f|`` over the disk (``|x**i y**j| <= 1`` there)."""
        return self.l1_norm


Phantom = Union[EllipsePhantom, PolynomialField]


def shepp_logan() -> EllipsePhantom:
    """Standard 10-ellipse Shepp-Logan head phantom (value 1.02 at the origin)."""
    table = [
        # a, b, cx, cy, alpha (deg), rho
        (0.69, 0.92, 0.0, 0.0, 0.0, 2.0),
        (0.6624, 0.874, 0.0, -0.0184, 0.0, -0.98),
        (0.11, 0.31, 0.22, 0.0, -18.0, -0.02),
        (0.16, 0.41, -0.22, 0.0, 18.0, -0.02),
        (0.21, 0.25, 0.0, 0.35, 0.0, 0.01),
        (0.046, 0.046, 0.0, 0.1, 0.0, 0.01),
        (0.046, 0.046, 0.0, -0.1, 0.0, 0.01),
        (0.046, 0.023, -0.08, -0.605, 0.0, 0.01),
        (0.023, 0.023, 0.0, -0.605, 0.0, 0.01),
        (0.023, 0.046, 0.06, -0.605, 0.0, 0.01),
    ]
    return EllipsePhantom(tuple(
        Ellipse(cx, cy, a, b, math.radians(deg), rho) for a, b, cx, cy, deg, rho in table
    ))


def unit_disk(rho: float = 1.0) -> EllipsePhantom:
    return EllipsePhantom((Ellipse(0.0, 0.0, 1.0, 1.0, 0.0, rho),))


def smooth_bump(power: int = 3) -> PolynomialField:
    """``(1 - x**2 - y**2) ** power``, a polynomial that vanishes on the unit circle."""
    base = np.array([[1.0, 0.0, -1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    c = np.ones((1, 1))
    for _ in range(power):
        c = _polymul2d(c, base)
    return PolynomialField(c)


def _polymul2d(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1))
    for (i, j), v in np.ndenumerate(a):
        if v:
            out[i : i + b.shape[0], j : j + b.shape[1]] += v * b
    return out


def eval_phantom(p: Phantom, x, y):
    """Phantom intensity at ``(x, y)``; broadcasts over array inputs."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if isinstance(p, PolynomialField):
        out = np.where(x * x + y * y <= 1.0, p(x, y), 0.0)
    else:
        out = np.zeros(np.broadcast(x, y).shape)
        for e in p.ellipses:
            dx, dy = x - e.cx, y - e.cy
            ca, sa = math.cos(e.alpha), math.sin(e.alpha)
            u = (dx * ca + dy * sa) / e.a
            v = (-dx * sa + dy * ca) / e.b
            out = out + np.where(u * u + v * v <= 1.0, e.rho, 0.0)
    return out if out.ndim else float(out)


def radon_ellipse(e: Ellipse, phi, t):
    """Exact line integral of one ellipse along ``x cos(phi) + y sin(phi) = t``."""
    phi = np.asarray(phi, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    tp = t - e.cx * np.cos(phi) - e.cy * np.sin(phi)
    g = phi - e.alpha
    s2 = (e.a * np.cos(g)) ** 2 + (e.b * np.sin(g)) ** 2
    inside = tp * tp < s2
    chord = np.sqrt(np.where(inside, s2 - tp * tp, 0.0))
    out = np.where(inside, 2.0 * e.rho * e.a * e.b * chord / s2, 0.0)
    return out if out.ndim else float(out)


def radon_polynomial(f: PolynomialField, phi, t):
    """Exact line integral of a polynomial over the chord of the unit disk.

    Uses Gauss-Legendre quadrature with ``ceil((deg+1)/2) + 1`` nodes, which
    integrates the restriction of ``f`` to a line exactly.

    Raises
    ------
    ValueError
        If any ``|t| > 1``. Tangent lines (``|t| == 1``) integrate to 0.
    """
    phi = np.asarray(phi, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if np.any(np.abs(t) > 1.0):
        raise ValueError("|t| must not exceed 1")
    n = -(-(f.degree + 1) // 2) + 1
    nodes, weights = np.polynomial.legendre.leggauss(n)
    phi, t = np.broadcast_arrays(phi, t)
    half = np.sqrt(np.maximum(1.0 - t * t, 0.0))[..., None]
    s = half * nodes
    c, sn = np.cos(phi)[..., None], np.sin(phi)[..., None]
    x = t[..., None] * c - s * sn
    y = t[..., None] * sn + s * c
    out = (f(x, y) * weights).sum(axis=-1) * half[..., 0]
    return out if out.ndim else float(out)


def radon(p: Phantom, phi, t):
    """Line integral of either phantom family."""
    if isinstance(p, PolynomialField):
        return radon_polynomial(p, phi, t)
    return sum(radon_ellipse(e, phi, t) for e in p.ellipses)


def project(p: Phantom, geometry: ScanGeometry) -> Sinogram:
    """Sample the exact Radon transform of ``p`` on ``geometry``."""
    phi = geometry.phi[:, None]
    t = geometry.t[None, :]
    data = np.broadcast_to(radon(p, phi, t), geometry.shape)
    return Sinogram(geometry, data)


def rasterize(p: Phantom, M: int, roi: float = 1.0, fill: float = 0.0) -> ImageGrid:
    """Point-sample ``p`` at pixel centers (no anti-aliasing)."""
    x, y = pixel_centers(M)
    return ImageGrid(eval_phantom(p, x, y), roi=roi, fill=fill)


# JSON phantom files: {"ellipses": [{"cx", "cy", "a", "b", "alpha_deg", "rho"}, ...]}
# or {"polynomial": [[i, j, coefficient], ...]}.

def phantom_to_dict(p: Phantom) -> dict:
    if isinstance(p, PolynomialField):
        return {"polynomial": [[int(i), int(j), float(v)] for (i, j), v in np.ndenumerate(p.coefficients) if v]}
    return {"ellipses": [
        {"cx": e.cx, "cy": e.cy, "a": e.a, "b": e.b, "alpha_deg": math.degrees(e.alpha), "rho": e.rho}
        for e in p.ellipses
    ]}


def phantom_from_dict(d: dict) -> Phantom:
    if not isinstance(d, dict):
        raise ValueError("phantom JSON must be an object")
    if "polynomial" in d:
        terms = d["polynomial"]
        deg = max((int(i) + int(j) for i, j, _ in terms), default=0)
        c = np.zeros((deg + 1, deg + 1))
        for i, j, v in terms:
            c[int(i), int(j)] += float(v)
        return PolynomialField(c)
    if "ellipses" not in d:
        raise ValueError('phantom JSON needs an "ellipses" or "polynomial" key')
    try:
        return EllipsePhantom(tuple(
            Ellipse(float(e["cx"]), float(e["cy"]), float(e["a"]), float(e["b"]),
                    math.radians(float(e.get("alpha_deg", 0.0))), float(e["rho"]))
            for e in d["ellipses"]
        ))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed ellipse entry: {exc}") from exc


def load_phantom(path: str | PathLike) -> Phantom:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: invalid JSON ({exc})") from exc
    return phantom_from_dict(d)


def save_phantom(p: Phantom, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(phantom_to_dict(p), fh, indent=2)


BUILTIN = {
    "shepp-logan": shepp_logan,
    "unit-disk": unit_disk,
    "smooth": smooth_bump,
}


def resolve_phantom(name_or_path: str) -> Phantom:
    """Builtin phantom by name (``shepp-logan``, ``unit-disk``, ``smooth``) or a JSON file path."""
    if name_or_path in BUILTIN:
        return BUILTIN[name_or_path]()
    return load_phantom(name_or_path)
