"""OPED reconstruction: direct evaluation and the interpolated fast variant.

Both start from the per-view coefficients

    S[nu, k] = (k+1)/N^2 * sum_j g[nu, j] sin((k+1) psi_j),    N = 2m + 1,

and reconstruct ``f(x, y) ~ sum_nu sum_k S[nu, k] U_k(cos theta_nu)``. The
direct method evaluates that double sum exactly at every pixel. The fast
method tabulates ``alpha_nu(theta) = sum_k S[nu, k] sin((k+1) theta)`` at
equispaced nodes with a second sine transform and linearly interpolates it,
dividing by ``sin theta_nu``.
"""

from __future__ import annotations

import enum
import logging
import math
import time
from dataclasses import dataclass

import numba
import numpy as np

from . import _backproject
from .geometry import ScanGeometry, Sinogram, Variant, roi_radius
from .grid import ImageGrid, pixel_centers
from .transforms import SineTransformKind, sine_transform_fast

log = logging.getLogger(__name__)


class Method(enum.Enum):
    DIRECT = "direct"
    FAST = "fast"


class Kernel(enum.Enum):
    """How :func:`oped_direct` evaluates ``sum_j g[nu, j] T_j,nu(x, y)``.

    ``COEFFICIENT`` goes through the coefficient matrix and a Chebyshev
    series per view; ``COMPACT`` and ``DIRECT_SUM`` evaluate every kernel
    value explicitly and are meant for cross-checking on small problems.
    """

    COEFFICIENT = "coefficient"
    COMPACT = "compact"
    DIRECT_SUM = "direct-sum"


@dataclass(frozen=True)
class ReconstructionConfig:
    method: Method = Method.FAST
    kernel: Kernel = Kernel.COEFFICIENT
    roi: float | None = None
    singular_eps: float = 1e-7
    fill: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "kernel", Kernel(self.kernel))
        if not self.singular_eps > 0:
            raise ValueError("singular_eps must be positive")

    def resolve_roi(self, m: int) -> float:
        """The ROI radius for ``m``; rejects radii outside ``(0, cos(pi/(2m+1))]``."""
        limit = roi_radius(m)
        if self.roi is None:
            return limit
        if not 0.0 < self.roi <= limit:
            raise ValueError(
                f"roi {self.roi} must lie in (0, cos(pi/(2m+1))] = (0, {limit:.12g}] for m={m}"
            )
        return float(self.roi)


@dataclass(frozen=True, eq=False)
class CoeffMatrix:
    """``S[nu, k]``, shape ``(2m+1, 2m+1)``."""

    geometry: ScanGeometry
    S: np.ndarray


@dataclass(frozen=True, eq=False)
class AlphaTable:
    """``alpha[nu, l] = alpha_nu(xi_l)``.

    For type I a terminal column ``alpha_nu(pi) = 0`` is appended so that the
    table always has 2m+1 columns.
    """

    geometry: ScanGeometry
    alpha: np.ndarray


def set_threads(n: int | None) -> None:
    """Cap the worker count of the compiled loops (``None`` leaves it unchanged)."""
    if n is not None:
        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


def chebyshev_u(k: int, t):
    """Chebyshev polynomial of the second kind ``U_k(t)`` by three-term recurrence."""
    t = np.asarray(t, dtype=np.float64)
    prev, cur = np.zeros_like(t), np.ones_like(t)
    for _ in range(k):
        prev, cur = cur, 2.0 * t * cur - prev
    return cur if cur.ndim else float(cur)


def _psi(g: ScanGeometry, j):
    j = np.asarray(j)
    first = 0 if g.variant is Variant.TYPE_I else 1
    if np.any(j < first) or np.any(j >= first + g.n_detectors):
        raise IndexError(f"detector index out of range for {g.variant.name}: {j}")
    return g.psi[j - first]


def _inner(g: ScanGeometry, nu, x, y):
    phi = g.phi[np.asarray(nu)]
    return np.clip(np.asarray(x) * np.cos(phi) + np.asarray(y) * np.sin(phi), -1.0, 1.0)


def kernel_direct(g: ScanGeometry, j, nu, x, y):
    """``T_j,nu(x, y) = 1/N^2 sum_k (k+1) sin((k+1) psi_j) U_k(x cos phi_nu + y sin phi_nu)``.

    ``j`` is the detector index as used by the variant (0..2m for type I,
    1..2m for type II). Broadcasts over all arguments.
    """
    n = g.n_views
    psi = _psi(g, j)
    t = _inner(g, nu, x, y)
    psi, t = np.broadcast_arrays(psi, t)
    prev, cur = np.zeros(t.shape), np.ones(t.shape)
    total = np.sin(psi) * cur
    for k in range(1, n):
        prev, cur = cur, 2.0 * t * cur - prev
        total = total + (k + 1) * np.sin((k + 1) * psi) * cur
    out = total / n**2
    return out if out.ndim else float(out)


def kernel_compact(g: ScanGeometry, j, nu, x, y, singular_eps: float = 1e-7):
    """Closed-form ``T_j,nu(x, y)``, falling back to :func:`kernel_direct` near singularities.

    With ``theta = theta_nu(x, y)``, ``delta = theta - psi_j`` and
    ``d = cos psi_j - cos theta = 2 sin((theta + psi_j)/2) sin(delta/2)``:

    type I::

        N^2 T = N cos(N delta) / (2 sin theta) + N sin(N delta) / (2 d)
                - [sin theta sin psi sin^2(N delta/2) - cos(N delta) sin^2(delta/2)] / (sin theta d^2)

    type II::

        N^2 T = sin psi [N sin(N delta) / (2 sin theta d) - sin^2(N delta/2) / d^2]

    These are the ``(-1)^j sin(N theta)``, ``(-1)^j cos(N theta)`` forms with
    the node identities ``N psi_j = (j + 1/2) pi`` (type I) or ``j pi``
    (type II) substituted, which removes the cancellation between the
    ``1/d`` and ``1/d^2`` terms near ``theta = psi_j``.
    """
    n = g.n_views
    psi = _psi(g, j)
    t = _inner(g, nu, x, y)
    psi, t = np.broadcast_arrays(np.asarray(psi, dtype=np.float64), t)
    th = np.arccos(t)
    st = np.sin(th)
    delta = th - psi
    d = 2.0 * np.sin(0.5 * (th + psi)) * np.sin(0.5 * delta)
    singular = (np.abs(np.cos(psi) - t) < singular_eps) | (st < singular_eps)
    with np.errstate(divide="ignore", invalid="ignore"):
        nd = n * delta
        if g.variant is Variant.TYPE_I:
            val = (
                n * np.cos(nd) / (2.0 * st)
                + n * np.sin(nd) / (2.0 * d)
                - (st * np.sin(psi) * np.sin(0.5 * nd) ** 2 - np.cos(nd) * np.sin(0.5 * delta) ** 2)
                / (st * d * d)
            )
        else:
            val = np.sin(psi) * (n * np.sin(nd) / (2.0 * st * d) - np.sin(0.5 * nd) ** 2 / (d * d))
    out = val / n**2
    if np.any(singular):
        out = np.where(singular, kernel_direct(g, j, nu, x, y), out)
    return out if out.ndim else float(out)


def _detector_kind(g: ScanGeometry) -> SineTransformKind:
    if g.variant is Variant.TYPE_I:
        return SineTransformKind.TYPE_I_DETECTOR
    return SineTransformKind.TYPE_II_DETECTOR


def _interp_kind(g: ScanGeometry) -> SineTransformKind:
    if g.variant is Variant.TYPE_I:
        return SineTransformKind.TYPE_I_INTERP
    return SineTransformKind.TYPE_II_INTERP


def compute_coeffs(s: Sinogram) -> CoeffMatrix:
    """Coefficient matrix ``S[nu, k]``, one fast sine transform per view."""
    g = s.geometry
    n = g.n_views
    k1 = np.arange(1, n + 1, dtype=np.float64)
    S = sine_transform_fast(_detector_kind(g), s.data) * (k1 / n**2)
    return CoeffMatrix(g, S)


def compute_alpha(c: CoeffMatrix) -> AlphaTable:
    """Tabulate ``alpha_nu`` at the interpolation nodes, one fast sine transform per view."""
    g = c.geometry
    alpha = sine_transform_fast(_interp_kind(g), c.S)
    if g.variant is Variant.TYPE_I:
        alpha = np.concatenate([alpha, np.zeros((alpha.shape[0], 1))], axis=1)
    return AlphaTable(g, alpha)


def _check_points(g: ScanGeometry, x, y, radius: float | None):
    x = np.ascontiguousarray(np.asarray(x, dtype=np.float64).ravel())
    y = np.ascontiguousarray(np.asarray(y, dtype=np.float64).ravel())
    if x.shape != y.shape:
        raise ValueError("x and y must have the same number of points")
    if radius is not None and np.any(x * x + y * y > radius * radius * (1.0 + 1e-14)):
        raise ValueError(f"points must lie inside the disk of radius {radius:.12g}")
    return x, y


def _kernel_sum(s: Sinogram, x, y, kernel: Kernel, singular_eps: float, chunk: int = 4096):
    g = s.geometry
    first = 0 if g.variant is Variant.TYPE_I else 1
    j = np.arange(first, first + g.n_detectors)
    out = np.zeros(x.size)
    for lo in range(0, x.size, chunk):
        xs = x[lo : lo + chunk, None]
        ys = y[lo : lo + chunk, None]
        acc = np.zeros(xs.shape[0])
        for nu in range(g.n_views):
            if kernel is Kernel.COMPACT:
                T = kernel_compact(g, j[None, :], nu, xs, ys, singular_eps)
            else:
                T = kernel_direct(g, j[None, :], nu, xs, ys)
            acc += T @ s.data[nu]
        out[lo : lo + chunk] = acc
    return out


def evaluate_direct(s: Sinogram, x, y, cfg: ReconstructionConfig | None = None, coeffs: CoeffMatrix | None = None):
    """Direct OPED values at arbitrary points of the unit disk (no interpolation)."""
    cfg = cfg or ReconstructionConfig(method=Method.DIRECT)
    shape = np.shape(x)
    x, y = _check_points(s.geometry, x, y, 1.0)
    g = s.geometry
    if cfg.kernel is Kernel.COEFFICIENT:
        coeffs = coeffs or compute_coeffs(s)
        vals = _backproject.chebyshev_series_sum(x, y, np.cos(g.phi), np.sin(g.phi), np.ascontiguousarray(coeffs.S))
    else:
        vals = _kernel_sum(s, x, y, cfg.kernel, cfg.singular_eps)
    return vals.reshape(shape)


def evaluate_fast(s: Sinogram, x, y, alpha: AlphaTable | None = None):
    """Fast OPED values at arbitrary points inside the disk of radius ``cos(pi/(2m+1))``."""
    g = s.geometry
    shape = np.shape(x)
    x, y = _check_points(g, x, y, roi_radius(g.m))
    alpha = alpha or compute_alpha(compute_coeffs(s))
    offset = 1.0 if g.variant is Variant.TYPE_I else 0.5
    inv_h = g.n_views / math.pi
    table = np.ascontiguousarray(alpha.alpha)
    vals = np.zeros(x.size)
    t = np.empty(x.size)
    th = np.empty(x.size)
    tmp = np.empty(x.size)
    for nu in range(g.n_views):
        np.multiply(x, math.cos(g.phi[nu]), out=t)
        np.multiply(y, math.sin(g.phi[nu]), out=tmp)
        np.add(t, tmp, out=t)
        np.clip(t, -1.0, 1.0, out=t)
        np.arccos(t, out=th)
        _backproject.accumulate_view(vals, t, th, table[nu], inv_h, offset)
    return vals.reshape(shape)


def _grid_points(M: int, roi: float):
    x, y = pixel_centers(M)
    mask = x * x + y * y <= roi * roi
    return x[mask], y[mask], mask


def _finish(M, mask, vals, roi, fill):
    img = np.full((M, M), fill, dtype=np.float64)
    img[mask] = vals
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("reconstruction produced non-finite values")
    return ImageGrid(img, roi=roi, fill=fill)


def oped_direct(s: Sinogram, M: int, cfg: ReconstructionConfig | None = None, timings: dict | None = None) -> ImageGrid:
    """Direct OPED reconstruction on an ``M x M`` grid.

    Pixels outside the ROI disk get ``cfg.fill``. If ``timings`` is a dict it
    receives ``seconds_total`` and ``seconds_backprojection``.
    """
    cfg = cfg or ReconstructionConfig(method=Method.DIRECT)
    g = s.geometry
    roi = cfg.resolve_roi(g.m)
    t0 = time.perf_counter()
    coeffs = compute_coeffs(s) if cfg.kernel is Kernel.COEFFICIENT else None
    px, py, mask = _grid_points(M, roi)
    t1 = time.perf_counter()
    vals = evaluate_direct(s, px, py, cfg, coeffs)
    t2 = time.perf_counter()
    if timings is not None:
        timings.update(seconds_total=t2 - t0, seconds_backprojection=t2 - t1)
    log.debug("direct OPED m=%d M=%d: %.3fs", g.m, M, t2 - t0)
    return _finish(M, mask, vals, roi, cfg.fill)


def oped_fast(s: Sinogram, M: int, cfg: ReconstructionConfig | None = None, timings: dict | None = None) -> ImageGrid:
    """Fast OPED reconstruction (two sine transforms plus linear interpolation)."""
    cfg = cfg or ReconstructionConfig(method=Method.FAST)
    g = s.geometry
    roi = cfg.resolve_roi(g.m)
    t0 = time.perf_counter()
    alpha = compute_alpha(compute_coeffs(s))
    px, py, mask = _grid_points(M, roi)
    t1 = time.perf_counter()
    vals = evaluate_fast(s, px, py, alpha)
    t2 = time.perf_counter()
    if timings is not None:
        timings.update(seconds_total=t2 - t0, seconds_backprojection=t2 - t1)
    log.debug("fast OPED m=%d M=%d: %.3fs", g.m, M, t2 - t0)
    return _finish(M, mask, vals, roi, cfg.fill)


def reconstruct(s: Sinogram, M: int, cfg: ReconstructionConfig | None = None, timings: dict | None = None) -> ImageGrid:
    cfg = cfg or ReconstructionConfig()
    if cfg.method is Method.DIRECT:
        return oped_direct(s, M, cfg, timings)
    return oped_fast(s, M, cfg, timings)


def kernel_matrix(g: ScanGeometry) -> np.ndarray:
    """``A[j, k] = (k+1) sin((k+1) psi_j) / N^2`` so that ``T_j,nu = sum_k A[j, k] U_k``."""
    n = g.n_views
    k1 = np.arange(1, n + 1, dtype=np.float64)
    return k1[None, :] * np.sin(np.outer(g.psi, k1)) / n**2


def lebesgue_function(g: ScanGeometry, x, y) -> np.ndarray:
    """``sum_nu sum_j sin(psi_j) |T_j,nu(x, y)|`` at each point."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    A = kernel_matrix(g) * np.sin(g.psi)[:, None]
    n = g.n_views
    out = np.empty(x.size)
    for i, (xi, yi) in enumerate(zip(x.ravel(), y.ravel())):
        t = np.clip(xi * np.cos(g.phi) + yi * np.sin(g.phi), -1.0, 1.0)
        U = np.empty((g.n_views, n))
        U[:, 0] = 1.0
        if n > 1:
            U[:, 1] = 2.0 * t
        for k in range(2, n):
            U[:, k] = 2.0 * t * U[:, k - 1] - U[:, k - 2]
        out[i] = np.abs(U @ A.T).sum()
    return out.reshape(x.shape)


def lebesgue_sample_points(m: int, n_radial: int = 16, n_angular: int = 64, radius: float | None = None):
    """Polar sample grid on the disk of radius ``cos(pi/(2m+1))`` (rim included)."""
    radius = roi_radius(m) if radius is None else radius
    r = radius * np.linspace(0.0, 1.0, n_radial + 1)[1:]
    a = 2.0 * np.pi * np.arange(n_angular) / n_angular
    rr, aa = np.meshgrid(r, a, indexing="ij")
    x = np.concatenate([[0.0], (rr * np.cos(aa)).ravel()])
    y = np.concatenate([[0.0], (rr * np.sin(aa)).ravel()])
    return x, y


def lebesgue_estimate(g: ScanGeometry, sample_points) -> float:
    """Max of :func:`lebesgue_function` over ``sample_points`` (an ``(x, y)`` pair or list of points)."""
    pts = np.asarray(sample_points, dtype=np.float64)
    if pts.ndim == 2 and pts.shape[-1] == 2 and pts.shape[0] != 2:
        x, y = pts[:, 0], pts[:, 1]
    else:
        x, y = pts[0], pts[1]
    if np.any(x * x + y * y > 1.0 + 1e-12):
        raise ValueError("sample points must lie in the unit disk")
    return float(lebesgue_function(g, x, y).max())
