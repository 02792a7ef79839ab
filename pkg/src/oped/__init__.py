"""OPED image reconstruction from parallel-beam Radon data on the unit disk."""

from .geometry import MAX_M, ScanGeometry, Sinogram, Variant, build_geometry, roi_radius, theta
from .grid import ImageGrid, pixel_centers, roi_mask
from .metrics import ErrorReport, compare, diff_image, me, rse, rse_reference
from .phantom import (
    Ellipse,
    EllipsePhantom,
    PolynomialField,
    eval_phantom,
    project,
    radon_ellipse,
    radon_polynomial,
    rasterize,
    shepp_logan,
    smooth_bump,
    unit_disk,
)
from .reconstruct import (
    AlphaTable,
    CoeffMatrix,
    Kernel,
    Method,
    ReconstructionConfig,
    chebyshev_u,
    compute_alpha,
    compute_coeffs,
    evaluate_direct,
    evaluate_fast,
    kernel_compact,
    kernel_direct,
    lebesgue_estimate,
    oped_direct,
    oped_fast,
    reconstruct,
)
from .transforms import SineTransformKind, sine_transform_fast, sine_transform_naive

__version__ = "0.1.0"
