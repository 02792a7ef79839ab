"""Discrete sine transforms used by the fast OPED steps.

Each :class:`SineTransformKind` fixes the input and output angle sets for a
given ``m`` (``N = 2m + 1``). Outputs are the raw sums, with no normalization:

- ``TYPE_I_DETECTOR``: inputs j = 0..2m at psi_j, outputs k = 0..2m of
  ``sin((k+1) psi_j)``; a DST-II of length N.
- ``TYPE_I_INTERP``: inputs k = 0..2m, outputs at xi_l = (l+1) pi / N for
  l = 0..2m-1; a DST-I of length N-1.
- ``TYPE_II_DETECTOR``: inputs j = 1..2m at psi_j = j pi / N, outputs
  k = 0..2m; a DST-I of length N-1.
- ``TYPE_II_INTERP``: inputs k = 0..2m, outputs at xi_l = (l+1/2) pi / N for
  l = 0..2m; a DST-III of length N.

The k = 2m term never contributes to ``TYPE_I_INTERP`` (``sin((l+1)pi) = 0``)
and the k = 2m output of ``TYPE_II_DETECTOR`` is identically zero.
"""

from __future__ import annotations

import enum

import numpy as np
import scipy.fft


class SineTransformKind(enum.Enum):
    TYPE_I_DETECTOR = "type-i-detector"
    TYPE_I_INTERP = "type-i-interp"
    TYPE_II_DETECTOR = "type-ii-detector"
    TYPE_II_INTERP = "type-ii-interp"


def _m_from_length(kind: SineTransformKind, n: int) -> int:
    if kind is SineTransformKind.TYPE_II_DETECTOR:
        if n < 2 or n % 2:
            raise ValueError(f"{kind.value} needs an even input length >= 2, got {n}")
        return n // 2
    if n < 3 or n % 2 == 0:
        raise ValueError(f"{kind.value} needs an odd input length >= 3, got {n}")
    return (n - 1) // 2


def nodes(kind: SineTransformKind, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Input angles (or frequencies ``k+1``) and output angles (or frequencies) for ``kind``.

    Returns ``(a, b)`` such that the transform is ``y[q] = sum_p x[p] sin(a[p] * b[q])``.
    """
    n = 2 * m + 1
    freqs = np.arange(1, n + 1, dtype=np.float64)
    if kind is SineTransformKind.TYPE_I_DETECTOR:
        return (2.0 * np.arange(n) + 1.0) * np.pi / (2.0 * n), freqs
    if kind is SineTransformKind.TYPE_II_DETECTOR:
        return np.arange(1, n, dtype=np.float64) * np.pi / n, freqs
    if kind is SineTransformKind.TYPE_I_INTERP:
        return freqs, np.arange(1, n, dtype=np.float64) * np.pi / n
    return freqs, (np.arange(n, dtype=np.float64) + 0.5) * np.pi / n


def sine_transform_naive(kind: SineTransformKind, x) -> np.ndarray:
    """Reference O(N^2) evaluation of the sine sums along the last axis."""
    x = np.asarray(x, dtype=np.float64)
    m = _m_from_length(kind, x.shape[-1])
    a, b = nodes(kind, m)
    return x @ np.sin(np.outer(a, b))


def sine_transform_fast(kind: SineTransformKind, x) -> np.ndarray:
    """O(N log N) evaluation of the same sums as :func:`sine_transform_naive`.

    Works along the last axis, so a whole sinogram (one row per view) is
    transformed in one call.
    """
    x = np.asarray(x, dtype=np.float64)
    n_in = x.shape[-1]
    _m_from_length(kind, n_in)
    if kind is SineTransformKind.TYPE_I_DETECTOR:
        return 0.5 * scipy.fft.dst(x, type=2, axis=-1)
    if kind is SineTransformKind.TYPE_I_INTERP:
        return 0.5 * scipy.fft.dst(x[..., :-1], type=1, axis=-1)
    if kind is SineTransformKind.TYPE_II_DETECTOR:
        y = 0.5 * scipy.fft.dst(x, type=1, axis=-1)
        return np.concatenate([y, np.zeros(y.shape[:-1] + (1,))], axis=-1)
    # DST-III weights the last input by 1/2; undo that so the sum is plain.
    xx = x.copy()
    xx[..., -1] *= 2.0
    return 0.5 * scipy.fft.dst(xx, type=3, axis=-1)
