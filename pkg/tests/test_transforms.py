import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oped.transforms import SineTransformKind, sine_transform_fast, sine_transform_naive

KINDS = list(SineTransformKind)


def input_length(kind, m):
    return 2 * m if kind is SineTransformKind.TYPE_II_DETECTOR else 2 * m + 1


def output_length(kind, m):
    return 2 * m if kind is SineTransformKind.TYPE_I_INTERP else 2 * m + 1


def triple_loop(kind, x):
    """Plain-Python evaluation of the defining sums, straight from the node formulas."""
    n_in = len(x)
    m = n_in // 2
    n = 2 * m + 1
    out = []
    if kind is SineTransformKind.TYPE_I_DETECTOR:
        for k in range(n):
            out.append(sum(x[j] * np.sin((k + 1) * (2 * j + 1) * np.pi / (2 * n)) for j in range(n)))
    elif kind is SineTransformKind.TYPE_II_DETECTOR:
        for k in range(n):
            out.append(sum(x[j - 1] * np.sin((k + 1) * j * np.pi / n) for j in range(1, n)))
    elif kind is SineTransformKind.TYPE_I_INTERP:
        for l in range(n - 1):
            out.append(sum(x[k] * np.sin((k + 1) * (l + 1) * np.pi / n) for k in range(n)))
    else:
        for l in range(n):
            out.append(sum(x[k] * np.sin((k + 1) * (l + 0.5) * np.pi / n) for k in range(n)))
    return np.array(out)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("m", [1, 2, 5])
def test_naive_matches_triple_loop(kind, m, rng):
    x = rng.standard_normal(input_length(kind, m))
    np.testing.assert_allclose(sine_transform_naive(kind, x), triple_loop(kind, x), rtol=0, atol=1e-13)


@pytest.mark.parametrize("kind", KINDS)
def test_zero_input(kind):
    for f in (sine_transform_naive, sine_transform_fast):
        y = f(kind, np.zeros(input_length(kind, 3)))
        assert y.shape == (output_length(kind, 3),) and not y.any()


def test_single_detector_example():
    e1 = np.array([0.0, 1.0, 0.0])
    for f in (sine_transform_naive, sine_transform_fast):
        np.testing.assert_allclose(f(SineTransformKind.TYPE_I_DETECTOR, e1), [1.0, 0.0, -1.0], atol=1e-15)


@pytest.mark.parametrize("kind", KINDS)
def test_fast_equals_naive_sweep(kind, rng):
    for m in range(1, 65):
        x = rng.standard_normal((16, input_length(kind, m)))
        diff = np.abs(sine_transform_fast(kind, x) - sine_transform_naive(kind, x)).max(axis=1)
        assert np.all(diff <= 1e-10 * np.abs(x).sum(axis=1))


@pytest.mark.parametrize("kind", KINDS)
def test_fast_equals_naive_large_m(kind, rng):
    for m in (100, 255, 256):
        x = rng.standard_normal(input_length(kind, m))
        diff = np.abs(sine_transform_fast(kind, x) - sine_transform_naive(kind, x)).max()
        assert diff <= 1e-10 * np.abs(x).sum()


def test_last_coefficient_never_reaches_integer_nodes(rng):
    kind = SineTransformKind.TYPE_I_INTERP
    x = rng.standard_normal(17)
    y = x.copy()
    y[-1] += 123.0
    assert np.array_equal(sine_transform_fast(kind, x), sine_transform_fast(kind, y))
    np.testing.assert_allclose(sine_transform_naive(kind, x), sine_transform_naive(kind, y), atol=1e-11)


def test_type_ii_detector_last_output_vanishes(rng):
    y = sine_transform_naive(SineTransformKind.TYPE_II_DETECTOR, rng.standard_normal(10))
    assert abs(y[-1]) < 1e-13


BAD_LENGTHS = [
    (kind, n)
    for kind in KINDS
    for n in (0, 1, 2, 3, 4, 5, 8)
    if n not in {input_length(kind, m) for m in range(1, 5)}
]


@pytest.mark.parametrize("kind, n", BAD_LENGTHS)
def test_length_mismatch(kind, n):
    for f in (sine_transform_fast, sine_transform_naive):
        with pytest.raises(ValueError):
            f(kind, np.zeros(n))


@settings(max_examples=50, deadline=None)
@given(
    kind=st.sampled_from(KINDS),
    m=st.integers(1, 40),
    a=st.floats(-10, 10),
    b=st.floats(-10, 10),
    seed=st.integers(0, 2**31),
)
def test_linearity(kind, m, a, b, seed):
    r = np.random.default_rng(seed)
    x, y = r.standard_normal((2, input_length(kind, m)))
    lhs = sine_transform_fast(kind, a * x + b * y)
    rhs = a * sine_transform_fast(kind, x) + b * sine_transform_fast(kind, y)
    scale = (abs(a) + abs(b)) * (np.abs(x).sum() + np.abs(y).sum()) + 1.0
    assert np.abs(lhs - rhs).max() <= 1e-13 * scale


def test_fast_path_is_much_faster(rng):
    kind = SineTransformKind.TYPE_I_DETECTOR
    x = rng.standard_normal(4097)
    sine_transform_fast(kind, x)

    def best(f, reps):
        times = []
        for _ in range(reps):
            t0 = time.perf_counter()
            f(kind, x)
            times.append(time.perf_counter() - t0)
        return min(times)

    assert best(sine_transform_naive, 2) >= 20 * best(sine_transform_fast, 20)
