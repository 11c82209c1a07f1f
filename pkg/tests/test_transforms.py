import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ltar.errors import ImaginaryResidueError, ShapeError
from ltar.tensor import Tensor3, frontal_slice
from ltar.transforms import (
    TransformKind,
    facewise_product,
    forward,
    haar,
    identity_tensor,
    ihaar,
    inverse,
    l_inverse,
    l_product,
    l_transform,
)

KINDS = list(TransformKind)
finite = st.floats(-100, 100, allow_nan=False)


def dct2_matrix(m):
    j = np.arange(m)
    M = np.sqrt(2.0 / m) * np.cos(np.pi * (2 * j[None, :] + 1) * j[:, None] / (2 * m))
    M[0] /= np.sqrt(2.0)
    return M


def haar_matrix(m):
    # recursive textbook construction, power-of-two m only
    if m == 1:
        return np.ones((1, 1))
    H = haar_matrix(m // 2)
    top = np.kron(H, [1.0, 1.0])
    bottom = np.kron(np.eye(m // 2), [1.0, -1.0])
    return np.vstack([top, bottom]) / np.sqrt(2.0)


def random_tensor(rng, shape):
    return Tensor3(rng.normal(size=shape))


@pytest.mark.parametrize("m", [1, 2, 3, 5, 8])
def test_dct_matches_explicit_matrix(m):
    x = np.random.default_rng(m).normal(size=m)
    np.testing.assert_allclose(forward(x, TransformKind.DCT), dct2_matrix(m) @ x, atol=1e-12)


@pytest.mark.parametrize("m", [1, 2, 4, 7])
def test_dft_matches_explicit_matrix(m):
    x = np.random.default_rng(m).normal(size=m)
    k = np.arange(m)
    F = np.exp(-2j * np.pi * np.outer(k, k) / m)
    np.testing.assert_allclose(forward(x, TransformKind.DFT), F @ x, atol=1e-12)


@pytest.mark.parametrize("m", [1, 2, 4, 8, 16])
def test_haar_matches_textbook_matrix_on_powers_of_two(m):
    x = np.random.default_rng(m).normal(size=m)
    # the two conventions order the detail coefficients differently; compare as sets of rows
    ours = np.array([haar(e) for e in np.eye(m)]).T
    ref = haar_matrix(m)
    ours_rows = sorted(map(tuple, np.round(ours, 12)))
    ref_rows = sorted(map(tuple, np.round(ref, 12)))
    assert ours_rows == ref_rows
    np.testing.assert_allclose(ihaar(haar(x)), x, atol=1e-12)


@pytest.mark.parametrize("m", [1, 3, 5, 6, 7, 12])
def test_haar_is_orthonormal_for_any_length(m):
    H = np.array([haar(e) for e in np.eye(m)]).T
    np.testing.assert_allclose(H @ H.T, np.eye(m), atol=1e-12)


@pytest.mark.parametrize("kind", KINDS)
@given(data=arrays(np.float64, st.tuples(st.integers(1, 4), st.integers(1, 4), st.integers(1, 9)), elements=finite))
def test_round_trip(kind, data):
    back = inverse(forward(data, kind, axis=2), kind, axis=2)
    np.testing.assert_allclose(back, data, atol=1e-10)


@pytest.mark.parametrize("kind", KINDS)
def test_l_transform_round_trip(kind):
    T = random_tensor(np.random.default_rng(1), (3, 2, 6))
    np.testing.assert_allclose(l_inverse(l_transform(T, kind), kind).data, T.data, atol=1e-12)


def test_inverse_dft_rejects_imaginary_residue():
    z = np.array([1.0, 1.0j, 0.0])
    with pytest.raises(ImaginaryResidueError):
        inverse(z, TransformKind.DFT)
    assert inverse(z, TransformKind.DFT, check=False).dtype == np.float64


@pytest.mark.parametrize("kind", KINDS)
@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), ell=st.integers(1, 4), q=st.integers(1, 4), c=st.integers(1, 4), m=st.integers(1, 8))
def test_l_product_algebra(kind, seed, ell, q, c, m):
    rng = np.random.default_rng(seed)
    A = random_tensor(rng, (ell, q, m))
    B = random_tensor(rng, (q, c, m))
    B2 = random_tensor(rng, (q, c, m))
    D = random_tensor(rng, (c, 2, m))
    np.testing.assert_allclose(l_product(identity_tensor(ell, m, kind), A, kind).data, A.data, atol=1e-9)
    np.testing.assert_allclose(l_product(A, identity_tensor(q, m, kind), kind).data, A.data, atol=1e-9)
    np.testing.assert_allclose(
        l_product(l_product(A, B, kind), D, kind).data, l_product(A, l_product(B, D, kind), kind).data, atol=1e-9
    )
    np.testing.assert_allclose(
        l_product(A, B + B2, kind).data, (l_product(A, B, kind) + l_product(A, B2, kind)).data, atol=1e-9
    )


def circular_tube_product(A, B):
    ell, q, m = A.shape
    c = B.shape[1]
    out = np.zeros((ell, c, m))
    for i in range(ell):
        for j in range(c):
            for r in range(q):
                for k in range(m):
                    out[i, j, k] += sum(A[i, r, t] * B[r, j, (k - t) % m] for t in range(m))
    return out


@pytest.mark.parametrize("shape", [(1, 1, 1), (2, 3, 4), (4, 4, 8), (3, 1, 5), (4, 2, 8)])
def test_dft_product_is_tubewise_circular_convolution(shape):
    rng = np.random.default_rng(sum(shape))
    ell, q, m = shape
    A = rng.normal(size=(ell, q, m))
    B = rng.normal(size=(q, 3, m))
    got = l_product(Tensor3(A), Tensor3(B), TransformKind.DFT).data
    np.testing.assert_allclose(got, circular_tube_product(A, B), atol=1e-9)


@pytest.mark.parametrize("kind", KINDS)
def test_depth_one_reduces_to_matrix_product(kind):
    rng = np.random.default_rng(3)
    A, B = rng.normal(size=(3, 4, 1)), rng.normal(size=(4, 2, 1))
    got = l_product(Tensor3(A), Tensor3(B), kind).data[:, :, 0]
    np.testing.assert_allclose(got, A[:, :, 0] @ B[:, :, 0], atol=1e-12)


def test_facewise_product_multiplies_matching_slices():
    rng = np.random.default_rng(4)
    A, B = random_tensor(rng, (2, 3, 4)), random_tensor(rng, (3, 2, 4))
    P = facewise_product(A, B)
    for k in range(4):
        np.testing.assert_allclose(frontal_slice(P, k), frontal_slice(A, k) @ frontal_slice(B, k))


def test_l_product_shape_mismatch():
    with pytest.raises(ShapeError):
        l_product(Tensor3(np.zeros((2, 3, 4))), Tensor3(np.zeros((2, 2, 4))), TransformKind.DCT)


@pytest.mark.parametrize("text,kind", [("dct", "dct"), ("DFT", "dft"), ("fft", "dft"), ("dwt", "haar"), ("haar", "haar")])
def test_transform_parse(text, kind):
    assert TransformKind.parse(text).value == kind


def test_transform_parse_rejects_unknown():
    with pytest.raises(ValueError):
        TransformKind.parse("wavelet9")
