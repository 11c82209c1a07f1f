"""Invertible transforms along the tubes of a tensor, and the L-product.

Three transform families are available:

* ``DCT``  orthonormal DCT-II forward, orthonormal DCT-III inverse;
* ``DFT``  unnormalised FFT forward, ``1/m`` inverse FFT;
* ``HAAR`` orthonormal full-depth Haar decomposition.

The L-product of ``A`` (``l x q x m``) and ``B`` (``q x c x m``) is computed
by transforming both operands, multiplying matching frontal slices, and
transforming back.
"""

from __future__ import annotations

import enum

import numpy as np
import scipy.fft

from ltar.errors import ImaginaryResidueError, ShapeError
from ltar.tensor import Tensor3, collect

__all__ = [
    "TransformKind",
    "forward",
    "inverse",
    "l_transform",
    "l_inverse",
    "facewise_product",
    "l_product",
    "identity_tensor",
    "haar",
    "ihaar",
]

IMAG_RESIDUE_TOL = 1e-8
_SQRT2 = np.sqrt(2.0)


class TransformKind(enum.Enum):
    DCT = "dct"
    DFT = "dft"
    HAAR = "haar"

    @classmethod
    def parse(cls, value) -> TransformKind:
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"dwt": "haar", "haar_dwt": "haar", "fft": "dft"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            choices = ", ".join(k.value for k in cls)
            raise ValueError(f"unknown transform {value!r} (choose from {choices})") from None

    @property
    def is_complex(self) -> bool:
        return self is TransformKind.DFT


def haar(x, axis=-1):
    """Orthonormal full-depth Haar transform along ``axis``.

    Output layout is ``[approx, coarsest details, ..., finest details]``.
    For odd intermediate lengths the unpaired last sample is carried to the
    next level unchanged, so any length is accepted; for powers of two this
    is the textbook decomposition.
    """
    a = np.moveaxis(np.asarray(x, dtype=np.float64), axis, -1)
    details = []
    while a.shape[-1] > 1:
        half = a.shape[-1] // 2
        even = a[..., 0 : 2 * half : 2]
        odd = a[..., 1 : 2 * half : 2]
        details.append((even - odd) / _SQRT2)
        approx = (even + odd) / _SQRT2
        if a.shape[-1] % 2:
            approx = np.concatenate([approx, a[..., -1:]], axis=-1)
        a = approx
    out = np.concatenate([a] + details[::-1], axis=-1)
    return np.moveaxis(out, -1, axis)


def ihaar(y, axis=-1):
    """Inverse of :func:`haar`."""
    y = np.moveaxis(np.asarray(y, dtype=np.float64), axis, -1)
    lengths = [y.shape[-1]]
    while lengths[-1] > 1:
        lengths.append((lengths[-1] + 1) // 2)
    a = y[..., :1]
    pos = 1
    for length in reversed(lengths[:-1]):
        half = length // 2
        d = y[..., pos : pos + half]
        pos += half
        s = a[..., :half]
        out = np.empty(y.shape[:-1] + (length,))
        out[..., 0 : 2 * half : 2] = (s + d) / _SQRT2
        out[..., 1 : 2 * half : 2] = (s - d) / _SQRT2
        if length % 2:
            out[..., -1] = a[..., -1]
        a = out
    return np.moveaxis(a, -1, axis)


def forward(x, kind: TransformKind, axis=-1) -> np.ndarray:
    """Apply the forward transform to every 1-d fibre of ``x`` along ``axis``."""
    kind = TransformKind.parse(kind)
    if kind is TransformKind.DCT:
        return scipy.fft.dct(np.asarray(x, dtype=np.float64), type=2, norm="ortho", axis=axis)
    if kind is TransformKind.DFT:
        return scipy.fft.fft(x, axis=axis)
    return haar(x, axis=axis)


def inverse(x, kind: TransformKind, axis=-1, check=True) -> np.ndarray:
    """Inverse of :func:`forward`; always returns a real array.

    Under ``DFT`` the imaginary part of the result is discarded after
    checking that it is below ``1e-8`` times the norm of the result.
    """
    kind = TransformKind.parse(kind)
    if kind is TransformKind.DFT:
        z = scipy.fft.ifft(x, axis=axis)
        if check:
            _check_residue(z)
        return np.ascontiguousarray(z.real)
    if np.iscomplexobj(x):
        if check:
            _check_residue(np.asarray(x))
        x = np.real(x)
    if kind is TransformKind.DCT:
        return scipy.fft.idct(np.asarray(x, dtype=np.float64), type=2, norm="ortho", axis=axis)
    return ihaar(x, axis=axis)


def _check_residue(z):
    imag = np.linalg.norm(z.imag.ravel())
    total = np.linalg.norm(z.ravel())
    if imag > IMAG_RESIDUE_TOL * total:
        raise ImaginaryResidueError(
            f"imaginary residue {imag:.3e} exceeds {IMAG_RESIDUE_TOL:g} x norm {total:.3e}"
        )


def l_transform(T: Tensor3, kind: TransformKind) -> Tensor3:
    """Transform every tube ``T[i, j, :]``."""
    return Tensor3(forward(T.data, kind, axis=2))


def l_inverse(T: Tensor3, kind: TransformKind) -> Tensor3:
    """Inverse tube transform; the result is real."""
    return Tensor3(inverse(T.data, kind, axis=2))


def facewise_product(A: Tensor3, B: Tensor3) -> Tensor3:
    """Slice-by-slice matrix product ``A[:, :, k] @ B[:, :, k]``."""
    if A.depth != B.depth or A.cols != B.rows:
        raise ShapeError(f"cannot multiply facewise {A.shape} by {B.shape}")
    return Tensor3(np.einsum("iqk,qjk->ijk", A.data, B.data))


def l_product(A: Tensor3, B: Tensor3, kind: TransformKind) -> Tensor3:
    """L-product ``A • B`` under the given transform."""
    if A.depth != B.depth or A.cols != B.rows:
        raise ShapeError(f"cannot form L-product of {A.shape} and {B.shape}")
    prod = facewise_product(l_transform(A, kind), l_transform(B, kind))
    return l_inverse(prod, kind)


def identity_tensor(ell: int, m: int, kind: TransformKind) -> Tensor3:
    """Identity element of the L-product for ``ell x ell x m`` tensors."""
    return l_inverse(collect([np.eye(ell)] * m), kind)
