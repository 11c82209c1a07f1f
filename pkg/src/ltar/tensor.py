"""Third-order tensor container and the reshaping operators built on it.

A :class:`Tensor3` of shape ``(rows, cols, depth)`` stores its frontal slices
along the last axis: slice ``k`` is ``T[:, :, k]`` and tube ``(i, j)`` is
``T[i, j, :]``.  Tensors are immutable; every operation returns a new object.

Examples
--------
>>> import numpy as np
>>> from ltar.tensor import Tensor3, mat_vec, fold
>>> T = Tensor3(np.arange(8.0).reshape(2, 2, 2))
>>> fold(mat_vec(T), 2, 2) == T
True
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np
from scipy.linalg import block_diag

from ltar.errors import InsufficientDataError, ShapeError

__all__ = [
    "Tensor3",
    "TensorSeries",
    "frontal_slice",
    "mat_vec",
    "mat_view",
    "fold",
    "collect",
    "frob_norm",
    "add",
    "sub",
]


def _frozen(values, copy=True):
    arr = np.array(values, copy=copy)
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128, copy=False)
    else:
        arr = arr.astype(np.float64, copy=False)
    arr.flags.writeable = False
    return arr


class Tensor3:
    """Dense real or complex third-order tensor.

    Parameters
    ----------
    data : array_like
        Array of shape ``(rows, cols, depth)``.  A copy is taken and stored
        read-only as ``float64`` (or ``complex128`` for complex input).
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = _frozen(data)
        if arr.ndim != 3 or 0 in arr.shape:
            raise ShapeError(f"expected a non-empty 3-d array, got shape {arr.shape}")
        self._data = arr

    @classmethod
    def zeros(cls, rows, cols, depth):
        return cls(np.zeros((rows, cols, depth)))

    @property
    def data(self) -> np.ndarray:
        """Read-only view of the underlying ``(rows, cols, depth)`` array."""
        return self._data

    @property
    def shape(self) -> tuple[int, int, int]:
        return self._data.shape

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def depth(self) -> int:
        return self._data.shape[2]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self._data)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data.copy() if copy else self._data
        return self._data.astype(dtype)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __neg__(self):
        return Tensor3(-self._data)

    def __mul__(self, scalar):
        if isinstance(scalar, Tensor3):
            return NotImplemented
        return Tensor3(self._data * scalar)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Tensor3):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def __repr__(self):
        kind = "complex" if self.is_complex else "real"
        return f"Tensor3({self.rows}x{self.cols}x{self.depth}, {kind})"


class TensorSeries(Sequence):
    """Ordered observations, each a ``(ell, 1, depth)`` tensor.

    Stored as one read-only array of shape ``(n, ell, depth)``.  Integer
    indexing returns a :class:`Tensor3`; slicing returns a new series.
    """

    __slots__ = ("_data",)

    def __init__(self, observations):
        if isinstance(observations, np.ndarray):
            arr = observations
            if arr.ndim == 4 and arr.shape[2] == 1:
                arr = arr[:, :, 0, :]
            arr = _frozen(arr)
        else:
            blocks = []
            for obs in observations:
                a = obs.data if isinstance(obs, Tensor3) else np.asarray(obs)
                if a.ndim != 3 or a.shape[1] != 1:
                    raise ShapeError(f"observations must have shape (ell, 1, depth), got {a.shape}")
                blocks.append(a[:, 0, :])
            if not blocks:
                raise InsufficientDataError("a series needs at least one observation")
            shapes = {b.shape for b in blocks}
            if len(shapes) != 1:
                raise ShapeError(f"observations disagree in shape: {sorted(shapes)}")
            arr = _frozen(np.stack(blocks), copy=False)
        if arr.ndim != 3 or 0 in arr.shape:
            raise ShapeError(f"series array must be (n, ell, depth) and non-empty, got {arr.shape}")
        self._data = arr

    @property
    def data(self) -> np.ndarray:
        """Read-only ``(n, ell, depth)`` array."""
        return self._data

    @property
    def ell(self) -> int:
        return self._data.shape[1]

    @property
    def depth(self) -> int:
        return self._data.shape[2]

    @property
    def obs_shape(self) -> tuple[int, int, int]:
        return (self.ell, 1, self.depth)

    def __len__(self):
        return self._data.shape[0]

    def __getitem__(self, index):
        if isinstance(index, slice):
            return TensorSeries(self._data[index])
        return Tensor3(self._data[index][:, None, :])

    def __iter__(self):
        for j in range(len(self)):
            yield self[j]

    def concat(self, other: TensorSeries) -> TensorSeries:
        if other.ell != self.ell or other.depth != self.depth:
            raise ShapeError("cannot concatenate series with different observation shapes")
        return TensorSeries(np.concatenate([self._data, other._data]))

    def __eq__(self, other):
        if not isinstance(other, TensorSeries):
            return NotImplemented
        return self._data.shape == other._data.shape and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def __repr__(self):
        return f"TensorSeries(n={len(self)}, ell={self.ell}, depth={self.depth})"


def frontal_slice(T: Tensor3, k: int) -> np.ndarray:
    """Return a copy of frontal slice ``T[:, :, k]``."""
    if not 0 <= k < T.depth:
        raise IndexError(f"slice index {k} out of range for depth {T.depth}")
    return T.data[:, :, k].copy()


def mat_vec(T: Tensor3) -> np.ndarray:
    """Stack the frontal slices vertically into a ``(rows*depth, cols)`` matrix."""
    return np.concatenate([T.data[:, :, k] for k in range(T.depth)], axis=0)


def mat_view(T: Tensor3) -> np.ndarray:
    """Block-diagonal ``(rows*depth, cols*depth)`` matrix of the frontal slices."""
    return block_diag(*(T.data[:, :, k] for k in range(T.depth)))


def fold(M, ell: int, m: int) -> Tensor3:
    """Inverse of :func:`mat_vec`: split ``ell*m`` rows into ``m`` slices."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != ell * m:
        raise ShapeError(f"cannot fold matrix of shape {M.shape} into {ell} rows x depth {m}")
    return Tensor3(M.reshape(m, ell, M.shape[1]).transpose(1, 2, 0))


def collect(slices: Iterable, m: int | None = None) -> Tensor3:
    """Stack matrices as frontal slices, front to back in list order."""
    mats = [np.asarray(s) for s in slices]
    if not mats:
        raise ShapeError("collect needs at least one slice")
    if m is not None and len(mats) != m:
        raise ShapeError(f"expected {m} slices, got {len(mats)}")
    mats = [s.reshape(-1, 1) if s.ndim == 1 else s for s in mats]
    shapes = {s.shape for s in mats}
    if len(shapes) != 1 or mats[0].ndim != 2:
        raise ShapeError(f"slices must share one 2-d shape, got {sorted(shapes)}")
    return Tensor3(np.stack(mats, axis=2))


def frob_norm(T) -> float:
    """Frobenius norm (square root of summed squared magnitudes)."""
    data = T.data if isinstance(T, Tensor3) else np.asarray(T)
    return float(np.linalg.norm(data.ravel()))


def _check_same(T, U):
    if T.shape != U.shape:
        raise ShapeError(f"shape mismatch: {T.shape} vs {U.shape}")


def add(T: Tensor3, U: Tensor3) -> Tensor3:
    _check_same(T, U)
    return Tensor3(T.data + U.data)


def sub(T: Tensor3, U: Tensor3) -> Tensor3:
    _check_same(T, U)
    return Tensor3(T.data - U.data)
