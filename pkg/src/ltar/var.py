"""Vector autoregression fitted by ordinary least squares.

The regression for a VAR(p) on observations ``y_1 .. y_n`` (each of length
``ell``) is ``Y = X B + E`` with

* ``Y`` of shape ``(n - p, ell)``, row ``t`` holding ``y_{t+p}``;
* ``X`` of shape ``(n - p, ell*p + 1)``, row ``t`` holding
  ``(1, y_{t+p-1}, ..., y_t)``: a leading one, then lags newest first.

``B`` stacks the transposed intercept and lag matrices.  Complex series are
supported (least squares then uses the conjugate transpose).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg.lapack import get_lapack_funcs

from ltar.errors import InsufficientDataError, ShapeError, SingularSystemError

__all__ = [
    "VarParams",
    "DesignPair",
    "build_design",
    "ols_fit",
    "var_fit",
    "var_forecast_one",
    "companion_matrix",
]

# reciprocal condition number below which the Gram matrix counts as singular
SINGULAR_RCOND = np.finfo(np.float64).eps
RIDGE_SCALE = 1e-8


@dataclass(frozen=True)
class DesignPair:
    Y: np.ndarray
    X: np.ndarray

    @property
    def p(self) -> int:
        return (self.X.shape[1] - 1) // self.Y.shape[1]


@dataclass(frozen=True, eq=False)
class VarParams:
    """Fitted VAR(p): ``y_t = c + A_1 y_{t-1} + ... + A_p y_{t-p}``."""

    coeff: tuple
    intercept: np.ndarray
    ridge: bool = False

    def __post_init__(self):
        coeff = tuple(np.asarray(a) for a in self.coeff)
        ell = np.shape(self.intercept)[0]
        if not coeff or any(a.shape != (ell, ell) for a in coeff):
            raise ShapeError("VAR coefficients must be a non-empty list of square matrices matching the intercept")
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "intercept", np.asarray(self.intercept))

    @property
    def p(self) -> int:
        return len(self.coeff)

    @property
    def ell(self) -> int:
        return self.intercept.shape[0]

    @property
    def stacked(self) -> np.ndarray:
        """The ``(ell*p + 1, ell)`` coefficient block ``B`` of ``Y = X B``."""
        return np.vstack([self.intercept[None, :]] + [a.T for a in self.coeff])

    @classmethod
    def from_stacked(cls, B, ridge=False) -> VarParams:
        B = np.asarray(B)
        ell = B.shape[1]
        p, rem = divmod(B.shape[0] - 1, ell)
        if rem or p < 1:
            raise ShapeError(f"stacked coefficients of shape {B.shape} do not describe a VAR")
        coeff = tuple(B[1 + i * ell : 1 + (i + 1) * ell].T.copy() for i in range(p))
        return cls(coeff, B[0].copy(), ridge)


def _as_series(series) -> np.ndarray:
    arr = np.asarray(series)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ShapeError(f"expected a sequence of vectors, got array of shape {arr.shape}")
    return arr


def build_design(series, p: int) -> DesignPair:
    """Lagged regression matrices for a VAR(p) on ``series``.

    >>> d = build_design([1.0, 2.0, 3.0, 4.0], 1)
    >>> d.X.tolist(), d.Y.tolist()
    ([[1.0, 1.0], [1.0, 2.0], [1.0, 3.0]], [[2.0], [3.0], [4.0]])
    """
    if p < 1:
        raise ValueError(f"lag order must be >= 1, got {p}")
    y = _as_series(series)
    n, ell = y.shape
    if n <= p:
        raise InsufficientDataError(f"insufficient history: {n} observations for lag order {p}")
    rows = n - p
    X = np.empty((rows, ell * p + 1), dtype=y.dtype)
    X[:, 0] = 1
    for i in range(1, p + 1):
        X[:, 1 + (i - 1) * ell : 1 + i * ell] = y[p - i : n - i]
    return DesignPair(Y=y[p:].copy(), X=X)


def _lapack(gram):
    return get_lapack_funcs(("getrf", "getrs", "gecon"), (gram,))


def ols_fit(d: DesignPair, ridge_fallback: bool = True) -> np.ndarray:
    """Least-squares coefficients ``B = (X^H X)^{-1} X^H Y``.

    The normal equations are solved by LU followed by one step of iterative
    refinement.  When the Gram matrix is
    numerically singular and ``ridge_fallback`` is set, ``1e-8 *
    trace(X^H X) / k`` is added to the lag diagonal entries (the intercept
    stays unpenalised); otherwise :class:`SingularSystemError` is raised.
    """
    return _solve_normal(d, ridge_fallback)[0]


def _solve_normal(d, ridge_fallback):
    X, Y = d.X, d.Y
    Xh = X.conj().T
    gram = Xh @ X
    rhs = Xh @ Y
    k = gram.shape[0]
    anorm = np.abs(gram).sum(axis=0).max()
    # raw LAPACK calls: the wrappers in scipy.linalg cost more than the factorisation at these sizes
    getrf, getrs, gecon = _lapack(gram)
    lu, piv, info = getrf(gram)
    if info == 0 and anorm > 0:
        rcond, info = gecon(lu, anorm, norm="1")
        if info == 0 and rcond >= SINGULAR_RCOND:
            B, _ = getrs(lu, piv, rhs)
            # one refinement step on the residual recovers accuracy lost to squaring cond(X)
            correction, _ = getrs(lu, piv, Xh @ (Y - X @ B))
            return B + correction, False
    if not ridge_fallback:
        raise SingularSystemError("singular normal equations")
    lam = RIDGE_SCALE * np.trace(gram).real / k
    if lam == 0:
        lam = RIDGE_SCALE
    penalty = np.full(k, lam)
    penalty[0] = 0.0
    reg = gram + np.diag(penalty)
    return scipy.linalg.solve(reg, rhs, check_finite=False), True


def var_fit(series, p: int, ridge_fallback: bool = True) -> VarParams:
    """Fit a VAR(p) with intercept by least squares."""
    d = build_design(series, p)
    rows, cols = d.X.shape
    if rows < cols:
        raise InsufficientDataError(
            f"underdetermined system: {rows} equations for {cols} unknowns per component"
        )
    B, used_ridge = _solve_normal(d, ridge_fallback)
    return VarParams.from_stacked(B, used_ridge)


def var_forecast_one(params: VarParams, history) -> np.ndarray:
    """One-step forecast from ``history`` (newest observation last)."""
    h = _as_series(history)
    if h.shape[0] < params.p:
        raise InsufficientDataError(f"need {params.p} past observations, got {h.shape[0]}")
    if h.shape[1] != params.ell:
        raise ShapeError(f"history vectors have length {h.shape[1]}, model expects {params.ell}")
    out = params.intercept.astype(np.result_type(params.intercept, h), copy=True)
    for i, a in enumerate(params.coeff, start=1):
        out = out + a @ h[-i]
    return out


def companion_matrix(coeff) -> np.ndarray:
    """Companion form of lag matrices ``A_1 .. A_p``."""
    coeff = [np.asarray(a) for a in coeff]
    ell, p = coeff[0].shape[0], len(coeff)
    comp = np.zeros((ell * p, ell * p), dtype=np.result_type(*coeff))
    comp[:ell] = np.hstack(coeff)
    comp[ell:, : ell * (p - 1)] = np.eye(ell * (p - 1))
    return comp
