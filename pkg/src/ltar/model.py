"""Transform-based tensor autoregression: fitting, simulation and forecasting.

The model for observations ``Y_t`` of shape ``(ell, 1, m)`` is::

    Y_t = C + A_1 • Y_{t-1} + ... + A_p • Y_{t-p} + E_t

where ``•`` is the L-product under a chosen tube transform.  In the
transform domain the model splits into ``m`` independent VAR(p) problems,
one per frontal slice, which :func:`ltar_fit` solves separately (optionally
in a process pool) before mapping the coefficients back.
"""

from __future__ import annotations

import enum
import functools
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ltar.differencing import DifferenceOrder, difference, difference_steps, undifference
from ltar.errors import InsufficientDataError, ShapeError
from ltar.tensor import Tensor3, TensorSeries, frob_norm
from ltar.transforms import TransformKind, forward, inverse, l_product
from ltar.var import companion_matrix, var_fit

__all__ = [
    "ForecastMode",
    "LtarModel",
    "ForecastResult",
    "ltar_fit",
    "fit_with_differencing",
    "ltar_predict_one",
    "forecast",
    "simulate_ltar",
]


class ForecastMode(enum.Enum):
    SINGLE_STEP = "single"
    MULTI_STEP = "multi"

    @classmethod
    def parse(cls, value) -> ForecastMode:
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        key = {"single_step": "single", "single-step": "single", "multi_step": "multi", "multi-step": "multi"}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown forecast mode {value!r} (choose from single, multi)") from None


@dataclass(frozen=True, eq=False)
class LtarModel:
    """Fitted parameters ``{A_1 .. A_p, C}`` plus differencing settings.

    ``tail`` holds the last ``p + d + s`` training observations so a model
    can forecast straight past the end of its training data.
    """

    A: tuple
    C: Tensor3
    transform: TransformKind = TransformKind.DCT
    d: int = 0
    s: int = 0
    difference_order: DifferenceOrder = DifferenceOrder.SEASONAL_THEN_LAG
    tail: TensorSeries | None = None

    def __post_init__(self):
        A = tuple(a if isinstance(a, Tensor3) else Tensor3(a) for a in self.A)
        C = self.C if isinstance(self.C, Tensor3) else Tensor3(self.C)
        if not A:
            raise ShapeError("model needs at least one lag tensor")
        ell, m = C.rows, C.depth
        if C.cols != 1 or any(a.shape != (ell, ell, m) for a in A):
            raise ShapeError(f"lag tensors must be {ell}x{ell}x{m} and C {ell}x1x{m}")
        if any(a.is_complex for a in A) or C.is_complex:
            raise ValueError("model parameters must be real")
        if self.d < 0:
            raise ValueError(f"difference order d must be >= 0, got {self.d}")
        if self.s < 0 or self.s == 1:
            raise ValueError(f"seasonal period must be 0 or > 1, got {self.s}")
        if self.tail is not None and (self.tail.ell, self.tail.depth) != (ell, m):
            raise ShapeError("retained tail does not match the model dimensions")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "transform", TransformKind.parse(self.transform))
        object.__setattr__(self, "difference_order", DifferenceOrder.parse(self.difference_order))

    @property
    def p(self) -> int:
        return len(self.A)

    @property
    def ell(self) -> int:
        return self.C.rows

    @property
    def depth(self) -> int:
        return self.C.depth

    @property
    def window(self) -> int:
        """Observations of history needed for one forecast step."""
        return self.p + self.d + self.s

    @functools.cached_property
    def transformed(self):
        """``(A_hat, C_hat)`` with shapes ``(p, ell, ell, m)`` and ``(ell, m)``."""
        A_hat = forward(np.stack([a.data for a in self.A]), self.transform, axis=3)
        C_hat = forward(self.C.data[:, 0, :], self.transform, axis=1)
        return A_hat, C_hat

    def companion_radii(self) -> np.ndarray:
        """Spectral radius of each transform-domain slice's companion matrix."""
        A_hat, _ = self.transformed
        radii = []
        for k in range(self.depth):
            comp = companion_matrix([A_hat[i, :, :, k] for i in range(self.p)])
            radii.append(np.max(np.abs(np.linalg.eigvals(comp))))
        return np.array(radii)

    @property
    def unstable(self) -> bool:
        """True when some slice's companion matrix has spectral radius >= 1."""
        return bool(np.any(self.companion_radii() >= 1.0))

    def __repr__(self):
        return (
            f"LtarModel(p={self.p}, d={self.d}, s={self.s}, transform={self.transform.value}, "
            f"ell={self.ell}, depth={self.depth})"
        )


@dataclass(frozen=True, eq=False)
class ForecastResult:
    predictions: TensorSeries
    mode: ForecastMode
    errors: np.ndarray | None = None


def _fit_slices(slices, p, ridge_fallback):
    return [var_fit(y, p, ridge_fallback) for y in slices]


def _fit_all(slices, p, ridge_fallback, workers, executor):
    if executor is None and workers <= 1:
        return _fit_slices(slices, p, ridge_fallback)
    n_chunks = max(1, min(len(slices), workers if executor is None else getattr(executor, "_max_workers", workers)))
    bounds = np.linspace(0, len(slices), n_chunks + 1).astype(int)
    chunks = [slices[a:b] for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    own = executor is None
    pool = ProcessPoolExecutor(max_workers=workers) if own else executor
    try:
        futures = [pool.submit(_fit_slices, chunk, p, ridge_fallback) for chunk in chunks]
        return [params for fut in futures for params in fut.result()]
    finally:
        if own:
            pool.shutdown()


def ltar_fit(
    series: TensorSeries,
    p: int,
    transform=TransformKind.DCT,
    workers: int = 1,
    executor: Executor | None = None,
    ridge_fallback: bool = True,
) -> LtarModel:
    """Estimate an L-TAR(p) model.

    Every observation is transformed along its tubes, a VAR(p) is fitted to
    each frontal-slice vector series, the per-slice coefficients are stacked
    into transform-domain tensors, and the inverse transform yields
    ``A_1 .. A_p`` and ``C``.

    Parameters
    ----------
    series : TensorSeries
        Training observations.
    p : int
        Lag order, at least 1.
    transform : TransformKind or str
        Tube transform defining the L-product.
    workers : int
        Number of processes for the per-slice fits; 1 fits sequentially.
    executor : concurrent.futures.Executor, optional
        Existing pool to submit the per-slice fits to (overrides ``workers``).
    ridge_fallback : bool
        Regularise numerically singular slices instead of raising.
    """
    kind = TransformKind.parse(transform)
    if p < 1:
        raise ValueError(f"lag order must be >= 1, got {p}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    n, ell, m = series.data.shape
    if n - p < ell * p + 1:
        raise InsufficientDataError(
            f"{n} observations cannot determine a lag-{p} model with ell={ell} "
            f"(need at least {ell * p + 1 + p})"
        )
    Yt = forward(series.data, kind, axis=2)
    slices = [np.ascontiguousarray(Yt[:, :, k]) for k in range(m)]
    fitted = _fit_all(slices, p, ridge_fallback, workers, executor)

    A_hat = np.stack([np.stack([f.coeff[i] for f in fitted], axis=2) for i in range(p)])
    C_hat = np.stack([f.intercept for f in fitted], axis=1)
    A = inverse(A_hat, kind, axis=3)
    C = inverse(C_hat, kind, axis=1)
    return LtarModel(
        A=tuple(Tensor3(a) for a in A),
        C=Tensor3(C[:, None, :]),
        transform=kind,
        tail=series[n - p :],
    )


def fit_with_differencing(
    series: TensorSeries,
    p: int,
    d: int = 0,
    s: int = 0,
    transform=TransformKind.DCT,
    difference_order=DifferenceOrder.SEASONAL_THEN_LAG,
    workers: int = 1,
    executor: Executor | None = None,
    ridge_fallback: bool = True,
) -> LtarModel:
    """Fit L-TAR (``d = s = 0``), L-TARI (``d > 0``), L-STAR (``s > 0``) or L-STARI.

    The series is differenced in the requested order, an L-TAR(p) is fitted
    to the result, and ``d``, ``s`` and the last ``p + d + s`` original
    observations are recorded so :func:`forecast` can undo the differencing.
    """
    n = len(series)
    if s and not 1 < s < n:
        raise ValueError(f"seasonal period must satisfy 1 < s < n (n={n}), got s={s}")
    order = DifferenceOrder.parse(difference_order)
    steps = difference_steps(d, s, order)
    if n <= d + s:
        raise InsufficientDataError(f"{n} observations leave nothing after differencing (d={d}, s={s})")
    diffed, _ = difference(series, steps)
    model = ltar_fit(diffed, p, transform, workers, executor, ridge_fallback)
    window = p + d + s
    return replace(model, d=d, s=s, difference_order=order, tail=series[n - window :])


def ltar_predict_one(model: LtarModel, history) -> Tensor3:
    """``C + sum_i A_i • Y_{t-i}`` from the last ``p`` observations (newest last)."""
    obs = list(history)
    if len(obs) < model.p:
        raise InsufficientDataError(f"need {model.p} past observations, got {len(obs)}")
    out = model.C
    for i, a in enumerate(model.A, start=1):
        y = obs[-i]
        if y.shape != (model.ell, 1, model.depth):
            raise ShapeError(f"history observation of shape {y.shape} does not match the model")
        out = out + l_product(a, y, model.transform)
    return out


def _predict_path(model, hist, steps):
    """Closed-loop forecast of ``steps`` values after ``hist`` (no differencing)."""
    A_hat, C_hat = model.transformed
    p = model.p
    window = list(forward(hist[hist.shape[0] - p :], model.transform, axis=2))
    out = []
    for _ in range(steps):
        y = C_hat
        for i in range(p):
            y = y + np.einsum("ijk,jk->ik", A_hat[i], window[-1 - i])
        window.append(y)
        out.append(y)
    return inverse(np.stack(out), model.transform, axis=2)


def _forecast_from(model, hist, steps):
    hist_steps = difference_steps(model.d, model.s, model.difference_order)
    diffed, states = difference(hist, hist_steps, anchor="tail")
    pred = _predict_path(model, diffed.data, steps)
    return undifference(pred, states).data


def _as_series(obj, model, name):
    if obj is None:
        return None
    series = obj if isinstance(obj, TensorSeries) else TensorSeries(list(obj))
    if (series.ell, series.depth) != (model.ell, model.depth):
        raise ShapeError(
            f"{name} observations are {series.ell}x1x{series.depth}, model expects {model.ell}x1x{model.depth}"
        )
    return series


def forecast(
    model: LtarModel,
    history: TensorSeries | None,
    steps: int,
    mode=ForecastMode.MULTI_STEP,
    truth: TensorSeries | None = None,
) -> ForecastResult:
    """Forecast ``steps`` observations after ``history``.

    ``MULTI_STEP`` feeds each forecast back as input.  ``SINGLE_STEP``
    conditions every step on the true observations, which must be supplied
    in ``truth``; differencing is undone with true values too.  When
    ``truth`` is given, per-step Frobenius errors are reported.  ``history``
    defaults to the tail retained from training.
    """
    mode = ForecastMode.parse(mode)
    if steps < 1:
        raise ValueError(f"forecast horizon must be >= 1, got {steps}")
    history = model.tail if history is None else _as_series(history, model, "history")
    if history is None:
        raise InsufficientDataError("no history given and the model retains none")
    if len(history) < model.window:
        raise InsufficientDataError(f"need {model.window} past observations, got {len(history)}")
    truth = _as_series(truth, model, "truth")
    if mode is ForecastMode.SINGLE_STEP and (truth is None or len(truth) < steps):
        raise InsufficientDataError("single-step forecasting needs ground truth covering the horizon")

    hist = history.data[len(history) - model.window :]
    if mode is ForecastMode.MULTI_STEP:
        pred = _forecast_from(model, hist, steps)
    else:
        full = np.concatenate([hist, truth.data[: steps - 1]])
        pred = np.stack(
            [_forecast_from(model, full[j : j + model.window], 1)[0] for j in range(steps)]
        )
    predictions = TensorSeries(pred)
    errors = None
    if truth is not None:
        k = min(steps, len(truth))
        errors = np.array([frob_norm(pred[j] - truth.data[j]) for j in range(k)])
    return ForecastResult(predictions, mode, errors)


def simulate_ltar(model: LtarModel, n: int, noise=None, seed=None, burn_in: int | None = None) -> TensorSeries:
    """Generate ``n`` observations from ``model``.

    The ``p`` initial observations are i.i.d. uniform(-1, 1).  ``noise`` is
    ``None`` or a ``(low, high)`` pair for i.i.d. uniform entrywise noise.
    With noise, ``max(10 p, 100)`` burn-in steps are discarded unless
    ``burn_in`` says otherwise; a noiseless run keeps its transient, which
    is what makes its parameters identifiable.
    """
    if model.d or model.s:
        raise ValueError("simulation requires a model without differencing")
    if n < 1:
        raise ValueError(f"series length must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    p, ell, m = model.p, model.ell, model.depth
    if burn_in is None:
        burn_in = max(10 * p, 100) if noise is not None else 0
    total = n + burn_in
    start = rng.uniform(-1.0, 1.0, size=(p, ell, m))
    if noise is None:
        eps = np.zeros((total, ell, m))
    else:
        low, high = noise
        eps = rng.uniform(low, high, size=(total, ell, m))

    A_hat, C_hat = model.transformed
    kind = model.transform
    eps_hat = forward(eps, kind, axis=2)
    dtype = np.complex128 if kind.is_complex else np.float64
    path = np.empty((p + total, ell, m), dtype=dtype)
    path[:p] = forward(start, kind, axis=2)
    for t in range(p, p + total):
        y = C_hat + eps_hat[t - p]
        for i in range(p):
            y = y + np.einsum("ijk,jk->ik", A_hat[i], path[t - 1 - i])
        path[t] = y
    return TensorSeries(inverse(path[p + burn_in :], kind, axis=2))
