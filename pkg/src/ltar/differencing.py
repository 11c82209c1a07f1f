"""Lag and seasonal differencing of tensor series, and their inverses.

A :class:`DifferencingState` carries the original observations that
immediately precede the first differenced value (its *anchor*).  The state
returned by :func:`lag_difference` / :func:`seasonal_difference` is anchored
at the head of the input, so inverting the differenced series reproduces
``series[order:]``.  :func:`tail_state` builds a state anchored at the end of
a series, which is what forecasting needs to continue past it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ltar.errors import InsufficientDataError
from ltar.tensor import TensorSeries

__all__ = [
    "DiffKind",
    "DifferenceOrder",
    "DifferencingState",
    "lag_difference",
    "invert_lag_difference",
    "seasonal_difference",
    "invert_seasonal_difference",
    "tail_state",
    "difference_steps",
    "difference",
    "undifference",
]


class DiffKind(enum.Enum):
    LAG = "lag"
    SEASONAL = "seasonal"


class DifferenceOrder(enum.Enum):
    SEASONAL_THEN_LAG = "seasonal-then-lag"
    LAG_THEN_SEASONAL = "lag-then-seasonal"

    @classmethod
    def parse(cls, value) -> DifferenceOrder:
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(o.value for o in cls)
            raise ValueError(f"unknown difference order {value!r} (choose from {choices})") from None


@dataclass(frozen=True, eq=False)
class DifferencingState:
    kind: DiffKind
    order: int
    anchor: np.ndarray  # (order, ell, depth), oldest first

    def __post_init__(self):
        anchor = np.array(self.anchor, dtype=np.float64)
        if anchor.ndim != 3 or anchor.shape[0] != self.order:
            raise ValueError(f"anchor must hold {self.order} observations, got shape {anchor.shape}")
        anchor.flags.writeable = False
        object.__setattr__(self, "anchor", anchor)


def _data(series):
    return series.data if isinstance(series, TensorSeries) else np.asarray(series, dtype=np.float64)


def _lag_diff(y, d):
    return np.diff(y, n=d, axis=0)


def _lag_undiff(diffed, anchor):
    d = anchor.shape[0]
    out = diffed
    for level in reversed(range(d)):
        last = np.diff(anchor, n=level, axis=0)[-1]
        out = last + np.cumsum(out, axis=0)
    return out


def _seasonal_diff(y, s):
    return y[s:] - y[:-s]


def _seasonal_undiff(diffed, anchor):
    s = anchor.shape[0]
    out = np.empty_like(diffed)
    prev = anchor
    for start in range(0, diffed.shape[0], s):
        block = diffed[start : start + s]
        out[start : start + s] = block + prev[: block.shape[0]]
        prev = out[start : start + s]
    return out


def _check_lag(n, d):
    if d < 1:
        raise ValueError(f"difference order must be >= 1, got {d}")
    if n <= d:
        raise InsufficientDataError(f"cannot difference {n} observations {d} times")


def _check_season(n, s):
    if not 1 < s < n:
        raise ValueError(f"seasonal period must satisfy 1 < s < n (n={n}), got s={s}")


def lag_difference(series, d: int = 1):
    """Apply ``Y'_j = Y_j - Y_{j-1}`` ``d`` times.

    Returns the differenced series (length ``n - d``) and a state anchored at
    the first ``d`` observations.
    """
    y = _data(series)
    _check_lag(y.shape[0], d)
    return TensorSeries(_lag_diff(y, d)), DifferencingState(DiffKind.LAG, d, y[:d])


def invert_lag_difference(diffed, state: DifferencingState) -> TensorSeries:
    """Undo :func:`lag_difference` by cumulative sums from the anchor."""
    if state.kind is not DiffKind.LAG:
        raise ValueError(f"expected a lag differencing state, got {state.kind.value}")
    return TensorSeries(_lag_undiff(_data(diffed), state.anchor))


def seasonal_difference(series, s: int):
    """Apply ``Y'_j = Y_j - Y_{j-s}``; the state keeps the first ``s`` observations."""
    y = _data(series)
    _check_season(y.shape[0], s)
    return TensorSeries(_seasonal_diff(y, s)), DifferencingState(DiffKind.SEASONAL, s, y[:s])


def invert_seasonal_difference(diffed, state: DifferencingState) -> TensorSeries:
    """Undo :func:`seasonal_difference` via ``Y_k = Y'_k + Y_{k-s}``."""
    if state.kind is not DiffKind.SEASONAL:
        raise ValueError(f"expected a seasonal differencing state, got {state.kind.value}")
    return TensorSeries(_seasonal_undiff(_data(diffed), state.anchor))


def tail_state(series, kind: DiffKind, order: int) -> DifferencingState:
    """State anchored at the last ``order`` observations of ``series``."""
    y = _data(series)
    if y.shape[0] < order:
        raise InsufficientDataError(f"need {order} observations to anchor, got {y.shape[0]}")
    return DifferencingState(kind, order, y[y.shape[0] - order :])


def difference_steps(d: int = 0, s: int = 0, order=DifferenceOrder.SEASONAL_THEN_LAG):
    """The ``(kind, order)`` operations implied by ``d``, ``s`` and ``order``."""
    if d < 0 or s < 0:
        raise ValueError("difference orders must be non-negative")
    seasonal = [(DiffKind.SEASONAL, s)] if s else []
    lag = [(DiffKind.LAG, d)] if d else []
    if DifferenceOrder.parse(order) is DifferenceOrder.SEASONAL_THEN_LAG:
        return seasonal + lag
    return lag + seasonal


def _apply(y, kind, order):
    if kind is DiffKind.LAG:
        _check_lag(y.shape[0], order)
        return _lag_diff(y, order)
    _check_season(y.shape[0], order)
    return _seasonal_diff(y, order)


def difference(series, steps, anchor="head"):
    """Apply differencing ``steps`` in sequence.

    With ``anchor="head"`` the states let :func:`undifference` rebuild
    ``series[d + s:]`` exactly; with ``"tail"`` they sit at the end of each
    intermediate series, which is what inverting forecasts that continue the
    series needs.
    """
    if anchor not in ("head", "tail"):
        raise ValueError(f"anchor must be 'head' or 'tail', got {anchor!r}")
    steps = list(steps)
    y = _data(series)
    states = []
    # head anchors sit right before the first observation the full inverse reproduces
    remaining = sum(order for _, order in steps)
    for kind, order in steps:
        if anchor == "head":
            nxt = _apply(y, kind, order)
            states.append(DifferencingState(kind, order, y[remaining - order : remaining]))
            remaining -= order
            y = nxt
        else:
            nxt = _apply(y, kind, order)
            states.append(DifferencingState(kind, order, y[y.shape[0] - order :]))
            y = nxt
    return TensorSeries(y), states


def undifference(diffed, states) -> TensorSeries:
    """Invert a sequence of differencing states (applied in reverse)."""
    y = _data(diffed)
    for state in reversed(states):
        if state.kind is DiffKind.LAG:
            y = _lag_undiff(y, state.anchor)
        else:
            y = _seasonal_undiff(y, state.anchor)
    return TensorSeries(y)
