"""Forecast evaluation, fit-time benchmarks and their CSV reports."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ltar.datagen import random_stable_model
from ltar.io import format_float
from ltar.model import ForecastMode, LtarModel, forecast, ltar_fit, simulate_ltar
from ltar.tensor import TensorSeries
from ltar.transforms import TransformKind

__all__ = [
    "EvalReport",
    "BenchReport",
    "evaluate",
    "bench_fit",
    "scaling_probe",
    "loglog_slope",
    "eval_csv",
    "errors_csv",
    "bench_csv",
    "scaling_csv",
    "available_workers",
]


@dataclass(frozen=True, eq=False)
class EvalReport:
    mode: ForecastMode
    errors: np.ndarray
    predictions: TensorSeries

    @property
    def horizon(self) -> int:
        return len(self.errors)

    @property
    def mean(self) -> float:
        return float(np.mean(self.errors))

    @property
    def max(self) -> float:
        return float(np.max(self.errors))

    @property
    def final(self) -> float:
        return float(self.errors[-1])

    def summary(self) -> dict:
        return {"mode": self.mode.value, "horizon": self.horizon, "mean": self.mean, "max": self.max, "final": self.final}


def evaluate(model: LtarModel, train: TensorSeries, test: TensorSeries, mode=ForecastMode.MULTI_STEP) -> EvalReport:
    """Forecast across the whole test horizon and record ``||Y_t - Yhat_t||_F`` per step."""
    if len(test) < 1:
        raise ValueError("test series is empty")
    result = forecast(model, train, len(test), mode, truth=test)
    return EvalReport(result.mode, result.errors, result.predictions)


@dataclass(frozen=True, eq=False)
class BenchReport:
    """Wall-clock fit times of the sequential baseline and of a worker pool.

    Trials of the two arms are interleaved.  ``identical`` says whether every
    parallel fit reproduced the sequential coefficients bit for bit.
    """

    ell: int
    m: int
    n: int
    p: int
    workers: int
    sequential: np.ndarray
    parallel: np.ndarray
    identical: bool = True

    @property
    def records(self):
        """``(workers, trial, seconds)`` rows, baseline first within each trial."""
        rows = []
        for trial, (seq, par) in enumerate(zip(self.sequential, self.parallel)):
            rows.append((1, trial, float(seq)))
            rows.append((self.workers, trial, float(par)))
        return rows

    @property
    def speedup(self) -> float:
        return float(np.mean(self.sequential) / np.mean(self.parallel))

    @property
    def median_speedup(self) -> float:
        return float(np.median(self.sequential) / np.median(self.parallel))


def _same_model(a: LtarModel, b: LtarModel) -> bool:
    return all(np.array_equal(x.data, y.data) for x, y in zip(a.A, b.A)) and np.array_equal(a.C.data, b.C.data)


def bench_fit(series: TensorSeries, p: int, transform=TransformKind.DCT, workers: int = 1, trials: int = 1) -> BenchReport:
    """Time :func:`ltar_fit` with one process against ``workers`` processes.

    A process pool is created once and warmed up before timing, so pool
    start-up is not charged to the parallel arm.  Only the fit call is timed.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    kind = TransformKind.parse(transform)
    n, ell, m = series.data.shape
    seq, par = [], []
    identical = True
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        reference = ltar_fit(series, p, kind)
        if pool is not None:
            identical = _same_model(reference, ltar_fit(series, p, kind, executor=pool))
        for trial in range(trials):
            t0 = time.perf_counter()
            ltar_fit(series, p, kind)
            seq.append(time.perf_counter() - t0)
            t0 = time.perf_counter()
            fitted = ltar_fit(series, p, kind, executor=pool)
            par.append(time.perf_counter() - t0)
            identical = identical and _same_model(reference, fitted)
    finally:
        if pool is not None:
            pool.shutdown()
    return BenchReport(ell, m, n, p, workers, np.array(seq), np.array(par), identical)


def scaling_probe(schedule, trials: int = 5, ell: int = 10, m: int = 10, p: int = 5, transform=TransformKind.DCT, seed=0):
    """Mean fit time for each series length in ``schedule`` at fixed ``(ell, m, p)``.

    Returns a list of ``(n, mean_seconds)`` pairs.  Data come from one
    simulated noisy process; shorter series are prefixes of it.
    """
    schedule = sorted({int(n) for n in schedule})
    if not schedule:
        raise ValueError("scaling schedule is empty")
    if len(schedule) < 4 or schedule[-1] < 8 * schedule[0]:
        raise ValueError("scaling schedule needs at least 4 lengths spanning a factor of 8")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    kind = TransformKind.parse(transform)
    model = random_stable_model(ell, m, p, kind, seed=seed)
    data = simulate_ltar(model, schedule[-1], noise=(-1.0, 1.0), seed=seed)
    times = {n: [] for n in schedule}
    ltar_fit(data[: schedule[0]], p, kind)  # warm-up
    for _ in range(trials):
        for n in schedule:
            t0 = time.perf_counter()
            ltar_fit(data[:n], p, kind)
            times[n].append(time.perf_counter() - t0)
    return [(n, float(np.mean(times[n]))) for n in schedule]


def loglog_slope(table) -> float:
    """Least-squares slope of ``log(seconds)`` against ``log(n)``."""
    ns, secs = zip(*table)
    return float(np.polyfit(np.log(ns), np.log(secs), 1)[0])


def _csv(header, rows) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(format_float(v) if isinstance(v, float) else str(v) for v in row))
    return "\n".join(lines) + "\n"


def errors_csv(errors) -> str:
    return _csv("step,error", ((j + 1, float(e)) for j, e in enumerate(errors)))


def eval_csv(report: EvalReport) -> str:
    return errors_csv(report.errors)


def bench_csv(report: BenchReport) -> str:
    return _csv("workers,trial,seconds", ((w, t, float(s)) for w, t, s in report.records))


def scaling_csv(table) -> str:
    return _csv("n,seconds", ((n, float(s)) for n, s in table))


def available_workers() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1
