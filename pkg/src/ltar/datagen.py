"""Synthetic data: the 3x3x3 ground-truth L-TAR(1) process and a dynamic community graph."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ltar.model import LtarModel, simulate_ltar
from ltar.tensor import Tensor3, TensorSeries, collect
from ltar.transforms import TransformKind, inverse

__all__ = [
    "GraphGenConfig",
    "ground_truth_theta",
    "gen_ltar1_series",
    "gen_graph_series",
    "random_stable_model",
]


def ground_truth_theta(transform=TransformKind.DCT) -> LtarModel:
    """Ground-truth parameters of the 3x3x3 L-TAR(1) benchmark process.

    Slices of ``A_1`` are ``-0.2 I``, ``0.2 I``, ``-0.2 I`` (front to back)
    and every entry of ``C`` is 0.1.
    """
    eye = np.eye(3)
    A1 = collect([-0.2 * eye, 0.2 * eye, -0.2 * eye])
    C = Tensor3(np.full((3, 1, 3), 0.1))
    return LtarModel(A=(A1,), C=C, transform=transform)


def gen_ltar1_series(n: int, seed=None, transform=TransformKind.DCT, noise=(-1.0, 1.0)) -> TensorSeries:
    """Simulate the ground-truth process with uniform(-1, 1) noise."""
    if n < 1:
        raise ValueError(f"series length must be >= 1, got {n}")
    return simulate_ltar(ground_truth_theta(transform), n, noise=noise, seed=seed)


@dataclass(frozen=True)
class GraphGenConfig:
    """Parameters of the synthetic community graph.

    ``edge_period`` and ``community_period`` are the number of time steps
    per full cycle of the edge sinusoid and of the community merge/split.
    """

    nodes: int = 20
    edge_period: float = 50.0
    community_period: float = 200.0
    sigma: float = 0.02
    seed: int | None = 0
    n: int = 2000

    def __post_init__(self):
        if self.nodes < 4 or self.nodes % 2:
            raise ValueError(f"nodes must be even and >= 4, got {self.nodes}")
        if self.edge_period <= 0 or self.community_period <= 0:
            raise ValueError("periods must be positive")
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if self.n < 1:
            raise ValueError(f"series length must be >= 1, got {self.n}")


def gen_graph_series(cfg: GraphGenConfig = GraphGenConfig()) -> TensorSeries:
    """Weighted adjacency matrices of a graph whose two halves drift apart and rejoin.

    At time ``x`` an edge inside either half weighs
    ``(1 + sin(x w1 + S)) / 2`` and an edge across the halves additionally
    carries the factor ``(1 + cos(x w2)) / 2``, with ``w1 = 2 pi /
    edge_period``, ``w2 = 2 pi / community_period`` and a per-edge phase
    ``S`` drawn uniformly from ``[0, 2 pi)``.  Gaussian noise with standard
    deviation ``sigma`` is added to every upper-triangle entry, which is then
    mirrored; the diagonal is zero.
    """
    rng = np.random.default_rng(cfg.seed)
    N = cfg.nodes
    iu = np.triu_indices(N, k=1)
    shifts = rng.uniform(0.0, 2 * np.pi, size=iu[0].size)
    half = N // 2
    same_block = (iu[0] < half) == (iu[1] < half)

    x = np.arange(cfg.n, dtype=np.float64)[:, None]
    w1 = 2 * np.pi / cfg.edge_period
    w2 = 2 * np.pi / cfg.community_period
    edge = (1 + np.sin(x * w1 + shifts)) / 2
    merge = (1 + np.cos(x * w2)) / 2
    upper = np.where(same_block, edge, merge * edge)
    upper = upper + rng.normal(0.0, cfg.sigma, size=upper.shape) if cfg.sigma > 0 else upper

    adj = np.zeros((cfg.n, N, N))
    adj[:, iu[0], iu[1]] = upper
    adj[:, iu[1], iu[0]] = upper
    return TensorSeries(adj)


def _spectrum(count, rng, radius_range, real):
    """``count`` eigenvalues with stratified angles; conjugate-closed when ``real``."""
    lo, hi = radius_range
    if not real:
        theta = 2 * np.pi * (np.arange(count) + rng.uniform(0.1, 0.9, count)) / count - np.pi
        return rng.uniform(lo, hi, count) * np.exp(1j * theta)
    pairs = count // 2
    theta = np.pi * (np.arange(pairs) + rng.uniform(0.1, 0.9, pairs)) / pairs
    top = rng.uniform(lo, hi, pairs) * np.exp(1j * theta)
    vals = np.concatenate([top, top.conj()])
    if count % 2:
        vals = np.append(vals, rng.choice([-1.0, 1.0]) * rng.uniform(lo, hi))
    return vals


def _lags_with_spectrum(eigvals, ell, p, rng, real):
    """Lag matrices ``A_1 .. A_p`` whose companion matrix has eigenvalues ``eigvals``.

    Eigenvector ``j`` of the companion matrix is ``(l^{p-1} v, ..., l v, v)``
    for a chosen ``v``, so ``[A_1 .. A_p] W = V diag(l^p)`` with
    ``W = [V L^{p-1}; ...; V]`` determines the lags.
    """
    count = ell * p
    V = rng.normal(size=(ell, count)) + 1j * rng.normal(size=(ell, count))
    if real:
        pairs = count // 2
        V[:, pairs : 2 * pairs] = V[:, :pairs].conj()
        if count % 2:
            V[:, -1] = V[:, -1].real
    W = np.vstack([V * eigvals ** (p - 1 - i) for i in range(p)])
    stacked = np.linalg.solve(W.T, (V * eigvals**p).T).T
    if real:
        stacked = stacked.real
    return [stacked[:, i * ell : (i + 1) * ell] for i in range(p)]


def random_stable_model(ell, m, p, transform=TransformKind.DCT, radius_range=(0.8, 0.95), seed=None) -> LtarModel:
    """Random real L-TAR(p) with a prescribed transform-domain spectrum.

    Each frontal slice of the transform-domain lag tensors is built so that
    its companion matrix has eigenvalues with moduli drawn from
    ``radius_range`` and angles spread evenly around the circle.  Keeping
    every mode slow and well separated is what lets a single noiseless
    trajectory identify the parameters to near machine precision.  Under
    ``DFT`` slices ``k`` and ``m - k`` are conjugates so the model is real.
    """
    kind = TransformKind.parse(transform)
    if not 0 < radius_range[0] <= radius_range[1] < 1:
        raise ValueError(f"radius range must lie inside (0, 1), got {radius_range}")
    rng = np.random.default_rng(seed)
    dtype = np.complex128 if kind.is_complex else np.float64
    A_hat = np.zeros((p, ell, ell, m), dtype=dtype)
    for k in range(m):
        partner = (-k) % m if kind.is_complex else k
        if partner < k:
            A_hat[..., k] = A_hat[..., partner].conj()
            continue
        real = partner == k
        lags = _lags_with_spectrum(_spectrum(ell * p, rng, radius_range, real), ell, p, rng, real)
        for i, a in enumerate(lags):
            A_hat[i, :, :, k] = a
    A = inverse(A_hat, kind, axis=3)
    C = rng.uniform(-1.0, 1.0, size=(ell, 1, m))
    return LtarModel(A=tuple(Tensor3(a) for a in A), C=Tensor3(C), transform=kind)
