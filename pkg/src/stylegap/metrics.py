"""Numerical metrics over embedding populations.

Implements cosine distance, nearest-reference (min-distance)
attribution, Gaussian population summaries, Fréchet distance between
two summaries, centroid similarity, and the styled-vs-baseline
similarity delta. All computation is float64; inputs may be float32
matrices. Everything here is a pure function of its arguments and is
safe for data-parallel use.

The nearest-reference distance is computed with one explicit dot
product per (generated, reference) pair so that an independent
re-implementation using the same scalar operations reproduces it
bit-for-bit (see synth.brute_force_dmin).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .emb1 import EmbeddingMatrix
from .errors import (
    DimensionMismatch,
    EmptyReferenceSet,
    InsufficientSamples,
    SqrtmFailure,
    ZeroNormCentroid,
    ZeroNormInput,
)

# Eigenvalues of a covariance whose magnitude is below this fraction of
# the matrix scale are treated as rounding noise and clamped to zero.
_EIG_CLAMP_REL = 1e-6
_JITTER_REL = 1e-10
_FAD_CLAMP = 1e-6


@dataclass(frozen=True)
class GaussianSummary:
    """Mean vector, covariance matrix, and sample count of a population."""

    mu: np.ndarray
    sigma: np.ndarray
    n: int

    def __post_init__(self) -> None:
        mu = np.asarray(self.mu, dtype=np.float64)
        sigma = np.asarray(self.sigma, dtype=np.float64)
        if mu.ndim != 1 or sigma.shape != (mu.size, mu.size):
            raise DimensionMismatch(
                f"mu has shape {mu.shape}, sigma has shape {sigma.shape}"
            )
        if self.n < 2:
            raise InsufficientSamples(f"need n >= 2 samples, got {self.n}")
        if not (np.isfinite(mu).all() and np.isfinite(sigma).all()):
            raise SqrtmFailure("Gaussian summary contains non-finite entries")
        scale = float(np.abs(sigma).max())
        if scale > 0 and not np.allclose(sigma, sigma.T, rtol=1e-8, atol=1e-8 * scale):
            raise SqrtmFailure("covariance matrix is not symmetric")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)

    @property
    def dim(self) -> int:
        return self.mu.size


@dataclass(frozen=True)
class MinDistanceResult:
    """Per-clip nearest-reference distances plus their median."""

    per_clip: tuple[tuple[str, float], ...]
    median: float


@dataclass(frozen=True)
class DeltaStat:
    """Mean centroid similarity of a styled condition vs the baseline."""

    styled_mean_sim: float
    baseline_mean_sim: float
    delta: float


def _pair_cosine_distance(g: np.ndarray, r: np.ndarray, norm_g: float, norm_r: float) -> float:
    # Fixed operation order; the differential-test oracle repeats it verbatim.
    d = 1.0 - float(np.dot(g, r)) / (norm_g * norm_r)
    if d < 0.0:
        return 0.0
    if d > 2.0:
        return 2.0
    return d


def _vector_norm(v: np.ndarray) -> float:
    return math.sqrt(float(np.dot(v, v)))


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine distance 1 - a.b / (|a||b|), clamped to [0, 2]."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"vector shapes differ: {a.shape} vs {b.shape}")
    norm_a = _vector_norm(a)
    norm_b = _vector_norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroNormInput("cosine distance is undefined for zero-norm vectors")
    return _pair_cosine_distance(a, b, norm_a, norm_b)


def min_distance(gen: np.ndarray, refs: np.ndarray | EmbeddingMatrix) -> float:
    """Cosine distance from *gen* to its nearest reference row."""
    rows = _as_rows(refs).astype(np.float64)
    if rows.shape[0] == 0:
        raise EmptyReferenceSet("need at least one reference row")
    g = np.asarray(gen, dtype=np.float64)
    if g.shape != (rows.shape[1],):
        raise DimensionMismatch(f"vector of dim {g.shape} vs references of dim {rows.shape[1]}")
    norm_g = _vector_norm(g)
    if norm_g == 0.0:
        raise ZeroNormInput("generated vector has zero norm")
    best = math.inf
    for r in rows:
        norm_r = _vector_norm(r)
        if norm_r == 0.0:
            raise ZeroNormInput("reference vector has zero norm")
        d = _pair_cosine_distance(g, r, norm_g, norm_r)
        if d < best:
            best = d
    return best


def median(values: Sequence[float]) -> float:
    """Order-statistic median; even counts average the central pair."""
    if not values:
        raise EmptyReferenceSet("median of an empty sequence")
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    if n % 2 == 1:
        return ordered[mid]
    return (ordered[mid - 1] + ordered[mid]) / 2.0


def min_distance_condition(
    gens: np.ndarray | EmbeddingMatrix,
    refs: np.ndarray | EmbeddingMatrix,
    ids: Sequence[str] | None = None,
) -> MinDistanceResult:
    """Per-clip nearest-reference distances for a condition, with median."""
    gen_rows = _as_rows(gens)
    if ids is None:
        ids = [str(i) for i in range(gen_rows.shape[0])]
    if len(ids) != gen_rows.shape[0]:
        raise DimensionMismatch(f"{len(ids)} ids for {gen_rows.shape[0]} clips")
    per_clip = tuple(
        (clip_id, min_distance(row, refs)) for clip_id, row in zip(ids, gen_rows)
    )
    return MinDistanceResult(
        per_clip=per_clip, median=median([d for _, d in per_clip])
    )


def estimate_gaussian(
    matrix: np.ndarray | EmbeddingMatrix, cov_divisor: str = "n-1"
) -> GaussianSummary:
    """Column mean and sample covariance of a population.

    *cov_divisor* selects the covariance normalization: "n-1" (unbiased,
    default) or "n". The covariance is symmetrized as (S + S.T) / 2.
    """
    rows = _as_rows(matrix).astype(np.float64)
    n = rows.shape[0]
    if n < 2:
        raise InsufficientSamples(f"need n >= 2 samples for a covariance, got {n}")
    if cov_divisor not in ("n-1", "n"):
        raise ValueError(f"cov_divisor must be 'n-1' or 'n', got {cov_divisor!r}")
    mu = rows.mean(axis=0)
    centered = rows - mu
    divisor = n - 1 if cov_divisor == "n-1" else n
    sigma = centered.T @ centered / divisor
    sigma = (sigma + sigma.T) / 2.0
    return GaussianSummary(mu=mu, sigma=sigma, n=n)


def _psd_sqrt(sigma: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root via eigendecomposition, clamping noise."""
    w, v = np.linalg.eigh(sigma)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.T


def _trace_sqrt_product(sigma_p: np.ndarray, sigma_q: np.ndarray) -> float:
    """Tr((sigma_p sigma_q)^(1/2)) via the symmetric-eigendecomposition route.

    Computes A^(1/2) sigma_q A^(1/2) with A = sigma_p, then sums the
    square roots of its (clamped) eigenvalues. If A's eigendecomposition
    fails or A has eigenvalues below -1e-6 * tr(A)/D, a jitter of
    1e-10 * tr(A)/D is added to A's diagonal and the computation retried
    once before giving up.
    """
    dim = sigma_p.shape[0]

    def attempt(a: np.ndarray) -> float:
        w, v = np.linalg.eigh(a)
        floor = -_EIG_CLAMP_REL * max(float(np.trace(a)), 0.0) / dim
        if w.min() < floor:
            raise np.linalg.LinAlgError(
                f"covariance eigenvalue {w.min():.3e} below tolerance {floor:.3e}"
            )
        root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
        inner = root @ sigma_q @ root
        inner = (inner + inner.T) / 2.0
        eig = np.linalg.eigvalsh(inner)
        return float(np.sqrt(np.clip(eig, 0.0, None)).sum())

    try:
        return attempt(sigma_p)
    except np.linalg.LinAlgError as first:
        eps = _JITTER_REL * max(float(np.trace(sigma_p)), 0.0) / dim
        try:
            return attempt(sigma_p + eps * np.eye(dim))
        except np.linalg.LinAlgError as exc:
            raise SqrtmFailure(
                f"matrix square root failed after jitter retry: {first}; {exc}"
            ) from exc


def frechet_distance(p: GaussianSummary, q: GaussianSummary) -> float:
    """Fréchet distance between two Gaussian summaries.

    |mu_p - mu_q|^2 + Tr(sigma_p + sigma_q - 2 (sigma_p sigma_q)^(1/2)),
    non-negative; tiny negative rounding (>= -1e-6) clamps to zero.
    """
    if p.dim != q.dim:
        raise DimensionMismatch(f"summaries have dims {p.dim} and {q.dim}")
    diff = p.mu - q.mu
    value = (
        float(diff @ diff)
        + float(np.trace(p.sigma))
        + float(np.trace(q.sigma))
        - 2.0 * _trace_sqrt_product(p.sigma, q.sigma)
    )
    if value < 0.0:
        if value < -_FAD_CLAMP:
            raise SqrtmFailure(f"Fréchet distance came out negative: {value:.3e}")
        return 0.0
    return value


def centroid_similarity(
    gens: np.ndarray | EmbeddingMatrix, refs: np.ndarray | EmbeddingMatrix
) -> float:
    """Mean cosine similarity of generated clips to the reference centroid."""
    ref_rows = _as_rows(refs).astype(np.float64)
    if ref_rows.shape[0] == 0:
        raise EmptyReferenceSet("need at least one reference row")
    centroid = ref_rows.mean(axis=0)
    if _vector_norm(centroid) == 0.0:
        raise ZeroNormCentroid("reference centroid has zero norm")
    gen_rows = _as_rows(gens)
    sims = [1.0 - cosine_distance(row, centroid) for row in gen_rows]
    return float(np.mean(sims))


def delta(styled_sim: float, baseline_sim: float) -> DeltaStat:
    """Centroid-similarity improvement of a styled condition over baseline."""
    return DeltaStat(
        styled_mean_sim=styled_sim,
        baseline_mean_sim=baseline_sim,
        delta=styled_sim - baseline_sim,
    )


def _as_rows(matrix: np.ndarray | EmbeddingMatrix) -> np.ndarray:
    if isinstance(matrix, EmbeddingMatrix):
        return matrix.rows
    rows = np.asarray(matrix)
    if rows.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got ndim={rows.ndim}")
    return rows
