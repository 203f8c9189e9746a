"""Seeded synthetic Gaussian populations and independent metric oracles.

The generator is SplitMix64: a published, stateless 64-bit mixer whose
i-th output is ``mix64(seed + (i+1) * GAMMA)`` with the golden-gamma
increment. Uniforms take the top 53 bits shifted into (0, 1]; Gaussians
come from the Box-Muller transform applied to consecutive uniform
pairs, interleaving both outputs of each pair. One stream per
population, sequential draws, filling matrices row-major. The integer
stream is bit-portable; Gaussian outputs are deterministic per platform
(libm transcendentals may differ in the last ulp across systems).

``analytic_fad`` and ``brute_force_dmin`` are deliberately independent
re-implementations of the toolkit metrics, used as test oracles:
``analytic_fad`` evaluates the closed form on the specified population
parameters (scipy's Schur-based sqrtm for full covariances), and
``brute_force_dmin`` is a naive double loop over (clip, reference)
pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.linalg

from .emb1 import EmbeddingMatrix
from .errors import DimensionMismatch, InvalidSpec, ZeroNormInput

GAMMA = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1
_U53 = float(1 << 53)


def mix64(value: int) -> int:
    """SplitMix64 finalizer on one 64-bit value (reference implementation)."""
    z = value & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return (z ^ (z >> 31)) & _MASK


def stream_u64(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Outputs offset..offset+count-1 of the SplitMix64 stream, vectorized."""
    idx = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    z = np.uint64(seed & _MASK) + idx * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def stream_uniform(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Uniforms in (0, 1]: top 53 bits of each output, plus one, over 2^53."""
    bits = stream_u64(seed, count, offset)
    return ((bits >> np.uint64(11)).astype(np.float64) + 1.0) / _U53


def stream_gaussian(seed: int, count: int) -> np.ndarray:
    """Standard normal draws via Box-Muller on the uniform stream."""
    pairs = (count + 1) // 2
    u = stream_uniform(seed, 2 * pairs)
    u1, u2 = u[0::2], u[1::2]
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    z = np.empty(2 * pairs, dtype=np.float64)
    z[0::2] = radius * np.cos(angle)
    z[1::2] = radius * np.sin(angle)
    return z[:count]


def derive_stream_seed(base_seed: int, label: str) -> int:
    """Stable per-population stream seed from a base seed and a label.

    FNV-1a over the UTF-8 label, XORed into the base and remixed, so
    populations can be generated independently and in any order.
    """
    h = 0xCBF29CE484222325
    for byte in label.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & _MASK
    return mix64((base_seed & _MASK) ^ h)


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of one synthetic Gaussian population.

    ``sigma_scale`` is either a non-negative scalar (covariance
    sigma_scale * I) or a full D x D covariance matrix.
    """

    dim: int
    n: int
    mu: Union[float, np.ndarray]
    sigma_scale: Union[float, np.ndarray]
    rng_seed: int
    space_tag: str = "synthetic"

    def mean_vector(self) -> np.ndarray:
        mu = np.asarray(self.mu, dtype=np.float64)
        if mu.ndim == 0:
            mu = np.full(self.dim, float(mu))
        if mu.shape != (self.dim,):
            raise InvalidSpec(f"mu has shape {mu.shape}, expected ({self.dim},)")
        if not np.isfinite(mu).all():
            raise InvalidSpec("mu contains non-finite entries")
        return mu

    def covariance(self) -> np.ndarray:
        sigma = np.asarray(self.sigma_scale, dtype=np.float64)
        if sigma.ndim == 0:
            if float(sigma) < 0.0:
                raise InvalidSpec(f"sigma_scale must be >= 0, got {float(sigma)}")
            return float(sigma) * np.eye(self.dim)
        if sigma.shape != (self.dim, self.dim):
            raise InvalidSpec(
                f"covariance has shape {sigma.shape}, expected ({self.dim}, {self.dim})"
            )
        if not np.isfinite(sigma).all():
            raise InvalidSpec("covariance contains non-finite entries")
        if not np.allclose(sigma, sigma.T):
            raise InvalidSpec("covariance must be symmetric")
        return sigma

    def is_isotropic(self) -> bool:
        return np.asarray(self.sigma_scale).ndim == 0


def sample_population(spec: SynthSpec) -> EmbeddingMatrix:
    """Draw spec.n rows from the specified Gaussian, deterministically."""
    if spec.dim < 1 or spec.n < 1:
        raise InvalidSpec(f"need dim >= 1 and n >= 1, got dim={spec.dim}, n={spec.n}")
    mu = spec.mean_vector()
    z = stream_gaussian(spec.rng_seed, spec.n * spec.dim).reshape(spec.n, spec.dim)
    if spec.is_isotropic():
        scale = float(spec.sigma_scale)
        if scale < 0.0 or not math.isfinite(scale):
            raise InvalidSpec(f"sigma_scale must be a finite non-negative scalar, got {scale}")
        rows = mu + math.sqrt(scale) * z
    else:
        sigma = spec.covariance()
        try:
            chol = np.linalg.cholesky(sigma + 1e-12 * np.trace(sigma) * np.eye(spec.dim))
        except np.linalg.LinAlgError as exc:
            raise InvalidSpec(f"covariance is not positive semidefinite: {exc}") from exc
        rows = mu + z @ chol.T
    return EmbeddingMatrix(space_tag=spec.space_tag, rows=rows.astype(np.float32))


def analytic_fad(spec_p: SynthSpec, spec_q: SynthSpec) -> float:
    """Exact Fréchet distance between the two specified Gaussians.

    Independent oracle route: closed form for isotropic covariances,
    scipy's sqrtm for full ones.
    """
    if spec_p.dim != spec_q.dim:
        raise DimensionMismatch(f"specs have dims {spec_p.dim} and {spec_q.dim}")
    diff = spec_p.mean_vector() - spec_q.mean_vector()
    mean_term = float(diff @ diff)
    if spec_p.is_isotropic() and spec_q.is_isotropic():
        a = float(spec_p.sigma_scale)
        b = float(spec_q.sigma_scale)
        return mean_term + spec_p.dim * (math.sqrt(a) - math.sqrt(b)) ** 2
    sigma_p = spec_p.covariance()
    sigma_q = spec_q.covariance()
    covmean = scipy.linalg.sqrtm(sigma_p @ sigma_q)
    if np.iscomplexobj(covmean):
        covmean = covmean.real
    return mean_term + float(
        np.trace(sigma_p) + np.trace(sigma_q) - 2.0 * np.trace(covmean)
    )


def brute_force_dmin(gens: np.ndarray, refs: np.ndarray) -> list[float]:
    """Naive double-loop nearest-reference cosine distances.

    Differential-testing oracle for metrics.min_distance; repeats the
    same per-pair scalar operations so results match bit-for-bit.
    """
    gen_rows = np.asarray(gens, dtype=np.float64)
    ref_rows = np.asarray(refs, dtype=np.float64)
    out = []
    for g in gen_rows:
        norm_g = math.sqrt(float(np.dot(g, g)))
        if norm_g == 0.0:
            raise ZeroNormInput("generated vector has zero norm")
        best = math.inf
        for r in ref_rows:
            norm_r = math.sqrt(float(np.dot(r, r)))
            if norm_r == 0.0:
                raise ZeroNormInput("reference vector has zero norm")
            d = 1.0 - float(np.dot(g, r)) / (norm_g * norm_r)
            if d < 0.0:
                d = 0.0
            elif d > 2.0:
                d = 2.0
            if d < best:
                best = d
        out.append(best)
    return out
