"""Truncated block Hankel matrices and their top Schmidt pairs.

The Hankel operator ``x -> P_-(G x)`` is written in the orthonormal bases
``{z^k e_i : 0 <= k < N}`` of the domain and ``{zbar^(l+1) e_j : 0 <= l < N}``
of the range; block ``(l, k)`` is the Fourier coefficient ``G^(-l-k-1)``.
Coordinates are flattened as ``k * n + i`` (domain) and ``l * m + j`` (range).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import fourier, linalg
from .errors import ConfigurationError, TruncationError

LOGGER = logging.getLogger(__name__)

DEFAULT_TRUNC = 64
MAX_TRUNC = 512


@dataclass(frozen=True)
class HankelRealization:
    matrix: np.ndarray
    blocks: np.ndarray  # G^(-p) for p = 1..2N, shape (2N, m, n)
    trunc: int
    m: int
    n: int
    tail: float
    decay_rate: float


@dataclass
class SchmidtPair:
    """Top singular value with its vectors lifted to grid functions."""

    t: float
    x: np.ndarray  # (M, n), in H^2
    y: np.ndarray  # (M, m), in the orthogonal complement of H^2
    x_coeffs: np.ndarray
    y_coeffs: np.ndarray
    gap: float
    trunc: int
    diagnostics: dict = field(default_factory=dict)


def decay_rate(norms) -> float:
    """Geometric rate ``rho`` fitted to ``norms[p] ~ C rho**p`` above round-off."""
    norms = np.asarray(norms, dtype=float)
    top = float(np.max(norms)) if norms.size else 0.0
    idx = np.nonzero(norms > 1e-13 * max(top, 1e-300))[0]
    if idx.size < 2:
        return 0.0
    slope = np.polyfit(idx, np.log(norms[idx]), 1)[0]
    return float(np.exp(min(slope, 0.0)))


def build_hankel_matrix(samples, n_trunc: int, tol_tail: float = fourier.TOL_TAIL,
                        coeffs=None) -> HankelRealization:
    """Block Hankel matrix of the symbol sampled as ``samples`` (shape ``(M, m, n)``).

    Raises :class:`TruncationError` when the symbol coefficients beyond
    ``2 * n_trunc`` are not negligible.
    """
    samples = np.asarray(samples)
    size, m, n = samples.shape
    if n_trunc < 1 or size < 4 * n_trunc:
        raise ConfigurationError(f"grid of {size} points cannot host truncation {n_trunc}")
    c = fourier.transform(samples) if coeffs is None else coeffs
    p = np.arange(1, size // 2 + 1)
    neg = c[-p]  # G^(-p), p = 1..M/2
    norms = np.linalg.norm(neg.reshape(len(p), -1), axis=1)
    scale = max(float(np.max(norms)), 1.0)
    tail = float(np.max(norms[2 * n_trunc:])) if norms.size > 2 * n_trunc else 0.0
    rate = decay_rate(norms)
    if tail > tol_tail * scale:
        raise TruncationError(
            f"symbol tail {tail:.3e} beyond 2N={2 * n_trunc}; increase N "
            f"(decay rate ~{rate:.3f})", decay_rate=rate)
    blocks = neg[: 2 * n_trunc]
    # block (l, k) = G^(-(l+k+1)) = blocks[l + k]
    idx = np.add.outer(np.arange(n_trunc), np.arange(n_trunc))
    mat = blocks[idx]  # (N, N, m, n) indexed [l, k, j, i]
    mat = mat.transpose(0, 2, 1, 3).reshape(n_trunc * m, n_trunc * n)
    return HankelRealization(mat, blocks, n_trunc, m, n, tail, rate)


def lift_analytic(vec, dim: int, size: int) -> np.ndarray:
    """Coefficients of ``sum_k vec[k*dim + i] z^k e_i`` on a grid of ``size`` points."""
    n_trunc = len(vec) // dim
    c = np.zeros((size, dim), dtype=complex)
    c[:n_trunc] = np.asarray(vec).reshape(n_trunc, dim)
    return c


def lift_coanalytic(vec, dim: int, size: int) -> np.ndarray:
    """Coefficients of ``sum_l vec[l*dim + j] zbar^(l+1) e_j``."""
    n_trunc = len(vec) // dim
    c = np.zeros((size, dim), dtype=complex)
    c[-np.arange(1, n_trunc + 1)] = np.asarray(vec).reshape(n_trunc, dim)
    return c


def block_tail(vec, dim: int) -> float:
    """Fraction of the norm of ``vec`` carried by its last quarter of blocks."""
    blocks = np.asarray(vec).reshape(-1, dim)
    total = float(np.linalg.norm(blocks))
    if total == 0:
        return 0.0
    start = (3 * blocks.shape[0]) // 4
    return float(np.linalg.norm(blocks[start:])) / total


def top_schmidt_pair(hank: HankelRealization, samples, tol_rank: float = linalg.TOL_RANK):
    """Largest singular value of the Hankel matrix and its Schmidt pair.

    Returns ``None`` when ``t0 <= tol_rank * max(1, ||G||)``: the symbol is
    analytic and the recursion stops with ``r = 0``.
    """
    samples = np.asarray(samples)
    size = samples.shape[0]
    u, s, vh = linalg.svd(hank.matrix)
    gscale = max(1.0, float(np.max(np.linalg.norm(samples, ord=2, axis=(1, 2)))))
    if s.size == 0 or s[0] <= tol_rank * gscale:
        return None
    t0 = float(s[0])
    gap = float(s[0] - s[1]) if s.size > 1 else float(s[0])
    if gap < 1e-10:
        LOGGER.info("top Hankel singular value is degenerate (gap %.2e)", gap)
    xc = lift_analytic(vh[0].conj(), hank.n, size)
    yc = lift_coanalytic(u[:, 0], hank.m, size)
    x = fourier.inverse(xc)
    y = fourier.inverse(yc)
    diag = hankel_residuals(samples, t0, x, y)
    diag["x_tail"] = block_tail(vh[0], hank.n)
    diag["y_tail"] = block_tail(u[:, 0], hank.m)
    return SchmidtPair(t0, x, y, xc, yc, gap, hank.trunc, diag)


def hankel_residuals(samples, t, x, y) -> dict:
    """``||H_G x - t y||`` and ``||H_G^* y - t x||`` in L^2, plus pointwise norm match."""
    gx = np.einsum("mij,mj->mi", samples, x)
    gy = np.einsum("mji,mj->mi", samples.conj(), y)
    r1 = fourier.l2_norm(fourier.project_values(gx, "minus") - t * y)
    r2 = fourier.l2_norm(fourier.project_values(gy, "plus") - t * x)
    nx = np.linalg.norm(x, axis=1)
    ny = np.linalg.norm(y, axis=1)
    return {"hankel_residual": r1, "adjoint_residual": r2,
            "norm_match": float(np.max(np.abs(nx - ny)))}


def hankel_schmidt(samples, n_trunc: int = DEFAULT_TRUNC, max_trunc: int = MAX_TRUNC,
                   tol_tail: float = fourier.TOL_TAIL, tol_rank: float = linalg.TOL_RANK):
    """Top Schmidt pair with automatic doubling of the truncation order.

    ``N`` is doubled until both the symbol tail and the tails of the singular
    vectors fall below ``tol_tail``, up to ``min(max_trunc, M / 4)``.
    Returns ``(pair_or_None, N)``.
    """
    samples = np.asarray(samples)
    size = samples.shape[0]
    cap = min(max_trunc, size // 4)
    if n_trunc > cap:
        raise ConfigurationError(f"truncation {n_trunc} exceeds cap {cap} for grid {size}")
    coeffs = fourier.transform(samples)
    while True:
        try:
            hank = build_hankel_matrix(samples, n_trunc, tol_tail, coeffs=coeffs)
            pair = top_schmidt_pair(hank, samples, tol_rank)
            if pair is None:
                return None, n_trunc
            tail = max(pair.diagnostics["x_tail"], pair.diagnostics["y_tail"])
            if tail <= tol_tail:
                return pair, n_trunc
            err = TruncationError(
                f"Schmidt vector tail {tail:.3e} at N={n_trunc}; increase N",
                decay_rate=hank.decay_rate)
        except TruncationError as exc:
            err = exc
        if 2 * n_trunc > cap:
            raise err
        n_trunc *= 2
        LOGGER.debug("doubling Hankel truncation to %d", n_trunc)
