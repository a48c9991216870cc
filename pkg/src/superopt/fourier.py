"""Functions on the unit circle sampled on a uniform FFT grid.

A grid function is an ``ndarray`` whose first axis runs over the ``M`` grid
points ``theta_k = 2 pi k / M``; trailing axes hold vector or matrix values.
Its Fourier coefficients are stored in the same shape, in numpy's FFT order
(index ``k mod M`` holds the coefficient of ``z**k`` for
``k in [-M/2, M/2)``), normalised so that ``f(theta) = sum_k c_k e^{ik theta}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import AliasingError, ConfigurationError

TOL_TAIL = 1e-10


@dataclass(frozen=True)
class CircleGrid:
    """Uniform grid of ``size`` points on the unit circle."""

    size: int = 1024

    def __post_init__(self):
        m = self.size
        if not isinstance(m, (int, np.integer)) or m < 4 or m & (m - 1):
            raise ConfigurationError(
                f"grid size must be a power of two >= 4, got {m!r}")

    @cached_property
    def theta(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.size) / self.size

    @cached_property
    def z(self) -> np.ndarray:
        """Grid points ``e^{i theta_k}``."""
        return np.exp(1j * self.theta)

    @cached_property
    def frequencies(self) -> np.ndarray:
        """Integer frequency held at each FFT index."""
        return np.fft.fftfreq(self.size, 1.0 / self.size).astype(int)

    def monomial(self, p: int) -> np.ndarray:
        """Samples of ``z**p``."""
        return np.exp(1j * p * self.theta)


def _check_grid(values, grid):
    if grid is not None and values.shape[0] != grid.size:
        raise ConfigurationError(
            f"values have {values.shape[0]} samples, grid has {grid.size}")
    n = values.shape[0]
    if n < 4 or n & (n - 1):
        raise ConfigurationError(f"sample count {n} is not a power of two >= 4")


def transform(values, grid: CircleGrid | None = None) -> np.ndarray:
    """Fourier coefficients of a grid function (exact FFT pair with :func:`inverse`)."""
    values = np.asarray(values)
    _check_grid(values, grid)
    if not np.all(np.isfinite(values)):
        raise ValueError("grid function has non-finite samples")
    return np.fft.fft(values, axis=0) / values.shape[0]


def inverse(coeffs, grid: CircleGrid | None = None) -> np.ndarray:
    """Grid samples from Fourier coefficients."""
    coeffs = np.asarray(coeffs)
    _check_grid(coeffs, grid)
    return np.fft.ifft(coeffs, axis=0) * coeffs.shape[0]


def _freqs(size):
    return np.fft.fftfreq(size, 1.0 / size).astype(int)


def _broadcast_mask(mask, coeffs):
    return mask.reshape((-1,) + (1,) * (coeffs.ndim - 1))


def riesz_project(coeffs, sign: str) -> np.ndarray:
    """Riesz projection in coefficient space.

    ``sign="plus"`` keeps frequencies ``k >= 0`` (projection onto H^2),
    ``sign="minus"`` keeps ``k < 0``.
    """
    coeffs = np.asarray(coeffs)
    k = _freqs(coeffs.shape[0])
    if sign == "plus":
        mask = k >= 0
    elif sign == "minus":
        mask = k < 0
    else:
        raise ValueError(f"sign must be 'plus' or 'minus', not {sign!r}")
    return np.where(_broadcast_mask(mask, coeffs), coeffs, 0)


def project_values(values, sign: str) -> np.ndarray:
    """Riesz projection applied to grid samples."""
    return inverse(riesz_project(transform(values), sign))


def l2_inner(f, g) -> complex:
    """Normalised L^2 inner product ``(1/M) sum_j <f(theta_j), g(theta_j)>``.

    Linear in ``f``, conjugate-linear in ``g``.
    """
    f = np.asarray(f)
    g = np.asarray(g)
    if f.shape != g.shape:
        raise ValueError(f"dimension mismatch: {f.shape} vs {g.shape}")
    return complex(np.vdot(g, f) / f.shape[0])


def l2_norm(f) -> float:
    f = np.asarray(f)
    return float(np.sqrt(np.sum(np.abs(f) ** 2) / f.shape[0]))


def negative_mass(coeffs) -> float:
    """L^2 norm of the negative-frequency part (zero for H^2 functions)."""
    coeffs = np.asarray(coeffs)
    return float(np.linalg.norm(riesz_project(coeffs, "minus")))


def positive_mass(coeffs) -> float:
    coeffs = np.asarray(coeffs)
    return float(np.linalg.norm(riesz_project(coeffs, "plus")))


def edge_mass(coeffs, width: int | None = None) -> float:
    """Largest coefficient modulus within ``width`` of the Nyquist edge."""
    coeffs = np.asarray(coeffs)
    size = coeffs.shape[0]
    width = size // 8 if width is None else width
    k = np.abs(_freqs(size))
    sel = k >= size // 2 - width
    if not np.any(sel):
        return 0.0
    return float(np.max(np.abs(coeffs[sel])))


def laurent_shift(coeffs, p: int, tol: float = TOL_TAIL) -> np.ndarray:
    """Multiply by ``z**p`` in coefficient space.

    Coefficients that would leave the window ``[-M/2, M/2)`` must be below
    ``tol`` (relative to the largest coefficient); otherwise an
    :class:`AliasingError` is raised instead of wrapping silently.
    """
    coeffs = np.asarray(coeffs)
    size = coeffs.shape[0]
    if abs(p) >= size // 2:
        raise AliasingError(f"shift {p} exceeds half the window ({size // 2})")
    k = _freqs(size)
    shifted = k + p
    leaving = (shifted < -size // 2) | (shifted >= size // 2)
    scale = float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
    if np.any(leaving):
        lost = float(np.max(np.abs(coeffs[leaving])))
        if lost > tol * max(scale, 1e-300):
            raise AliasingError(
                f"shift by {p} pushes coefficient mass {lost:.3e} past the window edge")
    out = np.roll(coeffs, p, axis=0)
    # entries that wrapped around are cleared
    wrapped = (k - p < -size // 2) | (k - p >= size // 2)
    return np.where(_broadcast_mask(wrapped, out), 0, out)
