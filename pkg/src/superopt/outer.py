"""Scalar outer factors from modulus profiles (cepstral method)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fourier
from .errors import AliasingError, DegenerateOuterError, NumericalError

TOL_ZERO = 1e-10
TOL_NEGATIVE = 1e-12


@dataclass(frozen=True)
class OuterScalar:
    """Outer function on the grid, normalised so that ``h(0) > 0``."""

    values: np.ndarray
    coeffs: np.ndarray

    @property
    def at_origin(self) -> complex:
        return complex(self.coeffs[0])


def spectral_factor(profile, tol_zero: float = TOL_ZERO,
                    tol_tail: float = fourier.TOL_TAIL) -> OuterScalar:
    """Outer ``h`` with ``|h|**2 = profile`` on the grid.

    With ``c`` the Fourier coefficients of ``log profile``,
    ``h = exp(c_0 / 2 + sum_{k>0} c_k z**k)``.

    Raises
    ------
    ValueError
        If the profile has entries below ``-1e-12`` (relative to its maximum).
    DegenerateOuterError
        If ``min profile <= tol_zero * max profile``.
    AliasingError
        If the cepstrum has not decayed by the Nyquist edge.
    """
    r = np.asarray(profile, dtype=complex)
    if np.max(np.abs(r.imag)) > 1e-12 * max(np.max(np.abs(r.real)), 1e-300):
        raise ValueError("profile must be real")
    r = r.real
    top = float(np.max(r))
    if top <= 0 or np.min(r) < -TOL_NEGATIVE * top:
        raise ValueError("profile must be nonnegative and not identically zero")
    low = float(np.min(r))
    if low <= tol_zero * top:
        raise DegenerateOuterError(
            f"profile vanishes on the circle (min/max = {low / top:.3e})")
    cep = fourier.transform(np.log(r))
    edge = fourier.edge_mass(cep)
    if edge > tol_tail * max(1.0, float(np.max(np.abs(cep)))):
        raise AliasingError(f"cepstrum tail {edge:.3e} at the Nyquist edge; refine the grid")
    k = np.fft.fftfreq(r.size, 1.0 / r.size)
    half = np.where(k > 0, cep, 0)
    half[0] = cep[0].real / 2
    log_h = fourier.inverse(half)
    values = np.exp(log_h)
    return OuterScalar(values, fourier.transform(values))


def inner_outer_split(f, h: OuterScalar, tol: float = 1e-7) -> np.ndarray:
    """``xi = f / h`` pointwise, checking that ``xi`` has unit norm on the grid."""
    f = np.asarray(f)
    hv = h.values
    if np.min(np.abs(hv)) < 1e-14 * max(float(np.max(np.abs(hv))), 1e-300):
        raise DegenerateOuterError("outer factor vanishes at a grid point")
    xi = f / (hv[:, None] if f.ndim == 2 else hv)
    norms = np.linalg.norm(xi, axis=1) if xi.ndim == 2 else np.abs(xi)
    dev = float(np.max(np.abs(norms - 1)))
    if dev > tol:
        raise NumericalError(f"inner factor is not pointwise unit (deviation {dev:.2e})")
    return xi


def winding_number(values) -> int:
    """Winding number of a closed grid curve about the origin."""
    values = np.asarray(values)
    step = np.angle(np.roll(values, -1) / values)
    return int(round(float(np.sum(step)) / (2 * np.pi)))


def check_outer(h, tol_analytic: float = 1e-8) -> dict:
    """Numerical outerness certificate: winding number, min modulus, analyticity."""
    values = h.values if isinstance(h, OuterScalar) else np.asarray(h)
    coeffs = fourier.transform(values)
    scale = float(np.linalg.norm(coeffs))
    min_mod = float(np.min(np.abs(values)))
    wind = winding_number(values) if min_mod > 0 else None
    resid = fourier.negative_mass(coeffs) / max(scale, 1e-300)
    return {
        "winding": wind,
        "min_modulus": min_mod,
        "analytic_residual": resid,
        "ok": wind == 0 and min_mod > 0 and resid < tol_analytic,
    }
