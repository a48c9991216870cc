"""Built-in example symbols."""
from __future__ import annotations

import numpy as np

from .symbols import RationalEntry, SymbolSpec

R2 = np.sqrt(2.0)
R3 = np.sqrt(3.0)


def py2x2() -> SymbolSpec:
    """``B(z)^{-1} A(z)`` with ``A = diag(sqrt3 + 2z, 1)``, ``B = [[z^2, z], [z, -1]] / sqrt2``.

    Expanded entrywise over the common denominator ``z^2``.
    """
    den = {2: 1.0}
    return SymbolSpec(2, 2, (
        (RationalEntry.ratio({0: R3 / R2, 1: 2 / R2}, den),
         RationalEntry.ratio({1: 1 / R2}, den)),
        (RationalEntry.ratio({1: R3 / R2, 2: 2 / R2}, den),
         RationalEntry.ratio({2: -1 / R2}, den)),
    ))


def diag() -> SymbolSpec:
    """``diag(zbar, 0)``."""
    return SymbolSpec(2, 2, (
        (RationalEntry.laurent({-1: 1.0}), RationalEntry.laurent({})),
        (RationalEntry.laurent({}), RationalEntry.laurent({})),
    ))


def scalar_zbar() -> SymbolSpec:
    return SymbolSpec(1, 1, ((RationalEntry.laurent({-1: 1.0}),),))


EXAMPLES = {"py2x2": py2x2, "diag": diag, "scalar-zbar": scalar_zbar}


def py2x2_constants() -> dict:
    """Closed-form quantities of the 2x2 example."""
    a = np.sqrt(10 - 2 * np.sqrt(13))
    gamma = -a**2 / (4 * R3)
    return {"a": a, "gamma": gamma, "t0": np.sqrt(6.0),
            "t1": R2 * (4 - np.sqrt(13))}


def py2x2_approximant(z) -> np.ndarray:
    """Closed-form superoptimal approximant of :func:`py2x2` at points ``z``."""
    g = py2x2_constants()["gamma"]
    z = np.asarray(z, dtype=complex)
    pre = R2 / (1 - g * z)
    out = np.empty(z.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = -g * pre
    out[..., 0, 1] = (R3 + 4 * g) * pre
    out[..., 1, 0] = (2 + g * R3 - g * z) * pre
    out[..., 1, 1] = -(R3 + 4 * g) * (R3 + z) * pre
    return out
