"""Exterior powers of C^n in lexicographic multi-index coordinates.

The basis wedges ``e_S`` (``S`` a strictly increasing index tuple) are taken
to be orthonormal, so the inner product of two decomposable wedges is the
Gram determinant ``det[<u_i, x_j>]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import NumericalError

MAX_DIM = 16


@lru_cache(maxsize=None)
def wedge_index_set(n: int, k: int) -> tuple:
    """All size-``k`` subsets of ``range(n)`` in lexicographic order."""
    if not 0 <= k <= n:
        raise ValueError(f"degree {k} out of range for dimension {n}")
    if n > MAX_DIM:
        raise ValueError(f"ambient dimension {n} exceeds cap {MAX_DIM}")
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def _append_table(n: int, k: int):
    """For each ``T`` of size ``k+1``: (source index of ``T \\ i``, ``i``, sign)."""
    lower = {s: idx for idx, s in enumerate(wedge_index_set(n, k))}
    src, comp, sign = [], [], []
    for t in wedge_index_set(n, k + 1):
        row = []
        for pos, i in enumerate(t):
            rest = t[:pos] + t[pos + 1:]
            # moving e_i from the end to slot `pos` passes k - pos factors
            row.append((lower[rest], i, (-1) ** (k - pos)))
        src.append([r[0] for r in row])
        comp.append([r[1] for r in row])
        sign.append([r[2] for r in row])
    return np.array(src), np.array(comp), np.array(sign, dtype=float)


@dataclass(frozen=True)
class WedgeGridVector:
    """Grid function with values in the ``k``-th exterior power of C^n.

    ``coords`` has shape ``(M, C(n, k))``.
    """

    n: int
    k: int
    coords: np.ndarray

    def __post_init__(self):
        if self.coords.ndim != 2 or self.coords.shape[1] != comb(self.n, self.k):
            raise ValueError(
                f"expected {comb(self.n, self.k)} coordinates, got {self.coords.shape}")

    @classmethod
    def unit(cls, n: int, size: int) -> "WedgeGridVector":
        """The empty wedge (degree 0), identically 1."""
        return cls(n, 0, np.ones((size, 1), dtype=complex))

    def pointwise_norm(self) -> np.ndarray:
        return np.linalg.norm(self.coords, axis=1)

    def pointwise_inner(self, other: "WedgeGridVector") -> np.ndarray:
        """``<self(theta), other(theta)>`` at every grid point."""
        return np.einsum("ms,ms->m", self.coords, other.coords.conj())


def exterior_append(w: WedgeGridVector, v) -> WedgeGridVector:
    """Pointwise ``w ^ v`` for a grid vector ``v`` of shape ``(M, n)``."""
    v = np.asarray(v)
    if v.ndim != 2 or v.shape[1] != w.n or v.shape[0] != w.coords.shape[0]:
        raise ValueError(f"vector shape {v.shape} incompatible with wedge of C^{w.n}")
    if w.k + 1 > w.n:
        raise ValueError(f"cannot form degree {w.k + 1} wedge in C^{w.n}")
    src, comp, sign = _append_table(w.n, w.k)
    coords = np.einsum("mtp,mtp,tp->mt", w.coords[:, src], v[:, comp], sign)
    return WedgeGridVector(w.n, w.k + 1, coords)


def wedge_of(vectors, n: int | None = None, size: int | None = None) -> WedgeGridVector:
    """Pointwise ``v_1 ^ ... ^ v_p``; empty input gives the degree-0 unit."""
    vectors = [np.asarray(v) for v in vectors]
    if not vectors:
        if n is None or size is None:
            raise ValueError("empty wedge needs n and size")
        return WedgeGridVector.unit(n, size)
    w = WedgeGridVector.unit(vectors[0].shape[1], vectors[0].shape[0])
    for v in vectors:
        w = exterior_append(w, v)
    return w


def wedge_gram_inner(u, x, point: int | None = None):
    """``<u_1 ^ ... ^ u_p, x_1 ^ ... ^ x_p>`` as the determinant of ``[<u_i, x_j>]``.

    ``u`` and ``x`` are lists of grid vectors ``(M, n)``, or of plain vectors
    ``(n,)`` when ``point`` is None and no grid axis is present.
    """
    if len(u) != len(x):
        raise ValueError("wedges of different degree")
    u = np.array([np.asarray(a) for a in u])
    x = np.array([np.asarray(a) for a in x])
    if point is not None:
        u = u[:, point]
        x = x[:, point]
    if len(u) == 0:
        return 1.0 + 0j
    gram = np.einsum("i...c,j...c->...ij", u, x.conj())
    return np.linalg.det(gram)


def project_out_frame(v, frame, tol: float = 1e-6) -> np.ndarray:
    """Pointwise ``(I - sum_i f_i f_i^*) v`` for a pointwise orthonormal ``frame``."""
    v = np.asarray(v)
    if not frame:
        return v.copy()
    f = np.stack([np.asarray(a) for a in frame], axis=1)  # (M, p, n)
    gram = np.einsum("mpc,mqc->mpq", f.conj(), f)
    dev = float(np.max(np.abs(gram - np.eye(len(frame)))))
    if dev > tol:
        raise NumericalError(f"frame is not pointwise orthonormal (deviation {dev:.2e})")
    coef = np.einsum("mpc,mc->mp", f.conj(), v)
    return v - np.einsum("mp,mpc->mc", coef, f)
