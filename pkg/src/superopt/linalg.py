"""Dense complex linear algebra used by the Hankel and level solvers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPSDError, NumericalError

TOL_RANK = 1e-9


def svd(a):
    """Thin SVD ``a = u @ diag(s) @ vh`` with ``s`` descending.

    LAPACK's divide-and-conquer driver is used; a convergence failure is
    re-raised as :class:`NumericalError`.
    """
    a = np.asarray(a)
    if not np.all(np.isfinite(a)):
        raise NumericalError("matrix has non-finite entries")
    try:
        return np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from None


@dataclass(frozen=True)
class PivotedCholesky:
    """Rank-revealing factorisation ``gram[piv][:, piv] = L @ L^H``.

    ``basis`` maps raw coordinates to an orthonormal system: its columns
    ``C`` satisfy ``C^H gram C = I_rank``.
    """

    factor: np.ndarray
    pivots: np.ndarray
    rank: int
    size: int

    @property
    def basis(self) -> np.ndarray:
        c = np.zeros((self.size, self.rank), dtype=complex)
        if self.rank:
            eye = np.eye(self.rank)
            c[self.pivots] = np.linalg.solve(self.factor.conj().T, eye)
        return c


def cholesky_psd(gram, tol_rank: float = TOL_RANK) -> PivotedCholesky:
    """Pivoted Cholesky of a Hermitian positive semidefinite matrix.

    Pivots are chosen greedily by largest remaining diagonal; factorisation
    stops once the remaining diagonal drops below ``tol_rank`` times the
    largest diagonal of ``gram``.

    Raises
    ------
    NotPSDError
        If ``gram`` is not Hermitian to 1e-10 or a Schur-complement diagonal
        falls below ``-tol_rank`` (relative).
    """
    a = np.array(gram, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("Gram matrix must be square")
    scale = float(np.max(np.abs(np.diag(a)).real)) if n else 0.0
    if n == 0 or scale == 0.0:
        return PivotedCholesky(np.zeros((0, 0), complex), np.zeros(0, int), 0, n)
    if np.max(np.abs(a - a.conj().T)) > 1e-10 * scale:
        raise NotPSDError("Gram matrix is not Hermitian")
    perm = np.arange(n)
    L = np.zeros((n, n), dtype=complex)
    d = np.diag(a).real.copy()
    rank = 0
    for i in range(n):
        p = i + int(np.argmax(d[perm[i:]]))
        perm[[i, p]] = perm[[p, i]]
        L[[i, p]] = L[[p, i]]
        piv = perm[i]
        if d[piv] <= tol_rank * scale:
            break
        L[i, i] = np.sqrt(d[piv])
        rest = perm[i + 1:]
        col = a[rest, piv] - L[i + 1:, :i] @ L[i, :i].conj()
        L[i + 1:, i] = col / L[i, i]
        d[rest] -= np.abs(L[i + 1:, i]) ** 2
        rank += 1
    if rank < n and np.min(d[perm[rank:]]) < -tol_rank * scale:
        raise NotPSDError(
            f"Gram matrix not PSD: Schur diagonal {np.min(d[perm[rank:]]):.3e}")
    return PivotedCholesky(L[:rank, :rank].copy(), perm[:rank].copy(), rank, n)


def least_squares(a, b, rcond: float | None = None):
    """Minimum-norm least-squares solution of ``a x = b``.

    Returns ``(x, residual)`` where ``residual = ||a x - b||_2``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    x = np.linalg.lstsq(a, b, rcond=rcond)[0]
    return x, float(np.linalg.norm(a @ x - b))
