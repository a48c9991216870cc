"""The exterior-power level recursion for the superoptimal approximant.

Level ``j`` works with the raw families

* ``phi_{k,l} = xi_0 ^ ... ^ xi_{j-1} ^ z^k e_l``            (domain side)
* ``psi_{k,l} = etabar_0 ^ ... ^ etabar_{j-1} ^ zbar^(k+1) e_l`` (range side)

for ``0 <= k < N``.  With ``K(theta)`` the pointwise Gram matrix of the
wedges ``Xi ^ e_l`` the L^2 Gram matrix of the family is block Toeplitz in the
Fourier coefficients of ``K``, and the matrix of ``T_j`` is block Hankel in
the coefficients of ``K_Y (G - Q_j)``.  Raw families are orthonormalised by
pivoted Cholesky of their Gram matrices.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from . import fourier, linalg
from .diagnostics import diagnostics_report
from .errors import AliasingError, ConfigurationError, InterpolantError, TruncationError
from .fourier import CircleGrid
from .hankel import hankel_schmidt, lift_analytic, lift_coanalytic
from .outer import OuterScalar, inner_outer_split, spectral_factor
from .symbols import RationalEntry, SymbolSpec, sample_symbol
from .wedge import exterior_append, project_out_frame, wedge_of

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    grid_size: int = 1024
    trunc: int = 64
    max_trunc: int = 512
    max_q_degree: int = 16
    tol_rank: float = 1e-9
    tol_residual: float = 1e-8
    tol_zero: float = 1e-10
    tol_analytic: float = 1e-6
    tol_tail: float = 1e-10
    # grids are doubled up to this size on an aliasing failure; None disables
    max_grid_size: int | None = None

    def __post_init__(self):
        CircleGrid(self.grid_size)
        if self.max_grid_size is not None and self.max_grid_size < self.grid_size:
            raise ConfigurationError("max_grid_size is smaller than grid_size")
        if self.trunc < 1 or 4 * self.trunc > self.grid_size:
            raise ConfigurationError(
                f"truncation {self.trunc} needs a grid of at least {4 * self.trunc} points")
        if self.max_q_degree < 0:
            raise ConfigurationError("max_q_degree must be nonnegative")
        for name in ("tol_rank", "tol_residual", "tol_zero", "tol_analytic", "tol_tail"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be positive")


@dataclass(frozen=True)
class PolyMatrix:
    """Analytic matrix polynomial ``sum_p coeffs[p] z**p``; ``coeffs`` is ``(d+1, m, n)``."""

    coeffs: np.ndarray

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @classmethod
    def zeros(cls, m: int, n: int) -> "PolyMatrix":
        return cls(np.zeros((1, m, n), dtype=complex))

    def values(self, grid: CircleGrid) -> np.ndarray:
        if self.degree >= grid.size // 2:
            raise ConfigurationError("polynomial degree exceeds the grid window")
        c = np.zeros((grid.size,) + self.coeffs.shape[1:], dtype=complex)
        c[: self.degree + 1] = self.coeffs
        return fourier.inverse(c)

    def to_symbol(self) -> SymbolSpec:
        _, m, n = self.coeffs.shape
        rows = tuple(
            tuple(RationalEntry.laurent({p: self.coeffs[p, i, j]
                                         for p in range(self.degree + 1)})
                  for j in range(n))
            for i in range(m))
        return SymbolSpec(m, n, rows)


@dataclass
class LevelBases:
    j: int
    trunc: int
    kx: np.ndarray        # (M, n, n) pointwise Gram of Xi ^ e_l
    ky: np.ndarray        # (M, m, m) pointwise Gram of Etabar ^ e_l
    gram_x: np.ndarray
    gram_y: np.ndarray
    chol_x: linalg.PivotedCholesky
    chol_y: linalg.PivotedCholesky
    xi_wedge: object
    eta_wedge: object

    @property
    def basis_x(self) -> np.ndarray:
        return self.chol_x.basis

    @property
    def basis_y(self) -> np.ndarray:
        return self.chol_y.basis

    @property
    def rank_x(self) -> int:
        return self.chol_x.rank

    @property
    def rank_y(self) -> int:
        return self.chol_y.rank


@dataclass
class LevelRecord:
    j: int
    t: float
    x: np.ndarray
    y: np.ndarray
    h: OuterScalar
    xi: np.ndarray
    eta: np.ndarray
    v: np.ndarray
    w: np.ndarray
    q: PolyMatrix | None
    gap: float
    trunc: int
    diagnostics: dict = field(default_factory=dict)


@dataclass
class SuperoptResult:
    r: int
    levels: list
    grid: CircleGrid
    config: SolverConfig
    symbol: np.ndarray          # G samples (M, m, n)
    approximant: np.ndarray     # AG samples (M, m, n)
    approximant_coeffs: np.ndarray
    error_profile: np.ndarray   # (M, min(m, n)) singular values of G - AG
    trunc: int
    terminal_t: float | None = None
    report: dict = field(default_factory=dict)

    @property
    def t(self) -> list:
        return [lvl.t for lvl in self.levels]


# --------------------------------------------------------------------------
# interpolant Q_j

def degree_schedule(max_degree: int) -> list:
    out, d = [], 1
    while d < max_degree:
        out.append(d)
        d *= 2
    out.append(max_degree)
    return out


def constraint_residuals(samples, q_values, constraints) -> list:
    """L^2 norms of ``(G-Q)x_i - t_i y_i`` and ``y_i^*(G-Q) - t_i x_i^*`` per constraint."""
    e = samples - q_values
    out = []
    for x, y, t in constraints:
        r1 = np.einsum("mij,mj->mi", e, x) - t * y
        r2 = np.einsum("mi,mij->mj", y.conj(), e) - t * x.conj()
        out.append((fourier.l2_norm(r1), fourier.l2_norm(r2)))
    return out


def _interpolant_lstsq(samples, constraints, grid, degree):
    size, m, n = samples.shape
    zp = np.stack([grid.monomial(p) for p in range(degree + 1)], axis=1)  # (M, d+1)
    rows, rhs = [], []
    for x, y, t in constraints:
        # Q x = G x - t y, one row block per output component
        a1 = np.einsum("tp,rR,ts->trpRs", zp, np.eye(m), x)
        b1 = np.einsum("tij,tj->ti", samples, x) - t * y
        # y^* Q = y^* G - t x^*, one row block per input component
        a2 = np.einsum("tR,tp,sS->tspRS", y.conj(), zp, np.eye(n))
        b2 = np.einsum("ti,tij->tj", y.conj(), samples) - t * x.conj()
        rows += [a1.reshape(size * m, -1), a2.reshape(size * n, -1)]
        rhs += [b1.reshape(-1), b2.reshape(-1)]
    a = np.concatenate(rows) / np.sqrt(size)
    b = np.concatenate(rhs) / np.sqrt(size)
    coef, _ = linalg.least_squares(a, b)
    return PolyMatrix(coef.reshape(degree + 1, m, n))


def solve_interpolant_Q(samples, constraints, grid: CircleGrid, max_degree: int = 16,
                        tol_residual: float = 1e-8, degree: int | None = None):
    """Analytic polynomial ``Q`` with ``(G-Q)x_i = t_i y_i`` and ``y_i^*(G-Q) = t_i x_i^*``.

    Both constraint families are matched jointly in least squares over the
    grid (equivalently over all Fourier coefficients, by Parseval).  Degrees
    ``1, 2, 4, ...`` up to ``max_degree`` are tried in turn unless ``degree``
    fixes one.  Returns ``(Q, info)``.

    Raises
    ------
    InterpolantError
        If no degree reaches ``tol_residual * ||G||_inf * max ||x_i||``.
    """
    samples = np.asarray(samples)
    _, m, n = samples.shape
    if not constraints:
        return PolyMatrix.zeros(m, n), {"degree": 0, "residual": 0.0, "threshold": 0.0}
    gnorm = float(np.max(np.linalg.norm(samples, ord=2, axis=(1, 2))))
    xnorm = max(fourier.l2_norm(x) for x, _, _ in constraints)
    threshold = tol_residual * max(gnorm, 1e-300) * xnorm
    cap = grid.size // 4
    degrees = [degree] if degree is not None else degree_schedule(max_degree)
    best = None
    for d in degrees:
        if d > cap:
            raise ConfigurationError(f"Q degree {d} exceeds grid capacity {cap}")
        q = _interpolant_lstsq(samples, constraints, grid, d)
        res = constraint_residuals(samples, q.values(grid), constraints)
        worst = max(max(r) for r in res)
        info = {"degree": d, "residual": worst, "threshold": threshold}
        best = (q, info)
        if worst <= threshold:
            return best
    if degree is not None:
        return best
    raise InterpolantError(
        f"interpolant not found up to degree {max_degree} (residual "
        f"{best[1]['residual']:.3e} > {threshold:.3e}); raise max-q-degree")


# --------------------------------------------------------------------------
# level bases and the operator T_j

def _pointwise_gram(wedge, dim, size):
    """``K[theta, l, k] = <W ^ e_k, W ^ e_l>`` for the wedge ``W``."""
    coords = []
    for l in range(dim):
        e = np.zeros((size, dim), dtype=complex)
        e[:, l] = 1
        coords.append(exterior_append(wedge, e).coords)
    c = np.stack(coords)  # (dim, M, S)
    return np.einsum("lms,kms->mlk", c.conj(), c)


def _block_toeplitz(c, trunc, sign):
    """``out[k*d + l, k2*d + l2] = c[sign * (k - k2), l, l2]``."""
    d = c.shape[1]
    idx = sign * np.subtract.outer(np.arange(trunc), np.arange(trunc))
    blocks = c[idx % c.shape[0]]  # (N, N, d, d)
    return blocks.transpose(0, 2, 1, 3).reshape(trunc * d, trunc * d)


def build_level_bases(xi_frame, eta_frame, m: int, n: int, size: int, trunc: int,
                      tol_rank: float = linalg.TOL_RANK) -> LevelBases:
    """Gram matrices and orthonormalising factors of the level-``j`` raw families.

    ``j = len(xi_frame)``; ``eta_frame`` holds the ``eta_i`` (not conjugated).
    """
    j = len(xi_frame)
    if len(eta_frame) != j:
        raise ValueError("frames must have equal length")
    if j >= min(m, n):
        raise ValueError(f"level {j} exceeds min(m, n) - 1")
    xi_w = wedge_of(xi_frame, n, size)
    eta_w = wedge_of([np.conj(e) for e in eta_frame], m, size)
    kx = _pointwise_gram(xi_w, n, size)
    ky = _pointwise_gram(eta_w, m, size)
    gram_x = _block_toeplitz(fourier.transform(kx), trunc, 1)
    gram_y = _block_toeplitz(fourier.transform(ky), trunc, -1)
    # symmetrise away rounding before the Hermitian check
    gram_x = (gram_x + gram_x.conj().T) / 2
    gram_y = (gram_y + gram_y.conj().T) / 2
    return LevelBases(j, trunc, kx, ky, gram_x, gram_y,
                      linalg.cholesky_psd(gram_x, tol_rank),
                      linalg.cholesky_psd(gram_y, tol_rank), xi_w, eta_w)


def assemble_raw_T(samples, q_values, bases: LevelBases) -> np.ndarray:
    """``A[(k2,l2),(k,l)] = <Etabar ^ (G-Q) z^k e_l, psi_{k2,l2}>``."""
    s = np.einsum("mas,msl->mal", bases.ky, samples - q_values)
    c = fourier.transform(s)
    trunc = bases.trunc
    _, m, n = s.shape
    idx = -(np.add.outer(np.arange(trunc), np.arange(trunc)) + 1)
    blocks = c[idx % c.shape[0]]  # (N, N, m, n) indexed [k2, k, l2, l]
    return blocks.transpose(0, 2, 1, 3).reshape(trunc * m, trunc * n)


def assemble_T_matrix(samples, q_values, bases: LevelBases) -> np.ndarray:
    """Matrix of ``T_j`` in the orthonormalised bases of ``X_j`` and ``Y_j``."""
    raw = assemble_raw_T(samples, q_values, bases)
    return bases.basis_y.conj().T @ raw @ bases.basis_x


@dataclass
class LevelSchmidt:
    t: float
    v: np.ndarray
    w: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    gap: float
    tail: float


def schmidt_from_T(tmat, bases: LevelBases, m: int, n: int, size: int) -> LevelSchmidt:
    """Top singular pair of ``T_j`` mapped back to ``v_j`` in H^2 and ``w_j`` in its complement."""
    if tmat.size == 0:
        return LevelSchmidt(0.0, np.zeros((size, n), complex), np.zeros((size, m), complex),
                            np.zeros(0), np.zeros(0), 0.0, 0.0)
    u, s, vh = linalg.svd(tmat)
    alpha = bases.basis_x @ vh[0].conj()
    beta = bases.basis_y @ u[:, 0]
    v = fourier.inverse(lift_analytic(alpha, n, size))
    w = fourier.inverse(lift_coanalytic(beta, m, size))
    gap = float(s[0] - s[1]) if s.size > 1 else float(s[0])
    # raw coordinates are not unique when the family is dependent, so the
    # truncation check looks at the wedge lifts themselves
    trunc = bases.trunc
    cx = fourier.transform(exterior_append(bases.xi_wedge, v).coords)
    cy = fourier.transform(exterior_append(bases.eta_wedge, w).coords)
    start = (3 * trunc) // 4
    tail = max(_band_fraction(cx, start, trunc), _band_fraction(cy, -trunc, -start))
    return LevelSchmidt(float(s[0]), v, w, alpha, beta, gap, tail)


def _band_fraction(c, lo, hi) -> float:
    total = float(np.linalg.norm(c))
    return float(np.linalg.norm(c[lo:hi])) / total if total else 0.0


def level_update(j: int, t: float, v, w, xi_frame, eta_frame, grid: CircleGrid,
                 tol_zero: float = 1e-10, tol_tail: float = fourier.TOL_TAIL,
                 q: PolyMatrix | None = None, gap: float = 0.0, trunc: int = 0) -> LevelRecord:
    """Form ``x_j, y_j, h_j, xi_j, eta_j`` from a level Schmidt pair ``(v_j, w_j)``."""
    size = grid.size
    n = v.shape[1]
    x = project_out_frame(v, list(xi_frame))
    y = project_out_frame(w, [np.conj(e) for e in eta_frame])
    wedge = exterior_append(wedge_of(list(xi_frame), n, size), v)
    profile = wedge.pointwise_norm() ** 2
    h = spectral_factor(profile, tol_zero, tol_tail)
    xi = inner_outer_split(x, h)
    eta_num = fourier.inverse(fourier.laurent_shift(fourier.transform(np.conj(y)), -1, tol_tail))
    eta = eta_num / h.values[:, None]
    habs = np.abs(h.values)
    hmax = float(np.max(habs))
    diag = {
        "xi_unit": float(np.max(np.abs(np.linalg.norm(xi, axis=1) - 1))),
        "eta_unit": float(np.max(np.abs(np.linalg.norm(eta, axis=1) - 1))),
        "norm_chain": float(max(np.max(np.abs(np.linalg.norm(x, axis=1) - habs)),
                                np.max(np.abs(np.linalg.norm(y, axis=1) - habs)))) / hmax,
        "h_negative_mass": fourier.negative_mass(h.coeffs) / float(np.linalg.norm(h.coeffs)),
    }
    return LevelRecord(j, float(t), x, y, h, xi, eta, v, w, q, gap, trunc, diag)


# --------------------------------------------------------------------------
# driver

def approximant_from_levels(samples, levels) -> np.ndarray:
    """``G - sum_i t_i y_i x_i^* / |h_i|^2`` on the grid."""
    out = np.array(samples, dtype=complex)
    for lvl in levels:
        weight = lvl.t / np.abs(lvl.h.values) ** 2
        out = out - weight[:, None, None] * np.einsum("mi,mj->mij", lvl.y, lvl.x.conj())
    return out


def solve_level(samples, levels, grid: CircleGrid, config: SolverConfig, trunc: int,
                q: PolyMatrix | None = None):
    """Assemble and decompose ``T_j`` for ``j = len(levels)``, doubling ``N`` on tail failure.

    Returns ``(LevelSchmidt, bases, trunc)``.
    """
    size, m, n = samples.shape
    xi_frame = [lvl.xi for lvl in levels]
    eta_frame = [lvl.eta for lvl in levels]
    q_values = q.values(grid)
    cap = min(config.max_trunc, size // 4)
    while True:
        bases = build_level_bases(xi_frame, eta_frame, m, n, size, trunc, config.tol_rank)
        tmat = assemble_T_matrix(samples, q_values, bases)
        sch = schmidt_from_T(tmat, bases, m, n, size)
        if sch.tail <= config.tol_tail or sch.t < config.tol_rank * levels[0].t:
            return sch, bases, trunc
        if 2 * trunc > cap:
            raise TruncationError(
                f"level {len(levels)} Schmidt tail {sch.tail:.3e} at N={trunc}; increase N")
        trunc *= 2
        LOGGER.debug("doubling level truncation to %d", trunc)


def run_superopt(spec: SymbolSpec, config: SolverConfig | None = None,
                 samples=None) -> SuperoptResult:
    """Run the level recursion to termination and evaluate the approximant.

    ``samples`` may supply the symbol on the grid directly (``spec`` is then
    only used for its dimensions, and the grid is never refined).  When
    ``config.max_grid_size`` is set, an :class:`AliasingError` triggers a rerun
    on a grid of twice the size.
    """
    config = config or SolverConfig()
    while True:
        try:
            return _run_on_grid(spec, config, samples)
        except AliasingError as exc:
            limit = config.max_grid_size
            if samples is not None or limit is None or 2 * config.grid_size > limit:
                raise
            LOGGER.info("%s; refining grid to %d", exc, 2 * config.grid_size)
            config = replace(config, grid_size=2 * config.grid_size)


def _run_on_grid(spec, config, samples):
    grid = CircleGrid(config.grid_size)
    g = sample_symbol(spec, grid) if samples is None else np.asarray(samples, dtype=complex)
    size, m, n = g.shape
    levels: list = []
    pair, trunc = hankel_schmidt(g, config.trunc, config.max_trunc,
                                 config.tol_tail, config.tol_rank)
    terminal = None
    if pair is None:
        terminal = 0.0
    else:
        lvl = level_update(0, pair.t, pair.x, pair.y, [], [], grid, config.tol_zero,
                           config.tol_tail, None, pair.gap, trunc)
        lvl.diagnostics.update(pair.diagnostics)
        levels.append(lvl)
        for j in range(1, min(m, n)):
            constraints = [(lv.x, lv.y, lv.t) for lv in levels]
            q, qinfo = solve_interpolant_Q(g, constraints, grid, config.max_q_degree,
                                           config.tol_residual)
            sch, bases, trunc = solve_level(g, levels, grid, config, trunc, q)
            if sch.t < config.tol_rank * levels[0].t:
                terminal = sch.t
                break
            lvl = level_update(j, sch.t, sch.v, sch.w, [lv.xi for lv in levels],
                               [lv.eta for lv in levels], grid, config.tol_zero,
                               config.tol_tail, q, sch.gap, trunc)
            lvl.diagnostics.update({"q_degree": qinfo["degree"],
                                    "q_residual": qinfo["residual"],
                                    "rank_x": bases.rank_x, "rank_y": bases.rank_y,
                                    "tail": sch.tail})
            levels.append(lvl)
    ag = approximant_from_levels(g, levels)
    sv = np.linalg.svd(g - ag, compute_uv=False)
    result = SuperoptResult(len(levels), levels, grid, config, g, ag,
                            fourier.transform(ag), sv, trunc, terminal)
    result.report = diagnostics_report(result)
    return result
