"""Invariant checks on a completed run or on a candidate approximant."""
from __future__ import annotations

import numpy as np

from . import fourier
from .fourier import CircleGrid
from .hankel import hankel_schmidt
from .symbols import SymbolSpec, sample_symbol

TOL_CHECK = 1e-6


def error_profile(samples, q_values) -> np.ndarray:
    """Singular values of ``G - Q`` at every grid point, shape ``(M, min(m, n))``."""
    return np.linalg.svd(np.asarray(samples) - np.asarray(q_values), compute_uv=False)


def negative_mass_entries(values) -> float:
    """Largest per-entry L^2 norm of the negative-frequency part."""
    c = fourier.transform(values)
    neg = fourier.riesz_project(c, "minus")
    return float(np.max(np.sqrt(np.sum(np.abs(neg) ** 2, axis=0))))


def frame_orthonormality(frame) -> float:
    """``max_theta |<f_i, f_k> - delta_ik|`` for a list of grid vectors."""
    if not frame:
        return 0.0
    f = np.stack(frame, axis=1)
    gram = np.einsum("mpc,mqc->mpq", f.conj(), f)
    return float(np.max(np.abs(gram - np.eye(len(frame)))))


def constancy(profile, t_values, scale, tol=TOL_CHECK) -> list:
    """Per singular-value index: spread over the grid and distance from ``t_j``.

    Indices with no ``t_j`` (``j >= r``) are expected to vanish.
    """
    out = []
    for j in range(profile.shape[1]):
        s = profile[:, j]
        entry = {"j": j, "mean": float(np.mean(s)), "std": float(np.std(s)),
                 "max": float(np.max(s))}
        if j < len(t_values):
            entry["target"] = t_values[j]
            entry["max_deviation"] = float(np.max(np.abs(s - t_values[j])))
            entry["ok"] = entry["std"] < tol * scale and entry["max_deviation"] < tol * scale
        else:
            entry["target"] = 0.0
            entry["max_deviation"] = entry["max"]
            entry["ok"] = entry["max"] < tol * scale
        out.append(entry)
    return out


def diagnostics_report(result, approximant=None, tol: float = TOL_CHECK) -> dict:
    """Invariant report for a run; ``approximant`` overrides the computed one.

    Checks singular-value constancy of ``G - AG``, pointwise orthonormality of
    the ``xi`` and ``etabar`` frames, the norm chain ``|x_j| = |y_j| = |h_j|``,
    analyticity of ``AG`` and the constraint residuals
    ``(G - AG) x_i - t_i y_i``.
    """
    g = result.symbol
    ag = result.approximant if approximant is None else np.asarray(approximant)
    levels = result.levels
    t_values = [lvl.t for lvl in levels]
    scale = t_values[0] if t_values else 1.0
    profile = error_profile(g, ag)
    xi = [lvl.xi for lvl in levels]
    etabar = [np.conj(lvl.eta) for lvl in levels]
    e = g - ag
    residuals = []
    for lvl in levels:
        r1 = np.einsum("mij,mj->mi", e, lvl.x) - lvl.t * lvl.y
        r2 = np.einsum("mi,mij->mj", lvl.y.conj(), e) - lvl.t * lvl.x.conj()
        residuals.append({"j": lvl.j, "right": fourier.l2_norm(r1),
                          "left": fourier.l2_norm(r2)})
    level_diag = [{"j": lvl.j, "t": lvl.t, "gap": lvl.gap, "trunc": lvl.trunc,
                   **{k: v for k, v in lvl.diagnostics.items()}} for lvl in levels]
    checks = {
        "constancy": constancy(profile, t_values, scale, tol),
        "xi_orthonormality": frame_orthonormality(xi),
        "etabar_orthonormality": frame_orthonormality(etabar),
        "norm_chain": max((lvl.diagnostics["norm_chain"] for lvl in levels), default=0.0),
        "analyticity": negative_mass_entries(ag),
        "constraint_residuals": residuals,
        "monotone": all(a >= b - 1e-8 for a, b in zip(t_values, t_values[1:])),
    }
    ok = (all(c["ok"] for c in checks["constancy"])
          and checks["xi_orthonormality"] < tol
          and checks["etabar_orthonormality"] < tol
          and checks["norm_chain"] < tol
          and checks["analyticity"] < tol
          and all(max(r["right"], r["left"]) < tol * scale for r in residuals)
          and checks["monotone"])
    return {"ok": bool(ok), "tolerance": tol, "levels": level_diag, "checks": checks}


def scalar_nehari(samples, pair) -> np.ndarray:
    """Best analytic approximant of a scalar symbol, ``g - t0 y0 / x0``."""
    g = np.asarray(samples)
    if g.ndim == 3:
        g = g[:, 0, 0]
    return g - pair.t * pair.y[:, 0] / pair.x[:, 0]


def check_candidate(spec: SymbolSpec, candidate: SymbolSpec, grid: CircleGrid | None = None,
                    trunc: int = 64, tol: float = TOL_CHECK) -> dict:
    """Test a candidate analytic ``Q`` against the level-0 Schmidt conditions.

    Verifies that ``Q`` is analytic, that ``(G-Q)x_0 = t_0 y_0`` and
    ``y_0^*(G-Q) = t_0 x_0^*`` for the top Hankel Schmidt pair, and that each
    singular value of ``(G-Q)(theta)`` is constant over the grid.
    """
    if (candidate.m, candidate.n) != (spec.m, spec.n):
        raise ValueError(f"candidate is {candidate.m}x{candidate.n}, "
                         f"symbol is {spec.m}x{spec.n}")
    grid = grid or CircleGrid()
    g = sample_symbol(spec, grid)
    q = sample_symbol(candidate, grid)
    pair, _ = hankel_schmidt(g, trunc)
    t0 = pair.t if pair is not None else 0.0
    scale = max(t0, 1.0) if pair is None else t0
    analytic = negative_mass_entries(q)
    out = {"t0": t0, "analyticity": analytic, "analytic_ok": analytic < tol}
    if pair is not None:
        e = g - q
        r1 = fourier.l2_norm(np.einsum("mij,mj->mi", e, pair.x) - t0 * pair.y)
        r2 = fourier.l2_norm(np.einsum("mi,mij->mj", pair.y.conj(), e) - t0 * pair.x.conj())
    else:
        r1 = r2 = fourier.l2_norm(g - q)
    out["level0"] = {"right": r1, "left": r2, "ok": max(r1, r2) < tol * scale}
    profile = error_profile(g, q)
    spread = []
    for j in range(profile.shape[1]):
        s = profile[:, j]
        spread.append({"j": j, "mean": float(np.mean(s)), "std": float(np.std(s)),
                       "ok": float(np.std(s)) < tol * scale})
    out["constancy"] = spread
    out["ok"] = bool(out["analytic_ok"] and out["level0"]["ok"]
                     and all(c["ok"] for c in spread))
    return out
