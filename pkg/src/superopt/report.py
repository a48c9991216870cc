"""Machine-readable run reports (``report.json``) and error profiles (``profile.csv``)."""
from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import json
from dataclasses import asdict

import numpy as np

SCHEMA = 1
VOLATILE_KEYS = ("timestamp", "timings")
COEFF_CUTOFF = 1e-14


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.complexfloating, complex)):
        return [float(obj.real), float(obj.imag)]
    return obj


def coefficient_entries(coeffs, cutoff: float = COEFF_CUTOFF) -> dict:
    """Symbol document for the grid coefficients ``coeffs`` of shape ``(M, m, n)``.

    Coefficients below ``cutoff`` times the largest modulus are dropped.
    """
    size, m, n = coeffs.shape
    freqs = np.fft.fftfreq(size, 1.0 / size).astype(int)
    order = np.argsort(freqs, kind="stable")
    floor = cutoff * max(float(np.max(np.abs(coeffs))), 1e-300)
    rows = []
    for i in range(m):
        row = []
        for j in range(n):
            terms = [[int(freqs[k]), float(coeffs[k, i, j].real), float(coeffs[k, i, j].imag)]
                     for k in order if abs(coeffs[k, i, j]) > floor]
            row.append({"laurent": terms})
        rows.append(row)
    return {"m": m, "n": n, "entries": rows}


def input_digest(spec) -> str:
    return hashlib.sha256(spec.dumps().encode()).hexdigest()


def build_report(spec, result, timings: dict | None = None) -> dict:
    """RunReport dictionary for a finished run."""
    checks = result.report["checks"]
    levels = []
    for lvl, diag in zip(result.levels, result.report["levels"]):
        levels.append({"j": lvl.j, "t": lvl.t, "gap": lvl.gap, "trunc": lvl.trunc,
                       "residuals": {k: v for k, v in diag.items()
                                     if k not in ("j", "t", "gap", "trunc")}})
    report = {
        "schema": SCHEMA,
        "input_digest": input_digest(spec),
        "config": asdict(result.config),
        "m": spec.m,
        "n": spec.n,
        "r": result.r,
        "t": result.t,
        "terminal_t": result.terminal_t,
        "trunc": result.trunc,
        "levels": levels,
        "approximant": coefficient_entries(result.approximant_coeffs),
        "diagnostics": {"ok": result.report["ok"],
                        "tolerance": result.report["tolerance"],
                        **checks},
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "timings": timings or {},
    }
    report = _jsonable(report)
    report["report_digest"] = report_digest(report)
    return report


def report_digest(report: dict) -> str:
    """SHA-256 over the report with the volatile fields removed."""
    stable = {k: v for k, v in report.items()
              if k not in VOLATILE_KEYS and k != "report_digest"}
    return hashlib.sha256(json.dumps(stable, sort_keys=True).encode()).hexdigest()


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def write_profile(path, theta, profile) -> None:
    """CSV with columns ``theta, s_0, ..., s_{k-1}`` to 8 significant digits."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["theta"] + [f"s_{j}" for j in range(profile.shape[1])])
        for th, row in zip(theta, profile):
            wr.writerow([f"{th:.8g}"] + [f"{v:.8g}" for v in row])
