"""Rational matrix symbols: parsing, validation and sampling on the circle.

Input documents look like::

    {"m": 2, "n": 2,
     "entries": [[{"laurent": [[-1, 1.0, 0.0]]}, {"laurent": []}],
                 [{"ratio": {"num": [[0, 1, 0]], "den": [[0, 1, 0], [1, -0.4, 0]]}},
                  {"laurent": [[0, 2.0, 0.0]]}]]}

Every coefficient triple is ``[exponent, re, im]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import SymbolError
from .fourier import CircleGrid

DELTA_POLE = 1e-6
DEGREE_CAP = 64
TOL_DEN = 1e-12


@dataclass(frozen=True)
class LaurentPoly:
    """Finite Laurent polynomial ``sum_k c_k z**k``."""

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, c in self.terms.items():
            if int(k) != k:
                raise SymbolError(f"non-integer exponent {k!r}")
            c = complex(c)
            if not np.isfinite(c):
                raise SymbolError(f"non-finite coefficient at exponent {k}")
            if c != 0:
                clean[int(k)] = clean.get(int(k), 0) + c
        object.__setattr__(self, "terms", clean)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def min_exp(self) -> int:
        return min(self.terms) if self.terms else 0

    @property
    def max_exp(self) -> int:
        return max(self.terms) if self.terms else 0

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for k, c in self.terms.items():
            out = out + c * z**k
        return out

    def roots(self) -> np.ndarray:
        """Nonzero-origin roots of ``z**(-min_exp) * p(z)`` via companion eigenvalues."""
        if self.is_zero:
            raise SymbolError("zero polynomial has no finite root set")
        lo, hi = self.min_exp, self.max_exp
        if hi - lo > DEGREE_CAP:
            raise SymbolError(f"degree {hi - lo} exceeds cap {DEGREE_CAP}")
        if hi == lo:
            return np.zeros(0, dtype=complex)
        c = np.array([self.terms.get(k, 0) for k in range(hi, lo - 1, -1)], dtype=complex)
        return np.roots(c)

    def to_json(self) -> list:
        return [[k, c.real, c.imag] for k, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, triples) -> "LaurentPoly":
        if not isinstance(triples, list):
            raise SymbolError("coefficient list must be a JSON array")
        terms: dict = {}
        for t in triples:
            if not (isinstance(t, list) and len(t) == 3):
                raise SymbolError(f"coefficient entry must be [k, re, im], got {t!r}")
            k, re, im = t
            if isinstance(k, bool) or not isinstance(k, (int, float)) or int(k) != k:
                raise SymbolError(f"exponent must be an integer, got {k!r}")
            for v in (re, im):
                if isinstance(v, bool) or not isinstance(v, (int, float)):
                    raise SymbolError(f"coefficient parts must be numbers, got {v!r}")
            terms[int(k)] = terms.get(int(k), 0) + complex(re, im)
        return cls(terms)


@dataclass(frozen=True)
class RationalEntry:
    """Either a Laurent polynomial (``den is None``) or a ratio ``num / den``."""

    num: LaurentPoly
    den: LaurentPoly | None = None

    def __post_init__(self):
        if self.den is not None and self.den.is_zero:
            raise SymbolError("denominator is identically zero")

    def __call__(self, z):
        if self.den is None:
            return self.num(z)
        return self.num(z) / self.den(z)

    def poles(self) -> np.ndarray:
        if self.den is None:
            return np.zeros(0, dtype=complex)
        # a factor z**k in the denominator is a pole of order k at the origin
        origin = np.zeros(max(self.den.min_exp, 0), dtype=complex)
        return np.concatenate([self.den.roots(), origin])

    def to_json(self) -> dict:
        if self.den is None:
            return {"laurent": self.num.to_json()}
        return {"ratio": {"num": self.num.to_json(), "den": self.den.to_json()}}

    @classmethod
    def from_json(cls, doc) -> "RationalEntry":
        if not isinstance(doc, dict) or len(doc) != 1:
            raise SymbolError(f"entry must have exactly one of 'laurent'/'ratio': {doc!r}")
        if "laurent" in doc:
            return cls(LaurentPoly.from_json(doc["laurent"]))
        if "ratio" in doc:
            r = doc["ratio"]
            if not isinstance(r, dict) or set(r) != {"num", "den"}:
                raise SymbolError("ratio entry needs exactly 'num' and 'den'")
            return cls(LaurentPoly.from_json(r["num"]), LaurentPoly.from_json(r["den"]))
        raise SymbolError(f"unknown entry kind {sorted(doc)!r}")

    @classmethod
    def laurent(cls, terms: dict) -> "RationalEntry":
        return cls(LaurentPoly(terms))

    @classmethod
    def ratio(cls, num: dict, den: dict) -> "RationalEntry":
        return cls(LaurentPoly(num), LaurentPoly(den))


@dataclass(frozen=True)
class SymbolSpec:
    """An ``m x n`` array of rational entries."""

    m: int
    n: int
    entries: tuple

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise SymbolError("m and n must be positive")
        rows = tuple(tuple(r) for r in self.entries)
        if len(rows) != self.m or any(len(r) != self.n for r in rows):
            raise SymbolError(f"entries do not form a {self.m}x{self.n} array")
        object.__setattr__(self, "entries", rows)

    def __call__(self, z) -> np.ndarray:
        """Evaluate at points ``z``; result has shape ``z.shape + (m, n)``."""
        z = np.asarray(z, dtype=complex)
        out = np.empty(z.shape + (self.m, self.n), dtype=complex)
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                out[..., i, j] = e(z)
        return out

    def to_json(self) -> dict:
        return {"m": self.m, "n": self.n,
                "entries": [[e.to_json() for e in row] for row in self.entries]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def parse_symbol(document, delta_pole: float = DELTA_POLE) -> SymbolSpec:
    """Build a validated :class:`SymbolSpec` from a JSON string or decoded dict.

    Raises :class:`SymbolError` on malformed documents, dimension mismatches
    and denominators with a root within ``delta_pole`` of the unit circle.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SymbolError(f"malformed JSON: {exc}") from None
    if not isinstance(document, dict):
        raise SymbolError("symbol document must be a JSON object")
    try:
        m, n, rows = document["m"], document["n"], document["entries"]
    except KeyError as exc:
        raise SymbolError(f"missing field {exc.args[0]!r}") from None
    for name, v in (("m", m), ("n", n)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise SymbolError(f"{name} must be a positive integer, got {v!r}")
    if not isinstance(rows, list) or len(rows) != m:
        raise SymbolError(f"expected {m} rows of entries")
    entries = []
    for row in rows:
        if not isinstance(row, list) or len(row) != n:
            raise SymbolError(f"every row must have {n} entries")
        entries.append(tuple(RationalEntry.from_json(e) for e in row))
    spec = SymbolSpec(m, n, tuple(entries))
    report = validate_symbol(spec, delta_pole)
    if not report["ok"]:
        bad = [e for e in report["entries"] if not e["ok"]]
        raise SymbolError(f"pole on or near the unit circle: {bad}")
    return spec


def load_symbol(path, delta_pole: float = DELTA_POLE) -> SymbolSpec:
    return parse_symbol(Path(path).read_text(), delta_pole)


def validate_symbol(spec: SymbolSpec, delta_pole: float = DELTA_POLE) -> dict:
    """Pole report for every ratio entry; flags roots with ``|1 - |r|| <= delta_pole``."""
    entries = []
    for i, row in enumerate(spec.entries):
        for j, e in enumerate(row):
            if e.den is None:
                continue
            moduli = sorted(float(abs(r)) for r in e.poles())
            ok = all(abs(mod - 1.0) > delta_pole for mod in moduli)
            entries.append({"row": i, "col": j, "pole_moduli": moduli, "ok": ok})
    return {"ok": all(e["ok"] for e in entries), "delta_pole": delta_pole,
            "entries": entries}


def sample_symbol(spec: SymbolSpec, grid: CircleGrid) -> np.ndarray:
    """Samples of the symbol on ``grid``; shape ``(M, m, n)``."""
    z = grid.z
    out = np.empty((grid.size, spec.m, spec.n), dtype=complex)
    for i, row in enumerate(spec.entries):
        for j, e in enumerate(row):
            if e.den is None:
                out[:, i, j] = e.num(z)
                continue
            den = e.den(z)
            if np.min(np.abs(den)) < TOL_DEN:
                raise SymbolError(f"denominator of entry ({i},{j}) vanishes on the grid")
            out[:, i, j] = e.num(z) / den
    return out
