import json

import numpy as np

from superopt import bundled, report, run_superopt
from superopt.fourier import CircleGrid
from superopt.symbols import parse_symbol, sample_symbol


def test_report_fields_and_digest():
    spec = bundled.py2x2()
    res = run_superopt(spec)
    rep = report.build_report(spec, res, {"solve_s": 0.1})
    for key in ("schema", "input_digest", "config", "r", "t", "levels", "approximant",
                "diagnostics", "timestamp", "timings", "report_digest"):
        assert key in rep
    assert rep["input_digest"] == report.input_digest(parse_symbol(spec.dumps()))
    again = json.loads(report.dumps(rep))
    again["timestamp"], again["timings"] = "later", {"solve_s": 9.0}
    assert report.report_digest(again) == rep["report_digest"]
    again["t"][0] += 1e-12
    assert report.report_digest(again) != rep["report_digest"]


def test_coefficient_entries_round_trip(rng):
    grid = CircleGrid(64)
    c = np.zeros((64, 2, 1), complex)
    c[:4] = rng.normal(size=(4, 2, 1)) + 1j * rng.normal(size=(4, 2, 1))
    c[-1] = 0.5
    doc = report.coefficient_entries(c)
    spec = parse_symbol(doc)
    assert np.max(np.abs(np.fft.fft(sample_symbol(spec, grid), axis=0) / 64 - c)) < 1e-14
    assert [t[0] for t in doc["entries"][0][0]["laurent"]] == [-1, 0, 1, 2, 3]
