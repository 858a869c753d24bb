"""
Driving experiments from a JSON config
======================================

The split-nls command reads a strict JSON config, runs one experiment and
writes report.json, rows.csv and (for ladders) plot.svg. Here we call the
same entry point in-process.
"""

import json
import tempfile
from pathlib import Path

from splitnls.cli import main, parse_config

config = {
    "equation": {"d": 1, "p": 2, "lambda": 1},
    "grid": {"box_length": 60, "points": 1024},
    "data": {"kind": "soliton"},
    "scheme": {"horizon_T": 1.0},
    "experiment": {"schemes": ["strang"], "band": [1.7, 2.2], "tau0": 0.03125, "levels": 5},
    "reference": {"kind": "analytic"},
}

# defaults are filled in and echoed back
print(json.dumps(parse_config(config, "converge").echo()["scheme"], indent=1))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "soliton.json"
    path.write_text(json.dumps(config))
    code = main(["converge", "--config", str(path), "--out", str(Path(tmp) / "out")])
    print("exit status", code)
    report = json.loads((Path(tmp) / "out" / "report.json").read_text())
    print("fitted rate", report["fitted_rate"], "pass", report["pass"])
    print((Path(tmp) / "out" / "rows.csv").read_text())

    # a constraint violation names the field and exits with status 5
    path.write_text(json.dumps({"equation": {"d": 3, "p": 5}}))
    print("exit status", main(["simulate", "--config", str(path)]))
