import io
import json
import math
import subprocess
import sys

import pytest

from splitnls.cli import (
    ConfigParseError,
    ConfigSchemaError,
    ConfigValueError,
    dumps_json,
    emit_report,
    main,
    parse_config,
    render_svg,
    run_command,
)
from splitnls.experiments import ExperimentReport, Row
from splitnls.schemes import read_trajectory

MINIMAL = {"equation": {"d": 1, "p": 2}, "experiment": {"kind": "converge"}}


def fast_converge(**overrides):
    doc = {
        "equation": {"d": 1, "p": 2, "lambda": 1},
        "grid": {"box_length": 60, "points": 512},
        "data": {"kind": "soliton"},
        "scheme": {"horizon_T": 0.5},
        "experiment": {"schemes": ["strang"], "band": [1.7, 2.2], "tau0": 2.0**-4, "levels": 3},
        "reference": {"kind": "analytic"},
    }
    for section, values in overrides.items():
        doc.setdefault(section, {}).update(values)
    return doc


def test_minimal_config_defaults_echoed():
    cfg = parse_config(MINIMAL)
    echo = cfg.echo()
    assert echo["equation"] == {"d": 1, "p": 2, "lambda": 1}
    assert echo["scheme"]["kind"] == "modified_lie"
    assert echo["reference"]["factor"] == 64
    assert echo["seed"] == 0
    assert cfg.command == "converge"


def test_round_trip_fixed_point():
    cfg = parse_config(fast_converge(), "converge")
    again = parse_config(json.loads(dumps_json(cfg.echo())))
    assert again.echo() == cfg.echo()
    assert again.digest() == cfg.digest()


@pytest.mark.parametrize(
    "doc, message",
    [
        ({"equation": {"d": 3, "p": 5}}, "equation.p: must satisfy p < 4 when d = 3"),
        ({"equation": {"lambda": 0}}, "equation.lambda: must be -1 or +1"),
        ({"grid": {"points": 7}}, "grid:"),
        ({"equation": {"p": 3}, "data": {"kind": "soliton"}}, "data.kind"),
        ({"data": {"kind": "rough", "decay_exponent": 0.4}}, "data.decay_exponent"),
        ({"scheme": {"tau": 2.0, "horizon_T": 1.0}}, "scheme.tau"),
        ({"experiment": {"levels": 2}}, "experiment.levels"),
        ({"reference": {"kind": "analytic"}}, "reference.kind"),
        ({"experiment": {"pairs": [[1, 2]]}}, "experiment.pairs[0]"),
    ],
)
def test_invariant_violations(doc, message):
    doc = {**doc, "experiment": {"kind": "converge", **doc.get("experiment", {})}}
    with pytest.raises(ConfigValueError) as info:
        parse_config(doc)
    assert message in str(info.value)
    assert info.value.exit_code == 5


@pytest.mark.parametrize(
    "doc, path",
    [
        ({"equation": {"q": 1}}, "equation.q"),
        ({"colour": 1}, "colour"),
        ({"equation": {"p": "two"}}, "equation.p"),
        ({"equation": {"d": True}}, "equation.d"),
        ({"scheme": []}, "scheme"),
    ],
)
def test_schema_violations(doc, path):
    with pytest.raises(ConfigSchemaError) as info:
        parse_config(doc, "simulate")
    assert str(info.value).startswith(path)


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "equation": {"d": 1,}\n}')
    with pytest.raises(ConfigParseError, match="line 2"):
        parse_config(bad)
    with pytest.raises(ConfigParseError):
        parse_config(tmp_path / "missing.json")
    with pytest.raises(ConfigParseError):
        parse_config(io.StringIO("[1, 2"))


def test_command_mismatch():
    with pytest.raises(ConfigValueError, match="experiment.kind"):
        parse_config(MINIMAL, "simulate")


def test_exit_codes_for_bad_config(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"equation": {"d": 3, "p": 5}}))
    assert main(["simulate", "--config", str(path)]) == 5
    assert "equation.p: must satisfy p < 4 when d = 3" in capsys.readouterr().err
    path.write_text("{")
    assert main(["simulate", "--config", str(path)]) == 3
    path.write_text('{"extra": 1}')
    assert main(["simulate", "--config", str(path)]) == 4


def test_json_formatting():
    text = dumps_json({"b": 0.1, "a": [1, 2.0, math.inf, None, True], "c": {"z": 1e-300, "y": "s"}})
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert "0.10000000000000001" in text
    assert "2.0" in text and "null" in text and "1e-300" in text
    json.loads(text)


def test_empty_report_emission(tmp_path):
    report = ExperimentReport("converge").finalize()
    emit_report(report, ["json", "csv", "svg"], tmp_path)
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["rows"] == [] and doc["pass"] is False and doc["reason"] == "no rows"
    assert (tmp_path / "rows.csv").read_text().count("\n") == 1
    assert "no data" in (tmp_path / "plot.svg").read_text()


def test_six_row_csv(tmp_path):
    report = ExperimentReport("converge", rows=[Row(2.0**-j, 2.0**-j, True, 1.5, "x") for j in range(6)])
    emit_report(report.finalize(), ["csv"], tmp_path)
    lines = (tmp_path / "rows.csv").read_text().splitlines()
    assert len(lines) == 7
    assert lines[0] == "tau,metric,valid,wall_ms,series"
    assert lines[1] == "1.000000000000e+00,1.000000000000e+00,1,1.500,x"


def test_emit_io_error_has_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError, match="file"):
        emit_report(ExperimentReport("converge"), ["json"], blocker / "sub")


def test_converge_run_and_determinism(tmp_path):
    cfg = parse_config(fast_converge(), "converge")
    assert run_command(cfg, tmp_path / "a") == 0
    assert run_command(cfg, tmp_path / "b", jobs=2) == 0
    a = (tmp_path / "a" / "report.json").read_bytes()
    assert a == (tmp_path / "b" / "report.json").read_bytes()
    doc = json.loads(a)
    assert doc["complete"] and doc["pass"]
    assert doc["config"]["data"]["kind"] == "soliton"
    assert doc["provenance"]["config_hash"] == cfg.digest()
    assert "wall_ms" not in a.decode()
    svg = (tmp_path / "a" / "plot.svg").read_text()
    assert svg.startswith("<svg") and 'width="800"' in svg and "slope" in svg


def test_plane_wave_converge_exact(tmp_path):
    doc = {
        "equation": {"p": 2, "lambda": -1},
        "grid": {"box_length": 6.283185307179586, "points": 32},
        "data": {"kind": "plane_wave"},
        "experiment": {"schemes": ["modified_lie", "lie"], "tau0": 0.125, "levels": 3},
        "reference": {"kind": "analytic"},
    }
    assert run_command(parse_config(doc, "converge"), tmp_path) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert "exact regime: modified_lie" in report["flags"]
    assert report["fitted_rate"] is None


def test_band_failure_exit_2(tmp_path):
    cfg = parse_config(fast_converge(experiment={"band": [0.8, 1.2]}), "converge")
    assert run_command(cfg, tmp_path) == 2
    assert json.loads((tmp_path / "report.json").read_text())["pass"] is False


def test_stability_run(tmp_path):
    doc = {
        "equation": {"p": 3, "lambda": -1},
        "grid": {"points": 512},
        "data": {"kind": "rough"},
        "scheme": {"horizon_T": 0.5},
        "experiment": {"tau0": 0.0625, "levels": 5},
        "seed": 3,
    }
    assert run_command(parse_config(doc, "stability"), tmp_path) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert len(report["rows"]) == 12 and report["provenance"]["seed"] == 3


def test_probe_and_defect_runs(tmp_path):
    base = {"grid": {"box_length": 30, "points": 256}, "scheme": {"horizon_T": 0.5}, "experiment": {"tau0": 0.0625, "levels": 3}}
    assert run_command(parse_config(base, "probe"), tmp_path / "p") == 0
    cfg = parse_config({**base, "equation": {"lambda": -1}}, "defect")
    code = run_command(cfg, tmp_path / "d")
    report = json.loads((tmp_path / "d" / "report.json").read_text())
    assert code == (0 if report["pass"] else 2)
    assert report["checks"]["quadrature"]


def test_simulate_with_dump(tmp_path):
    doc = {"grid": {"points": 128}, "scheme": {"tau": 0.01, "horizon_T": 0.2, "record_every": 5}, "experiment": {"dump_trajectory": True}}
    assert run_command(parse_config(doc, "simulate"), tmp_path) == 0
    grid, tau, states = read_trajectory(tmp_path / "trajectory.bin")
    assert states.shape == (5, 128) and tau == 0.01
    assert not (tmp_path / "plot.svg").exists()


def test_simulate_blow_up(tmp_path):
    doc = {"equation": {"p": 6}, "data": {"amplitude": 1e80}, "grid": {"points": 64}, "scheme": {"tau": 0.1}}
    assert run_command(parse_config(doc, "simulate"), tmp_path) == 1
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["complete"] is False
    assert report["details"]["last_finite_time"] == 0.0
    assert "blow-up" in report["flags"]


def test_runtime_error_exit_1(tmp_path):
    # tau0 not a multiple of tau_ref/2 for the defect quadrature
    cfg = parse_config({"grid": {"points": 64}, "experiment": {"tau0": 0.1, "levels": 3, "tau_ref": 0.001}}, "defect")
    assert run_command(cfg, tmp_path) == 1
    assert json.loads((tmp_path / "report.json").read_text())["complete"] is False


def test_svg_has_fit_line():
    rows = [Row(2.0**-j, 2.0**-j, True, 0, "s") for j in range(4)]
    report = ExperimentReport("converge", rows=rows, details={"fits": {"s": {"slope": 1.0, "intercept": 0.0}}})
    svg = render_svg(report)
    assert svg.count("<circle") == 4 and "stroke-dasharray" in svg


def test_console_entry_point_stdin(tmp_path):
    doc = json.dumps({"grid": {"points": 64}, "scheme": {"horizon_T": 0.1}})
    proc = subprocess.run(
        [sys.executable, "-m", "splitnls.cli", "simulate", "--config", "-", "--out", str(tmp_path)],
        input=doc, capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "report.json").exists()
