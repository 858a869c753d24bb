"""Command-line front end.

    split-nls <simulate|converge|stability|probe|defect> --config FILE --out DIR [--jobs N] [--verbose]

The config is a strict JSON document; unknown fields are rejected. Exit
status is 0 when every pass flag holds, 2 on a pass-band failure and 1 on a
runtime error. Config problems exit with 3 (malformed JSON), 4 (schema) or
5 (constraint violation).
"""

from __future__ import annotations

import argparse
import copy
import csv
import hashlib
import io
import json
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .experiments import (
    AdmissiblePair,
    ExperimentReport,
    LadderSpec,
    ReferenceChoice,
    Row,
    admissible_q0r0,
    convergence_ladder,
    duhamel_defect,
    mass_ok,
    stability_sweep,
    strichartz_probe,
)
from .flows import CutoffProfile, EquationParams, critical_exponent
from .oracles import ConfigError, InitialDataSpec, energy, mass, make_initial_data
from .schemes import SCHEMES, BlowUpError, SchemeConfig, iterate_scheme, run_scheme, write_trajectory
from .spectral import Field, Grid

log = logging.getLogger("splitnls")

COMMANDS = ("simulate", "converge", "stability", "probe", "defect")
LADDER_COMMANDS = ("converge", "stability", "probe", "defect")

EXIT_OK, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


class ConfigParseError(ConfigError):
    exit_code = 3


class ConfigSchemaError(ConfigError):
    exit_code = 4


class ConfigValueError(ConfigError):
    exit_code = 5


_NUM = (int, float)
_NOT_BOOL = object()

# section -> field -> (accepted types, default); None in types means nullable
SCHEMA = {
    "equation": {"d": ((int,), 1), "p": (_NUM, 2.0), "lambda": ((int,), 1)},
    "grid": {"box_length": (_NUM + (list,), 60.0), "points": ((int, list), 1024)},
    "data": {
        "kind": ((str,), "gaussian"),
        "amplitude": (_NUM, 1.0),
        "width": (_NUM, 1.0),
        "mode": ((list,), [1]),
        "decay_exponent": (_NUM + (type(None),), None),
    },
    "scheme": {
        "kind": ((str,), "modified_lie"),
        "tau": (_NUM, 0.01),
        "horizon_T": (_NUM, 1.0),
        "profile": ((str,), "smooth"),
        "record_every": ((int,), 1),
    },
    "experiment": {
        "kind": ((str, type(None)), None),
        "tau0": (_NUM, 2.0**-5),
        "levels": ((int,), 5),
        "schemes": ((list,), ["modified_lie"]),
        "band": ((list,), [0.45, None]),
        "envelope": (_NUM + (type(None),), None),
        "envelope_rate": (_NUM, 0.5),
        "pairs": ((list, type(None)), None),
        "bound": (_NUM, 4.0),
        "tau_ref": (_NUM + (type(None),), None),
        "richardson_tol": (_NUM, 0.05),
        "compare_projected": ((bool,), False),
        "dump_trajectory": ((bool,), False),
    },
    "reference": {
        "kind": ((str,), "self"),
        "factor": ((int,), 64),
        "scheme": ((str,), "modified_lie"),
        "uncertainty": ((bool,), True),
    },
    "output": {"directory": ((str,), "out"), "formats": ((list,), ["json", "csv", "svg"])},
}
TOP_LEVEL = set(SCHEMA) | {"seed"}


def _type_ok(value, types) -> bool:
    if isinstance(value, bool) and bool not in types:
        return False
    return isinstance(value, types)


@dataclass
class ExperimentConfig:
    """Validated config; ``raw`` holds the canonical document with defaults."""

    raw: dict

    @property
    def command(self) -> str:
        return self.raw["experiment"]["kind"]

    @property
    def seed(self) -> int:
        return self.raw["seed"]

    @property
    def params(self) -> EquationParams:
        e = self.raw["equation"]
        return EquationParams(e["d"], float(e["p"]), e["lambda"])

    @property
    def grid(self) -> Grid:
        g = self.raw["grid"]
        return Grid(self.raw["equation"]["d"], g["box_length"], g["points"])

    @property
    def data(self) -> InitialDataSpec:
        d = self.raw["data"]
        return InitialDataSpec(
            kind=d["kind"],
            amplitude=float(d["amplitude"]),
            width=float(d["width"]),
            mode=tuple(d["mode"]),
            decay_exponent=d["decay_exponent"],
            seed=self.seed,
        )

    @property
    def profile(self) -> CutoffProfile:
        return CutoffProfile(self.raw["scheme"]["profile"])

    @property
    def scheme(self) -> SchemeConfig:
        s = self.raw["scheme"]
        return SchemeConfig(
            self.params,
            s["kind"],
            float(s["tau"]),
            float(s["horizon_T"]),
            self.profile,
            s["record_every"],
        )

    @property
    def ladder(self) -> LadderSpec:
        x = self.raw["experiment"]
        return LadderSpec(
            self.grid,
            self.data,
            self.params,
            float(self.raw["scheme"]["horizon_T"]),
            float(x["tau0"]),
            x["levels"],
            self.profile,
        )

    @property
    def reference(self) -> ReferenceChoice:
        r = self.raw["reference"]
        return ReferenceChoice(r["kind"], r["factor"], r["scheme"], r["uncertainty"])

    @property
    def pairs(self) -> list[AdmissiblePair]:
        pairs = self.raw["experiment"]["pairs"]
        if pairs is None:
            return [admissible_q0r0(self.params), AdmissiblePair(math.inf, 2.0)]
        return [AdmissiblePair(*(math.inf if v is None else float(v) for v in pr)) for pr in pairs]

    def echo(self) -> dict:
        return copy.deepcopy(self.raw)

    def digest(self) -> str:
        return hashlib.sha256(dumps_json(self.raw).encode()).hexdigest()


def _fill(doc: dict) -> dict:
    if not isinstance(doc, dict):
        raise ConfigSchemaError("config: top level must be a JSON object")
    unknown = sorted(set(doc) - TOP_LEVEL)
    if unknown:
        raise ConfigSchemaError(f"{unknown[0]}: unknown field")
    out: dict = {}
    for section, fields in SCHEMA.items():
        given = doc.get(section, {})
        if not isinstance(given, dict):
            raise ConfigSchemaError(f"{section}: must be an object")
        bad = sorted(set(given) - set(fields))
        if bad:
            raise ConfigSchemaError(f"{section}.{bad[0]}: unknown field")
        sec = {}
        for name, (types, default) in fields.items():
            value = given.get(name, copy.deepcopy(default))
            if not _type_ok(value, types):
                raise ConfigSchemaError(
                    f"{section}.{name}: expected {'/'.join(t.__name__ for t in types)}, "
                    f"got {type(value).__name__}"
                )
            sec[name] = value
        out[section] = sec
    seed = doc.get("seed", 0)
    if not _type_ok(seed, (int,)):
        raise ConfigSchemaError("seed: expected int")
    out["seed"] = seed
    return out


def _check(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise ConfigValueError(f"{path}: {message}")


def _validate(raw: dict, command: str | None) -> None:
    exp = raw["experiment"]
    if command is not None:
        _check(exp["kind"] in (None, command), "experiment.kind",
               f"config is for {exp['kind']!r}, command is {command!r}")
        exp["kind"] = command
    _check(exp["kind"] in COMMANDS, "experiment.kind", f"must be one of {', '.join(COMMANDS)}")

    eq = raw["equation"]
    d, p = eq["d"], eq["p"]
    _check(d in (1, 2, 3), "equation.d", "must be 1, 2 or 3")
    _check(p > 0, "equation.p", "must be positive")
    pd = critical_exponent(d)
    _check(p < pd, "equation.p", f"must satisfy p < {pd:g} when d = {d}")
    _check(eq["lambda"] in (-1, 1), "equation.lambda", "must be -1 or +1")

    g = raw["grid"]
    for key in ("box_length", "points"):
        v = g[key]
        if isinstance(v, list):
            _check(len(v) == d, f"grid.{key}", f"needs {d} entries")
    try:
        Grid(d, g["box_length"], g["points"])
    except (ValueError, TypeError) as exc:
        raise ConfigValueError(f"grid: {exc}") from None

    data = raw["data"]
    _check(data["kind"] in ("gaussian", "soliton", "plane_wave", "rough"), "data.kind",
           "must be gaussian, soliton, plane_wave or rough")
    if data["kind"] == "soliton":
        _check((d, p, eq["lambda"]) == (1, 2, 1), "data.kind",
               "soliton requires (d, p, lambda) = (1, 2, +1)")
    if data["kind"] == "rough" and data["decay_exponent"] is not None:
        _check(data["decay_exponent"] > d / 2, "data.decay_exponent", f"must exceed d/2 = {d / 2:g}")
    _check(data["width"] > 0, "data.width", "must be positive")
    _check(all(isinstance(m, int) and not isinstance(m, bool) for m in data["mode"]),
           "data.mode", "must be a list of integers")

    s = raw["scheme"]
    _check(s["kind"] in SCHEMES, "scheme.kind", f"must be one of {', '.join(SCHEMES)}")
    _check(s["profile"] in ("smooth", "sharp"), "scheme.profile", "must be 'smooth' or 'sharp'")
    _check(s["tau"] > 0, "scheme.tau", "must be positive")
    _check(s["horizon_T"] > 0, "scheme.horizon_T", "must be positive")
    _check(s["tau"] <= s["horizon_T"], "scheme.tau", "must not exceed scheme.horizon_T")
    _check(s["record_every"] >= 1, "scheme.record_every", "must be >= 1")

    if exp["kind"] in LADDER_COMMANDS:
        _check(exp["levels"] >= 3, "experiment.levels", "must be >= 3 (at least 4 step sizes)")
        _check(0 < exp["tau0"] < 1, "experiment.tau0", "must lie in (0, 1)")
        _check(exp["tau0"] <= s["horizon_T"], "experiment.tau0", "must not exceed scheme.horizon_T")
    for k in exp["schemes"]:
        _check(k in SCHEMES, "experiment.schemes", f"unknown scheme {k!r}")
    band = exp["band"]
    _check(len(band) == 2 and all(b is None or _type_ok(b, _NUM) for b in band),
           "experiment.band", "must be [low, high] with null for unbounded")
    _check(exp["bound"] >= 1, "experiment.bound", "must be >= 1")
    if exp["pairs"] is not None:
        for i, pr in enumerate(exp["pairs"]):
            ok = isinstance(pr, list) and len(pr) == 2 and all(
                v is None or (_type_ok(v, _NUM) and v >= 2) for v in pr
            )
            _check(ok, f"experiment.pairs[{i}]", "must be [q, r] with entries >= 2 or null for inf")
    ref = raw["reference"]
    _check(ref["kind"] in ("analytic", "self"), "reference.kind", "must be 'analytic' or 'self'")
    _check(ref["factor"] >= 2, "reference.factor", "must be >= 2")
    _check(ref["scheme"] in SCHEMES, "reference.scheme", f"must be one of {', '.join(SCHEMES)}")
    if ref["kind"] == "analytic" and exp["kind"] == "converge":
        _check(data["kind"] in ("plane_wave", "soliton"), "reference.kind",
               "analytic reference needs plane_wave or soliton data")
    for f in raw["output"]["formats"]:
        _check(f in ("json", "csv", "svg"), "output.formats", f"unknown format {f!r}")


def parse_config(source, command: str | None = None) -> ExperimentConfig:
    """Read and validate a config from a path, ``"-"`` (stdin), a file
    object or an already-decoded dict."""
    if isinstance(source, dict):
        doc = copy.deepcopy(source)
    else:
        try:
            if hasattr(source, "read"):
                text = source.read()
            elif str(source) == "-":
                text = sys.stdin.read()
            else:
                text = Path(source).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise ConfigParseError(f"cannot read config: {exc}") from None
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    raw = _fill(doc)
    _validate(raw, command)
    return ExperimentConfig(raw)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(k)}: {_encode(obj[k], indent, level + 1)}" for k in sorted(obj)
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format(obj, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps_json(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits,
    non-finite floats as null."""
    return _encode(_plain(obj), 2, 0) + "\n"


def report_document(report: ExperimentReport, config: ExperimentConfig | None, complete: bool = True) -> dict:
    doc = {
        "experiment": report.experiment,
        "rows": [
            {"tau": r.tau, "metric": r.metric, "valid": r.valid, "series": r.series, "note": r.note}
            for r in report.rows
        ],
        "fitted_rate": report.fitted_rate,
        "pass": report.passed,
        "checks": report.checks,
        "flags": report.flags,
        "details": report.details,
        "provenance": dict(report.provenance),
        "reason": report.reason,
        "complete": complete,
    }
    if config is not None:
        doc["config"] = config.echo()
        doc["provenance"].update(config_hash=config.digest(), seed=config.seed)
    return doc


def rows_csv(rows: list[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["tau", "metric", "valid", "wall_ms", "series"])
    for r in rows:
        w.writerow(["%.12e" % r.tau, "%.12e" % r.metric, int(bool(r.valid)), "%.3f" % r.wall_ms, r.series])
    return buf.getvalue()


def emit_report(
    report: ExperimentReport,
    formats,
    out_dir,
    config: ExperimentConfig | None = None,
    complete: bool = True,
) -> list[Path]:
    """Write report.json / rows.csv / plot.svg into ``out_dir``."""
    out = Path(out_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)
        if "json" in formats:
            path = out / "report.json"
            path.write_text(dumps_json(report_document(report, config, complete)), encoding="utf-8")
            written.append(path)
        if "csv" in formats:
            path = out / "rows.csv"
            path.write_text(rows_csv(report.rows), encoding="utf-8")
            written.append(path)
        if "svg" in formats and report.experiment in LADDER_COMMANDS:
            path = out / "plot.svg"
            path.write_text(render_svg(report), encoding="utf-8")
            written.append(path)
    except OSError as exc:
        raise OSError(f"{exc.filename or out}: {exc.strerror or exc}") from exc
    return written


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def render_svg(report: ExperimentReport, width: int = 800, height: int = 600) -> str:
    """Log-log plot of metric against tau, one polyline per series, with the
    least-squares line overlaid when a fit exists."""
    left, right, top, bottom = 90, 30, 40, 70
    pts = [(r.tau, r.metric, r.series) for r in report.rows if r.valid and r.metric > 0 and r.tau > 0]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{report.experiment}</text>',
    ]
    if not pts:
        out.append(f'<text x="{width / 2:.1f}" y="{height / 2:.1f}" text-anchor="middle">no data</text>')
        return "\n".join(out + ["</svg>"]) + "\n"
    lx = np.log10([p[0] for p in pts])
    ly = np.log10([p[1] for p in pts])
    x0, x1 = math.floor(lx.min() - 0.05), math.ceil(lx.max() + 0.05)
    y0, y1 = math.floor(ly.min() - 0.05), math.ceil(ly.max() + 0.05)
    pw, ph = width - left - right, height - top - bottom

    def sx(v):
        return left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return top + (y1 - v) / (y1 - y0) * ph

    out.append(
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>'
    )
    for e in range(x0, x1 + 1):
        out.append(f'<line x1="{sx(e):.2f}" y1="{top + ph}" x2="{sx(e):.2f}" y2="{top + ph + 6}" stroke="black"/>')
        out.append(
            f'<text x="{sx(e):.2f}" y="{top + ph + 22}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="12">1e{e}</text>'
        )
    for e in range(y0, y1 + 1):
        out.append(f'<line x1="{left - 6}" y1="{sy(e):.2f}" x2="{left}" y2="{sy(e):.2f}" stroke="black"/>')
        out.append(
            f'<text x="{left - 10}" y="{sy(e) + 4:.2f}" text-anchor="end" font-family="sans-serif" '
            f'font-size="12">1e{e}</text>'
        )
    out.append(
        f'<text x="{left + pw / 2:.1f}" y="{height - 20}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">tau</text>'
    )
    out.append(
        f'<text x="20" y="{top + ph / 2:.1f}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="14" transform="rotate(-90 20 {top + ph / 2:.1f})">metric</text>'
    )
    series = []
    for _, _, s in pts:
        if s not in series:
            series.append(s)
    fits = report.details.get("fits", {})
    for i, name in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        sel = sorted((a, b) for a, b, s in pts if s == name)
        coords = " ".join(f"{sx(math.log10(a)):.2f},{sy(math.log10(b)):.2f}" for a, b in sel)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for a, b in sel:
            out.append(
                f'<circle cx="{sx(math.log10(a)):.2f}" cy="{sy(math.log10(b)):.2f}" r="4" fill="{color}"/>'
            )
        label = name or "metric"
        fit = fits.get(name)
        if fit is not None:
            slope, icpt = fit["slope"], fit["intercept"]
            ta, tb = sel[0][0], sel[-1][0]
            ya = (slope * math.log(ta) + icpt) / math.log(10)
            yb = (slope * math.log(tb) + icpt) / math.log(10)
            out.append(
                f'<line x1="{sx(math.log10(ta)):.2f}" y1="{sy(ya):.2f}" x2="{sx(math.log10(tb)):.2f}" '
                f'y2="{sy(yb):.2f}" stroke="{color}" stroke-dasharray="6,4"/>'
            )
            label += f" (slope {slope:.3f})"
        out.append(
            f'<text x="{left + 12}" y="{top + 20 + 18 * i}" font-family="sans-serif" font-size="13" '
            f'fill="{color}">{label}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _simulate(config: ExperimentConfig, out_dir: Path) -> tuple[ExperimentReport, bool]:
    cfg = config.scheme
    grid = config.grid
    phi = make_initial_data(config.data, grid, config.params)
    report = ExperimentReport("simulate")
    report.provenance = {"grid": {"d": grid.d, "box_length": list(grid.box_length), "points": list(grid.points)}}
    every = cfg.record_every
    norms, energies, times = [], [], []
    states = []
    complete = True
    try:
        for n, v in iterate_scheme(phi, cfg):
            if n % every:
                continue
            f = Field(grid, v, "physical")
            norms.append(math.sqrt(mass(f)))
            energies.append(energy(f, cfg.params))
            times.append(n * cfg.tau)
            if config.raw["experiment"]["dump_trajectory"]:
                states.append(f)
    except BlowUpError as exc:
        complete = False
        report.flags.append("blow-up")
        report.details["last_finite_time"] = exc.last_finite_time
        report.reason = str(exc)
    for t, m in zip(times, norms):
        report.rows.append(Row(t, m, True, 0.0, "l2_norm"))
    if norms:
        increase = max((b - a for a, b in zip(norms, norms[1:])), default=0.0)
        drift = max(abs(m - norms[0]) for m in norms) / norms[0] if norms[0] > 0 else 0.0
        entry = {"series": cfg.scheme, "tau": cfg.tau, "max_step_increase": increase,
                 "max_relative_drift": drift}
        report.details["mass"] = [entry]
        report.details["energy_drift"] = max(abs(e - energies[0]) for e in energies)
        report.details["final_time"] = times[-1]
        report.checks["mass"] = mass_ok(entry, cfg.scheme)
    if states:
        from .schemes import Trajectory

        path = write_trajectory(out_dir / "trajectory.bin", Trajectory(np.array(times), states, cfg))
        report.details["trajectory"] = path.name
    return report.finalize(), complete


def run_experiment(config: ExperimentConfig, out_dir: Path | None = None, jobs: int = 1) -> tuple[ExperimentReport, bool]:
    """Dispatch on ``config.command``; returns ``(report, complete)``."""
    cmd = config.command
    x = config.raw["experiment"]
    out_dir = Path(out_dir or config.raw["output"]["directory"])
    if cmd == "simulate":
        out_dir.mkdir(parents=True, exist_ok=True)
        return _simulate(config, out_dir)
    spec = config.ladder
    if cmd == "converge":
        lo, hi = x["band"]
        report = convergence_ladder(
            spec,
            tuple(x["schemes"]),
            config.reference,
            band=(-math.inf if lo is None else lo, math.inf if hi is None else hi),
            envelope=x["envelope"],
            envelope_rate=x["envelope_rate"],
            compare_projected=x["compare_projected"],
            jobs=jobs,
        )
    elif cmd == "stability":
        report = stability_sweep(spec, config.pairs, x["bound"], jobs=jobs)
    elif cmd == "probe":
        report = strichartz_probe(
            spec.initial_data(), config.pairs[0], spec.tau_values, spec.horizon_T,
            spec.profile, x["bound"],
        )
    else:
        report = duhamel_defect(
            spec.initial_data(), spec, tau_ref=x["tau_ref"], bound=x["bound"],
            richardson_tol=x["richardson_tol"],
        )
    report.provenance["seed"] = config.seed
    return report, True


def run_command(config: ExperimentConfig, out_dir=None, jobs: int = 1) -> int:
    """Run, write artifacts, and map the outcome to an exit status."""
    out = Path(out_dir or config.raw["output"]["directory"])
    formats = config.raw["output"]["formats"]
    try:
        report, complete = run_experiment(config, out, jobs)
    except Exception as exc:  # noqa: BLE001 - reported as exit 1 with a partial report
        log.error("run failed: %s", exc)
        report = ExperimentReport(config.command, reason=f"error: {exc}")
        emit_report(report, formats, out, config, complete=False)
        return EXIT_ERROR
    emit_report(report, formats, out, config, complete=complete)
    if not complete:
        log.error("%s", report.reason)
        return EXIT_ERROR
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="split-nls", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON config path, or - for stdin")
    ap.add_argument("--out", help="output directory (overrides output.directory)")
    ap.add_argument("--jobs", type=int, default=1, help="concurrent ladder rows")
    ap.add_argument("--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        config = parse_config(args.config, args.command)
    except ConfigError as exc:
        print(f"split-nls: {exc}", file=sys.stderr)
        return getattr(exc, "exit_code", ConfigValueError.exit_code)
    if args.jobs < 1:
        print("split-nls: --jobs must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    code = run_command(config, args.out, args.jobs)
    log.info("exit status %d", code)
    return code


if __name__ == "__main__":
    sys.exit(main())
