"""Command-line front end: single cycles, parameter sweeps, validation.

Subcommands
-----------
cycle     run one Otto cycle and print efficiency, heats, work, regime
sweep     run a cycle per grid value of one parameter; write CSV/JSON/SVG
validate  run the closed-form-versus-oracle grids and print residuals

Run parameters come from an optional flat key=value config file plus command
line flags; a later flag overrides the config file.  All numbers are written
with 17 significant digits so CSV and JSON round-trip exactly, and CSV bytes
are deterministic for a fixed configuration.

Exit codes: 0 success (cycle: engine regime), 2 cycle completed in a
non-engine regime, 3 validation failure, 64 bad configuration, 1 other error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from pathlib import Path

from . import __version__
from . import closed_form as cf
from .errors import AnyonOttoError, ConfigError, DegenerateCycle
from .otto import (
    _AXIS_FIELDS,
    MEDIA,
    REGIME_ENGINE,
    OttoCycleSpec,
    efficiency_cs_volume,
    run_cycle,
    sweep_axes,
    sweep_efficiency,
)
from .validate import run_validation

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NON_ENGINE = 2
EXIT_VALIDATION = 3
EXIT_CONFIG = 64

_FLOAT_KEYS = (
    "beta_h",
    "beta_l",
    "alpha_h",
    "alpha_l",
    "l1",
    "l2",
    "alpha",
    "alpha1",
    "alpha2",
    "length",
    "eps0",
    "rel_tol",
    "tail_tol",
)
_STR_KEYS = ("medium", "sweep", "grid", "out", "format", "variant")
_INT_KEYS = ("seed",)
_ALL_KEYS = _FLOAT_KEYS + _STR_KEYS + _INT_KEYS


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as ConfigError (exit 64)."""

    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="anyon-otto", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"anyon-otto {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_options(p):
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--medium", choices=MEDIA)
        p.add_argument("--beta-h", dest="beta_h", type=float, help="hot-bath inverse temperature")
        p.add_argument("--beta-l", dest="beta_l", type=float, help="cold-bath inverse temperature")
        p.add_argument("--alpha-h", dest="alpha_h", type=float, help="ring: hot flux parameter")
        p.add_argument("--alpha-l", dest="alpha_l", type=float, help="ring: cold flux parameter")
        p.add_argument("--eps0", type=float, help="ring: energy scale (default 1)")
        p.add_argument("--l1", type=float, help="cs-volume: expanded ring size")
        p.add_argument("--l2", type=float, help="cs-volume: compressed ring size")
        p.add_argument("--alpha", type=float, help="cs-volume: fixed coupling (default 0)")
        p.add_argument("--alpha1", type=float, help="cs-coupling: heat-rejection coupling")
        p.add_argument("--alpha2", type=float, help="cs-coupling: heat-intake coupling")
        p.add_argument("--length", type=float, help="cs-coupling: ring size (default 1)")
        p.add_argument("--rel-tol", dest="rel_tol", type=float, help="series relative tolerance")
        p.add_argument("--tail-tol", dest="tail_tol", type=float, help="enumeration tail tolerance")
        p.add_argument("--out", help="output directory")
        p.add_argument("--format", help="comma-separated subset of csv,json,svg")
        p.add_argument("--seed", type=int, help="seed for randomized grids")

    p_cycle = sub.add_parser("cycle", help="run a single Otto cycle")
    add_run_options(p_cycle)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter over a grid")
    add_run_options(p_sweep)
    p_sweep.add_argument("--sweep", help="parameter name to sweep")
    p_sweep.add_argument("--grid", help="grid as start:stop:steps (steps = point count)")

    p_val = sub.add_parser("validate", help="run closed-form vs oracle validation")
    p_val.add_argument("--config", help="flat key=value config file")
    p_val.add_argument("--rel-tol", dest="rel_tol", type=float)
    p_val.add_argument("--tail-tol", dest="tail_tol", type=float)
    p_val.add_argument("--seed", type=int)
    p_val.add_argument(
        "--variant",
        choices=cf.VARIANTS,
        help="formula variant to validate (printed variants are expected to fail)",
    )
    return parser


def _load_config_file(path: str) -> dict:
    cfg = {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    for lineno, raw in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if key not in _ALL_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key: {key}")
        cfg[key] = value.strip()
    return cfg


class _RunConfig:
    """Merged view of config file and flags; flags win."""

    def __init__(self, args: argparse.Namespace):
        self._file = _load_config_file(args.config) if getattr(args, "config", None) else {}
        self._args = args

    def get(self, key: str, default=None):
        cli_val = getattr(self._args, key, None)
        if cli_val is not None:
            return cli_val
        if key in self._file:
            raw = self._file[key]
            try:
                if key in _FLOAT_KEYS:
                    return float(raw)
                if key in _INT_KEYS:
                    return int(raw)
            except ValueError:
                raise ConfigError(f"config value for {key} is not a number: {raw!r}") from None
            return raw
        return default

    def require(self, key: str):
        value = self.get(key)
        if value is None:
            raise ConfigError(f"missing required key: {key}")
        return value


# Domain-safe stand-ins for a swept parameter that is absent from the config;
# each sweep row replaces the value anyway.
_AXIS_PLACEHOLDERS = {
    "alpha_h": 0.0,
    "alpha_l": 0.0,
    "alpha1": 0.0,
    "alpha2": 0.0,
    "alpha": 0.0,
    "l1": 1.0,
    "l2": 1.0,
    "length": 1.0,
    "eps0": 1.0,
}


def _cycle_spec(cfg: _RunConfig, fallback: dict | None = None) -> OttoCycleSpec:
    fallback = fallback or {}

    def req(key: str):
        value = cfg.get(key)
        if value is None:
            value = fallback.get(key)
        if value is None:
            raise ConfigError(f"missing required key: {key}")
        return value

    def opt(key: str, default):
        value = cfg.get(key)
        if value is None:
            value = fallback.get(key)
        return default if value is None else value

    medium = req("medium")
    if medium not in MEDIA:
        raise ConfigError(f"medium must be one of {MEDIA}, got {medium!r}")
    beta_h = req("beta_h")
    beta_l = req("beta_l")
    tail_tol = opt("tail_tol", 1e-13)
    try:
        if medium == "ring":
            return OttoCycleSpec.ring_cycle(
                alpha_h=req("alpha_h"),
                alpha_l=req("alpha_l"),
                beta_h=beta_h,
                beta_l=beta_l,
                eps0=opt("eps0", 1.0),
                tail_tol=tail_tol,
            )
        if medium == "cs-volume":
            return OttoCycleSpec.cs_volume_cycle(
                l1=req("l1"),
                l2=req("l2"),
                alpha=opt("alpha", 0.0),
                beta_h=beta_h,
                beta_l=beta_l,
                tail_tol=tail_tol,
            )
        return OttoCycleSpec.cs_coupling_cycle(
            alpha1=req("alpha1"),
            alpha2=req("alpha2"),
            beta_h=beta_h,
            beta_l=beta_l,
            length=opt("length", 1.0),
            tail_tol=tail_tol,
        )
    except AnyonOttoError as exc:
        raise ConfigError(str(exc)) from exc


def _closed_form_residual(spec: OttoCycleSpec, efficiency: float, cfg: _RunConfig):
    """Residual between the summation efficiency and its closed form, if any."""
    from .special_functions import SumAccuracy

    acc = SumAccuracy(rel_tol=cfg.get("rel_tol", 1e-12))
    try:
        if spec.medium == "ring":
            rep = cf.ring_efficiency_closed(
                spec.control_hot,
                spec.control_cold,
                spec.beta_h,
                spec.beta_l,
                spec.eps0,
                spec.tail_tol,
                acc,
            )
            return rep.rel_residual
        if spec.medium == "cs-coupling":
            rep = cf.cs_efficiency_closed(
                spec.control_cold,
                spec.control_hot,
                spec.beta_h,
                spec.beta_l,
                spec.cs_length,
                spec.tail_tol,
                acc,
            )
            return rep.rel_residual
        analytic = efficiency_cs_volume(spec.control_cold, spec.control_hot)
        return abs(efficiency - analytic) / max(abs(analytic), 1e-300)
    except AnyonOttoError:
        return None


def _parse_formats(cfg: _RunConfig) -> list:
    raw = cfg.get("format", "csv,json")
    formats = [f.strip() for f in str(raw).split(",") if f.strip()]
    if not formats:
        raise ConfigError("format list must be non-empty")
    for f in formats:
        if f not in ("csv", "json", "svg"):
            raise ConfigError(f"unknown output format: {f}")
    return formats


def _out_dir(cfg: _RunConfig, required: bool) -> Path | None:
    out = cfg.get("out")
    if out is None:
        if required:
            raise ConfigError("missing required key: out")
        return None
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# cycle
# ---------------------------------------------------------------------------


def _cmd_cycle(args) -> int:
    cfg = _RunConfig(args)
    spec = _cycle_spec(cfg)
    try:
        report = run_cycle(spec)
    except DegenerateCycle as exc:
        print(f"medium = {spec.medium}")
        print("regime = degenerate")
        print(f"note = {exc}")
        return EXIT_NON_ENGINE

    residual = _closed_form_residual(spec, report.efficiency, cfg)
    print(f"medium = {spec.medium}")
    print(f"efficiency = {_fmt(report.efficiency)}")
    print(f"regime = {report.regime}")
    print(f"Q_in = {_fmt(report.q_in)}")
    print(f"Q_out = {_fmt(report.q_out)}")
    print(f"W_out = {_fmt(report.w_out)}")
    if residual is not None:
        print(f"closed_form_residual = {_fmt(residual)}")

    out = _out_dir(cfg, required=False)
    if out is not None:
        formats = _parse_formats(cfg)
        payload = {
            "medium": spec.medium,
            "beta_h": spec.beta_h,
            "beta_l": spec.beta_l,
            "control_hot": spec.control_hot,
            "control_cold": spec.control_cold,
            "efficiency": report.efficiency,
            "regime": report.regime,
            "q_in": report.q_in,
            "q_out": report.q_out,
            "w_out": report.w_out,
            "closed_form_residual": residual,
            "n_levels": len(report.labels),
        }
        if "json" in formats:
            (out / "cycle.json").write_text(
                json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
        if "csv" in formats:
            header = "medium,efficiency,regime,q_in,q_out,w_out,residual"
            row = ",".join(
                [
                    spec.medium,
                    _fmt(report.efficiency),
                    report.regime,
                    _fmt(report.q_in),
                    _fmt(report.q_out),
                    _fmt(report.w_out),
                    "" if residual is None else _fmt(residual),
                ]
            )
            (out / "cycle.csv").write_text(header + "\n" + row + "\n", encoding="utf-8")
    return EXIT_OK if report.regime == REGIME_ENGINE else EXIT_NON_ENGINE


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _parse_grid(raw: str) -> list:
    parts = str(raw).split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be start:stop:steps, got {raw!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        steps = int(parts[2])
    except ValueError:
        raise ConfigError(f"grid must be numeric start:stop:steps, got {raw!r}") from None
    if steps < 0:
        raise ConfigError("grid steps must be >= 0")
    if steps == 0:
        return []
    if steps == 1:
        return [start]
    return [start + (stop - start) * k / (steps - 1) for k in range(steps)]


def _sweep_csv(axis: str, rows, residuals) -> str:
    lines = [f"{axis},efficiency,q_in,q_out,w_out,regime,residual,error"]
    for row, residual in zip(rows, residuals):
        if row.report is None:
            err = (row.error or "error").replace(",", ";").replace("\n", " ")
            lines.append(f"{_fmt(row.value)},,,,,,,{err}")
        else:
            r = row.report
            lines.append(
                ",".join(
                    [
                        _fmt(row.value),
                        _fmt(r.efficiency),
                        _fmt(r.q_in),
                        _fmt(r.q_out),
                        _fmt(r.w_out),
                        r.regime,
                        "" if residual is None else _fmt(residual),
                        "",
                    ]
                )
            )
    return "\n".join(lines) + "\n"


def _sweep_svg(axis: str, rows) -> str:
    width, height = 640, 440
    ml, mr, mt, mb = 70, 20, 20, 60
    plot_w, plot_h = width - ml - mr, height - mt - mb
    pts = [
        (row.value, row.report.efficiency, row.report.regime)
        for row in rows
        if row.report is not None and math.isfinite(row.report.efficiency)
    ]
    if pts:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        x_lo, x_hi = min(xs), max(xs)
        y_lo, y_hi = min(ys), max(ys)
    else:
        x_lo, x_hi, y_lo, y_hi = 0.0, 1.0, 0.0, 1.0
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    x_pad = 0.05 * (x_hi - x_lo)
    y_pad = 0.05 * (y_hi - y_lo)
    x_lo, x_hi = x_lo - x_pad, x_hi + x_pad
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    def sx(x):
        return ml + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y):
        return mt + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<style>"
        "text{font-family:sans-serif;font-size:12px;fill:#222}"
        ".axis{stroke:#222;stroke-width:1}"
        ".grid{stroke:#ddd;stroke-width:0.5}"
        ".curve{fill:none;stroke:#999;stroke-width:1}"
        ".engine{fill:#1f77b4}.refrigerator{fill:#d62728}.degenerate{fill:#7f7f7f}"
        ".pt{stroke:#222;stroke-width:0.5}"
        "</style>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]
    for k in range(5):
        fx = x_lo + (x_hi - x_lo) * k / 4
        fy = y_lo + (y_hi - y_lo) * k / 4
        gx, gy = sx(fx), sy(fy)
        parts.append(f'<line class="grid" x1="{gx:.2f}" y1="{mt}" x2="{gx:.2f}" y2="{mt+plot_h}"/>')
        parts.append(f'<line class="grid" x1="{ml}" y1="{gy:.2f}" x2="{ml+plot_w}" y2="{gy:.2f}"/>')
        parts.append(f'<text x="{gx:.2f}" y="{mt+plot_h+16}" text-anchor="middle">{fx:.4g}</text>')
        parts.append(f'<text x="{ml-6}" y="{gy:.2f}" text-anchor="end" dominant-baseline="middle">{fy:.4g}</text>')
    parts.append(f'<line class="axis" x1="{ml}" y1="{mt+plot_h}" x2="{ml+plot_w}" y2="{mt+plot_h}"/>')
    parts.append(f'<line class="axis" x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt+plot_h}"/>')
    parts.append(
        f'<text x="{ml+plot_w/2:.2f}" y="{height-20}" text-anchor="middle">{axis}</text>'
    )
    parts.append(
        f'<text x="18" y="{mt+plot_h/2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {mt+plot_h/2:.2f})">efficiency η</text>'
    )
    if len(pts) > 1:
        path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y, _ in pts)
        parts.append(f'<polyline class="curve" points="{path}"/>')
    for x, y, regime in pts:
        parts.append(
            f'<circle class="pt {regime}" cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4">'
            f"<title>{axis}={x:.6g}, η={y:.6g}, {regime}</title></circle>"
        )
    legend_y = mt + 8
    for i, regime in enumerate(("engine", "refrigerator", "degenerate")):
        cy = legend_y + i * 16
        parts.append(
            f'<circle class="pt {regime}" cx="{ml+plot_w-110}" cy="{cy}" r="4"/>'
        )
        parts.append(f'<text x="{ml+plot_w-100}" y="{cy+4}">{regime}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _cmd_sweep(args) -> int:
    cfg = _RunConfig(args)
    axis = cfg.require("sweep")
    grid = _parse_grid(cfg.require("grid"))
    medium = cfg.require("medium")
    if medium not in MEDIA:
        raise ConfigError(f"medium must be one of {MEDIA}, got {medium!r}")
    if axis not in sweep_axes(medium):
        raise ConfigError(
            f"cannot sweep {axis!r} for medium {medium!r}; "
            f"choose one of {sweep_axes(medium)}"
        )
    fallback = {axis: _AXIS_PLACEHOLDERS[axis]} if axis in _AXIS_PLACEHOLDERS else {}
    template = _cycle_spec(cfg, fallback)
    out = _out_dir(cfg, required=True)
    formats = _parse_formats(cfg)

    rows = []
    residuals = []
    wall_times = []
    for value in grid:
        t0 = time.perf_counter()
        row = sweep_efficiency(template, axis, [value])[0]
        residual = None
        if row.report is not None:
            try:
                spec_v = dataclasses.replace(
                    template, **{_AXIS_FIELDS[template.medium][axis]: float(value)}
                )
                residual = _closed_form_residual(spec_v, row.report.efficiency, cfg)
            except AnyonOttoError:
                residual = None
        rows.append(row)
        residuals.append(residual)
        wall_times.append(time.perf_counter() - t0)

    try:
        if "csv" in formats:
            (out / "sweep.csv").write_text(_sweep_csv(axis, rows, residuals), encoding="utf-8", newline="")
        if "json" in formats:
            payload = {
                "version": __version__,
                "medium": template.medium,
                "axis": axis,
                "rows": [
                    {
                        "value": row.value,
                        "efficiency": None if row.report is None else row.report.efficiency,
                        "q_in": None if row.report is None else row.report.q_in,
                        "q_out": None if row.report is None else row.report.q_out,
                        "w_out": None if row.report is None else row.report.w_out,
                        "regime": None if row.report is None else row.report.regime,
                        "residual": residual,
                        "error": row.error,
                        "wall_time_s": wt,
                    }
                    for row, residual, wt in zip(rows, residuals, wall_times)
                ],
            }
            (out / "sweep.json").write_text(
                json.dumps(payload, indent=2) + "\n", encoding="utf-8"
            )
        if "svg" in formats:
            (out / "sweep.svg").write_text(_sweep_svg(axis, rows), encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_ERROR

    n_ok = sum(1 for r in rows if r.report is not None)
    print(f"sweep {axis}: {len(rows)} points, {n_ok} computed, written to {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def _cmd_validate(args) -> int:
    cfg = _RunConfig(args)
    rel_tol = cfg.get("rel_tol", 1e-12)
    tail_tol = cfg.get("tail_tol", 1e-14)
    seed = cfg.get("seed", 0)
    variant = cfg.get("variant", cf.VARIANT_REDERIVED)
    results = run_validation(
        rel_tol=rel_tol, tail_tol=tail_tol, seed=seed, variant=variant
    )
    worst = None
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(
            f"{status} {res.name} [{res.formula_variant}]: "
            f"max residual {res.max_residual:.3e} (threshold {res.threshold:.3e}, "
            f"{res.n_points} points, {res.n_errors} errors)"
        )
        if not res.passed and (worst is None or res.max_residual > worst.max_residual):
            worst = res
    if worst is not None:
        print(
            f"validation failed: {worst.name} [{worst.formula_variant}] "
            f"worst at {worst.worst_point}"
        )
        return EXIT_VALIDATION
    print("validation passed: all families within thresholds")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "cycle":
            return _cmd_cycle(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_validate(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except AnyonOttoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
