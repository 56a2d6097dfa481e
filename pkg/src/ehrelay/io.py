"""Configuration files, CSV tables and SVG line charts."""

from __future__ import annotations

import dataclasses
import json
import math
import warnings
from dataclasses import dataclass
from typing import IO, Union

import numpy as np

from .analytic import OutagePoint
from .errors import ConfigParseError, DegenerateRange, InvalidConfig
from .experiments import SweepResult
from .model import MODES, SystemConfig, config_from_operating_point, db_to_linear
from .montecarlo import OutageEstimate

__all__ = [
    "OperatingPoint",
    "OP_KEYS",
    "PHYSICAL_KEYS",
    "CSV_HEADER",
    "config_from_mapping",
    "load_config",
    "emit_csv",
    "emit_svg",
    "format_number",
]

CSV_HEADER = "x,analytic,montecarlo,stderr"


@dataclass(frozen=True)
class OperatingPoint:
    """A configuration expressed in figure-axis units (dB, SIR/INR)."""

    relays: int
    snr1_db: float
    mode: str = "no_interference"
    inr_db: float | None = None
    sir_db: float | None = None
    theta: float = 0.6
    eta: float = 1.0
    gamma_th_db: float = 5.0

    def to_config(self, **overrides) -> SystemConfig:
        op = dataclasses.replace(self, **overrides)
        return config_from_operating_point(
            op.relays, op.snr1_db, op.mode, inr_db=op.inr_db, sir_db=op.sir_db,
            theta=op.theta, eta=op.eta, gamma_th_db=op.gamma_th_db)


OP_KEYS = {"relays": int, "snr1_db": float, "mode": str, "inr_db": float, "sir_db": float,
           "theta": float, "eta": float, "gamma_th_db": float}
PHYSICAL_KEYS = {"relays": int, "p_s": float, "p_i": float, "omega_h": float,
                 "omega_g": float, "omega_beta": float, "sigma2_r": float,
                 "sigma2_d": float, "eta": float, "theta": float, "gamma_th": float,
                 "gamma_th_db": float}
_PHYSICAL_ONLY = set(PHYSICAL_KEYS) - set(OP_KEYS)


def _coerce(key: str, value, kind):
    if kind is str:
        if not isinstance(value, str):
            raise InvalidConfig(f"{key}: expected a string, got {value!r}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidConfig(f"{key}: expected a number, got {value!r}")
    if kind is int:
        if value != int(value):
            raise InvalidConfig(f"{key}: expected an integer, got {value!r}")
        return int(value)
    return float(value)


def config_from_mapping(data: dict) -> Union[OperatingPoint, SystemConfig]:
    """Validate a flat key/value mapping and build the configuration it names.

    Mappings containing any physical key (``p_s``, ``omega_h``, ...) describe
    a :class:`SystemConfig`; otherwise they describe an :class:`OperatingPoint`.
    """
    physical = bool(_PHYSICAL_ONLY & set(data))
    schema = PHYSICAL_KEYS if physical else OP_KEYS
    unknown = sorted(set(data) - set(schema))
    if unknown:
        raise InvalidConfig(f"unknown key(s) {unknown} for a "
                            f"{'physical' if physical else 'operating-point'} config")
    values = {k: _coerce(k, v, schema[k]) for k, v in data.items() if v is not None}
    if "theta" in values and not 0.0 <= values["theta"] <= 1.0:
        raise InvalidConfig(f"theta: must lie in [0, 1], got {values['theta']}")
    if "eta" in values and not 0.0 <= values["eta"] <= 1.0:
        raise InvalidConfig(f"eta: must lie in [0, 1], got {values['eta']}")

    if physical:
        if "gamma_th" in values and "gamma_th_db" in values:
            raise InvalidConfig("give gamma_th or gamma_th_db, not both")
        gamma_th = values.pop("gamma_th", None)
        gamma_th_db = values.pop("gamma_th_db", 5.0)
        if gamma_th is None:
            gamma_th = db_to_linear(gamma_th_db)
        values.setdefault("eta", 1.0)
        values.setdefault("p_i", 0.0)
        values.setdefault("omega_beta", 0.0 if values["p_i"] == 0.0 else 1.0)
        missing = sorted({"relays", "p_s", "omega_h", "omega_g", "sigma2_r", "sigma2_d",
                          "theta"} - set(values))
        if missing:
            raise InvalidConfig(f"missing key(s) {missing}")
        values["n_relays"] = values.pop("relays")
        return SystemConfig(gamma_th=gamma_th, **values)

    if "mode" in values:
        values["mode"] = values["mode"].replace("-", "_")
        if values["mode"] not in MODES:
            raise InvalidConfig(f"mode: expected one of {MODES}, got {values['mode']!r}")
    missing = sorted({"relays", "snr1_db"} - set(values))
    if missing:
        raise InvalidConfig(f"missing key(s) {missing}")
    op = OperatingPoint(**values)
    op.to_config()  # surfaces range and mode errors now
    return op


def load_config(path) -> Union[OperatingPoint, SystemConfig]:
    """Read a flat JSON object from ``path``; see ``docs/config.md`` for keys.

    Raises
    ------
    ConfigParseError
        Empty file, malformed JSON or a non-object document.
    InvalidConfig
        Unknown keys, wrong types or violated invariants.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if not text.strip():
        raise ConfigParseError(f"{path}: empty configuration file")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") \
            from exc
    if not isinstance(data, dict):
        raise ConfigParseError(f"{path}: expected a JSON object at the top level")
    nested = [k for k, v in data.items() if isinstance(v, (dict, list))]
    if nested:
        raise ConfigParseError(f"{path}: key {nested[0]!r} is not a flat value")
    return config_from_mapping(data)


def format_number(value) -> str:
    """Shortest-safe scientific text: ``float(format_number(v)) == v``."""
    if value is None:
        return ""
    return f"{float(value):.17e}"


def emit_csv(result: Union[SweepResult, OutagePoint], sink: IO[str], *,
             x: float | None = None, estimate: OutageEstimate | None = None) -> None:
    """Write ``result`` as ``x,analytic,montecarlo,stderr`` rows.

    A single :class:`OutagePoint` needs its ``x`` (theta or SNR, depending
    on the command) and optionally the matching Monte Carlo estimate.
    """
    lines = [CSV_HEADER]
    if isinstance(result, SweepResult):
        for row in result.rows:
            lines.append(",".join([format_number(row.x), format_number(row.analytic),
                                   format_number(row.empirical), format_number(row.stderr)]))
    else:
        if x is None:
            raise ValueError("emitting a single OutagePoint needs x")
        lines.append(",".join([
            format_number(x), format_number(result.p_out),
            format_number(estimate.p_hat if estimate else None),
            format_number(estimate.stderr if estimate else None)]))
    sink.write("\n".join(lines) + "\n")


_AXIS_LABELS = {"theta": "Power-splitting ratio θ",
                "snr1_db": "First-hop average SNR (dB)"}


def _nice_ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    span = hi - lo
    raw = span / max(count - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def emit_svg(result: SweepResult, path, log_y: bool = False) -> None:
    """Draw ``result`` as a standalone SVG 1.1 line chart.

    The analytic curve is a polyline and Monte Carlo estimates are circles.
    With ``log_y`` the vertical axis is ``log10`` of the probability and
    nonpositive values are dropped.
    """
    rows = [r for r in result.rows if math.isfinite(r.analytic)]
    if len(rows) < 2:
        raise ValueError("an SVG chart needs at least two finite rows")
    width, height = 640, 420
    left, right, top, bottom = 80, 20, 20, 60
    pw, ph = width - left - right, height - top - bottom

    def ty(v):
        return math.log10(v) if log_y else v

    pts = [(r.x, r.analytic) for r in rows if not log_y or r.analytic > 0]
    marks = [(r.x, r.empirical) for r in rows
             if r.empirical is not None and (not log_y or r.empirical > 0)]
    if len(pts) < 2:
        raise ValueError("fewer than two plottable points")
    xs = [p[0] for p in pts]
    ys = [ty(p[1]) for p in pts + marks]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if y1 == y0:
        warnings.warn("all y values are equal; padding the axis", DegenerateRange,
                      stacklevel=2)
        pad = 0.5 if log_y else max(abs(y0) * 0.1, 0.05)
        y0, y1 = y0 - pad, y1 + pad
    if log_y:
        y0, y1 = math.floor(y0), math.ceil(y1)
    else:
        pad = 0.05 * (y1 - y0)
        y0, y1 = max(0.0, y0 - pad), y1 + pad

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _nice_ticks(x0, x1):
        X = px(t)
        out.append(f'<line x1="{X:.2f}" y1="{top + ph}" x2="{X:.2f}" y2="{top + ph + 5}" '
                   'stroke="black"/>')
        out.append(f'<text x="{X:.2f}" y="{top + ph + 18}" font-size="11" '
                   f'text-anchor="middle">{t:g}</text>')
    yticks = (list(range(int(y0), int(y1) + 1)) if log_y else _nice_ticks(y0, y1))
    for t in yticks:
        Y = py(t)
        label = f"1e{int(t)}" if log_y else f"{t:g}"
        out.append(f'<line x1="{left - 5}" y1="{Y:.2f}" x2="{left + pw}" y2="{Y:.2f}" '
                   'stroke="#dddddd"/>')
        out.append(f'<text x="{left - 8}" y="{Y + 4:.2f}" font-size="11" '
                   f'text-anchor="end">{label}</text>')
    xlabel = _AXIS_LABELS.get(result.variable_name, result.variable_name)
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 15}" font-size="13" '
               f'text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="18" y="{top + ph / 2:.1f}" font-size="13" text-anchor="middle" '
               f'transform="rotate(-90 18 {top + ph / 2:.1f})">Outage probability</text>')
    poly = " ".join(f"{px(x):.2f},{py(ty(y)):.2f}" for x, y in pts)
    out.append(f'<polyline points="{poly}" fill="none" stroke="#1f77b4" stroke-width="2"/>')
    for x, y in marks:
        out.append(f'<circle cx="{px(x):.2f}" cy="{py(ty(y)):.2f}" r="3.5" fill="none" '
                   'stroke="#d62728" stroke-width="1.5"/>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")


def parse_csv(text: str) -> np.ndarray:
    """Read CSV written by :func:`emit_csv`; empty cells become ``nan``."""
    lines = text.strip("\n").split("\n")
    if lines[0] != CSV_HEADER:
        raise ConfigParseError(f"unexpected CSV header {lines[0]!r}")
    return np.array([[float(c) if c else math.nan for c in line.split(",")]
                     for line in lines[1:]], dtype=float).reshape(-1, 4)
