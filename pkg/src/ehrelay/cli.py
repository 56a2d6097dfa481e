"""Command-line interface.

Exit codes: 0 success, 1 failed cross-validation, 2 usage or unparsable
config file, 3 invalid configuration values, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from . import experiments
from .analytic import outage_for_config
from .errors import ConfigParseError, InvalidConfig, NumericError
from .io import OperatingPoint, config_from_mapping, emit_csv, emit_svg, load_config
from .model import SystemConfig
from .montecarlo import simulate

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3, 4

COMMANDS = ("outage", "sweep-theta", "sweep-snr", "optimal-theta", "diversity", "validate")


@dataclass
class RunSpec:
    command: str
    config: Union[OperatingPoint, SystemConfig, None]
    output: str | None = None
    plot_path: str | None = None
    log_y: bool = False
    mc_enabled: bool = False
    n_trials: int = 1_000_000
    seed: int = 0
    workers: int | None = None
    theta_grid: tuple[float, ...] = experiments.DEFAULT_THETA_GRID
    snr_grid_db: tuple[float, ...] = experiments.DEFAULT_SNR_GRID_DB
    snr_lo_db: float = 35.0
    snr_hi_db: float = 45.0
    tol: float = 1e-4
    config_path: str | None = None
    overrides: dict = field(default_factory=dict)


def _unit_interval(flag):
    def parse(text):
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects a number, got {text!r}")
        if not 0.0 <= value <= 1.0:
            raise argparse.ArgumentTypeError(f"{flag} must lie in [0, 1], got {value}")
        return value
    return parse


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return value


def _grid(text):
    """``start:stop:step`` (inclusive stop) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(p) for p in text.split(":"))
            if step <= 0:
                raise ValueError
            n = int(np.floor((stop - start) / step + 1e-9)) + 1
            return tuple(round(start + k * step, 12) for k in range(n))
        return tuple(float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; use start:stop:step or a,b,c")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("network")
    g.add_argument("--config", help="flat JSON config file; flags override its values")
    g.add_argument("--relays", type=_positive_int, help="number of relays L")
    g.add_argument("--snr1-db", type=float, help="first-hop average SNR before splitting (dB)")
    g.add_argument("--mode", choices=["no-interference", "fixed-inr", "fixed-sir"])
    g.add_argument("--inr-db", type=float, help="first-hop average INR (dB), fixed-inr mode")
    g.add_argument("--sir-db", type=float, help="first-hop average SIR (dB), fixed-sir mode")
    g.add_argument("--theta", type=_unit_interval("--theta"), help="power-splitting ratio")
    g.add_argument("--eta", type=_unit_interval("--eta"),
                   help="energy conversion efficiency (default 1)")
    g.add_argument("--gamma-th-db", type=float, help="SNR threshold in dB (default 5)")
    o = common.add_argument_group("output")
    o.add_argument("--output", "-o", help="output file (default: standard output)")
    o.add_argument("--plot", dest="plot_path", help="write an SVG chart to this path")
    o.add_argument("--log-y", action="store_true", help="logarithmic y axis in the chart")
    m = common.add_argument_group("monte carlo")
    m.add_argument("--mc", action="store_true", help="add Monte Carlo estimates")
    m.add_argument("--trials", type=_positive_int, default=1_000_000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--workers", type=_positive_int,
                   help="worker threads (default: $EHRELAY_WORKERS or all cores)")

    parser = argparse.ArgumentParser(
        prog="ehrelay",
        description="Outage of energy-harvesting opportunistic DF relay networks.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    sub.add_parser("outage", parents=[common], help="outage of one configuration")
    p = sub.add_parser("sweep-theta", parents=[common], help="outage versus theta")
    p.add_argument("--theta-grid", type=_grid, help="default 0.02:0.98:0.02")
    p = sub.add_parser("sweep-snr", parents=[common], help="outage versus first-hop SNR")
    p.add_argument("--snr-grid", type=_grid, help="dB grid, default 0:50:5")
    p = sub.add_parser("optimal-theta", parents=[common], help="theta minimizing outage")
    p.add_argument("--tol", type=float, default=1e-4, help="theta resolution")
    p = sub.add_parser("diversity", parents=[common], help="two-point diversity slope")
    p.add_argument("--snr-lo-db", type=float, default=35.0)
    p.add_argument("--snr-hi-db", type=float, default=45.0)
    sub.add_parser("validate", parents=[common], help="analytic versus Monte Carlo check")
    return parser


# Commands that choose the first-hop SNR themselves.
_SNR_SWEEPING = ("sweep-snr", "diversity")

_FLAG_KEYS = {"relays": "relays", "snr1_db": "snr1_db", "mode": "mode", "inr_db": "inr_db",
              "sir_db": "sir_db", "theta": "theta", "eta": "eta",
              "gamma_th_db": "gamma_th_db"}


def parse_args(argv: Sequence[str] | None = None) -> RunSpec:
    """Parse ``argv`` into a :class:`RunSpec`.

    Usage errors exit with status 2. The configuration itself (file plus
    flag overrides) is resolved later by :func:`resolve_config`, so that
    value errors map to their own exit status.
    """
    parser = _build_parser()
    ns = parser.parse_args(argv)
    overrides = {}
    for attr, key in _FLAG_KEYS.items():
        value = getattr(ns, attr)
        if value is not None:
            overrides[key] = value.replace("-", "_") if key == "mode" else value
    snr_free = ns.command in _SNR_SWEEPING
    if snr_free:
        overrides.pop("snr1_db", None)
    if ns.config is None:
        missing = [f for f, k in (("--relays", "relays"), ("--snr1-db", "snr1_db"))
                   if k not in overrides and not (k == "snr1_db" and snr_free)]
        if missing:
            parser.error(f"{', '.join(missing)} required without --config")
    if ns.command == "optimal-theta" and not 0.0 < ns.tol < 0.1:
        parser.error(f"--tol must lie in (0, 0.1), got {ns.tol}")
    spec = RunSpec(
        command=ns.command, config=None, output=ns.output, plot_path=ns.plot_path,
        log_y=ns.log_y, mc_enabled=ns.mc or ns.command == "validate", n_trials=ns.trials,
        seed=ns.seed, workers=ns.workers, config_path=ns.config, overrides=overrides)
    if ns.command == "sweep-theta" and ns.theta_grid:
        spec.theta_grid = ns.theta_grid
    if ns.command == "sweep-snr" and ns.snr_grid:
        spec.snr_grid_db = ns.snr_grid
    if ns.command == "optimal-theta":
        spec.tol = ns.tol
    if ns.command == "diversity":
        spec.snr_lo_db, spec.snr_hi_db = ns.snr_lo_db, ns.snr_hi_db
    return spec


def resolve_config(spec: RunSpec) -> Union[OperatingPoint, SystemConfig]:
    """Merge the config file (if any) with flag overrides and validate."""
    data = {}
    if spec.config_path:
        loaded = load_config(spec.config_path)
        if isinstance(loaded, OperatingPoint):
            data = {k: v for k, v in dataclasses.asdict(loaded).items() if v is not None}
        else:
            data = {"relays": loaded.n_relays, "p_s": loaded.p_s, "p_i": loaded.p_i,
                    "omega_h": loaded.omega_h, "omega_g": loaded.omega_g,
                    "omega_beta": loaded.omega_beta, "sigma2_r": loaded.sigma2_r,
                    "sigma2_d": loaded.sigma2_d, "eta": loaded.eta, "theta": loaded.theta,
                    "gamma_th": loaded.gamma_th}
    overrides = dict(spec.overrides)
    if "mode" in overrides:
        # A new mode invalidates the interference level of the old one.
        for key in ("inr_db", "sir_db"):
            if key not in overrides:
                data.pop(key, None)
    if "gamma_th_db" in overrides:
        data.pop("gamma_th", None)
    data.update(overrides)
    if spec.command in _SNR_SWEEPING:
        data.setdefault("snr1_db", 0.0)
    return config_from_mapping(data)


def _to_system(config) -> SystemConfig:
    return config.to_config() if isinstance(config, OperatingPoint) else config


def _snr_sweep(spec: RunSpec, op, grid) -> experiments.SweepResult:
    if not isinstance(op, OperatingPoint):
        raise InvalidConfig("SNR sweeps need an operating-point config (relays, mode, ...)")
    return experiments.sweep_snr(
        op.relays, grid, op.mode, inr_db=op.inr_db, sir_db=op.sir_db, theta=op.theta,
        eta=op.eta, gamma_th_db=op.gamma_th_db, with_mc=spec.mc_enabled,
        n_trials=spec.n_trials, seed=spec.seed, workers=spec.workers)


def run(spec: RunSpec, stdout, stderr) -> int:
    config = spec.config
    system = _to_system(config)
    status = EXIT_OK
    sink = open(spec.output, "w", encoding="utf-8", newline="") if spec.output else stdout
    try:
        if spec.command in ("outage", "validate"):
            if spec.command == "validate":
                report = experiments.validate(system, spec.n_trials, spec.seed, spec.workers)
                point, est = report.analytic, report.estimate
                for check in report.checks:
                    print(f"{'PASS' if check.passed else 'FAIL'} {check.name}: {check.detail}",
                          file=stderr)
                status = EXIT_OK if report.passed else EXIT_FAILED
            else:
                point = outage_for_config(system)
                est = (simulate(system, spec.n_trials, spec.seed, spec.workers).estimate
                       if spec.mc_enabled else None)
            emit_csv(point, sink, x=system.theta, estimate=est)
        elif spec.command == "sweep-theta":
            result = experiments.sweep_theta(system, spec.theta_grid, spec.mc_enabled,
                                             spec.n_trials, spec.seed, spec.workers)
            emit_csv(result, sink)
            if spec.plot_path:
                emit_svg(result, spec.plot_path, spec.log_y)
        elif spec.command == "sweep-snr":
            result = _snr_sweep(spec, config, spec.snr_grid_db)
            emit_csv(result, sink)
            if spec.plot_path:
                emit_svg(result, spec.plot_path, spec.log_y)
        elif spec.command == "optimal-theta":
            theta_star, p_star = experiments.find_optimal_theta(system, spec.tol)
            sink.write(f"theta_star,p_out\n{theta_star:.17e},{p_star:.17e}\n")
        elif spec.command == "diversity":
            result = _snr_sweep(dataclasses.replace(spec, mc_enabled=False), config,
                                (spec.snr_lo_db, spec.snr_hi_db))
            d = experiments.estimate_diversity_order(result, spec.snr_lo_db, spec.snr_hi_db)
            sink.write(f"snr_lo_db,snr_hi_db,slope\n"
                       f"{d.snr_lo_db:.17e},{d.snr_hi_db:.17e},{d.slope:.17e}\n")
    finally:
        if sink is not stdout:
            sink.close()
    return status


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    spec = parse_args(argv)
    try:
        spec.config = resolve_config(spec)
    except ConfigParseError as exc:
        print(f"ehrelay: error: {exc}", file=stderr)
        return EXIT_USAGE
    except (InvalidConfig, OSError) as exc:
        print(f"ehrelay: invalid configuration: {exc}", file=stderr)
        return EXIT_USAGE if isinstance(exc, OSError) else EXIT_INVALID
    try:
        return run(spec, stdout, stderr)
    except InvalidConfig as exc:
        print(f"ehrelay: invalid configuration: {exc}", file=stderr)
        return EXIT_INVALID
    except NumericError as exc:
        print(f"ehrelay: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC


def entry() -> None:
    sys.exit(main())
