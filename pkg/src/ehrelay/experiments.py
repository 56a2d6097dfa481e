"""Parameter sweeps, optimal power splitting, diversity slopes and cross-validation."""

from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .analytic import OutagePoint, first_hop_success, outage_for_config
from .errors import EhRelayError, NonUnimodal, OutOfRange, ZeroProbability
from .model import SystemConfig, config_from_operating_point, derive_rates
from .montecarlo import OutageEstimate, simulate

__all__ = [
    "SweepRow",
    "SweepResult",
    "DiversityEstimate",
    "Check",
    "ValidationReport",
    "DEFAULT_THETA_GRID",
    "DEFAULT_SNR_GRID_DB",
    "sweep_theta",
    "sweep_snr",
    "find_optimal_theta",
    "estimate_diversity_order",
    "agreement_bound",
    "validate",
    "row_seed",
]

DEFAULT_THETA_GRID = tuple(round(0.02 * k, 2) for k in range(1, 50))
DEFAULT_SNR_GRID_DB = tuple(float(s) for s in range(0, 55, 5))

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SweepRow:
    x: float
    analytic: float
    empirical: float | None = None
    stderr: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class SweepResult:
    variable_name: str
    rows: tuple[SweepRow, ...]
    config_snapshot: SystemConfig

    def xs(self) -> np.ndarray:
        return np.array([r.x for r in self.rows])

    def analytic(self) -> np.ndarray:
        return np.array([r.analytic for r in self.rows])

    def row_at(self, x: float) -> SweepRow:
        for row in self.rows:
            if math.isclose(row.x, x, rel_tol=1e-12, abs_tol=1e-12):
                return row
        raise OutOfRange(f"{self.variable_name}={x} is not in the sweep")


@dataclass(frozen=True)
class DiversityEstimate:
    snr_lo_db: float
    snr_hi_db: float
    slope: float


def row_seed(seed: int, index: int) -> int:
    """Independent 64-bit seed for row ``index`` of a sweep."""
    state = np.random.SeedSequence([int(seed), int(index)]).generate_state(1, np.uint64)
    return int(state[0])


def _row(x: float, config: SystemConfig, with_mc: bool, n_trials: int, seed: int,
         workers: int | None) -> SweepRow:
    try:
        analytic = outage_for_config(config).p_out
    except EhRelayError as exc:
        return SweepRow(x, math.nan, error=f"{type(exc).__name__}: {exc}")
    if not with_mc:
        return SweepRow(x, analytic)
    est = simulate(config, n_trials, seed, workers).estimate
    return SweepRow(x, analytic, est.p_hat, est.stderr)


def _check_ascending(grid: Sequence[float], name: str):
    if len(grid) == 0:
        raise ValueError(f"{name} grid is empty")
    if any(b <= a for a, b in zip(grid[:-1], grid[1:])):
        raise ValueError(f"{name} grid must be strictly ascending")


def sweep_theta(template: SystemConfig, theta_grid: Sequence[float] = DEFAULT_THETA_GRID,
                with_mc: bool = False, n_trials: int = 100_000, seed: int = 0,
                workers: int | None = None) -> SweepResult:
    """Outage versus the power-splitting ratio, everything else from ``template``.

    A point whose analytic evaluation fails is kept with ``analytic=nan`` and
    the error recorded on the row.
    """
    _check_ascending(theta_grid, "theta")
    if not all(0.0 < t < 1.0 for t in theta_grid):
        raise ValueError("theta grid must lie strictly inside (0, 1)")
    rows = tuple(
        _row(float(t), dataclasses.replace(template, theta=float(t)), with_mc, n_trials,
             row_seed(seed, k), workers)
        for k, t in enumerate(theta_grid))
    return SweepResult("theta", rows, template)


def sweep_snr(n_relays: int, snr_grid_db: Sequence[float] = DEFAULT_SNR_GRID_DB,
              mode: str = "no_interference", *, inr_db: float | None = None,
              sir_db: float | None = None, theta: float = 0.6, eta: float = 1.0,
              gamma_th_db: float = 5.0, with_mc: bool = False, n_trials: int = 100_000,
              seed: int = 0, workers: int | None = None) -> SweepResult:
    """Outage versus first-hop average SNR (dB) at a fixed INR, SIR or without interference."""
    _check_ascending(snr_grid_db, "SNR")
    configs = [config_from_operating_point(n_relays, float(s), mode, inr_db=inr_db,
                                           sir_db=sir_db, theta=theta, eta=eta,
                                           gamma_th_db=gamma_th_db)
               for s in snr_grid_db]
    rows = tuple(_row(float(s), c, with_mc, n_trials, row_seed(seed, k), workers)
                 for k, (s, c) in enumerate(zip(snr_grid_db, configs)))
    return SweepResult("snr1_db", rows, configs[0])


def _local_minima(values: np.ndarray) -> list[int]:
    idx = []
    for i, v in enumerate(values):
        left = values[i - 1] if i > 0 else math.inf
        right = values[i + 1] if i < len(values) - 1 else math.inf
        if v <= left and v <= right and (v < left or v < right):
            idx.append(i)
    return idx


def find_optimal_theta(template: SystemConfig, tol: float = 1e-4,
                       noise: float = 1e-9) -> tuple[float, float]:
    """Power-splitting ratio minimizing the analytic outage.

    A 0.02-step scan over [0.01, 0.99] brackets the minimum and golden-section
    search refines it to ``tol``. If the scan shows several local minima whose
    values differ by more than ``noise`` (relative), a :class:`NonUnimodal`
    warning is issued and the best one is refined anyway.

    Returns
    -------
    theta_star, p_out_star : float
    """
    if not 0.0 < tol < 0.1:
        raise ValueError(f"tol must lie in (0, 0.1), got {tol}")

    def objective(theta):
        return outage_for_config(dataclasses.replace(template, theta=theta)).p_out

    grid = np.round(np.arange(0.01, 0.99 + 1e-9, 0.02), 10)
    values = np.array([objective(t) for t in grid])
    best = int(np.argmin(values))
    minima = _local_minima(values)
    if len(minima) > 1:
        spread = max(values[minima]) - min(values[minima])
        if spread > noise * max(values[best], 1e-300):
            warnings.warn(
                f"outage has {len(minima)} local minima in theta at "
                f"{[float(grid[i]) for i in minima]}", NonUnimodal, stacklevel=2)

    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, len(grid) - 1)]
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = objective(c), objective(d)
    while hi - lo > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = objective(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = objective(d)
    theta_star, p_star = (c, fc) if fc <= fd else (d, fd)
    if values[best] < p_star:
        theta_star, p_star = float(grid[best]), float(values[best])
    return float(theta_star), float(p_star)


def estimate_diversity_order(sweep: SweepResult, snr_lo_db: float,
                             snr_hi_db: float) -> DiversityEstimate:
    """Two-point secant slope of ``-log10(P_out)`` per decade of SNR.

    >>> rows = (SweepRow(10.0, 1e-2), SweepRow(20.0, 1e-4))
    >>> estimate_diversity_order(SweepResult("snr1_db", rows, None), 10.0, 20.0).slope
    2.0
    """
    lo = sweep.row_at(snr_lo_db).analytic
    hi = sweep.row_at(snr_hi_db).analytic
    if not (lo > 0 and hi > 0):
        raise ZeroProbability(f"outage underflowed at {snr_lo_db} or {snr_hi_db} dB")
    slope = -(math.log10(hi) - math.log10(lo)) / ((snr_hi_db - snr_lo_db) / 10.0)
    return DiversityEstimate(float(snr_lo_db), float(snr_hi_db), slope + 0.0)


def agreement_bound(stderr: float, floor: float = 1e-3) -> float:
    """Largest analytic-vs-empirical gap counted as agreement."""
    return max(3.0 * stderr, floor)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    config: SystemConfig
    analytic: OutagePoint
    estimate: OutageEstimate
    checks: tuple[Check, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _set_size_check(config: SystemConfig, p_success: float, counts: Sequence[int],
                    alpha: float) -> Check:
    L = config.n_relays
    n = sum(counts)
    expected = np.array([stats.binom.pmf(l, L, p_success) for l in range(L + 1)]) * n
    observed = np.asarray(counts, dtype=float)
    # Pool sparse cells into their neighbour so every expected count is >= 5.
    obs_cells, exp_cells = [], []
    o_acc = e_acc = 0.0
    for o, e in zip(observed, expected):
        o_acc += o
        e_acc += e
        if e_acc >= 5.0:
            obs_cells.append(o_acc)
            exp_cells.append(e_acc)
            o_acc = e_acc = 0.0
    if exp_cells:
        obs_cells[-1] += o_acc
        exp_cells[-1] += e_acc
    else:
        obs_cells, exp_cells = [o_acc], [e_acc]
    if len(exp_cells) < 2:
        # All mass sits in one cell: the histogram must match it exactly.
        ok = bool(np.all((expected < 0.5) == (observed == 0)))
        return Check("set_size_binomial", ok, "single-cell histogram")
    exp_arr = np.array(exp_cells)
    exp_arr *= sum(obs_cells) / exp_arr.sum()
    stat, pvalue = stats.chisquare(obs_cells, exp_arr)
    return Check("set_size_binomial", bool(pvalue >= alpha),
                 f"chi2={stat:.4g} p={pvalue:.4g} cells={len(exp_cells)}")


def validate(config: SystemConfig, n_trials: int = 1_000_000, seed: int = 0,
             workers: int | None = None, *, alpha: float = 1e-3,
             analytic_offset: float = 0.0) -> ValidationReport:
    """Cross-check the closed form against the simulator for one configuration.

    Three checks are made: total outage within :func:`agreement_bound`; the
    fraction of trials in which relay 0 decodes against the first-hop success
    probability, with the same bound; and a chi-square test (significance
    ``alpha``) of the decoding-set size histogram against its binomial law.
    ``analytic_offset`` is added to the analytic outage before comparison
    and exists to exercise the harness.
    """
    if n_trials < 100_000:
        raise ValueError(f"validate needs n_trials >= 1e5, got {n_trials}")
    point = outage_for_config(config)
    summary = simulate(config, n_trials, seed, workers)
    est = summary.estimate
    p_ana = point.p_out + analytic_offset
    gap = abs(p_ana - est.p_hat)
    bound = agreement_bound(est.stderr)
    checks = [Check("outage", gap <= bound, f"|{p_ana:.6g} - {est.p_hat:.6g}| = {gap:.3g} "
                    f"(bound {bound:.3g})")]

    if config.theta == 1.0:
        p_success = 0.0
    else:
        p_success = first_hop_success(derive_rates(config), config.gamma_th)
    frac = summary.first_relay_decodes / n_trials
    se = math.sqrt(frac * (1.0 - frac) / n_trials)
    gap = abs(frac - p_success)
    checks.append(Check("first_hop", gap <= agreement_bound(se),
                        f"|{p_success:.6g} - {frac:.6g}| = {gap:.3g}"))
    checks.append(_set_size_check(config, p_success, summary.set_size_counts, alpha))
    return ValidationReport(config, point, est, tuple(checks))
