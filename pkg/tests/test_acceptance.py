"""Acceptance gate: one ``test_criterion_NN_*`` group per criterion.

The per-criterion verdicts are printed in the ``acceptance criteria``
section of the pytest terminal summary (see ``conftest.py``).
"""

import io
import math
import time

import numpy as np
import pytest

from ehrelay.analytic import (
    Branch,
    conditional_pdf_z,
    first_hop_success,
    joint_cdf_below,
    outage_for_config,
    outage_probability,
    outage_sum_literal,
)
from ehrelay.cli import main
from ehrelay.experiments import (
    estimate_diversity_order,
    find_optimal_theta,
    sweep_snr,
    sweep_theta,
)
from ehrelay.model import DerivedRates, config_from_operating_point, derive_rates
from ehrelay.montecarlo import estimate_outage
from ehrelay.numerics import gen_inc_gamma

import oracles

MC_TRIALS = 10**6
THETA_GRID = tuple(round(0.02 * k, 2) for k in range(1, 50))


def _random_configs(n=24, seed=20240611):
    rng = np.random.default_rng(seed)
    modes = ("no_interference", "fixed_inr", "fixed_sir")
    out = []
    for k in range(n):
        mode = modes[k % 3]
        kw = {}
        if mode == "fixed_inr":
            kw["inr_db"] = round(float(rng.uniform(0.0, 15.0)), 3)
        elif mode == "fixed_sir":
            kw["sir_db"] = round(float(rng.uniform(0.0, 20.0)), 3)
        out.append(config_from_operating_point(
            int(rng.integers(1, 5)), round(float(rng.uniform(5.0, 30.0)), 3), mode,
            theta=round(float(rng.uniform(0.1, 0.9)), 3), **kw))
    return out


RANDOM_CONFIGS = _random_configs()


def _random_points(n=100, seed=7):
    """(gbar_h, gbar_beta, gbar_g, gamma_th); every fifth point interference-free."""
    rng = np.random.default_rng(seed)
    pts = []
    for k in range(n):
        gh = 10 ** rng.uniform(0.0, 3.0)
        gb = 0.0 if k % 5 == 0 else 10 ** rng.uniform(-2.0, 2.0)
        gg = 10 ** rng.uniform(-1.0, 2.0)
        gth = 10 ** rng.uniform(-1.0, 1.0)
        pts.append((float(gh), float(gb), float(gg), float(gth)))
    return pts


RANDOM_POINTS = _random_points()


def _label(c):
    return f"L{c.n_relays}-ps{c.p_s:.3g}-pi{c.p_i:.3g}-th{c.theta}"


def _agrees(p_out, est):
    return abs(p_out - est.p_hat) <= max(3.0 * est.stderr, 1e-3)


@pytest.mark.parametrize("config", RANDOM_CONFIGS, ids=_label)
def test_criterion_01_analytic_matches_monte_carlo(config):
    start = time.perf_counter()
    p_out = outage_for_config(config).p_out
    est = estimate_outage(config, MC_TRIALS, seed=hash(_label(config)) & 0xFFFF)
    assert _agrees(p_out, est), (p_out, est)
    # the whole grid must fit in ten minutes
    assert time.perf_counter() - start < 600.0 / len(RANDOM_CONFIGS)


def test_criterion_01_covers_required_ranges():
    assert len(RANDOM_CONFIGS) >= 20
    assert {c.n_relays for c in RANDOM_CONFIGS} == {1, 2, 3, 4}
    assert all(0.1 <= c.theta <= 0.9 for c in RANDOM_CONFIGS)
    assert all(5.0 <= 10 * math.log10(c.p_s) <= 30.0 for c in RANDOM_CONFIGS)
    kinds = {derive_rates(c).interference_free for c in RANDOM_CONFIGS}
    assert kinds == {True, False}


@pytest.mark.parametrize("config", RANDOM_CONFIGS, ids=_label)
def test_criterion_02_binomial_collapse(config):
    rates = derive_rates(config)
    for L in range(1, 9):
        point = outage_probability(rates, config.gamma_th, L)
        literal = outage_sum_literal(point.p_first_hop_fail, point.p_joint_below, L)
        assert literal == pytest.approx(point.p_joint_below ** L, rel=1e-10)
        assert point.p_out == point.p_joint_below ** L


@pytest.mark.parametrize("gh,gb,gg,gth", RANDOM_POINTS)
def test_criterion_03_closed_form_matches_quadrature(gh, gb, gg, gth):
    rates = DerivedRates(gh, gb, gg)
    closed = joint_cdf_below(rates, gth)
    assert closed == pytest.approx(oracles.joint_by_direct_quadrature(gh, gb, gg, gth),
                                   rel=1e-6)
    # and with the package's own density in the integral
    via_pdf = oracles.joint_by_direct_quadrature(
        gh, gb, gg, gth, pdf=lambda z: conditional_pdf_z(rates, gth, z))
    assert closed == pytest.approx(via_pdf, rel=1e-6)


@pytest.mark.parametrize("gh,gb,gg,gth", RANDOM_POINTS)
def test_criterion_04_density_mass(gh, gb, gg, gth):
    rates = DerivedRates(gh, gb, gg)
    success = first_hop_success(rates, gth)
    assert success == pytest.approx(oracles.first_hop_success_formula(gh, gb, gth), rel=1e-14)
    mass = oracles._quad_above(lambda z: conditional_pdf_z(rates, gth, z), gth,
                               oracles._scales(gh, gb, gth))
    assert mass == pytest.approx(success, rel=1e-8)


@pytest.fixture(scope="module")
def theta_curves():
    return {L: sweep_theta(config_from_operating_point(L, 20.0, "no_interference"),
                           THETA_GRID).analytic()
            for L in (1, 2, 3)}


@pytest.mark.parametrize("L", [1, 2, 3])
def test_criterion_05_theta_sweep_unimodal(theta_curves, L):
    vals = theta_curves[L]
    steps = np.sign(np.diff(vals))
    assert np.all(steps != 0)
    turns = np.count_nonzero(np.diff(steps))
    assert turns == 1 and steps[0] < 0 < steps[-1]
    assert 0.5 <= THETA_GRID[int(np.argmin(vals))] <= 0.7
    theta_star, _ = find_optimal_theta(config_from_operating_point(L, 20.0, "no_interference"))
    assert 0.5 <= theta_star <= 0.7


def test_criterion_05_curves_ordered(theta_curves):
    assert np.all(theta_curves[3] <= theta_curves[2])
    assert np.all(theta_curves[2] <= theta_curves[1])


def test_criterion_06_diversity_under_fixed_inr():
    slopes = []
    for L in (1, 2, 3):
        res = sweep_snr(L, (35.0, 45.0), "fixed_inr", inr_db=10.0, theta=0.6)
        slope = estimate_diversity_order(res, 35.0, 45.0).slope
        assert slope == pytest.approx(L, rel=0.2)
        slopes.append(slope)
    assert slopes == sorted(slopes)


@pytest.mark.parametrize("L", [1, 2, 3])
def test_criterion_07_error_floor_under_fixed_sir(L):
    res = sweep_snr(L, (40.0, 50.0), "fixed_sir", sir_db=20.0, theta=0.6)
    assert res.row_at(50.0).analytic / res.row_at(40.0).analytic >= 0.8
    assert estimate_diversity_order(res, 40.0, 50.0).slope < 0.3


def test_criterion_08_gamma_sandwich():
    for x in np.logspace(-2, 1.5, 10):
        upper = gen_inc_gamma(1.0, x, 0.0)
        assert upper == pytest.approx(math.exp(-x), rel=1e-10)
        for b in np.logspace(-3, 1, 10):
            value = gen_inc_gamma(1.0, x, b)
            assert math.exp(-b / x) * upper <= value <= upper


def _validate_csv(workers):
    out, err = io.StringIO(), io.StringIO()
    code = main(["validate", "--relays", "3", "--snr1-db", "15", "--mode", "fixed-inr",
                 "--inr-db", "5", "--theta", "0.5", "--trials", "300000", "--seed", "77",
                 "--workers", str(workers)], out, err)
    assert code == 0, err.getvalue()
    return out.getvalue()


def test_criterion_09_validate_is_deterministic():
    outputs = [_validate_csv(w) for w in (1, 2, 8, 1, 8)]
    assert len(set(outputs)) == 1
    assert outputs[0].count("\n") == 2


@pytest.mark.parametrize("theta", [0.0, 1.0])
@pytest.mark.parametrize("mode,kw", [("no_interference", {}), ("fixed_inr", {"inr_db": 10.0}),
                                     ("fixed_sir", {"sir_db": 0.0})])
def test_criterion_10_forced_outage(theta, mode, kw):
    c = config_from_operating_point(3, 20.0, mode, theta=theta, **kw)
    point = outage_for_config(c)
    assert point.p_out == 1.0 and point.branch is Branch.FORCED_OUTAGE
    assert estimate_outage(c, 100_000, seed=1).p_hat == 1.0


@pytest.mark.parametrize("L,snr_db,theta", [(1, 10.0, 0.3), (2, 20.0, 0.6), (4, 25.0, 0.8)])
def test_criterion_10_equal_rates(L, snr_db, theta):
    # SIR of 0 dB makes the first-hop signal and interference rates coincide.
    c = config_from_operating_point(L, snr_db, "fixed_sir", sir_db=0.0, theta=theta)
    rates = derive_rates(c)
    assert rates.gbar_h == rates.gbar_beta
    point = outage_for_config(c)
    assert point.branch is Branch.DEGENERATE_EQUAL_RATES and 0.0 < point.p_out < 1.0
    assert _agrees(point.p_out, estimate_outage(c, MC_TRIALS, seed=L))
