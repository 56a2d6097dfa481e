"""
Closed form against simulation
==============================

The analytic engine and the Monte Carlo engine share only the configuration
type. Running both on random operating points is the quickest way to see
they describe the same system.
"""

import numpy as np

from ehrelay import config_from_operating_point, validate

rng = np.random.default_rng(3)
modes = ("no_interference", "fixed_inr", "fixed_sir")

## A handful of random configurations
for k in range(6):
    mode = modes[k % 3]
    kw = {"fixed_inr": {"inr_db": rng.uniform(0, 15)},
          "fixed_sir": {"sir_db": rng.uniform(0, 20)}}.get(mode, {})
    config = config_from_operating_point(int(rng.integers(1, 5)), rng.uniform(5, 30), mode,
                                         theta=rng.uniform(0.1, 0.9), **kw)
    report = validate(config, n_trials=10**6, seed=k)
    verdict = "ok" if report.passed else "MISMATCH"
    print(f"{mode:16s} L={config.n_relays}  analytic={report.analytic.p_out:.5f}  "
          f"simulated={report.estimate.p_hat:.5f} +- {report.estimate.stderr:.5f}  {verdict}")

## Equal signal and interference rates
# A 0 dB SIR makes the closed form's prefactor singular; the analytic engine
# evaluates just either side of the singular point instead.
config = config_from_operating_point(2, 20.0, "fixed_sir", sir_db=0.0, theta=0.5)
report = validate(config, n_trials=10**6, seed=99)
print(f"SIR 0 dB: {report.analytic.branch.value}, analytic={report.analytic.p_out:.5f}, "
      f"simulated={report.estimate.p_hat:.5f}, passed={report.passed}")

## Every check in one report
for check in report.checks:
    print(f"  {'PASS' if check.passed else 'FAIL'} {check.name}: {check.detail}")
