"""
Choosing the power-splitting ratio
==================================

Each relay splits its received power: a fraction ``theta`` charges the
battery that pays for the second hop, the rest goes to decoding. Too little
harvesting starves the relay-to-destination link, too much starves the
decoder. This script sweeps ``theta`` with 1, 2 and 3 relays at a first-hop
SNR of 20 dB without interference and locates the best split.
"""

from pathlib import Path

import numpy as np

from ehrelay import config_from_operating_point, find_optimal_theta, sweep_theta
from ehrelay.io import emit_svg

out_dir = Path(__file__).with_name("output")
out_dir.mkdir(exist_ok=True)

## The analytic sweep
grid = tuple(np.round(np.arange(0.02, 0.99, 0.02), 2))
sweeps = {}
for L in (1, 2, 3):
    template = config_from_operating_point(L, 20.0, "no_interference")
    sweeps[L] = sweep_theta(template, grid)
    print(f"L={L}: P_out(0.02)={sweeps[L].rows[0].analytic:.4f}  "
          f"P_out(0.98)={sweeps[L].rows[-1].analytic:.4f}")

## Both ends are bad, so there is an interior optimum
for L in (1, 2, 3):
    theta_star, p_star = find_optimal_theta(config_from_operating_point(L, 20.0))
    print(f"L={L}: best theta = {theta_star:.4f}, outage there = {p_star:.4e}")

## More relays never hurt: the curves are ordered pointwise
assert np.all(sweeps[3].analytic() <= sweeps[2].analytic())
assert np.all(sweeps[2].analytic() <= sweeps[1].analytic())

## Spot-check the L=2 curve with simulation and draw it
checked = sweep_theta(config_from_operating_point(2, 20.0), (0.1, 0.3, 0.5, 0.6, 0.7, 0.9),
                      with_mc=True, n_trials=200_000, seed=1)
for row in checked.rows:
    print(f"theta={row.x:.2f}  analytic={row.analytic:.5f}  "
          f"simulated={row.empirical:.5f} +- {row.stderr:.5f}")
emit_svg(checked, out_dir / "theta_sweep_L2.svg")
print("wrote", out_dir / "theta_sweep_L2.svg")
