"""
Error floor with interference that scales with the signal
=========================================================

If the interferer gets louder at the same rate as the source, the
first-hop SINR stops improving with SNR and the outage curve flattens into
an error floor, no matter how many relays are available.
"""

from pathlib import Path

from ehrelay import estimate_diversity_order, sweep_snr
from ehrelay.io import emit_svg

out_dir = Path(__file__).with_name("output")
out_dir.mkdir(exist_ok=True)

grid = tuple(float(s) for s in range(0, 55, 5))

for L in (1, 2, 3):
    res = sweep_snr(L, grid, "fixed_sir", sir_db=20.0, theta=0.6)
    ratio = res.row_at(50.0).analytic / res.row_at(40.0).analytic
    slope = estimate_diversity_order(res, 40.0, 50.0).slope
    print(f"L={L}: P_out(40 dB)={res.row_at(40.0).analytic:.4e}  "
          f"P_out(50 dB)={res.row_at(50.0).analytic:.4e}  ratio={ratio:.3f}  slope={slope:.3f}")
    emit_svg(res, out_dir / f"fixed_sir_L{L}.svg", log_y=True)

## Where does the floor sit?
# With the SIR pinned, the only thing SNR still improves is the second hop,
# which gains from harvesting the interferer too. A lower SIR raises the floor.
for sir in (10.0, 20.0, 30.0):
    res = sweep_snr(2, (50.0,), "fixed_sir", sir_db=sir, theta=0.6)
    print(f"SIR {sir:.0f} dB, L=2: P_out(50 dB) = {res.rows[0].analytic:.3e}")
