"""
Coverage map over a floor plan
==============================

Predict received power on a 10 cm raster around a 20 dBm transmitter placed
in front of three parallel walls, and write CSV and PGM heatmaps.
"""

# %%
from pathlib import Path

from multiwall import GridSpec, export_csv, export_pgm, generate_grid
from multiwall.dataio import demo_params, demo_plan

plan = demo_plan()
params = demo_params()
print(plan.name)
print(f"PL0 {params.pl0_db:.2f} dB, n {params.n}, PL_w {params.pl_w_db} dB/wall")

# %%
spec = GridSpec(-2.0, -4.0, 8.0, 4.0, 0.1)
grid = generate_grid(plan, (0.0, 0.05), params, "simplified", spec, quantity="rss", tx_power_dbm=20.0)
print(f"{grid.n_cols} x {grid.n_rows} cells, RSS {grid.values.min():.1f} .. {grid.values.max():.1f} dBm")

# %%
# Along the row through the transmitter, each wall knocks the signal down by PL_w.
row = grid.values[40]
for x in (0.95, 1.05, 2.95, 3.05, 4.95, 5.05):
    col = int((x - spec.min_x) / spec.resolution_m)
    print(f"x = {x:4.2f} m: {row[col]:7.2f} dBm")

# %%
out = Path("coverage_out")
out.mkdir(exist_ok=True)
(out / "demo_rss.csv").write_text(export_csv(grid))
(out / "demo_rss.pgm").write_bytes(export_pgm(grid, -100.0, -20.0))
print(f"wrote {out}/demo_rss.csv and {out}/demo_rss.pgm")
