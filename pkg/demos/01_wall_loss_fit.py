"""
Per-wall loss from the 2.45 GHz wall-loss table
===============================================

Extra path loss was measured behind one, two and three 25 cm cement-mortar
walls. A straight line through the origin in the wall count gives the loss
of a single wall.
"""

# %%
from multiwall import compare_wall_losses, fit_wall_loss
from multiwall.dataio import table1_samples

samples = table1_samples()
for s in samples:
    print(f"{s.m_walls} walls: {s.loss_db:6.2f} dB (std {s.std_db:.2f} dB) at {s.distance_m} m")

# %%
# Least squares through the origin: sum(m * loss) / sum(m**2).
fit = fit_wall_loss(samples)
print(f"\nPL_w = {fit.params.pl_w_db:.3f} dB/wall, rmse {fit.rmse_db:.2f} dB")

# %%
# Letting the line float adds an intercept and pulls the slope well away
# from the per-wall value, which is why the origin constraint matters here.
import numpy as np

slope, intercept = np.polyfit([s.m_walls for s in samples], [s.loss_db for s in samples], 1)
print(f"with intercept: slope {slope:.3f} dB/wall, intercept {intercept:.2f} dB")

# %%
# How far is each measured row from M x 17.78 dB, in units of its spread?
report = compare_wall_losses(samples, 17.78)
for s, p in zip(samples, report.per_point):
    print(f"M={s.m_walls}: predicted {p.predicted_db:6.2f}  measured {p.observed_db:6.2f}  "
          f"residual {p.residual_db:+.2f} dB = {abs(p.residual_db) / s.std_db:.2f} std")
