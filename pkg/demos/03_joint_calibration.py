"""
Calibrating all three coefficients at once
==========================================

Simulate a survey over the demo plan with 3 dB Gaussian noise and fit the
reference loss, exponent and per-wall loss jointly. Then check how the model
does on fresh points.
"""

# %%
import math

import numpy as np

from multiwall import Measurement, ModelParams, compare, fit_joint, fit_log_distance, simplified_multiwall
from multiwall.dataio import demo_plan

plan = demo_plan()
truth = ModelParams(pl0_db=40.23, n=3.0, pl_w_db=17.78)
rng = np.random.default_rng(2450)


def survey(n):
    out = []
    while len(out) < n:
        rx = (float(rng.uniform(0.3, 7.0)), float(rng.uniform(-2.5, 2.5)))
        if any(abs(rx[0] - x) < 1e-6 for x in (1.0, 3.0, 5.0)):
            continue
        m = sum(rx[0] > x for x in (1.0, 3.0, 5.0))
        pl = simplified_multiwall(truth, math.hypot(*rx), m).total_db + rng.normal(0, 3.0)
        out.append(Measurement((0.0, 0.0), rx, rss_dbm=20.0 - pl, tx_power_dbm=20.0))
    return out


train = survey(300)

# %%
fit = fit_joint(train, plan)
for k, v in fit.coefficients.items():
    print(f"{k:8s} fitted {v:7.3f}   true {getattr(truth, k):7.3f}")
print(f"training rmse {fit.rmse_db:.2f} dB over {fit.n_points} points")

# %%
# The wall-free subset alone pins down PL0 and n, without the wall column.
free = [(m.distance_m, m.path_loss_db) for m in train if m.wall_count(plan) == 0]
ld = fit_log_distance(free)
print(f"wall-free subset ({len(free)} points): PL0 {ld.params.pl0_db:.2f} dB, n {ld.params.n:.2f}")

# %%
test = survey(100)
for model in ("one_slope", "simplified"):
    rep = compare(test, plan, fit.params, model)
    print(f"{model:10s} rmse {rep.rmse_db:6.2f} dB, bias {rep.mean_error_db:+6.2f} dB")
