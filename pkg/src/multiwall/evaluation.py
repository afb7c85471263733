"""Model-versus-measurement comparison reports."""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import MultiwallError
from .floorplan import FloorPlan, wall_crossings
from .pathloss import Model, ModelParams, cost231_multiwall, one_slope, simplified_multiwall

__all__ = [
    "PointResult",
    "ComparisonReport",
    "compare",
    "compare_wall_losses",
    "descriptive_stats",
    "format_report",
    "report_to_csv",
]


class PointResult(NamedTuple):
    predicted_db: float
    observed_db: float
    residual_db: float
    m_walls: int
    distance_m: float


@dataclass(frozen=True)
class ComparisonReport:
    per_point: tuple[PointResult, ...]
    model: Model

    @property
    def residuals(self) -> np.ndarray:
        return np.array([p.residual_db for p in self.per_point], dtype=float)

    @property
    def rmse_db(self) -> float:
        r = self.residuals
        return float(np.sqrt(np.mean(r * r)))

    @property
    def mean_error_db(self) -> float:
        """Signed mean of observed minus predicted."""
        return float(np.mean(self.residuals))

    @property
    def max_abs_error_db(self) -> float:
        return float(np.max(np.abs(self.residuals)))


def _predict(meas, plan, params, model):
    d = meas.distance_m
    if model is Model.ONE_SLOPE:
        m = meas.wall_count(plan)
        return one_slope(params, d).total_db, m, d
    if meas.m_override is not None:
        m = int(meas.m_override)
        if model is Model.SIMPLIFIED:
            return simplified_multiwall(params, d, m).total_db, m, d
        # no wall identities available: fall back to the single-category loss
        return cost231_multiwall(params, d, [params.pl_w_db] * m).total_db, m, d
    report = wall_crossings(plan, meas.tx, meas.rx)
    if model is Model.SIMPLIFIED:
        return simplified_multiwall(params, d, report.m_total).total_db, report.m_total, d
    losses = plan.wall_losses
    pl = cost231_multiwall(params, d, [losses[i] for i in report.crossed_wall_indices]).total_db
    return pl, report.m_total, d


def compare(measurements, plan: FloorPlan, params: ModelParams, model="simplified") -> ComparisonReport:
    """Residuals (observed - predicted) of a model against measurements.

    Any failing point aborts the whole report; the error names the point index.
    """
    model = Model.parse(model)
    measurements = list(measurements)
    if not measurements:
        raise ValueError("no measurements to compare")
    rows = []
    for i, meas in enumerate(measurements):
        try:
            predicted, m, d = _predict(meas, plan, params, model)
        except (MultiwallError, ValueError) as exc:
            raise type(exc)(f"measurement {i}: {exc}") from exc
        observed = meas.path_loss_db
        rows.append(PointResult(float(predicted), float(observed), float(observed - predicted), int(m), float(d)))
    return ComparisonReport(tuple(rows), model)


def compare_wall_losses(samples, pl_w_db: float) -> ComparisonReport:
    """Measured wall losses against ``m * pl_w_db``, the wall term alone."""
    rows = []
    for s in samples:
        predicted = s.m_walls * pl_w_db
        d = s.distance_m if s.distance_m is not None else math.nan
        rows.append(PointResult(predicted, s.loss_db, s.loss_db - predicted, s.m_walls, d))
    if not rows:
        raise ValueError("no wall-loss samples to compare")
    return ComparisonReport(tuple(rows), Model.SIMPLIFIED)


def descriptive_stats(values) -> tuple[float, float, float, float]:
    """Mean, sample standard deviation (N-1), min and max.

    A single value has standard deviation 0.
    """
    x = np.asarray(list(values), dtype=float)
    if x.size == 0:
        raise ValueError("descriptive_stats of an empty sequence")
    std = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
    return float(np.mean(x)), std, float(np.min(x)), float(np.max(x))


def format_report(report: ComparisonReport, stamp: str | None = None) -> str:
    lines = []
    if stamp:
        lines.append(f"# generated {stamp}")
    lines.append(f"model: {report.model.value}")
    lines.append(f"{'point':>5} {'walls':>5} {'dist_m':>8} {'predicted':>10} {'observed':>10} {'residual':>9}")
    for i, p in enumerate(report.per_point):
        lines.append(
            f"{i:>5} {p.m_walls:>5} {p.distance_m:>8.2f} {p.predicted_db:>10.2f} "
            f"{p.observed_db:>10.2f} {p.residual_db:>9.2f}"
        )
    lines.append(f"rmse_db = {report.rmse_db:.2f}")
    lines.append(f"mean_error_db = {report.mean_error_db:.2f}")
    lines.append(f"max_abs_error_db = {report.max_abs_error_db:.2f}")
    return "\n".join(lines) + "\n"


def report_to_csv(report: ComparisonReport) -> str:
    buf = io.StringIO()
    buf.write("point,predicted_db,observed_db,residual_db,m_walls,distance_m\n")
    for i, p in enumerate(report.per_point):
        buf.write(f"{i},{p.predicted_db!r},{p.observed_db!r},{p.residual_db!r},{p.m_walls},{p.distance_m!r}\n")
    buf.write(f"# model,{report.model.value}\n")
    buf.write(f"# rmse_db,{report.rmse_db!r}\n")
    buf.write(f"# mean_error_db,{report.mean_error_db!r}\n")
    buf.write(f"# max_abs_error_db,{report.max_abs_error_db!r}\n")
    return buf.getvalue()
