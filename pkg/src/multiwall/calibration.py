"""Least-squares calibration of the multiwall model parameters.

Three fits are provided:

``fit_wall_loss``
    per-wall loss from differential wall-loss samples, a straight line
    through the origin in the wall count;
``fit_log_distance``
    reference loss and exponent from wall-free (distance, path loss) pairs;
``fit_joint``
    all three coefficients at once from measurements over a floor plan.

Linear systems go through an SVD so rank deficiency is detected from the
singular values rather than hidden by the normal equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import CalibrationError, RankDeficientError
from .floorplan import FloorPlan, Point2D, straight_line_distance, wall_crossings
from .pathloss import DEFAULT_PARAMS, ModelParams

__all__ = [
    "RANK_RTOL",
    "WallLossSample",
    "Measurement",
    "FitResult",
    "differential_wall_loss",
    "lstsq",
    "fit_wall_loss",
    "fit_log_distance",
    "fit_joint",
    "joint_design",
]

RANK_RTOL = 1e-10


@dataclass(frozen=True)
class WallLossSample:
    """Extra loss observed behind ``m_walls`` walls, e.g. one row of a wall-loss table."""

    m_walls: int
    loss_db: float
    std_db: float | None = None
    distance_m: float | None = None

    def __post_init__(self):
        if int(self.m_walls) != self.m_walls or self.m_walls < 1:
            raise ValueError(f"m_walls must be an integer >= 1, got {self.m_walls}")
        if not math.isfinite(self.loss_db):
            raise ValueError(f"loss_db must be finite, got {self.loss_db}")


@dataclass(frozen=True)
class Measurement:
    tx: Point2D
    rx: Point2D
    rss_dbm: float | None = None
    pl_db: float | None = None
    tx_power_dbm: float | None = None
    m_override: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "tx", Point2D(*self.tx))
        object.__setattr__(self, "rx", Point2D(*self.rx))
        if (self.rss_dbm is None) == (self.pl_db is None):
            raise ValueError("exactly one of rss_dbm and pl_db must be given")
        if self.rss_dbm is not None and self.tx_power_dbm is None:
            raise ValueError("an rss_dbm observation needs tx_power_dbm")
        if self.m_override is not None and (int(self.m_override) != self.m_override or self.m_override < 0):
            raise ValueError(f"m_override must be a non-negative integer, got {self.m_override}")

    @property
    def path_loss_db(self) -> float:
        """Observed path loss; RSS is converted with zero antenna gains."""
        if self.pl_db is not None:
            return self.pl_db
        return self.tx_power_dbm - self.rss_dbm

    @property
    def distance_m(self) -> float:
        return straight_line_distance(self.tx, self.rx)

    def wall_count(self, plan: FloorPlan) -> int:
        if self.m_override is not None:
            return int(self.m_override)
        return wall_crossings(plan, self.tx, self.rx).m_total


@dataclass(frozen=True)
class FitResult:
    params: ModelParams
    residuals_db: tuple[float, ...]
    fitted: tuple[str, ...] = ()
    coefficients: dict[str, float] = field(default_factory=dict)

    @property
    def n_points(self) -> int:
        return len(self.residuals_db)

    @property
    def rmse_db(self) -> float:
        r = np.asarray(self.residuals_db)
        return float(np.sqrt(np.mean(r * r))) if r.size else 0.0


def differential_wall_loss(rss_free_dbm: float, rss_walled_dbm: float) -> float:
    """Wall loss as the drop in received power at equal distance."""
    return rss_free_dbm - rss_walled_dbm


def lstsq(design, y, names=None, rtol=RANK_RTOL):
    """Ordinary least squares via SVD with explicit rank detection.

    Raises :class:`RankDeficientError` naming a redundant column when any
    singular value falls below ``rtol`` times the largest one.
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError(f"design {X.shape} does not match observations {y.shape}")
    names = list(names) if names is not None else [f"column {j}" for j in range(X.shape[1])]
    rank = _rank(X, rtol)
    if rank < X.shape[1]:
        col = _redundant_column(X, names, rtol, rank)
        raise RankDeficientError(
            f"design matrix has rank {rank} < {X.shape[1]}; column {col!r} is not identifiable",
            column=col,
        )
    U, s, Vt = np.linalg.svd(X, full_matrices=False)
    coef = Vt.T @ ((U.T @ y) / s)
    return coef, y - X @ coef


def _rank(X, rtol):
    if X.shape[0] == 0:
        return 0
    s = np.linalg.svd(X, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def _redundant_column(X, names, rtol, rank):
    # prefer blaming a regressor over the intercept; try columns from the right
    for j in reversed(range(X.shape[1])):
        if not np.any(X[:, j]):
            return names[j]
    for j in reversed(range(X.shape[1])):
        if _rank(np.delete(X, j, axis=1), rtol) == rank:
            return names[j]
    return names[-1]


def fit_wall_loss(samples, base: ModelParams = DEFAULT_PARAMS) -> FitResult:
    """Per-wall loss by least squares through the origin.

    The slope is ``sum(m * loss) / sum(m**2)``; the other parameters are
    carried over from ``base``.
    """
    samples = list(samples)
    if not samples:
        raise CalibrationError("no wall-loss samples")
    m = np.array([s.m_walls for s in samples], dtype=float)
    loss = np.array([s.loss_db for s in samples], dtype=float)
    if not np.any(m):
        raise CalibrationError("all wall counts are zero")
    slope = float(np.dot(m, loss) / np.dot(m, m))
    if slope < 0:
        raise CalibrationError(f"fitted per-wall loss is negative ({slope:.4g} dB)")
    return FitResult(
        params=replace(base, pl_w_db=slope),
        residuals_db=tuple((loss - m * slope).tolist()),
        fitted=("pl_w_db",),
        coefficients={"pl_w_db": slope},
    )


def fit_log_distance(points, base: ModelParams = DEFAULT_PARAMS) -> FitResult:
    """Reference loss and exponent from ``(distance_m, pl_db)`` pairs.

    Regresses path loss on ``10 log10(d)`` with an intercept.
    """
    pts = [(float(d), float(pl)) for d, pl in points]
    if any(not (d > 0 and math.isfinite(d)) for d, _ in pts):
        raise CalibrationError("all distances must be finite and > 0")
    if len({d for d, _ in pts}) < 2:
        raise RankDeficientError("need at least two distinct distances", column="log_distance")
    d = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    X = np.column_stack([np.ones_like(d), 10.0 * np.log10(d)])
    (pl0, n), resid = lstsq(X, y, names=["intercept", "log_distance"])
    params = _checked(base, pl0_db=float(pl0), n=float(n))
    return FitResult(params, tuple(resid.tolist()), ("pl0_db", "n"), {"pl0_db": float(pl0), "n": float(n)})


def joint_design(measurements, plan: FloorPlan):
    """Design matrix ``[1, 10 log10(d), M]`` and observed path losses."""
    rows, y = [], []
    for i, meas in enumerate(measurements):
        d = meas.distance_m
        if d <= 0:
            raise CalibrationError(f"measurement {i}: tx and rx coincide")
        rows.append((1.0, 10.0 * math.log10(d), float(meas.wall_count(plan))))
        y.append(meas.path_loss_db)
    return np.array(rows, dtype=float).reshape(-1, 3), np.array(y, dtype=float)


def fit_joint(measurements, plan: FloorPlan) -> FitResult:
    """Reference loss, exponent and per-wall loss fitted together."""
    measurements = list(measurements)
    if len(measurements) < 3:
        raise CalibrationError(f"need at least 3 measurements, got {len(measurements)}")
    X, y = joint_design(measurements, plan)
    (pl0, n, plw), resid = lstsq(X, y, names=["intercept", "log_distance", "m_walls"])
    params = _checked(DEFAULT_PARAMS, pl0_db=float(pl0), n=float(n), pl_w_db=float(plw))
    return FitResult(
        params, tuple(resid.tolist()), ("pl0_db", "n", "pl_w_db"),
        {"pl0_db": float(pl0), "n": float(n), "pl_w_db": float(plw)},
    )


def _checked(base, **values):
    try:
        return replace(base, **values)
    except ValueError as exc:
        raise CalibrationError(f"fitted parameters are not physical: {exc}") from None
