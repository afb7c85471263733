"""One-slope, COST231 multiwall and simplified multiwall path-loss models.

All models share the log-distance core ``PL0 + 10 n log10(d / 1 m)``; the
multiwall variants add either a sum of per-wall losses (COST231) or a wall
count times a single per-wall loss (simplified). Antenna gains are taken as
zero, so received power is transmit power minus path loss.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .errors import ModelError
from .floorplan import FloorPlan, Point2D, straight_line_distance, wall_crossings

__all__ = [
    "SPEED_OF_LIGHT",
    "ISM_FREQUENCY_HZ",
    "DEFAULT_TX_POWER_DBM",
    "Model",
    "ModelParams",
    "LinkGeometry",
    "PathLossBreakdown",
    "friis_reference_loss",
    "one_slope",
    "cost231_multiwall",
    "simplified_multiwall",
    "predict_rss",
    "predict_link",
    "DEFAULT_PARAMS",
]

SPEED_OF_LIGHT = 299_792_458.0
ISM_FREQUENCY_HZ = 2.45e9
DEFAULT_TX_POWER_DBM = 20.0
D_REF_M = 1.0


class Model(str, enum.Enum):
    ONE_SLOPE = "one_slope"
    COST231 = "cost231"
    SIMPLIFIED = "simplified"

    @classmethod
    def parse(cls, value) -> "Model":
        if isinstance(value, cls):
            return value
        try:
            return cls(value)
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ModelError(f"unknown model {value!r}; expected one of {names}") from None


@dataclass(frozen=True)
class ModelParams:
    """Reference loss at 1 m (dB), path-loss exponent, and loss per wall (dB)."""

    pl0_db: float
    n: float
    pl_w_db: float = 0.0
    d_ref_m: float = D_REF_M

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.pl0_db, self.n, self.pl_w_db)):
            raise ModelError(f"non-finite model parameter in {self}")
        if self.n <= 0:
            raise ModelError(f"path-loss exponent n must be > 0, got {self.n}")
        if self.pl_w_db < 0:
            raise ModelError(f"pl_w_db must be >= 0, got {self.pl_w_db}")
        if self.d_ref_m != D_REF_M:
            raise ModelError(f"d_ref_m is fixed at 1.0 m, got {self.d_ref_m}")


@dataclass(frozen=True)
class LinkGeometry:
    distance_m: float
    m_walls: int = 0
    per_category: dict[str, tuple[int, float]] | None = None

    def __post_init__(self):
        if not self.distance_m > 0:
            raise ModelError(f"distance must be > 0, got {self.distance_m}")
        if self.m_walls < 0:
            raise ModelError(f"wall count must be >= 0, got {self.m_walls}")
        if self.per_category is not None:
            total = sum(c for c, _ in self.per_category.values())
            if total != self.m_walls:
                raise ModelError(f"per-category counts sum to {total}, m_walls is {self.m_walls}")


@dataclass(frozen=True)
class PathLossBreakdown:
    free_space_term_db: float
    distance_term_db: float
    wall_term_db: float
    total_db: float
    model: Model
    distance_m: float
    m_walls: int = 0
    warnings: tuple[str, ...] = ()

    @property
    def near_field(self) -> bool:
        """True when the distance lies below the 1 m reference."""
        return self.distance_m < D_REF_M


def friis_reference_loss(frequency_hz: float = ISM_FREQUENCY_HZ, d_ref_m: float = D_REF_M) -> float:
    """Free-space path loss ``20 log10(4 pi d f / c)`` in dB."""
    if frequency_hz <= 0 or d_ref_m <= 0:
        raise ModelError("frequency and distance must be positive")
    return 20.0 * math.log10(4.0 * math.pi * d_ref_m * frequency_hz / SPEED_OF_LIGHT)


# free-space PL0 at 2.45 GHz, exponent 3 and 17.78 dB per 25 cm cement-mortar wall
DEFAULT_PARAMS = ModelParams(pl0_db=friis_reference_loss(), n=3.0, pl_w_db=17.78)


def _breakdown(params, d, wall_term, model, m):
    d = float(d)
    if not (d > 0 and math.isfinite(d)):
        raise ModelError(f"distance must be finite and > 0, got {d}")
    dist_term = 10.0 * params.n * math.log10(d / params.d_ref_m)
    total = params.pl0_db + dist_term + wall_term
    warnings = ()
    if d < params.d_ref_m:
        warnings = (f"distance {d:g} m is below the 1 m reference; model extrapolated",)
    return PathLossBreakdown(params.pl0_db, dist_term, wall_term, total, model, float(d), m, warnings)


def one_slope(params: ModelParams, d: float) -> PathLossBreakdown:
    return _breakdown(params, d, 0.0, Model.ONE_SLOPE, 0)


def cost231_multiwall(params: ModelParams, d: float, wall_losses) -> PathLossBreakdown:
    """Log-distance loss plus the individual loss of each traversed wall."""
    losses = [float(x) for x in wall_losses]
    for i, x in enumerate(losses):
        if not (math.isfinite(x) and x >= 0):
            raise ModelError(f"wall loss {i} must be finite and >= 0, got {x}")
    wall_term = 0.0
    for x in losses:
        wall_term += x
    return _breakdown(params, d, wall_term, Model.COST231, len(losses))


def simplified_multiwall(params: ModelParams, d: float, m: int) -> PathLossBreakdown:
    """Log-distance loss plus ``m`` walls of ``params.pl_w_db`` each."""
    if int(m) != m or m < 0:
        raise ModelError(f"wall count must be a non-negative integer, got {m}")
    m = int(m)
    return _breakdown(params, d, m * params.pl_w_db, Model.SIMPLIFIED, m)


def predict_rss(tx_power_dbm: float, pl_db: float) -> float:
    return tx_power_dbm - pl_db


def predict_link(plan: FloorPlan, tx: Point2D, rx: Point2D, params: ModelParams,
                 model="simplified") -> PathLossBreakdown:
    """Path loss between two points of a floor plan under the chosen model."""
    model = Model.parse(model)
    report = wall_crossings(plan, tx, rx)
    d = straight_line_distance(tx, rx)
    if model is Model.ONE_SLOPE:
        out = one_slope(params, d)
    elif model is Model.SIMPLIFIED:
        out = simplified_multiwall(params, d, report.m_total)
    else:
        losses = plan.wall_losses
        out = cost231_multiwall(params, d, [losses[i] for i in report.crossed_wall_indices])
    return replace(out, m_walls=report.m_total, warnings=out.warnings + report.warnings)
