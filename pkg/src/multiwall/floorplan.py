"""2-D floor-plan geometry and wall counting along a straight propagation path.

Walls are zero-width segments. A wall is counted when the open tx-rx segment
meets the closed wall segment at a single point, so a path that clips a wall
endpoint still counts it. Two configurations count zero and leave a warning
on the report instead:

* the path runs along the wall (collinear overlap), and
* the transmitter or receiver sits on the wall.

All orientation tests are done on signed point-to-line distances in meters
with a tolerance of :data:`EPS_M`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import DegeneratePathError, PlanError

__all__ = [
    "EPS_M",
    "Point2D",
    "WallCategory",
    "Wall",
    "FloorPlan",
    "CrossingReport",
    "validate_plan",
    "straight_line_distance",
    "wall_crossings",
    "crossing_matrix",
]

EPS_M = 1e-9


class Point2D(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class WallCategory:
    id: str
    loss_db: float
    thickness_m: float
    material: str = ""


@dataclass(frozen=True)
class Wall:
    a: Point2D
    b: Point2D
    category: str

    def __post_init__(self):
        # accept plain (x, y) tuples
        object.__setattr__(self, "a", Point2D(*self.a))
        object.__setattr__(self, "b", Point2D(*self.b))


@dataclass(frozen=True)
class FloorPlan:
    name: str = ""
    categories: tuple[WallCategory, ...] = ()
    walls: tuple[Wall, ...] = ()
    frequency_hz: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "categories", tuple(self.categories))
        object.__setattr__(self, "walls", tuple(self.walls))

    @cached_property
    def category_map(self) -> dict[str, WallCategory]:
        return {c.id: c for c in self.categories}

    @cached_property
    def wall_array(self) -> np.ndarray:
        """``(n_walls, 4)`` array of ``x1, y1, x2, y2``."""
        if not self.walls:
            return np.empty((0, 4))
        return np.array([(w.a.x, w.a.y, w.b.x, w.b.y) for w in self.walls], dtype=float)

    @cached_property
    def wall_losses(self) -> np.ndarray:
        """Per-wall category loss in dB, aligned with :attr:`walls`."""
        cmap = self.category_map
        return np.array([cmap[w.category].loss_db for w in self.walls], dtype=float)


@dataclass(frozen=True)
class CrossingReport:
    crossed_wall_indices: tuple[int, ...]
    per_category_counts: dict[str, int] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    @property
    def m_total(self) -> int:
        return len(self.crossed_wall_indices)


def _finite(*values) -> bool:
    return all(math.isfinite(v) for v in values)


def validate_plan(plan: FloorPlan) -> FloorPlan:
    """Check every plan invariant and return the plan unchanged.

    Raises :class:`PlanError` on the first violation; wall problems carry the
    wall index.
    """
    seen = set()
    for k, cat in enumerate(plan.categories):
        if cat.id in seen:
            raise PlanError(f"duplicate category id {cat.id!r} (category {k})")
        seen.add(cat.id)
        if not math.isfinite(cat.loss_db) or cat.loss_db < 0:
            raise PlanError(f"category {cat.id!r}: loss_db must be finite and >= 0, got {cat.loss_db}")
        if not math.isfinite(cat.thickness_m) or cat.thickness_m <= 0:
            raise PlanError(f"category {cat.id!r}: thickness_m must be > 0, got {cat.thickness_m}")
    if plan.frequency_hz is not None and not (math.isfinite(plan.frequency_hz) and plan.frequency_hz > 0):
        raise PlanError(f"frequency_hz must be positive, got {plan.frequency_hz}")
    for i, wall in enumerate(plan.walls):
        if wall.category not in seen:
            raise PlanError(f"unknown category {wall.category!r}", wall_index=i)
        if not _finite(wall.a.x, wall.a.y, wall.b.x, wall.b.y):
            raise PlanError("non-finite coordinate", wall_index=i)
        if wall.a == wall.b:
            raise PlanError("zero-length wall", wall_index=i)
    return plan


def straight_line_distance(tx: Point2D, rx: Point2D) -> float:
    """Euclidean distance between two points in meters."""
    return math.hypot(rx[0] - tx[0], rx[1] - tx[1])


def _side(d, eps):
    # +1 / -1 outside the tolerance band, 0 inside it
    return (d > eps).astype(np.int8) - (d < -eps).astype(np.int8)


def _classify(px, py, qx, qy, ax, ay, bx, by, eps=EPS_M):
    """Core predicate, broadcast over any mix of path and wall arrays.

    Returns ``(counted, collinear)`` boolean arrays. The same arithmetic is used
    for single links and for coverage rasters, so both give identical counts.
    """
    rx_ = qx - px
    ry_ = qy - py
    plen = np.hypot(rx_, ry_)
    sx = bx - ax
    sy = by - ay
    wlen = np.hypot(sx, sy)
    # signed distances of wall endpoints from the path line
    d1 = (rx_ * (ay - py) - ry_ * (ax - px)) / plen
    d2 = (rx_ * (by - py) - ry_ * (bx - px)) / plen
    # signed distances of tx and rx from the wall line
    d3 = (sx * (py - ay) - sy * (px - ax)) / wlen
    d4 = (sx * (qy - ay) - sy * (qx - ax)) / wlen
    s1, s2 = _side(d1, eps), _side(d2, eps)
    s3, s4 = _side(d3, eps), _side(d4, eps)
    collinear = (s1 == 0) & (s2 == 0)
    counted = (s3 * s4 == -1) & (s1 * s2 != 1) & ~collinear
    return counted, collinear


def _on_segment(px, py, ax, ay, bx, by, eps=EPS_M):
    sx, sy = bx - ax, by - ay
    wlen = np.hypot(sx, sy)
    dist = (sx * (py - ay) - sy * (px - ax)) / wlen
    u = ((px - ax) * sx + (py - ay) * sy) / (wlen * wlen)
    slack = eps / wlen
    return (np.abs(dist) <= eps) & (u >= -slack) & (u <= 1 + slack)


def _collinear_overlap(px, py, qx, qy, ax, ay, bx, by, eps=EPS_M):
    rx_, ry_ = qx - px, qy - py
    l2 = rx_ * rx_ + ry_ * ry_
    ta = ((ax - px) * rx_ + (ay - py) * ry_) / l2
    tb = ((bx - px) * rx_ + (by - py) * ry_) / l2
    lo = np.maximum(np.minimum(ta, tb), 0.0)
    hi = np.minimum(np.maximum(ta, tb), 1.0)
    return hi - lo > eps / np.sqrt(l2)


def _check_path(tx, rx):
    if not _finite(tx[0], tx[1], rx[0], rx[1]):
        raise ValueError(f"non-finite endpoint: tx={tuple(tx)}, rx={tuple(rx)}")
    if tx[0] == rx[0] and tx[1] == rx[1]:
        raise DegeneratePathError(f"tx and rx coincide at {tuple(tx)}")


def wall_crossings(plan: FloorPlan, tx: Point2D, rx: Point2D) -> CrossingReport:
    """Walls traversed by the straight segment from ``tx`` to ``rx``."""
    _check_path(tx, rx)
    validate_plan(plan)
    if not plan.walls:
        return CrossingReport(())
    px, py = float(tx[0]), float(tx[1])
    qx, qy = float(rx[0]), float(rx[1])
    w = plan.wall_array
    ax, ay, bx, by = w[:, 0], w[:, 1], w[:, 2], w[:, 3]

    counted, collinear = _classify(px, py, qx, qy, ax, ay, bx, by)
    grazing = collinear & _collinear_overlap(px, py, qx, qy, ax, ay, bx, by)
    tx_on = _on_segment(px, py, ax, ay, bx, by)
    rx_on = _on_segment(qx, qy, ax, ay, bx, by)

    warnings = []
    for i in range(len(plan.walls)):
        if grazing[i]:
            warnings.append(f"wall {i}: path runs along the wall; grazing propagation not modeled, counted 0")
        elif tx_on[i] or rx_on[i]:
            end = "tx" if tx_on[i] else "rx"
            warnings.append(f"wall {i}: {end} lies on the wall, counted 0")

    crossed = tuple(int(i) for i in np.flatnonzero(counted))
    per_cat: dict[str, int] = {}
    for i in crossed:
        cat = plan.walls[i].category
        per_cat[cat] = per_cat.get(cat, 0) + 1
    return CrossingReport(crossed, per_cat, tuple(warnings))


def crossing_matrix(plan: FloorPlan, tx: Point2D, rx_x: np.ndarray, rx_y: np.ndarray) -> np.ndarray:
    """Boolean ``(n_points, n_walls)`` matrix of counted walls for many receivers.

    Uses the same predicate as :func:`wall_crossings`. Receivers equal to
    ``tx`` yield an all-False row.
    """
    w = plan.wall_array
    rx_x = np.asarray(rx_x, dtype=float)[:, None]
    rx_y = np.asarray(rx_y, dtype=float)[:, None]
    if w.shape[0] == 0:
        return np.zeros((rx_x.shape[0], 0), dtype=bool)
    with np.errstate(invalid="ignore", divide="ignore"):
        counted, _ = _classify(
            float(tx[0]), float(tx[1]), rx_x, rx_y,
            w[None, :, 0], w[None, :, 1], w[None, :, 2], w[None, :, 3],
        )
    return counted
