"""Coverage rasters of predicted path loss or RSS, with CSV and PGM export.

Cells are sampled at their centers. Inside a grid, distances below the 1 m
reference are clamped to 1 m so the raster stays finite; walls are still
counted along the true tx-cell segment.

Row conventions differ per format and are fixed: ``CoverageGrid.values`` and
the CSV export put row 0 at the ``min_y`` edge, the PGM image puts its top row
at the ``max_y`` edge.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .floorplan import FloorPlan, Point2D, crossing_matrix, validate_plan
from .pathloss import DEFAULT_TX_POWER_DBM, Model, ModelParams

__all__ = [
    "Quantity",
    "GridSpec",
    "CoverageGrid",
    "generate_grid",
    "export_csv",
    "parse_csv",
    "export_pgm",
    "pgm_levels",
]

_CHUNK = 4096


class Quantity(str, enum.Enum):
    PATH_LOSS_DB = "path_loss_db"
    RSS_DBM = "rss_dbm"

    @classmethod
    def parse(cls, value) -> "Quantity":
        aliases = {"pl": cls.PATH_LOSS_DB, "rss": cls.RSS_DBM}
        if isinstance(value, cls):
            return value
        if value in aliases:
            return aliases[value]
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"unknown quantity {value!r}; expected pl, rss, path_loss_db or rss_dbm") from None


@dataclass(frozen=True)
class GridSpec:
    min_x: float
    min_y: float
    max_x: float
    max_y: float
    resolution_m: float

    def __post_init__(self):
        vals = (self.min_x, self.min_y, self.max_x, self.max_y, self.resolution_m)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite grid spec {vals}")
        if not self.resolution_m > 0:
            raise ValueError(f"resolution must be > 0, got {self.resolution_m}")
        if not (self.max_x > self.min_x and self.max_y > self.min_y):
            raise ValueError(f"empty bounding box {vals[:4]}")

    @property
    def n_cols(self) -> int:
        return max(1, math.ceil((self.max_x - self.min_x) / self.resolution_m - 1e-9))

    @property
    def n_rows(self) -> int:
        return max(1, math.ceil((self.max_y - self.min_y) / self.resolution_m - 1e-9))

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """1-D arrays of x (per column) and y (per row) cell-center coordinates."""
        xs = self.min_x + (np.arange(self.n_cols) + 0.5) * self.resolution_m
        ys = self.min_y + (np.arange(self.n_rows) + 0.5) * self.resolution_m
        return xs, ys


@dataclass(frozen=True, eq=False)
class CoverageGrid:
    spec: GridSpec
    tx: Point2D
    quantity: Quantity
    values: np.ndarray  # (n_rows, n_cols), row 0 at min_y

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    def cell_center(self, row: int, col: int) -> Point2D:
        r = self.spec.resolution_m
        return Point2D(self.spec.min_x + (col + 0.5) * r, self.spec.min_y + (row + 0.5) * r)


def _evaluate(plan, tx, params, model, qx, qy):
    px, py = float(tx[0]), float(tx[1])
    d = np.maximum(np.hypot(qx - px, qy - py), params.d_ref_m)
    dist_term = 10.0 * params.n * np.log10(d / params.d_ref_m)
    if model is Model.ONE_SLOPE or not plan.walls:
        wall_term = np.zeros_like(d)
    else:
        hits = crossing_matrix(plan, tx, qx, qy)
        if model is Model.SIMPLIFIED:
            wall_term = hits.sum(axis=1) * params.pl_w_db
        else:
            wall_term = np.where(hits, plan.wall_losses[None, :], 0.0).sum(axis=1)
    return params.pl0_db + dist_term + wall_term


def generate_grid(plan: FloorPlan, tx: Point2D, params: ModelParams, model, spec: GridSpec,
                  quantity="path_loss_db", tx_power_dbm: float = DEFAULT_TX_POWER_DBM,
                  workers: int = 1) -> CoverageGrid:
    """Evaluate the model at every cell center of ``spec``.

    ``workers > 1`` spreads fixed-size chunks of cells over a thread pool; the
    chunking does not depend on the worker count, so the raster is identical.
    """
    model = Model.parse(model)
    quantity = Quantity.parse(quantity)
    validate_plan(plan)
    tx = Point2D(float(tx[0]), float(tx[1]))
    if not (math.isfinite(tx.x) and math.isfinite(tx.y)):
        raise ValueError(f"non-finite transmitter position {tuple(tx)}")
    xs, ys = spec.cell_centers()
    qx = np.tile(xs, len(ys))
    qy = np.repeat(ys, len(xs))
    starts = range(0, qx.size, _CHUNK)

    def run(s):
        return _evaluate(plan, tx, params, model, qx[s:s + _CHUNK], qy[s:s + _CHUNK])

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(s) for s in starts]
    values = np.concatenate(parts).reshape(len(ys), len(xs))
    if quantity is Quantity.RSS_DBM:
        values = tx_power_dbm - values
    if not np.all(np.isfinite(values)):
        raise ValueError("coverage grid contains non-finite values")
    return CoverageGrid(spec, tx, quantity, values)


def export_csv(grid: CoverageGrid) -> str:
    """Header comments then one line per row, starting at the ``min_y`` edge."""
    s = grid.spec
    lines = [
        f"# quantity {grid.quantity.value}",
        f"# bbox {s.min_x!r},{s.min_y!r},{s.max_x!r},{s.max_y!r}",
        f"# resolution {s.resolution_m!r}",
        f"# tx {grid.tx.x!r},{grid.tx.y!r}",
        "# rows bottom-up: first data row is the min_y edge",
    ]
    for row in grid.values:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> CoverageGrid:
    """Inverse of :func:`export_csv`."""
    meta, rows = {}, []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, rest = line[1:].strip().partition(" ")
            meta[key] = rest.strip()
            continue
        try:
            rows.append([float(v) for v in line.split(",")])
        except ValueError:
            raise ValueError(f"line {lineno}: malformed value row") from None
    try:
        bbox = [float(v) for v in meta["bbox"].split(",")]
        tx = Point2D(*(float(v) for v in meta["tx"].split(",")))
        spec = GridSpec(*bbox, float(meta["resolution"]))
        quantity = Quantity.parse(meta["quantity"])
    except KeyError as exc:
        raise ValueError(f"missing header line {exc.args[0]!r}") from None
    values = np.array(rows, dtype=float)
    if values.shape != (spec.n_rows, spec.n_cols):
        raise ValueError(f"value block {values.shape} does not match grid {(spec.n_rows, spec.n_cols)}")
    return CoverageGrid(spec, tx, quantity, values)


def pgm_levels(values, lo: float, hi: float) -> np.ndarray:
    """Map values linearly from ``[lo, hi]`` to integer grey levels 0..255.

    Values outside the range are clamped; halves round away from zero.
    """
    if not hi > lo:
        raise ValueError(f"PGM range needs hi > lo, got lo={lo}, hi={hi}")
    scaled = (np.asarray(values, dtype=float) - lo) / (hi - lo) * 255.0
    scaled = np.clip(scaled, 0.0, 255.0)
    return np.floor(scaled + 0.5).astype(int)


def export_pgm(grid: CoverageGrid, lo: float, hi: float) -> bytes:
    """Plain (P2) greyscale image, top row at the ``max_y`` edge."""
    levels = pgm_levels(grid.values, lo, hi)[::-1]
    out = [f"P2\n{grid.n_cols} {grid.n_rows}\n255\n"]
    for row in levels:
        out.append(" ".join(str(v) for v in row) + "\n")
    return "".join(out).encode("ascii")
