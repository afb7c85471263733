"""Readers and writers for floor plans, model parameters and measurement CSVs.

Every reader returns fully validated domain objects and raises
:class:`~multiwall.errors.DataFormatError` with a locator: a key path such as
``walls[3].x1`` for JSON, ``line N`` for CSV. Writers emit the same schemas
with floats in shortest round-trip form.
"""

from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources

from .calibration import Measurement, WallLossSample
from .errors import DataFormatError, PlanError
from .floorplan import FloorPlan, Wall, WallCategory, validate_plan
from .pathloss import ModelError, ModelParams

__all__ = [
    "load_plan",
    "dump_plan",
    "load_params",
    "dump_params",
    "load_measurements",
    "dump_measurements",
    "load_wall_samples",
    "dump_wall_samples",
    "load_distance_points",
    "bundled_text",
    "read_source",
    "table1_samples",
    "demo_plan",
    "demo_params",
    "table1_links",
    "BUNDLED",
]

BUNDLED = ("table1.csv", "demo_plan.json", "demo_params.json", "table1_links.csv")
BUNDLED_PREFIX = "bundled:"


# -- JSON helpers ---------------------------------------------------------

def _parse_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataFormatError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


def _get(obj, key, path, kind, required=True, default=None):
    if not isinstance(obj, dict):
        raise DataFormatError("expected an object", path)
    where = f"{path}.{key}" if path else key
    if key not in obj:
        if required:
            raise DataFormatError("missing required key", where)
        return default
    value = obj[key]
    if kind == "number":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DataFormatError(f"expected a number, got {type(value).__name__}", where)
        if not math.isfinite(value):
            raise DataFormatError("number must be finite", where)
        return float(value)
    if kind == "string":
        if not isinstance(value, str):
            raise DataFormatError(f"expected a string, got {type(value).__name__}", where)
        return value
    if kind == "array":
        if not isinstance(value, list):
            raise DataFormatError(f"expected an array, got {type(value).__name__}", where)
        return value
    raise AssertionError(kind)


def load_plan(text: str) -> FloorPlan:
    doc = _parse_json(text)
    if not isinstance(doc, dict):
        raise DataFormatError("top level must be an object", "$")
    name = _get(doc, "name", "", "string")
    freq = _get(doc, "frequency_hz", "", "number", required=False)
    categories = []
    for k, raw in enumerate(_get(doc, "categories", "", "array")):
        p = f"categories[{k}]"
        categories.append(WallCategory(
            id=_get(raw, "id", p, "string"),
            loss_db=_get(raw, "loss_db", p, "number"),
            thickness_m=_get(raw, "thickness_m", p, "number"),
            material=_get(raw, "material", p, "string", required=False, default=""),
        ))
    walls = []
    for i, raw in enumerate(_get(doc, "walls", "", "array")):
        p = f"walls[{i}]"
        a = (_get(raw, "x1", p, "number"), _get(raw, "y1", p, "number"))
        b = (_get(raw, "x2", p, "number"), _get(raw, "y2", p, "number"))
        walls.append(Wall(a, b, _get(raw, "category", p, "string")))
    plan = FloorPlan(name=name, categories=categories, walls=walls, frequency_hz=freq)
    try:
        return validate_plan(plan)
    except PlanError as exc:
        loc = f"walls[{exc.wall_index}]" if exc.wall_index is not None else "$"
        raise DataFormatError(str(exc), loc) from None


def dump_plan(plan: FloorPlan) -> str:
    doc = {"name": plan.name}
    if plan.frequency_hz is not None:
        doc["frequency_hz"] = plan.frequency_hz
    doc["categories"] = [
        {"id": c.id, "loss_db": c.loss_db, "thickness_m": c.thickness_m, "material": c.material}
        for c in plan.categories
    ]
    doc["walls"] = [
        {"x1": w.a.x, "y1": w.a.y, "x2": w.b.x, "y2": w.b.y, "category": w.category}
        for w in plan.walls
    ]
    return json.dumps(doc, indent=2) + "\n"


def load_params(text: str) -> ModelParams:
    doc = _parse_json(text)
    values = {k: _get(doc, k, "", "number") for k in ("pl0_db", "n", "pl_w_db")}
    try:
        return ModelParams(**values)
    except ModelError as exc:
        raise DataFormatError(str(exc), "$") from None


def dump_params(params: ModelParams) -> str:
    return json.dumps({"pl0_db": params.pl0_db, "n": params.n, "pl_w_db": params.pl_w_db}, indent=2) + "\n"


# -- CSV helpers ----------------------------------------------------------

def _rows(text, required, optional, alternatives=()):
    reader = csv.reader(io.StringIO(text))
    header = None
    for row in reader:
        if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
            continue
        header = [c.strip() for c in row]
        break
    if header is None:
        raise DataFormatError("missing header row", "line 1")
    hline = f"line {reader.line_num}"
    known = set(required) | set(optional) | set(alternatives)
    for col in header:
        if col not in known:
            raise DataFormatError(f"unknown column {col!r}", hline)
    if len(set(header)) != len(header):
        raise DataFormatError("duplicate column", hline)
    for col in required:
        if col not in header:
            raise DataFormatError(f"missing column {col!r}", hline)
    if alternatives and not any(c in header for c in alternatives):
        raise DataFormatError(f"need one of the columns {' / '.join(alternatives)}", hline)
    for row in reader:
        if not row or all(not c.strip() for c in row) or row[0].lstrip().startswith("#"):
            continue
        loc = f"line {reader.line_num}"
        if len(row) != len(header):
            raise DataFormatError(f"expected {len(header)} fields, got {len(row)}", loc)
        yield loc, dict(zip(header, (c.strip() for c in row)))


def _num(record, key, loc, required=True):
    raw = record.get(key, "")
    if raw == "":
        if required:
            raise DataFormatError(f"empty {key}", loc)
        return None
    try:
        value = float(raw)
    except ValueError:
        raise DataFormatError(f"{key}: not a number: {raw!r}", loc) from None
    if not math.isfinite(value):
        raise DataFormatError(f"{key}: must be finite", loc)
    return value


def _int(record, key, loc, required=True):
    raw = record.get(key, "")
    if raw == "":
        if required:
            raise DataFormatError(f"empty {key}", loc)
        return None
    try:
        return int(raw)
    except ValueError:
        raise DataFormatError(f"{key}: not an integer: {raw!r}", loc) from None


def _fmt(value):
    return "" if value is None else repr(float(value))


def load_measurements(text: str) -> list[Measurement]:
    out = []
    rows = _rows(text, ("tx_x", "tx_y", "rx_x", "rx_y"), ("tx_power_dbm", "m_override"),
                 alternatives=("rss_dbm", "pl_db"))
    for loc, rec in rows:
        rss = _num(rec, "rss_dbm", loc, required=False)
        pl = _num(rec, "pl_db", loc, required=False)
        if (rss is None) == (pl is None):
            raise DataFormatError("exactly one of rss_dbm and pl_db must be filled", loc)
        try:
            out.append(Measurement(
                tx=(_num(rec, "tx_x", loc), _num(rec, "tx_y", loc)),
                rx=(_num(rec, "rx_x", loc), _num(rec, "rx_y", loc)),
                rss_dbm=rss,
                pl_db=pl,
                tx_power_dbm=_num(rec, "tx_power_dbm", loc, required=False),
                m_override=_int(rec, "m_override", loc, required=False),
            ))
        except DataFormatError:
            raise
        except ValueError as exc:
            raise DataFormatError(str(exc), loc) from None
    return out


def dump_measurements(measurements) -> str:
    measurements = list(measurements)
    cols = ["tx_x", "tx_y", "rx_x", "rx_y"]
    if any(m.rss_dbm is not None for m in measurements):
        cols.append("rss_dbm")
    if any(m.pl_db is not None for m in measurements) or not measurements:
        cols.append("pl_db")
    if any(m.tx_power_dbm is not None for m in measurements):
        cols.append("tx_power_dbm")
    if any(m.m_override is not None for m in measurements):
        cols.append("m_override")
    lines = [",".join(cols)]
    for m in measurements:
        rec = {
            "tx_x": _fmt(m.tx.x), "tx_y": _fmt(m.tx.y), "rx_x": _fmt(m.rx.x), "rx_y": _fmt(m.rx.y),
            "rss_dbm": _fmt(m.rss_dbm), "pl_db": _fmt(m.pl_db), "tx_power_dbm": _fmt(m.tx_power_dbm),
            "m_override": "" if m.m_override is None else str(int(m.m_override)),
        }
        lines.append(",".join(rec[c] for c in cols))
    return "\n".join(lines) + "\n"


def load_wall_samples(text: str) -> list[WallLossSample]:
    out = []
    for loc, rec in _rows(text, ("m_walls", "loss_db"), ("std_db", "distance_m")):
        try:
            out.append(WallLossSample(
                m_walls=_int(rec, "m_walls", loc),
                loss_db=_num(rec, "loss_db", loc),
                std_db=_num(rec, "std_db", loc, required=False),
                distance_m=_num(rec, "distance_m", loc, required=False),
            ))
        except DataFormatError:
            raise
        except ValueError as exc:
            raise DataFormatError(str(exc), loc) from None
    return out


def dump_wall_samples(samples) -> str:
    samples = list(samples)
    cols = ["m_walls", "loss_db"]
    if any(s.std_db is not None for s in samples):
        cols.append("std_db")
    if any(s.distance_m is not None for s in samples):
        cols.append("distance_m")
    lines = [",".join(cols)]
    for s in samples:
        rec = {"m_walls": str(s.m_walls), "loss_db": _fmt(s.loss_db),
               "std_db": _fmt(s.std_db), "distance_m": _fmt(s.distance_m)}
        lines.append(",".join(rec[c] for c in cols))
    return "\n".join(lines) + "\n"


def load_distance_points(text: str) -> list[tuple[float, float]]:
    """``(distance_m, pl_db)`` pairs from a ``distance_m,pl_db`` CSV."""
    out = []
    for loc, rec in _rows(text, ("distance_m", "pl_db"), ()):
        d = _num(rec, "distance_m", loc)
        if d <= 0:
            raise DataFormatError("distance_m must be > 0", loc)
        out.append((d, _num(rec, "pl_db", loc)))
    return out


# -- bundled datasets -----------------------------------------------------

def bundled_text(name: str) -> str:
    if name not in BUNDLED:
        raise FileNotFoundError(f"no bundled dataset {name!r}; available: {', '.join(BUNDLED)}")
    return resources.files("multiwall").joinpath("data", name).read_text(encoding="utf-8")


def read_source(path: str) -> str:
    """Read a file, or a bundled dataset when given ``bundled:<name>``."""
    if path.startswith(BUNDLED_PREFIX):
        return bundled_text(path[len(BUNDLED_PREFIX):])
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def table1_samples() -> list[WallLossSample]:
    """Measured extra loss behind 1, 2 and 3 cement-mortar walls at 2.45 GHz."""
    return load_wall_samples(bundled_text("table1.csv"))


def demo_plan() -> FloorPlan:
    """Three parallel 25 cm cement-mortar walls; illustrative, not a surveyed site."""
    return load_plan(bundled_text("demo_plan.json"))


def demo_params() -> ModelParams:
    return load_params(bundled_text("demo_params.json"))


def table1_links() -> list[Measurement]:
    """Synthetic links through the demo plan carrying the measured wall losses."""
    return load_measurements(bundled_text("table1_links.csv"))
