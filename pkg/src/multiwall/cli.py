"""Command-line interface: ``multiwall predict|fit|coverage|compare``.

Exit status is 0 on success, 2 on usage or input errors and 1 on anything
unexpected. Human-readable results go to stdout, diagnostics to stderr, and
machine-readable files only where ``--out`` asks for them. Any file argument
may be given as ``bundled:<name>`` to use a dataset shipped with the package.
"""

from __future__ import annotations

import argparse
import sys

from . import dataio
from .calibration import fit_joint, fit_log_distance, fit_wall_loss
from .coverage import GridSpec, Quantity, export_csv, export_pgm, generate_grid
from .errors import MultiwallError
from .evaluation import compare, compare_wall_losses, format_report, report_to_csv
from .floorplan import Point2D
from .pathloss import DEFAULT_PARAMS, DEFAULT_TX_POWER_DBM, Model, predict_link, predict_rss

PGM_DEFAULTS = {Quantity.RSS_DBM: (-100.0, -20.0), Quantity.PATH_LOSS_DB: (40.0, 120.0)}


class UsageError(Exception):
    pass


def _floats(text, count, what):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what}: expected {count} comma-separated numbers, got {text!r}")
    if len(values) != count:
        raise argparse.ArgumentTypeError(f"{what}: expected {count} comma-separated numbers, got {text!r}")
    return values


def _point(text):
    return Point2D(*_floats(text, 2, "point"))


def _bbox(text):
    return _floats(text, 4, "bbox")


def _write(path, data):
    mode = "wb" if isinstance(data, bytes) else "w"
    kwargs = {} if mode == "wb" else {"encoding": "utf-8"}
    with open(path, mode, **kwargs) as fh:
        fh.write(data)


def _print_fit(result):
    for name in result.fitted:
        print(f"{name} = {result.coefficients[name]:.2f}")
    print(f"rmse_db = {result.rmse_db:.2f}")
    print(f"n_points = {result.n_points}")
    print("residuals_db = " + ", ".join(f"{r:.2f}" for r in result.residuals_db))


def cmd_predict(args):
    plan = dataio.load_plan(dataio.read_source(args.plan))
    params = dataio.load_params(dataio.read_source(args.params))
    out = predict_link(plan, args.tx, args.rx, params, args.model)
    for w in out.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"model = {out.model.value}")
    print(f"distance_m = {out.distance_m:.2f}")
    print(f"m_walls = {out.m_walls}")
    print(f"reference_term_db = {out.free_space_term_db:.2f}")
    print(f"distance_term_db = {out.distance_term_db:.2f}")
    print(f"wall_term_db = {out.wall_term_db:.2f}")
    print(f"total_db = {out.total_db:.2f}")
    if args.tx_power is not None:
        print(f"rss_dbm = {predict_rss(args.tx_power, out.total_db):.2f}")


def cmd_fit(args):
    base = dataio.load_params(dataio.read_source(args.base)) if getattr(args, "base", None) else DEFAULT_PARAMS
    if args.kind == "walls":
        result = fit_wall_loss(dataio.load_wall_samples(dataio.read_source(args.input)), base)
    elif args.kind == "logdist":
        result = fit_log_distance(dataio.load_distance_points(dataio.read_source(args.input)), base)
    else:
        measurements = dataio.load_measurements(dataio.read_source(args.measurements))
        plan = dataio.load_plan(dataio.read_source(args.plan))
        result = fit_joint(measurements, plan)
    _print_fit(result)
    if args.out:
        _write(args.out, dataio.dump_params(result.params))


def cmd_coverage(args):
    plan = dataio.load_plan(dataio.read_source(args.plan))
    params = dataio.load_params(dataio.read_source(args.params))
    quantity = Quantity.parse(args.quantity)
    spec = GridSpec(*args.bbox, args.res)
    grid = generate_grid(plan, args.tx, params, args.model, spec, quantity, args.tx_power, workers=args.workers)
    lo_default, hi_default = PGM_DEFAULTS[quantity]
    lo = lo_default if args.lo is None else args.lo
    hi = hi_default if args.hi is None else args.hi
    pgm = export_pgm(grid, lo, hi)
    _write(args.out + ".csv", export_csv(grid))
    _write(args.out + ".pgm", pgm)
    print(f"grid {grid.n_cols} x {grid.n_rows} cells, {quantity.value} "
          f"min {grid.values.min():.2f} max {grid.values.max():.2f}")
    print(f"wrote {args.out}.csv and {args.out}.pgm")


def cmd_compare(args):
    if args.wall_samples:
        samples = dataio.load_wall_samples(dataio.read_source(args.wall_samples))
        if args.pl_w is not None:
            pl_w = args.pl_w
        elif args.params:
            pl_w = dataio.load_params(dataio.read_source(args.params)).pl_w_db
        else:
            raise UsageError("--wall-samples needs --pl-w or --params")
        report = compare_wall_losses(samples, pl_w)
        print(format_report(report, args.stamp), end="")
        print(f"{'walls':>5} {'|residual|':>10} {'std_db':>7}  within_1_std")
        for s, p in zip(samples, report.per_point):
            if s.std_db is None:
                continue
            ok = "yes" if abs(p.residual_db) <= s.std_db else "no"
            print(f"{s.m_walls:>5} {abs(p.residual_db):>10.2f} {s.std_db:>7.2f}  {ok}")
    else:
        if not (args.measurements and args.plan and args.params):
            raise UsageError("compare needs --measurements, --plan and --params (or --wall-samples)")
        measurements = dataio.load_measurements(dataio.read_source(args.measurements))
        plan = dataio.load_plan(dataio.read_source(args.plan))
        params = dataio.load_params(dataio.read_source(args.params))
        report = compare(measurements, plan, params, args.model)
        print(format_report(report, args.stamp), end="")
    if args.out:
        _write(args.out, report_to_csv(report))


def build_parser():
    models = [m.value for m in Model]
    p = argparse.ArgumentParser(prog="multiwall", description="Indoor multiwall path-loss toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("predict", help="path loss of a single link")
    pr.add_argument("--plan", required=True)
    pr.add_argument("--params", required=True)
    pr.add_argument("--model", choices=models, default="simplified")
    pr.add_argument("--tx", type=_point, required=True, metavar="X,Y")
    pr.add_argument("--rx", type=_point, required=True, metavar="X,Y")
    pr.add_argument("--tx-power", type=float, metavar="DBM")
    pr.set_defaults(func=cmd_predict)

    fit = sub.add_parser("fit", help="least-squares calibration")
    fsub = fit.add_subparsers(dest="kind", required=True)
    fw = fsub.add_parser("walls", help="per-wall loss through the origin")
    fw.add_argument("--input", default="bundled:table1.csv",
                    help="wall-loss sample CSV (default: the bundled 2.45 GHz table)")
    fl = fsub.add_parser("logdist", help="reference loss and exponent")
    fl.add_argument("--input", required=True, help="CSV with columns distance_m,pl_db")
    for f in (fw, fl):
        f.add_argument("--base", help="params file supplying the coefficients not fitted")
    fj = fsub.add_parser("joint", help="all three coefficients")
    fj.add_argument("--measurements", required=True)
    fj.add_argument("--plan", required=True)
    for f in (fw, fl, fj):
        f.add_argument("--out", help="write fitted params JSON here")
        f.set_defaults(func=cmd_fit)

    cv = sub.add_parser("coverage", help="path-loss / RSS raster as CSV and PGM")
    cv.add_argument("--plan", required=True)
    cv.add_argument("--params", required=True)
    cv.add_argument("--model", choices=models, default="simplified")
    cv.add_argument("--tx", type=_point, required=True, metavar="X,Y")
    cv.add_argument("--bbox", type=_bbox, required=True, metavar="X0,Y0,X1,Y1")
    cv.add_argument("--res", type=float, required=True, metavar="M")
    cv.add_argument("--quantity", choices=["pl", "rss"], default="pl")
    cv.add_argument("--tx-power", type=float, default=DEFAULT_TX_POWER_DBM, metavar="DBM")
    cv.add_argument("--lo", type=float)
    cv.add_argument("--hi", type=float)
    cv.add_argument("--workers", type=int, default=1)
    cv.add_argument("--out", required=True, metavar="BASE")
    cv.set_defaults(func=cmd_coverage)

    cp = sub.add_parser("compare", help="model vs measurement report")
    cp.add_argument("--measurements")
    cp.add_argument("--plan")
    cp.add_argument("--params")
    cp.add_argument("--model", choices=models, default="simplified")
    cp.add_argument("--wall-samples", help="compare wall-loss samples against m * pl_w instead")
    cp.add_argument("--pl-w", type=float, help="per-wall loss for --wall-samples")
    cp.add_argument("--stamp", help="free-text stamp for the report header")
    cp.add_argument("--out", help="write the report as CSV here")
    cp.set_defaults(func=cmd_compare)
    return p


_COORD_FLAGS = ("--tx", "--rx", "--bbox", "--lo", "--hi", "--tx-power", "--pl-w")


def _glue_negative_values(argv):
    # argparse reads "-6,-2,6,2" as an option; pass such values as --flag=value
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _COORD_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (MultiwallError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
