"""Command-line front end for the design/analysis pipeline.

Subcommands:

* ``simulate`` -- sweep the arm model and write torque-curve CSVs;
* ``fit``      -- pick the worst-case curve, fit a line, derive and
                  catalog-match the spring; writes a JSON design report;
* ``analyze``  -- ingest a directory of trial logs, compute metrics and
                  statistics, write the study report JSON and plot CSVs;
* ``report``   -- re-render the plot CSVs from an existing report JSON.

Exit codes: 0 success, 1 usage error, 2 data error, 3 config error.
"""

import argparse
import math
import sys
from pathlib import Path

from . import fileio, springs, trials
from .biomech import ArmPosture, sweep_torque_curve
from .config import load_config
from .errors import ConfigError, DataError, DomainError, TrialRejected
from .transmission import pretension_torque


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; our contract reserves 2 for data."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wristkit", description=__doc__.splitlines()[0])
    parser.add_argument("--config", metavar="PATH",
                        help="toolkit config file (INI); defaults apply when omitted")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_sim = sub.add_parser("simulate", help="sweep the arm model into torque-curve CSVs")
    p_sim.add_argument("--posture", default="all",
                       choices=["P1", "P2", "P3", "all", "custom"])
    p_sim.add_argument("--samples", type=int, default=50,
                       help="samples across the motion range (default 50)")
    p_sim.add_argument("--out", required=True, metavar="PATH",
                       help="output CSV (or directory when --posture all)")
    p_sim.add_argument("--shoulder-deg", type=float, help="custom posture only")
    p_sim.add_argument("--elbow-deg", type=float, help="custom posture only")
    p_sim.add_argument("--pronation-deg", type=float, help="custom posture only")
    p_sim.set_defaults(func=cmd_simulate)

    p_fit = sub.add_parser("fit", help="fit curves and size the spring")
    p_fit.add_argument("curves", nargs="+", metavar="CURVE_CSV")
    p_fit.add_argument("--catalog", metavar="PATH",
                       help="spring catalog CSV (overrides config)")
    p_fit.add_argument("--out", metavar="PATH",
                       help="design report JSON (default: stdout)")
    p_fit.set_defaults(func=cmd_fit)

    p_an = sub.add_parser("analyze", help="analyze a directory of trial logs")
    p_an.add_argument("trial_dir", metavar="TRIAL_DIR")
    p_an.add_argument("--out", default="report.json", metavar="PATH",
                      help="study report JSON (default: report.json)")
    p_an.add_argument("--plots-dir", metavar="DIR",
                      help="where to write plot CSVs (default: alongside --out)")
    p_an.set_defaults(func=cmd_analyze)

    p_rep = sub.add_parser("report", help="re-render plot CSVs from a report JSON")
    p_rep.add_argument("report", metavar="REPORT_JSON")
    p_rep.add_argument("--plots-dir", metavar="DIR",
                       help="where to write plot CSVs (default: alongside the report)")
    p_rep.set_defaults(func=cmd_report)
    return parser


def _curve_summary(curve) -> str:
    fit = springs.fit_linear(curve)
    return (f"{curve.posture_label or 'curve'}: peak |moment| "
            f"{curve.peak_abs_moment():.4g} N*m, slope {fit.slope:.4g} N*m/rad, "
            f"R^2 {fit.r_squared:.4g}")


def cmd_simulate(cfg, args) -> int:
    if args.posture == "custom":
        angles = (args.shoulder_deg, args.elbow_deg, args.pronation_deg)
        if any(a is None for a in angles):
            raise ConfigError("custom posture needs --shoulder-deg, --elbow-deg, "
                              "and --pronation-deg")
        selected = [ArmPosture(*(math.radians(a) for a in angles), label="custom")]
    elif args.posture == "all":
        selected = list(cfg.postures.values())
    else:
        selected = [cfg.postures[args.posture]]
    if args.samples < 2:
        raise ConfigError("--samples must be at least 2")

    curves = []
    for posture in selected:
        curves.append(sweep_torque_curve(cfg.segments, posture, cfg.motion, cfg.load,
                                         args.samples, cfg.gravity, cfg.convention))
    out = Path(args.out)
    if len(curves) == 1:
        fileio.write_torque_curve(out, curves[0])
        paths = [out]
    else:
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        for curve in curves:
            path = out / f"{curve.posture_label}.csv"
            fileio.write_torque_curve(path, curve)
            paths.append(path)
    for curve, path in zip(curves, paths):
        print(f"{_curve_summary(curve)} -> {path}")
    if len(curves) > 1:
        worst = springs.worst_case_select(curves)
        print(f"worst case: {worst.posture_label} "
              f"(peak |moment| {worst.peak_abs_moment():.4g} N*m)")
    return 0


def cmd_fit(cfg, args) -> int:
    curves = [fileio.read_torque_curve(path, Path(path).stem) for path in args.curves]
    worst = springs.worst_case_select(curves)
    fit = springs.fit_linear(worst)
    spring = springs.derive_spring(fit, cfg.pre_wind)
    selection = springs.catalog_match(
        springs.stiffness_to_nmm_per_deg(spring.stiffness),
        fileio.read_spring_catalog(args.catalog) if args.catalog else cfg.catalog)

    def entry(e):
        return None if e is None else {"name": e.name, "stiffness_nmm_per_deg": e.stiffness}

    design = {
        "worst_case": worst.posture_label,
        "fit": {
            "slope_nm_per_rad": fit.slope,
            "intercept_nm": fit.intercept,
            "r_squared": fit.r_squared,
            "n_points": fit.n_points,
        },
        "spring": {
            "stiffness_nm_per_rad": spring.stiffness,
            "stiffness_nmm_per_deg": springs.stiffness_to_nmm_per_deg(spring.stiffness),
            "neutral_angle_rad": spring.neutral_angle,
            "neutral_angle_deg": math.degrees(spring.neutral_angle),
        },
        "catalog": {
            "nominal": entry(selection.nominal),
            "softer": entry(selection.softer),
            "stiffer": entry(selection.stiffer),
        },
    }
    if spring.pre_wind is not None:
        design["spring"]["pre_wind_rad"] = spring.pre_wind
        design["spring"]["pretension_torque_nm"] = pretension_torque(spring)
    if args.out:
        fileio.write_report(args.out, design)
        print(f"design report -> {args.out}")
    else:
        sys.stdout.write(fileio.render_report(design))
    return 0


def cmd_analyze(cfg, args) -> int:
    trial_dir = Path(args.trial_dir)
    if not trial_dir.is_dir():
        raise DataError(f"not a directory: {trial_dir}")
    metrics, rejected, likert = [], [], ()
    for path in sorted(trial_dir.iterdir(), key=lambda p: p.name):
        if not path.is_file():
            continue
        if path.name == "likert.csv":
            likert = fileio.read_likert_responses(path)
            continue
        meta = fileio.parse_trial_filename(path.name)
        if meta is None:
            continue
        try:
            log = fileio.read_trial_log(path, meta)
            cleaned, fraction = trials.clean_interpolate(
                log, cfg.angle_bounds, cfg.max_interpolated_fraction)
            metrics.append(trials.trial_metrics(cleaned, cfg.gearing, fraction))
        except (TrialRejected, DataError) as exc:
            rejected.append((path.name, str(exc)))
    if not metrics:
        raise DataError(f"no usable trial logs in {trial_dir}")

    report = trials.aggregate_report(metrics, cfg.gearing, rejected, likert)
    fileio.write_report(args.out, report)
    plots_dir = Path(args.plots_dir) if args.plots_dir else Path(args.out).parent
    written = fileio.write_plot_csvs(report, plots_dir)
    print(f"{len(metrics)} trials analyzed, {len(rejected)} rejected "
          f"-> {args.out} + {len(written)} plot CSVs in {plots_dir}")
    return 0


def cmd_report(cfg, args) -> int:
    report = fileio.read_report(args.report)
    plots_dir = Path(args.plots_dir) if args.plots_dir else Path(args.report).parent
    written = fileio.write_plot_csvs(report, plots_dir)
    print(f"re-rendered {len(written)} plot CSVs in {plots_dir}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.func(cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except (DataError, DomainError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
