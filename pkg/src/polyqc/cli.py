"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from . import perturbation, report
from .config import ConfigError, RunConfig, load_config
from .core import DomainError
from .dynamics import IntegrationError
from .spectrum import ConvergenceError

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class UsageError(Exception):
    pass


def parse_ratios(spec: str) -> list[float]:
    """``'54.9'``, ``'1:100'`` (step 1) or ``'1:100:0.5'``; endpoints inclusive."""
    parts = [p.strip() for p in spec.split(":")] if spec else []
    try:
        nums = [float(p) for p in parts if p]
    except ValueError:
        raise UsageError(f"bad ratio range {spec!r}") from None
    if len(nums) != len(parts) or not 1 <= len(nums) <= 3:
        raise UsageError(f"bad ratio range {spec!r}")
    if len(nums) == 1:
        ratios = nums
    else:
        start, stop = nums[0], nums[1]
        step = nums[2] if len(nums) == 3 else 1.0
        if step <= 0:
            raise UsageError("ratio step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        ratios = [start + i * step for i in range(max(count, 0))]
    if not ratios:
        raise UsageError(f"empty ratio range {spec!r}")
    if any(r <= 0 for r in ratios):
        raise UsageError("ratios must be positive")
    return ratios


def _emit(text: str, out_dir, filename: str):
    if out_dir is None:
        sys.stdout.write(text)
        return
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / filename).write_text(text, encoding="utf-8")
    print(f"wrote {path / filename}", file=sys.stderr)


def _load(args) -> RunConfig:
    if not args.config:
        raise UsageError(f"{args.command} needs --config")
    cfg = load_config(args.config)
    if args.nmax is not None:
        cfg.settings.values["n_max"] = args.nmax
    if args.converge is not None:
        cfg.settings.values["converge"] = args.converge
    return cfg


def cmd_report(args):
    cfg = _load(args)
    rows = report.run_report(cfg, jobs=args.jobs)
    if args.format == "table":
        _emit(report.report_table(rows), args.out, "report.txt")
    elif args.format == "structured":
        _emit(report.to_structured({"qubits": rows}), args.out, "report.json")
    else:
        raise UsageError("report supports --format table or structured")


def _curve_point(r):
    return perturbation.perturbative_alpha_curve([r])[0]


def cmd_curve(args):
    ratios = parse_ratios(args.ratios)
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_curve_point, ratios))
    else:
        results = perturbation.perturbative_alpha_curve(ratios)
    results.sort(key=lambda r: r.ratio)
    if args.format == "structured":
        payload = [
            {
                "ratio": report.quantity(r.ratio, "1"),
                "delta0": report.quantity(r.delta0, "1"),
                "delta1": report.quantity(r.delta1, "1"),
                "delta2": report.quantity(r.delta2, "1"),
                "alpha_over_Ec": report.quantity(r.alpha_over_Ec, "1"),
                "energy_unit": "E_c",
                **({"error": r.error} if r.error else {}),
            }
            for r in results
        ]
        _emit(report.to_structured({"curve": payload}), args.out, "curve.json")
    else:
        _emit(report.curve_csv(results), args.out, "curve.csv")
    if any(r.error for r in results):
        raise ConvergenceError("some curve points failed; see the error column")


def cmd_tline(args):
    cfg = _load(args)
    if not cfg.tlines:
        raise UsageError("config has no [tline] section")
    records = report.tline_report(cfg)
    if args.format == "table":
        lines = []
        for rec in records:
            lines.append(
                f"{rec['name']}: N={rec['N']}  E_l/E_c(line)={rec['line_ratio']['value']:.5g}  "
                f"participation={rec['participation']['value']:.5g}  alpha/h={rec['alpha']['value']:.5g} Hz"
            )
            lines.extend(f"  note: {n}" for n in rec["notes"])
        _emit("\n".join(lines) + "\n", args.out, "tline.txt")
    else:
        _emit(report.to_structured({"tlines": records}), args.out, "tline.json")


def cmd_classical(args):
    cfg = _load(args)
    if not cfg.classical:
        raise UsageError("config has no [classical] section")
    summaries = []
    for name, sec in cfg.classical.items():
        summary, traj = report.classical_run(sec)
        summaries.append(summary)
        if args.out is not None:
            _emit(report.trajectory_csv(traj), args.out, f"classical_{name}.csv")
        elif args.format == "csv":
            sys.stdout.write(report.trajectory_csv(traj))
    if args.out is not None or args.format == "structured":
        _emit(report.to_structured({"classical": summaries}), args.out, "classical.json")
    if args.format == "table":
        sys.stdout.write(
            "".join(
                f"{s['name']} ({s['model']}): f = {s['frequency']['value']:.6g} GHz, "
                f"small-oscillation {s['small_oscillation_frequency']['value']:.6g} GHz, "
                f"max |dE|/E = {s['energy_drift_max']['value']:.3g}\n"
                for s in summaries
            )
        )


def cmd_sweep(args):
    cfg = _load(args)
    if not cfg.sweeps:
        raise UsageError("config has no [sweep] section")
    for name in cfg.sweeps:
        _emit(report.run_sweep(cfg, name, jobs=args.jobs), args.out, f"sweep_{name}.csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyqc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = {
        "report": ("table", ("table", "structured"), cmd_report),
        "curve": ("csv", ("csv", "structured"), cmd_curve),
        "tline": ("structured", ("table", "structured"), cmd_tline),
        "classical": ("table", ("table", "structured", "csv"), cmd_classical),
        "sweep": ("csv", ("csv",), cmd_sweep),
    }
    for name, (fmt, choices, func) in defaults.items():
        p = sub.add_parser(name)
        p.add_argument("--config", help="run configuration file")
        p.add_argument("--out", help="output directory (default: stdout)")
        p.add_argument("--nmax", type=int, help="charge-basis truncation |n| <= NMAX (default 100)")
        p.add_argument("--converge", type=float, metavar="TOL_HZ", help="choose n_max by doubling until E01 and alpha agree to TOL_HZ")
        p.add_argument("--format", choices=choices, default=fmt)
        p.add_argument("--jobs", type=int, default=1)
        p.set_defaults(func=func)
        if name == "curve":
            p.add_argument("--ratios", default="1:100", help="E_l/E_c values: R, START:STOP or START:STOP:STEP")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            args.func(args)
    except (ConfigError, UsageError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, IntegrationError, DomainError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except BrokenPipeError:
        # downstream reader closed early (e.g. piped into head)
        sys.stdout = None
        return 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
