"""Command-line frontend: run, sweep, compare, validate, report.

Exit codes: 0 success, 1 scenario or replay error, 2 usage error.
Diagnostics go to stderr; table data goes to the selected output stream.
``run`` and ``sweep`` output is byte-identical across repeated invocations
on the same input.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path

from .fabric import FabricError
from .scenario import (
    ScenarioError,
    compare_aggregators,
    load_scenario,
    render_compare_csv,
    render_compare_text,
    render_report_csv,
    render_report_text,
    render_sweep_csv,
    render_sweep_text,
    run_scenario,
    sweep_wss_count,
)


def _parse_int_list(text: str) -> list[int]:
    """Accept '2,4,8' or '1..24' (inclusive) or a mix like '1..4,8'."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo_text, _, hi_text = part.partition("..")
            lo, hi = int(lo_text), int(hi_text)
            if hi < lo:
                raise ValueError(f"empty range {part!r}")
            values.extend(range(lo, hi + 1))
        else:
            values.append(int(part))
    if not values:
        raise ValueError(f"no values in {text!r}")
    return values


def _int_list(text: str) -> list[int]:
    try:
        return _parse_int_list(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tpagg",
        description=(
            "Simulate and size CDC-ROADM transponder aggregators that mix an "
            "unfiltered variable-combiner path with a small pool of shared WSS filters."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, strict: bool = True) -> None:
        p.add_argument("-o", "--output", metavar="FILE", help="write table here (default stdout)")
        p.add_argument(
            "--format", choices=("csv", "text"), default="csv", help="table format (default csv)"
        )
        if strict:
            p.add_argument(
                "--strict", action="store_true", help="stop at the first failing event"
            )
        p.add_argument(
            "--seed",
            type=int,
            default=None,
            help="reserved for forward compatibility; the replay engine is deterministic",
        )

    p_run = sub.add_parser("run", help="replay a scenario and emit the signal report")
    p_run.add_argument("scenario", help="scenario file (YAML)")
    add_common(p_run)

    p_sweep = sub.add_parser("sweep", help="tabulate required WSS counts")
    p_sweep.add_argument("--n", required=True, type=_int_list, metavar="RANGE",
                         help="transponder counts, e.g. 1..24")
    p_sweep.add_argument("--k", required=True, type=_int_list, metavar="LIST",
                         help="per-degree unfiltered caps, e.g. 2,4,8")
    p_sweep.add_argument("--m", required=True, type=int, help="degree count for the MxN baseline")
    p_sweep.add_argument("--plot", metavar="PNG", help="also render the sweep figure here")
    add_common(p_sweep, strict=False)

    p_cmp = sub.add_parser("compare", help="score a scenario's demand under three aggregators")
    p_cmp.add_argument("scenario", help="scenario file (YAML)")
    add_common(p_cmp)

    p_val = sub.add_parser("validate", help="check a scenario file and exit")
    p_val.add_argument("scenario", help="scenario file (YAML)")

    p_rep = sub.add_parser(
        "report", help="replay a scenario and write CSV tables plus figures to a directory"
    )
    p_rep.add_argument("scenario", help="scenario file (YAML)")
    p_rep.add_argument("--out-dir", required=True, metavar="DIR", help="output directory")
    p_rep.add_argument("--strict", action="store_true", help="stop at the first failing event")
    p_rep.add_argument(
        "--seed", type=int, default=None,
        help="reserved for forward compatibility; the replay engine is deterministic",
    )
    return parser


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8", newline="")


def _cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    result = run_scenario(scenario, strict=args.strict)
    if args.format == "csv":
        _emit(render_report_csv(result.reports), args.output)
    else:
        _emit(render_report_text(result), args.output)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    rows = sweep_wss_count(args.n, args.k, args.m)
    if args.format == "csv":
        _emit(render_sweep_csv(rows), args.output)
    else:
        _emit(render_sweep_text(rows), args.output)
    if args.plot:
        from . import plots

        plots.save_sweep_figure(rows, args.plot)
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    rows = compare_aggregators(scenario, strict=args.strict)
    if args.format == "csv":
        _emit(render_compare_csv(rows), args.output)
    else:
        _emit(render_compare_text(rows), args.output)
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    cfg = scenario.config
    sys.stdout.write(
        f"ok: {args.scenario} (n={cfg.transponders}, m={cfg.degrees}, "
        f"k={cfg.direct_cap}, l={cfg.wss_count}, events={len(scenario.events)})\n"
    )
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    from . import plots

    scenario = load_scenario(args.scenario)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    result = run_scenario(scenario, strict=args.strict)
    (out_dir / "report.csv").write_text(
        render_report_csv(result.reports), encoding="utf-8", newline=""
    )
    written = [out_dir / "report.csv"]

    rows = compare_aggregators(scenario, strict=args.strict)
    (out_dir / "compare.csv").write_text(render_compare_csv(rows), encoding="utf-8", newline="")
    written.append(out_dir / "compare.csv")

    written.extend(plots.save_report_figures(result.reports, out_dir))
    if rows:
        written.append(plots.save_compare_figure(rows, out_dir / "comparison.png"))
    for path in written:
        sys.stderr.write(f"wrote {path}\n")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "compare": _cmd_compare,
    "validate": _cmd_validate,
    "report": _cmd_report,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ScenarioError, FabricError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
