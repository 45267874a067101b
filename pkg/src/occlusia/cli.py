"""Command-line entry point: ``occlusia track|eval|synth|sweep``.

Exit status is 0 on success, 1 for usage errors and 2 for bad input data.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .config import Config, load_config
from .errors import ConfigError, OcclusiaError
from .io import read_detections, read_frames, read_trajectories, write_trajectories
from .metrics import TABLE_COLUMNS, TrajectorySet, evaluate
from .pipeline import run_sequence
from .synth import PRESETS, preset, synth_scenario

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _format(value) -> str:
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def _report_line(report, percent=False) -> str:
    row = report.row(percent)
    return ",".join(_format(row[c]) for c in TABLE_COLUMNS)


def _range(text: str) -> list[float]:
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"empty or endless range {text!r}")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(n)]


def _config(args) -> Config:
    cfg = load_config(getattr(args, "config", None))
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        cfg.set(key.strip(), value.strip())
    return cfg


def _frames(args):
    return read_frames(args.frames) if args.frames else None


def cmd_track(args) -> int:
    cfg = _config(args)
    detections = read_detections(args.detections)
    results = run_sequence(detections, _frames(args), cfg)
    write_trajectories(results, args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    gt = read_trajectories(args.gt)
    hyp = read_trajectories(args.hyp)
    report = evaluate(gt, hyp, args.iou)
    print(",".join(TABLE_COLUMNS))
    print(_report_line(report, args.percent))
    return EXIT_OK


def cmd_synth(args) -> int:
    spec = preset(args.preset, args.seed, frames=args.frames, dropout=args.dropout, jitter=args.jitter)
    synth_scenario(spec, args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    base = _config(args)
    detections = read_detections(args.detections)
    gt = read_trajectories(args.gt)
    frames = _frames(args)
    lines = [",".join(("alpha1", "alpha2") + TABLE_COLUMNS)]
    for a1 in args.alpha1:
        if not 0.0 <= a1 <= 1.0:
            raise ConfigError(f"alpha1 must lie in [0, 1], got {a1}")
        cfg = base.updated(assoc__alpha1=a1, assoc__alpha2=round(1.0 - a1, 10))
        report = evaluate(gt, TrajectorySet.from_results(run_sequence(detections, frames, cfg)), cfg.eval.iou_threshold)
        lines.append(f"{a1:.4f},{1.0 - a1:.4f}," + _report_line(report))
    with open(args.out, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="occlusia", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("track", help="run the tracker over a detection file")
    p.add_argument("--detections", required=True)
    p.add_argument("--frames", help="directory of NNNNNN.ppm frames")
    p.add_argument("--config", help="key=value config file (default: $OCCLUSIA_CONFIG)")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one config key")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("eval", help="score trajectories against ground truth")
    p.add_argument("--hyp", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--iou", type=float, default=0.5)
    p.add_argument("--percent", action="store_true", help="print ratios as percentages")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="render a synthetic scenario")
    p.add_argument("--preset", required=True, choices=sorted(PRESETS))
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--frames", type=int)
    p.add_argument("--dropout", type=float)
    p.add_argument("--jitter", type=float)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sweep", help="evaluate a grid of overlap/colour weightings")
    p.add_argument("--detections", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--frames", help="directory of NNNNNN.ppm frames")
    p.add_argument("--alpha1", required=True, type=_range, metavar="START:STOP:STEP")
    p.add_argument("--config")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return args.func(args)
    except (OcclusiaError, OSError, ValueError) as exc:
        print(f"occlusia {args.command}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
