"""Command-line entry point for textkernel."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence, Tuple

from textkernel.core.config_loader import bootstrap_config
from textkernel.core.errors import TextKernelError, UsageError
from textkernel.core.logger import configure_logging
from textkernel.core.profiles import ProfileManager
from textkernel.runner.commands import AUTO, CommandRunner

LOGGER = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def parse_size(text: str) -> Tuple[int, int]:
    try:
        width, height = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from None
    if width < 1 or height < 1:
        raise argparse.ArgumentTypeError(f"size must be positive, got {text!r}")
    return width, height


def parse_dilation(text: str) -> str | int:
    if text == AUTO:
        return AUTO
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an odd integer or 'auto', got {text!r}") from None
    if value < 1 or value % 2 == 0:
        raise argparse.ArgumentTypeError(f"dilation size must be odd and >= 1, got {value}")
    return value


def parse_odd_range(text: str) -> List[int]:
    """``A..B`` selects the odd sizes in ``[A, B]``."""

    try:
        start, stop = (int(part) for part in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    values = [v for v in range(max(1, start), stop + 1) if v % 2 == 1]
    if not values:
        raise argparse.ArgumentTypeError(f"range {text!r} holds no odd size")
    return values


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_arg_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="textkernel", description="Minimalist text-kernel toolkit")
    parser.add_argument("--config", help="Path to configuration (default: textkernel.config.yml if present)")
    parser.add_argument("--profile", help="Dataset profile (sets short side for --s auto and default output mode)")
    parser.add_argument("--log-level", help="Override logging.level")
    parser.add_argument("--no-timing", action="store_true", help="Omit wall-clock fields from outputs")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    gen = sub.add_parser("gen-labels", help="Write text-region and kernel maps for annotations")
    gen.add_argument("--ann", required=True, help="Directory of annotation .txt files")
    gen.add_argument("--out", required=True, help="Output directory for .fkm maps")
    gen.add_argument("--size", type=parse_size, help="Label canvas WxH")
    gen.add_argument("--source-size", type=parse_size, help="Annotation resolution WxH (enables scaling)")
    gen.add_argument("--s", type=parse_dilation, help="Dilation size or 'auto'")
    gen.add_argument("--workers", type=_positive_int)
    gen.add_argument("--lenient", action="store_true", help="Skip malformed annotation lines")

    rec = sub.add_parser("reconstruct", help="Rebuild text lines from a kernel map")
    rec.add_argument("--map", required=True)
    rec.add_argument("--out", required=True)
    rec.add_argument("--s", type=parse_dilation)
    rec.add_argument("--threshold", type=float)
    rec.add_argument("--mode", choices=["polygon", "rect"])
    rec.add_argument("--min-area", type=int)
    rec.add_argument("--tiles", type=_positive_int, help="Bands for parallel labeling")
    rec.add_argument("--scale-to", type=parse_size, help="Rescale detections to WxH")

    ev = sub.add_parser("evaluate", help="Match detections to ground truth and report P/R/F")
    ev.add_argument("--dets", required=True)
    ev.add_argument("--gts", required=True)
    ev.add_argument("--iou", type=float)
    ev.add_argument("--size", type=parse_size, help="IoU canvas WxH")
    ev.add_argument("--out", help="Also write the report here")
    ev.add_argument("--workers", type=_positive_int)
    ev.add_argument("--lenient", action="store_true")

    ub = sub.add_parser("upper-bound", help="F-measure recoverable from perfect kernels")
    ub.add_argument("--ann", required=True)
    ub.add_argument("--s", type=parse_dilation)
    ub.add_argument("--s-range", type=parse_odd_range, help="Sweep odd sizes A..B")
    ub.add_argument("--sweep", action="store_true", help="Sweep evaluation.sweep sizes from the config")
    ub.add_argument("--size", type=parse_size)
    ub.add_argument("--source-size", type=parse_size)
    ub.add_argument("--min-area", type=int)
    ub.add_argument("--out")
    ub.add_argument("--workers", type=_positive_int)
    ub.add_argument("--lenient", action="store_true")

    syn = sub.add_parser("synth", help="Generate a seeded synthetic dataset")
    syn.add_argument("--count", type=_positive_int)
    syn.add_argument("--seed", type=int)
    syn.add_argument("--out")
    syn.add_argument("--size", type=parse_size)
    syn.add_argument("--instances", type=_positive_int)
    syn.add_argument("--min-side", type=_positive_int)
    syn.add_argument("--max-side", type=_positive_int)
    syn.add_argument("--spacing", type=int)
    syn.add_argument("--rotation", type=float, help="Maximum rotation in degrees")
    syn.add_argument("--thin-fraction", type=float)
    syn.add_argument("--thin-below", type=int)

    lc = sub.add_parser("loss-check", help="Verify Dice/OHEM values and gradients")
    lc.add_argument("--seed", type=int, default=0)
    lc.add_argument("--instances", type=_positive_int, default=100)

    nas = sub.add_parser("nas-demo", help="Random search over the block search space")
    nas.add_argument("--budget", type=_positive_int, default=100)
    nas.add_argument("--target-fps", type=float)
    nas.add_argument("--target", help="Named FPS target (A0, A1, A2)")
    nas.add_argument("--seed", type=int, default=0)
    nas.add_argument("--fps-scale", type=float, default=1.0)
    nas.add_argument("--trace", help="Write the search trace as JSON lines")
    nas.add_argument("--workers", type=_positive_int, default=1)

    bench = sub.add_parser("bench", help="Time the post-processing pipeline")
    bench.add_argument("--map", help="Kernel map (default: synthetic 640x640, 20 instances)")
    bench.add_argument("--repeat", type=_positive_int, default=10)
    bench.add_argument("--threads", type=_positive_int, default=4)
    bench.add_argument("--s", type=parse_dilation)
    bench.add_argument("--threshold", type=float)
    bench.add_argument("--seed", type=int, default=0)
    return parser


def _report_error(category: str, message: str, exit_code: int) -> int:
    sys.stderr.write(json.dumps({"error": category, "message": message}) + "\n")
    return exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
        config = bootstrap_config(args.config)
        configure_logging(
            args.log_level or config.logging.level,
            config.logging.logfile,
            command=args.command,
            profile=args.profile or config.profiles.default,
        )

        profile_manager = ProfileManager.from_config(config)
        if args.profile:
            profile_manager.activate(args.profile)
        LOGGER.debug("Active profile: %s", profile_manager.active_profile)

        runner = CommandRunner(
            config,
            profile_manager,
            include_timing=not args.no_timing,
            profile_selected=bool(args.profile),
        )
        return runner.run(args)
    except TextKernelError as exc:
        return _report_error(exc.category, str(exc), exc.exit_code)
    except OSError as exc:
        return _report_error("io", str(exc), 2)
    except ValueError as exc:
        return _report_error("data-format", str(exc), 3)


__all__ = ["main", "build_arg_parser", "parse_size", "parse_dilation", "parse_odd_range"]
