"""Subcommand handlers behind the ``textkernel`` command line."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple, TypeVar

import numpy as np

from textkernel.ccl.labeling import label_components, label_components_parallel
from textkernel.core.errors import InputOutputError, UsageError, VerificationError
from textkernel.core.logger import log_stage_timings
from textkernel.core.profiles import ProfileManager
from textkernel.evaluation.matching import match_detections
from textkernel.evaluation.prf import MatchCounts, aggregate, prf_from_counts
from textkernel.evaluation.upper_bound import upper_bound_counts
from textkernel.geometry.polygon import Polygon
from textkernel.io.annotations import list_annotation_files, parse_annotations, write_detections
from textkernel.io.files import atomic_write_text
from textkernel.io.mapfile import read_map, write_map
from textkernel.io.reports import build_report, dump_report, dumps_report
from textkernel.io.synth import SyntheticConfig, generate_dataset, write_dataset
from textkernel.losses.gradcheck import run_loss_checks
from textkernel.morphology.labels import generate_labels
from textkernel.morphology.ops import DilationSize
from textkernel.nas.oracles import StubOracle
from textkernel.nas.reward import RewardParams
from textkernel.nas.search import random_search
from textkernel.postprocess.pipeline import PostprocessConfig, binarize, reconstruct
from textkernel.schemas.config import TextKernelConfigSchema
from textkernel.state.timings import TimingLedger

LOGGER = logging.getLogger(__name__)

Size = Tuple[int, int]
T = TypeVar("T")
R = TypeVar("R")

AUTO = "auto"
_MODES = {"polygon": "polygon", "rect": "min_area_rect", "min_area_rect": "min_area_rect"}


class CommandRunner:
    """Dispatch parsed arguments to ``cmd_<subcommand>`` handlers.

    Every handler writes its machine-readable result to ``stdout`` and returns
    the process exit code.
    """

    def __init__(
        self,
        config: TextKernelConfigSchema,
        profiles: ProfileManager,
        *,
        include_timing: bool = True,
        profile_selected: bool = False,
        stdout: Optional[TextIO] = None,
    ) -> None:
        self._config = config
        self._profiles = profiles
        self._include_timing = include_timing
        self._profile_selected = profile_selected
        self._out = stdout or sys.stdout

    def run(self, args: argparse.Namespace) -> int:
        name = str(args.command)
        handler = getattr(self, f"cmd_{name.replace('-', '_')}", None)
        if handler is None:
            raise UsageError(f"Unsupported command '{name}'")
        LOGGER.debug("Running %s with profile %s", name, self._profiles.active_profile)
        return int(handler(args) or 0)

    # ------------------------------------------------------------------ helpers
    def _emit(self, payload: Dict[str, Any]) -> None:
        self._out.write(json.dumps(payload) + "\n")

    def _workers(self, args: argparse.Namespace) -> int:
        workers = getattr(args, "workers", None)
        return int(workers) if workers else self._config.evaluation.workers

    def _map_ordered(self, fn: Callable[[T], R], items: Sequence[T], workers: int) -> List[R]:
        if workers > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(fn, items))
        return [fn(item) for item in items]

    def _dilation_size(self, value: Any, short_side: Optional[int] = None) -> DilationSize:
        if value is None:
            return DilationSize(self._config.postprocess.s)
        if value == AUTO:
            # An explicit --profile wins over the working resolution.
            size = self._profiles.dilation_size(None if self._profile_selected else short_side)
            LOGGER.info("Dilation size scaled to %d", size)
            return size
        return DilationSize(value)

    def _canvas(self, size: Optional[Size]) -> Size:
        return tuple(size) if size else tuple(self._config.evaluation.canvas)  # type: ignore[return-value]

    def _output_mode(self, mode: Optional[str]) -> str:
        if mode:
            return _MODES[mode]
        if self._profile_selected:
            return self._profiles.current().output_mode
        return self._config.postprocess.output_mode

    def _load_polygons(
        self, path: Path, strict: bool = True, scale: Optional[Tuple[float, float]] = None
    ) -> List[Polygon]:
        polygons = parse_annotations(path, strict=strict)
        if scale is not None and scale != (1.0, 1.0):
            polygons = [poly.scaled(*scale) for poly in polygons]
        return polygons

    @staticmethod
    def _scale(size: Optional[Size], source: Optional[Size]) -> Optional[Tuple[float, float]]:
        if size is None or source is None:
            return None
        return size[0] / source[0], size[1] / source[1]

    def _postprocess_config(self, args: argparse.Namespace, s: int) -> PostprocessConfig:
        base = self._config.postprocess
        threshold = getattr(args, "threshold", None)
        min_area = getattr(args, "min_area", None)
        return PostprocessConfig(
            threshold=base.threshold if threshold is None else threshold,
            s=s,
            min_kernel_area=base.min_kernel_area if min_area is None else min_area,
            output_mode=self._output_mode(getattr(args, "mode", None)),
            connectivity=base.connectivity,
            tiles=getattr(args, "tiles", None) or base.tiles,
        )

    # ----------------------------------------------------------------- commands
    def cmd_gen_labels(self, args: argparse.Namespace) -> int:
        files = list_annotation_files(args.ann)
        width, height = self._canvas(args.size)
        s = self._dilation_size(args.s, min(width, height))
        scale = self._scale(args.size, args.source_size)
        out_dir = Path(args.out)

        def work(path: Path) -> Dict[str, Any]:
            polygons = self._load_polygons(path, strict=not args.lenient, scale=scale)
            labels = generate_labels(polygons, width, height, s)
            write_map(out_dir / f"{path.stem}.tex.fkm", labels.text_mask)
            write_map(out_dir / f"{path.stem}.ker.fkm", labels.kernel_labels.labels.astype(np.float32))
            return {
                "image": path.stem,
                "width": width,
                "height": height,
                "s": int(s),
                "instances": len(polygons),
                "empty_kernels": list(labels.empty_instances),
                "hidden_kernels": list(labels.hidden_instances),
            }

        for summary in self._map_ordered(work, files, self._workers(args)):
            self._emit(summary)
        LOGGER.info("Generated labels for %d images in %s", len(files), out_dir)
        return 0

    def cmd_reconstruct(self, args: argparse.Namespace) -> int:
        ledger = TimingLedger()
        with ledger.stage("parse"):
            values = read_map(args.map).astype(np.float64)
        height, width = values.shape
        s = self._dilation_size(args.s, min(width, height))
        cfg = self._postprocess_config(args, s)
        result = reconstruct(values, cfg, ledger)
        detections = result.detections
        if args.scale_to:
            sx, sy = args.scale_to[0] / width, args.scale_to[1] / height
            detections = [det.scaled(sx, sy) for det in detections]
        write_detections(args.out, detections)
        log_stage_timings(LOGGER, ledger.breakdown(), label=str(args.map))

        summary: Dict[str, Any] = {
            "map": str(args.map),
            "out": str(args.out),
            "s": int(cfg.s),
            "threshold": cfg.threshold,
            "mode": cfg.output_mode,
            "detections": len(detections),
        }
        if self._include_timing:
            summary["timings_ms"] = ledger.breakdown()
        self._emit(summary)
        return 0

    def cmd_evaluate(self, args: argparse.Namespace) -> int:
        gt_files = list_annotation_files(args.gts)
        det_dir = Path(args.dets)
        if not det_dir.is_dir():
            raise InputOutputError(f"Detection directory {det_dir} does not exist.")
        canvas = self._canvas(args.size)
        iou = self._config.evaluation.iou_threshold if args.iou is None else args.iou
        ledger = TimingLedger()

        with ledger.stage("total"):
            with ledger.stage("parse"):
                pairs = []
                for gt_path in gt_files:
                    det_path = det_dir / gt_path.name
                    dets: List[Polygon] = []
                    if det_path.is_file():
                        dets = self._load_polygons(det_path, strict=not args.lenient)
                    else:
                        LOGGER.warning("No detections for %s; counting as empty", gt_path.name)
                    pairs.append((dets, self._load_polygons(gt_path, strict=not args.lenient)))

            def work(item: Tuple[List[Polygon], List[Polygon]]) -> MatchCounts:
                dets, gts = item
                return MatchCounts.from_match(match_detections(dets, gts, iou, canvas), len(dets), len(gts))

            with ledger.stage("match"):
                counts = self._map_ordered(work, pairs, self._workers(args))

        report = build_report(
            protocol={"iou_threshold": iou, "canvas": list(canvas), "matching": "greedy", "images": len(gt_files)},
            images=[(path.stem, c) for path, c in zip(gt_files, counts)],
            aggregate=prf_from_counts(aggregate(counts)),
            timings=ledger if self._include_timing else None,
        )
        self._out.write(dump_report(report, args.out))
        return 0

    def cmd_upper_bound(self, args: argparse.Namespace) -> int:
        files = list_annotation_files(args.ann)
        canvas = self._canvas(args.size)
        scale = self._scale(args.size, args.source_size)
        gt_sets = [self._load_polygons(path, strict=not args.lenient, scale=scale) for path in files]
        cfg = self._config.evaluation
        if args.s_range:
            sizes = args.s_range
        elif args.sweep:
            sizes = list(cfg.sweep)
        else:
            sizes = [self._dilation_size(args.s, min(canvas))]
        min_area = cfg.min_kernel_area if args.min_area is None else args.min_area
        ledger = TimingLedger()

        results = []
        for s in sizes:
            with ledger.stage("total"):
                counts = aggregate(
                    upper_bound_counts(gt_sets, s, canvas, cfg.iou_threshold, min_area, self._workers(args))
                )
            results.append({"s": int(s), **counts.to_dict(), **prf_from_counts(counts).to_dict()})

        report: Dict[str, Any] = {
            "protocol": {
                "iou_threshold": cfg.iou_threshold,
                "canvas": list(canvas),
                "threshold": 0.5,
                "min_kernel_area": min_area,
                "images": len(files),
            },
            "results": results,
        }
        if self._include_timing:
            report["timings_ms"] = ledger.breakdown()
        self._out.write(dump_report(report, args.out))
        return 0

    def cmd_synth(self, args: argparse.Namespace) -> int:
        base = self._config.synth
        values = base.model_dump(exclude={"output_dir"})
        overrides = {
            "count": args.count,
            "seed": args.seed,
            "instances_per_image": args.instances,
            "min_side": args.min_side,
            "max_side": args.max_side,
            "spacing": args.spacing,
            "max_rotation_deg": args.rotation,
            "thin_fraction": args.thin_fraction,
            "thin_below": args.thin_below,
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        if args.size:
            values["width"], values["height"] = args.size
        out_dir = args.out or base.output_dir
        if out_dir is None:
            raise UsageError("synth needs --out (or synth.output_dir in the config).")

        cfg = SyntheticConfig(**values)
        images = generate_dataset(cfg)
        write_dataset(out_dir, images, cfg)
        self._emit(
            {
                "out": str(out_dir),
                "images": len(images),
                "instances": sum(len(im.polygons) for im in images),
                "thin": sum(len(im.thin) for im in images),
            }
        )
        return 0

    def cmd_loss_check(self, args: argparse.Namespace) -> int:
        losses = self._config.losses
        results = run_loss_checks(args.seed, args.instances, alpha=losses.alpha, ohem_ratio=losses.ohem_ratio)
        failed = [r.name for r in results if not r.passed]
        self._emit({"checks": [r.to_dict() for r in results], "passed": not failed})
        if failed:
            raise VerificationError(f"Loss checks failed: {', '.join(failed)}")
        return 0

    def cmd_nas_demo(self, args: argparse.Namespace) -> int:
        nas = self._config.nas
        target_name: Optional[str] = None
        if args.target_fps is not None:
            target_fps = float(args.target_fps)
        else:
            target_name = args.target or nas.default_target
            if target_name not in nas.targets:
                raise UsageError(f"Unknown target '{target_name}' (known: {', '.join(sorted(nas.targets))})")
            target_fps = nas.targets[target_name]

        params = RewardParams(target_fps=target_fps, alpha=nas.alpha, w=nas.w)
        oracle = StubOracle(fps_scale=args.fps_scale)
        result = random_search(
            oracle, params, args.budget, args.seed, nas.partition, nas.channels, workers=self._workers(args)
        )
        best = result.best_entry
        if args.trace:
            atomic_write_text(args.trace, "".join(json.dumps(entry.to_dict()) + "\n" for entry in result.trace))
        self._emit(
            {
                "target": target_name,
                "target_fps": target_fps,
                "budget": args.budget,
                "seed": args.seed,
                "best_index": best.index,
                "best_reward": result.best_reward,
                "metrics": best.metrics.to_dict(),
                "architecture": result.best.to_dict(),
            }
        )
        return 0

    def cmd_bench(self, args: argparse.Namespace) -> int:
        if args.map:
            values = read_map(args.map).astype(np.float64)
            source = str(args.map)
        else:
            values = synthetic_kernel_map(seed=args.seed)
            source = "synthetic"
        height, width = values.shape
        cfg = self._postprocess_config(args, self._dilation_size(args.s, min(width, height)))
        repeat = max(1, args.repeat)

        ledger = TimingLedger()
        components = 0
        for _ in range(repeat):
            components = len(reconstruct(values, cfg, ledger).detections)

        mask = binarize(values, cfg.threshold)
        sequential, seq_ms = _timed(lambda: label_components(mask, cfg.connectivity), repeat)
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            label_components_parallel(mask, cfg.connectivity, args.threads, executor=pool)
            parallel, par_ms = _timed(
                lambda: label_components_parallel(mask, cfg.connectivity, args.threads, executor=pool), repeat
            )
        identical = parallel == sequential
        report: Dict[str, Any] = {
            "map": source,
            "shape": [height, width],
            "repeat": repeat,
            "threads": args.threads,
            "components": components,
            "identical": identical,
        }
        if self._include_timing:
            report["timings_ms"] = {name: round(value / repeat, 6) for name, value in ledger.breakdown().items()}
            report["ccl_sequential_ms"] = round(seq_ms, 6)
            report["ccl_parallel_ms"] = round(par_ms, 6)
            report["speedup"] = round(seq_ms / par_ms, 3) if par_ms > 0 else None
        self._out.write(dumps_report(report))
        if not identical:
            raise VerificationError("Tiled labeling differs from sequential labeling.")
        return 0


def _timed(fn: Callable[[], T], repeat: int) -> Tuple[T, float]:
    """Run ``fn`` ``repeat`` times; return the last result and the mean milliseconds."""

    result: Any = None
    start = time.perf_counter()
    for _ in range(repeat):
        result = fn()
    return result, (time.perf_counter() - start) * 1000.0 / repeat


def synthetic_kernel_map(seed: int = 0, size: Size = (640, 640), instances: int = 20, s: int = 9) -> np.ndarray:
    """Perfect kernel map of ``instances`` separated rectangles."""

    cfg = SyntheticConfig(count=1, seed=seed, width=size[0], height=size[1], instances_per_image=instances)
    image = generate_dataset(cfg)[0]
    return generate_labels(image.polygons, size[0], size[1], s).kernel_mask.astype(np.float64)


__all__ = ["AUTO", "CommandRunner", "synthetic_kernel_map"]
