"""Command-line front end: simulate, check, evaluate and benchmark."""

import argparse
import asyncio
import json
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

import structlog

from planogram_compliance import __version__
from planogram_compliance.config import LogLevel, MatcherName, Settings, load_settings
from planogram_compliance.errors import FormatError, PlanogramError
from planogram_compliance.formats.documents import (
    Manifest,
    ManifestScene,
    dataset_report_to_document,
    load_detections,
    load_ground_truth,
    load_manifest,
    load_planogram,
    observed_to_document,
    report_to_document,
    save_detections,
    save_ground_truth,
    save_manifest,
    save_planogram,
)
from planogram_compliance.formats.images import load_templates, read_pgm, save_templates, write_pgm
from planogram_compliance.formats.svg import render_overlay, save_overlay
from planogram_compliance.models.evaluation import DatasetReport, Stage
from planogram_compliance.models.planogram import GridExtent, ReferencePlanogram
from planogram_compliance.models.report import CheckOutcome
from planogram_compliance.models.scene import GroundTruthScene
from planogram_compliance.orchestrator import ComplianceChecker, SceneInput
from planogram_compliance.simulation.dataset import (
    BENCHMARK_NOISE,
    DatasetSpec,
    SimulatedScene,
    simulate_dataset,
    simulate_scene,
)
from planogram_compliance.simulation.planogram import gen_planogram
from planogram_compliance.simulation.render import render_scene
from planogram_compliance.verification.context import SceneContext

logger = structlog.get_logger()

EXIT_OK = 0
EXIT_ISSUES = 1
EXIT_ERROR = 2

PLANOGRAM_FILE = "planogram.json"
SCENE_FILE = "scene.json"
GROUND_TRUTH_FILE = "ground_truth.json"
DETECTIONS_FILE = "detections.json"
IMAGE_FILE = "scene.pgm"
TEMPLATES_DIR = "templates"
MANIFEST_FILE = "manifest.json"


def _column_range(text: str) -> tuple[int, int]:
    try:
        first, last = (int(part) for part in text.split(":"))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected FIRST:LAST, got {text!r}") from e
    if first > last:
        raise argparse.ArgumentTypeError(f"empty column range {text!r}")
    return first, last


def _add_settings_options(parser: argparse.ArgumentParser) -> None:
    """Options that map onto ``Settings`` fields; unset ones fall through to config and env."""
    group = parser.add_argument_group("engine parameters")
    group.add_argument("--config", type=Path, help="JSON file of settings")
    group.add_argument("--tau", type=float)
    group.add_argument("--alpha", type=float)
    group.add_argument("--lambda", dest="lambda_penalty", type=float)
    group.add_argument("--no-prune", dest="prune", action="store_const", const=False)
    group.add_argument("--roi-margin", type=float)
    group.add_argument("--accept-threshold", type=float)
    group.add_argument("--overlap-iou-max", type=float)
    group.add_argument("--matcher", choices=[m.value for m in MatcherName])
    group.add_argument("--seed", type=int)
    group.add_argument("--workers", type=int)
    group.add_argument("--iou-threshold", type=float)
    group.add_argument("--log-level", choices=[level.value for level in LogLevel])
    group.add_argument("--log-json", dest="log_json", action="store_const", const=True)
    group.add_argument("--log-console", dest="log_json", action="store_const", const=False)


def _add_noise_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("simulation")
    group.add_argument("--rows", type=int, default=3)
    group.add_argument("--cols", type=int, default=4)
    group.add_argument("--n-products", type=int)
    group.add_argument("--cell-w", type=float)
    group.add_argument("--cell-h", type=float)
    group.add_argument("--void-rate", type=float)
    group.add_argument("--miss-rate", type=float)
    group.add_argument("--fp-rate", type=float)
    group.add_argument("--confusion-rate", type=float)
    group.add_argument("--jitter-sigma", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planogram-compliance",
        description="Check shelf detections against planned product layouts.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="generate a synthetic scene or dataset")
    _add_settings_options(simulate)
    _add_noise_options(simulate)
    simulate.add_argument("--scenes", type=int, default=1, help="more than one writes a dataset")
    simulate.add_argument("--view-cols", type=_column_range, help="photograph only columns FIRST:LAST")
    simulate.add_argument("--no-images", dest="images", action="store_false")
    simulate.add_argument("--out", type=Path, required=True, help="output directory")

    check = commands.add_parser("check", help="check one image against one or more planograms")
    _add_settings_options(check)
    check.add_argument("--planogram", type=Path, action="append", required=True)
    check.add_argument("--detections", type=Path, required=True)
    check.add_argument("--scene", type=Path, help="graymap of the shelf image")
    check.add_argument("--templates", type=Path, help="directory of <product>.pgm templates")
    check.add_argument("--ground-truth", type=Path, help="ground truth for the oracle matcher")
    check.add_argument("--out", type=Path, help="report file (default: stdout)")
    check.add_argument("--observed", type=Path, help="also write the final observed graph")
    check.add_argument("--svg", type=Path, help="also write an SVG overlay")

    evaluate = commands.add_parser("evaluate", help="evaluate a dataset manifest")
    _add_settings_options(evaluate)
    evaluate.add_argument("--manifest", type=Path, required=True)
    evaluate.add_argument("--stage", choices=[s.value for s in Stage], action="append")
    evaluate.add_argument("--per-scene", action="store_true", help="include per-scene rows")
    evaluate.add_argument("--svg-dir", type=Path)
    evaluate.add_argument("--out", type=Path)

    benchmark = commands.add_parser("benchmark", help="simulate and evaluate in memory")
    _add_settings_options(benchmark)
    _add_noise_options(benchmark)
    benchmark.set_defaults(rows=2, cols=6)
    benchmark.add_argument("--scenes", type=int, default=70)
    benchmark.add_argument(
        "--noise",
        choices=["benchmark", "settings"],
        default="benchmark",
        help="start from the benchmark noise point or from configured rates",
    )
    benchmark.add_argument("--stage", choices=[s.value for s in Stage], action="append")
    benchmark.add_argument("--per-scene", action="store_true")
    benchmark.add_argument("--out", type=Path)

    return parser


def settings_from_args(args: argparse.Namespace) -> Settings:
    """Merge command-line values over the config file, environment and defaults."""
    overrides = {name: getattr(args, name, None) for name in Settings.model_fields}
    return load_settings(getattr(args, "config", None), **overrides)


def _emit(document: Any, out: Path | None) -> None:
    text = json.dumps(document, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")


def _write_scene(directory: Path, simulated: SimulatedScene, images: bool, settings: Settings) -> None:
    gt = simulated.ground_truth
    save_planogram(gt.planogram, directory / PLANOGRAM_FILE)
    save_ground_truth(gt, directory / GROUND_TRUTH_FILE)
    save_detections(simulated.detections, directory / DETECTIONS_FILE, gt.width, gt.height)
    _emit(
        {
            "index": simulated.index,
            "width": gt.width,
            "height": gt.height,
            "cell_w": settings.cell_w,
            "cell_h": settings.cell_h,
            "void_rate": settings.void_rate,
            "noise": settings.noise_params().model_dump(),
        },
        directory / SCENE_FILE,
    )
    if images:
        image, templates = render_scene(gt)
        write_pgm(directory / IMAGE_FILE, image)
        save_templates(templates, directory / TEMPLATES_DIR)


def cmd_simulate(args: argparse.Namespace, settings: Settings) -> int:
    noise = settings.noise_params()
    out: Path = args.out
    if args.scenes <= 1:
        view = None
        if args.view_cols is not None:
            view = GridExtent(min_row=0, min_col=args.view_cols[0], max_row=args.rows - 1, max_col=args.view_cols[1])
        planogram = gen_planogram(args.rows, args.cols, settings.n_products, settings.seed)
        simulated = simulate_scene(
            planogram,
            noise,
            cell_w=settings.cell_w,
            cell_h=settings.cell_h,
            void_rate=settings.void_rate,
            seed=settings.seed,
            view=view,
        )
        _write_scene(out, simulated, args.images, settings)
        logger.info("scene_written", out=str(out), detections=len(simulated.detections))
        return EXIT_OK

    spec = DatasetSpec(
        scenes=args.scenes,
        rows=args.rows,
        cols=args.cols,
        n_products=settings.n_products,
        cell_w=settings.cell_w,
        cell_h=settings.cell_h,
        void_rate=settings.void_rate,
        seed=settings.seed,
    )
    planograms: list[str] = []
    entries: list[ManifestScene] = []
    for simulated in simulate_dataset(spec, noise):
        name = f"scene-{simulated.index:03d}"
        _write_scene(out / name, simulated, args.images, settings)
        planograms.append(f"{name}/{PLANOGRAM_FILE}")
        entries.append(
            ManifestScene(
                name=name,
                planogram=simulated.index,
                detections=f"{name}/{DETECTIONS_FILE}",
                ground_truth=f"{name}/{GROUND_TRUTH_FILE}",
                image=f"{name}/{IMAGE_FILE}" if args.images else None,
                templates=f"{name}/{TEMPLATES_DIR}" if args.images else None,
            )
        )
    save_manifest(Manifest(planograms=planograms, scenes=entries), out / MANIFEST_FILE)
    logger.info("dataset_written", out=str(out), scenes=len(entries))
    return EXIT_OK


def _ground_truth_for(
    path: Path, references: list[ReferencePlanogram], width: int | None, height: int | None
) -> GroundTruthScene:
    """Ground truth against the first planogram it partitions."""
    errors = []
    for reference in references:
        try:
            return load_ground_truth(path, reference, width, height)
        except FormatError as e:
            errors.append(str(e))
    raise FormatError("; ".join(errors))


def _overlay(outcome: CheckOutcome, scene: SceneContext, image_href: str | None = None) -> str:
    final = outcome.verification.observed
    frame = scene.frame
    if frame is not None:
        width, height = frame.w, frame.h
    else:
        boxes = [n.bbox for n in final.nodes]
        width = max((b.x2 for b in boxes), default=1.0)
        height = max((b.y2 for b in boxes), default=1.0)
    return render_overlay(
        width,
        height,
        final,
        [a.obs_node for a in outcome.report.assignments],
        outcome.report.issues,
        image_href,
    )


def _require_inputs(checker: ComplianceChecker, scene: SceneContext) -> None:
    matcher = checker.matcher()
    if not matcher.can_handle(scene):
        needs = "--scene and --templates" if matcher.name == "zncc" else "--ground-truth"
        raise FormatError(f"matcher {matcher.name!r} requires {needs}")


def cmd_check(args: argparse.Namespace, settings: Settings) -> int:
    references = [load_planogram(path) for path in args.planogram]
    detection_file = load_detections(args.detections)
    ground_truth = None
    if args.ground_truth:
        ground_truth = _ground_truth_for(
            args.ground_truth, references, detection_file.width, detection_file.height
        )
    scene = SceneContext(
        image=read_pgm(args.scene) if args.scene else None,
        templates=load_templates(args.templates) if args.templates else {},
        ground_truth=ground_truth,
        width=detection_file.width,
        height=detection_file.height,
    )
    checker = ComplianceChecker(settings)
    _require_inputs(checker, scene)

    outcome = checker.check(references, detection_file.detections, scene)
    _emit(report_to_document(outcome.report), args.out)
    if args.observed:
        _emit(observed_to_document(outcome.verification.observed), args.observed)
    if args.svg:
        href = str(args.scene.resolve()) if args.scene else None
        save_overlay(args.svg, _overlay(outcome, scene, href))
    return EXIT_OK if outcome.report.is_compliant else EXIT_ISSUES


def _stage_filter(report: DatasetReport, stages: list[str] | None, per_scene: bool) -> dict[str, Any]:
    document = dataset_report_to_document(report, include_scenes=per_scene)
    if stages:
        document["stages"] = {k: v for k, v in document["stages"].items() if k in stages}
        for row in document.get("scenes", []):
            row["stages"] = {k: v for k, v in row["stages"].items() if k in stages}
    return document


def _manifest_inputs(path: Path) -> list[SceneInput]:
    manifest = load_manifest(path)
    base = path.parent
    planograms = [load_planogram(base / p) for p in manifest.planograms]
    items = []
    for entry in manifest.scenes:
        reference = planograms[entry.planogram]
        detection_file = load_detections(base / entry.detections)
        scene = SceneContext(
            image=read_pgm(base / entry.image) if entry.image else None,
            templates=load_templates(base / entry.templates) if entry.templates else {},
            ground_truth=load_ground_truth(
                base / entry.ground_truth, reference, detection_file.width, detection_file.height
            ),
        )
        items.append(
            SceneInput(
                name=entry.name,
                references=(reference,),
                detections=detection_file.detections,
                scene=scene,
            )
        )
    return items


def cmd_evaluate(args: argparse.Namespace, settings: Settings) -> int:
    items = _manifest_inputs(args.manifest)
    checker = ComplianceChecker(settings)
    for item in items:
        _require_inputs(checker, item.scene)
    report, outcomes = _run_evaluation(checker, items)
    if args.svg_dir:
        for item, outcome in zip(items, outcomes, strict=True):
            save_overlay(args.svg_dir / f"{item.name}.svg", _overlay(outcome, item.scene))
    _emit(_stage_filter(report, args.stage, args.per_scene), args.out)
    return EXIT_OK


def _run_evaluation(
    checker: ComplianceChecker, items: list[SceneInput]
) -> tuple[DatasetReport, list[CheckOutcome]]:
    return asyncio.run(checker.evaluate_scenes(items))


def cmd_benchmark(args: argparse.Namespace, settings: Settings) -> int:
    noise = settings.noise_params() if args.noise == "settings" else BENCHMARK_NOISE
    explicit = {
        name: getattr(args, name)
        for name in ("miss_rate", "fp_rate", "confusion_rate", "jitter_sigma")
        if getattr(args, name) is not None
    }
    noise = noise.model_copy(update={**explicit, "seed": settings.seed})
    spec = DatasetSpec(
        scenes=args.scenes,
        rows=args.rows,
        cols=args.cols,
        n_products=settings.n_products,
        cell_w=settings.cell_w,
        cell_h=settings.cell_h,
        void_rate=settings.void_rate,
        seed=settings.seed,
    )
    render = settings.matcher == MatcherName.ZNCC
    items = []
    for simulated in simulate_dataset(spec, noise):
        image, templates = render_scene(simulated.ground_truth) if render else (None, {})
        items.append(
            SceneInput(
                name=f"scene-{simulated.index:03d}",
                references=(simulated.planogram,),
                detections=simulated.detections,
                scene=SceneContext(image=image, templates=templates, ground_truth=simulated.ground_truth),
            )
        )
    report, _ = _run_evaluation(ComplianceChecker(settings), items)
    document = _stage_filter(report, args.stage, args.per_scene)
    document["noise"] = noise.model_dump()
    _emit(document, args.out)
    return EXIT_OK


COMMANDS: dict[str, Callable[[argparse.Namespace, Settings], int]] = {
    "simulate": cmd_simulate,
    "check": cmd_check,
    "evaluate": cmd_evaluate,
    "benchmark": cmd_benchmark,
}


def run(args: argparse.Namespace, settings: Settings) -> int:
    """Dispatch a parsed command; data errors become exit code 2."""
    try:
        return COMMANDS[args.command](args, settings)
    except (PlanogramError, ValueError, OSError) as e:
        logger.error("command_failed", command=args.command, error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
