"""Command line: ``idmap parse | map | evolve | eval | truth``.

Exit codes: 0 success (warnings allowed), 1 runtime or input error, 2 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from .code_model import CodeModel, CodeModelError, read_xml, write_xml
from .evaluation import (
    EvaluationError,
    corpus_stats,
    evaluate_map,
    format_ground_truth,
    ground_truth_from_models,
    read_ground_truth,
)
from .fca import ContextError, build_aoc_poset, build_context
from .javaparse import ExtractionError, ParseDiagnostic, extract_variant
from .maps import MAP_KINDS, MapError, classify_evolution, extract_map, kind_label, parse_kind_label
from .reporting import RenderOptions, evolution_summary, evolution_to_json, to_dot, to_json, to_text_report


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


@dataclasses.dataclass(frozen=True)
class VariantSpec:
    name: str
    path: Path


@dataclasses.dataclass(frozen=True)
class RunConfig:
    variants: tuple[VariantSpec, ...]
    output: Path
    kinds: tuple = MAP_KINDS
    render: RenderOptions = RenderOptions()
    initial: str | None = None
    current: str | None = None
    truths: tuple[Path, ...] = ()
    timing: bool = False


def _use_color(stream) -> bool:
    return "NO_COLOR" not in os.environ and hasattr(stream, "isatty") and stream.isatty()


def _emit(diag: ParseDiagnostic | str, severity: str = "warning") -> None:
    text = str(diag)
    if isinstance(diag, ParseDiagnostic):
        severity = diag.severity
    else:
        text = f"{severity}: {text}"
    if _use_color(sys.stderr):
        color = "\033[31m" if severity == "error" else "\033[33m"
        text = f"{color}{text}\033[0m"
    print(text, file=sys.stderr)


def parse_variant_spec(text: str) -> VariantSpec:
    name, sep, path = text.partition("=")
    if not sep or not name.strip() or not path:
        raise UsageError(f"--variant expects NAME=PATH, got {text!r}")
    return VariantSpec(name.strip(), Path(path))


def _variant_specs(args, minimum: int = 1) -> tuple[VariantSpec, ...]:
    specs = tuple(parse_variant_spec(v) for v in (args.variant or []))
    if len(specs) < minimum:
        raise UsageError(f"at least {minimum} --variant NAME=PATH arguments are required, got {len(specs)}")
    names = [s.name for s in specs]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise UsageError(f"duplicate variant names: {', '.join(dupes)}")
    return specs


def _parse_kinds(text: str | None) -> tuple:
    if not text:
        return MAP_KINDS
    try:
        wanted = {parse_kind_label(k) for k in text.split(",") if k.strip()}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return tuple(k for k in MAP_KINDS if k in wanted)


def load_model(spec: VariantSpec) -> CodeModel:
    """Sources are parsed; a file is taken as a previously written code model."""
    if spec.path.is_file():
        try:
            model = read_xml(spec.path.read_bytes())
        except (OSError, CodeModelError) as exc:
            raise InputError(f"{spec.path}: {exc}") from None
        return dataclasses.replace(model, variant_name=spec.name)
    try:
        model, diagnostics = extract_variant(spec.path, spec.name)
    except ExtractionError as exc:
        raise InputError(str(exc)) from None
    for d in diagnostics:
        _emit(dataclasses.replace(d, path=f"{spec.name}:{d.path}"))
    return model


def _write(out: Path, name: str, text: str) -> None:
    out.mkdir(parents=True, exist_ok=True)
    with open(out / name, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _ordered_pair(config: RunConfig, models: Sequence[CodeModel]) -> tuple[CodeModel, CodeModel] | None:
    by_name = {m.variant_name: m for m in models}
    initial, current = config.initial, config.current
    if initial is None and current is None:
        if len(models) != 2:
            return None
        return models[0], models[1]
    if initial is None or current is None:
        raise UsageError("--initial and --current must be given together")
    for n in (initial, current):
        if n not in by_name:
            raise UsageError(f"unknown variant {n!r}; known: {', '.join(by_name)}")
    if initial == current:
        raise UsageError("--initial and --current must differ")
    return by_name[initial], by_name[current]


# -- commands -----------------------------------------------------------------


def cmd_parse(specs: Sequence[VariantSpec], output: Path) -> int:
    for spec in specs:
        if spec.path.is_dir() and not any(spec.path.rglob("*.java")):
            _emit(f"no .java files under {spec.path}; writing an empty model for {spec.name}")
        model = load_model(spec)
        _write(output, f"{spec.name}.codemodel.xml", write_xml(model))
    return 0


def cmd_map(config: RunConfig) -> int:
    models = [load_model(s) for s in config.variants]
    names = [m.variant_name for m in models]
    pair = _ordered_pair(config, models)
    maps = {}
    for kind in config.kinds:
        t0 = time.perf_counter()
        poset = build_aoc_poset(build_context(models, kind))
        idmap = extract_map(poset, kind, names)
        elapsed = (time.perf_counter() - t0) * 1000
        label = kind_label(kind)
        _write(config.output, f"{label}.dot", to_dot(poset, config.render, name=label))
        _write(config.output, f"{label}.json", to_json(idmap))
        maps[kind] = idmap
        if config.timing:
            print(f"{label} map: {elapsed:.3f} ms")
    evolution = {k: classify_evolution(pair[0], pair[1], k) for k in config.kinds} if pair else None
    stats = corpus_stats(models, maps.values())
    report = to_text_report(maps, evolution, stats, None, config.render)
    _write(config.output, "report.txt", report)
    return 0


def cmd_evolve(config: RunConfig) -> int:
    if config.initial is None or config.current is None:
        raise UsageError("evolve needs --initial NAME and --current NAME")
    if len(config.variants) != 2:
        raise UsageError(f"evolve compares exactly 2 variants, got {len(config.variants)}")
    models = [load_model(s) for s in config.variants]
    initial, current = _ordered_pair(config, models)
    reports = {k: classify_evolution(initial, current, k) for k in config.kinds}
    _write(config.output, "evolution.json", evolution_to_json(reports))
    text = [f"Evolution: {initial.variant_name} -> {current.variant_name}", *evolution_summary(reports)]
    _write(config.output, "evolution.txt", "\n".join(text) + "\n")
    return 0


def cmd_eval(config: RunConfig, minimum: float) -> int:
    if not config.truths:
        raise UsageError("eval needs at least one --truth PATH")
    truths = []
    for path in config.truths:
        try:
            truths.append(read_ground_truth(path))
        except OSError as exc:
            raise InputError(f"{path}: {exc.strerror}") from None
    models = [load_model(s) for s in config.variants]
    names = [m.variant_name for m in models]
    reports = {}
    for truth in truths:
        unknown = set(truth.relevant_unique) - set(names)
        if unknown:
            raise InputError(f"ground truth names unknown variants: {', '.join(sorted(unknown))}")
        poset = build_aoc_poset(build_context(models, truth.kind))
        reports[truth.kind] = evaluate_map(extract_map(poset, truth.kind, names), truth)
    doc = {"maps": {kind_label(k): r.as_dict() for k, r in reports.items()}, "min": minimum}
    _write(config.output, "metrics.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")
    failing = [
        (kind_label(k), name, value)
        for k, r in reports.items()
        for name, value in (("precision", r.precision), ("recall", r.recall), ("f_measure", r.f_measure))
        if value < minimum
    ]
    for label, name, value in failing:
        _emit(f"{label} {name} {value:.4f} is below --min {minimum}", "error")
    return 1 if failing else 0


def cmd_truth(specs: Sequence[VariantSpec], output: Path, kinds: tuple) -> int:
    models = [load_model(s) for s in specs]
    for kind in kinds:
        _write(output, f"{kind_label(kind)}.truth.txt", format_ground_truth(ground_truth_from_models(models, kind)))
    return 0


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="idmap", description="Extract software identifiers maps of product variants.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output_default="idmap-out"):
        p.add_argument("--variant", action="append", metavar="NAME=PATH",
                       help="variant source root or .codemodel.xml file (repeatable)")
        p.add_argument("-o", "--output", type=Path, default=Path(output_default), help="output directory")

    p = sub.add_parser("parse", help="extract code models as XML")
    common(p)

    p = sub.add_parser("map", help="write the five identifier maps and a text report")
    common(p)
    p.add_argument("--kinds", help="comma list of packages,classes,attributes,methods,all")
    p.add_argument("--max-labels", type=int, default=20, help="labels per concept before eliding (0: unlimited)")
    p.add_argument("--qualified", action="store_true", help="always show qualified names")
    p.add_argument("--initial")
    p.add_argument("--current")
    p.add_argument("--timing", action="store_true", help="print per-map wall-clock milliseconds")

    p = sub.add_parser("evolve", help="classify identifiers as added, removed or unchanged")
    common(p)
    p.add_argument("--kinds")
    p.add_argument("--initial")
    p.add_argument("--current")

    p = sub.add_parser("eval", help="score maps against ground-truth files")
    common(p)
    p.add_argument("--truth", action="append", type=Path, default=[], metavar="PATH")
    p.add_argument("--min", type=float, default=0.0, help="fail when any metric is below this value")

    p = sub.add_parser("truth", help="write ground-truth files derived from the variants")
    common(p)
    p.add_argument("--kinds")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "parse":
            return cmd_parse(_variant_specs(args, 1), args.output)
        if args.command == "truth":
            return cmd_truth(_variant_specs(args, 2), args.output, _parse_kinds(args.kinds))
        specs = _variant_specs(args, 2)
        if args.command == "map":
            if args.max_labels < 0:
                raise UsageError("--max-labels must be >= 0")
            render = RenderOptions(
                show_qualified_names=args.qualified,
                max_labels_per_concept=args.max_labels or None,
            )
            config = RunConfig(specs, args.output, _parse_kinds(args.kinds), render,
                               args.initial, args.current, timing=args.timing)
            return cmd_map(config)
        if args.command == "evolve":
            config = RunConfig(specs, args.output, _parse_kinds(args.kinds), initial=args.initial, current=args.current)
            return cmd_evolve(config)
        if args.command == "eval":
            return cmd_eval(RunConfig(specs, args.output, truths=tuple(args.truth)), args.min)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"idmap: error: {exc}", file=sys.stderr)
        return 2
    except (InputError, EvaluationError, ContextError, MapError, CodeModelError) as exc:
        _emit(str(exc), "error")
        return 1
    except OSError as exc:
        _emit(f"{exc.filename or ''}: {exc.strerror}", "error")
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
