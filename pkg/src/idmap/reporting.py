"""Renderers: DOT concept diagrams, JSON maps and evolution, plain-text reports."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .code_model import Identifier, IdentifierKind
from .evaluation import MetricsReport, StatsTable, combine_reports, format_stats_table
from .fca import AOCPoset
from .maps import EvolutionReport, IdentifiersMap, kind_label, parse_kind_label

DEFAULT_MAX_LABELS = 20


@dataclass(frozen=True)
class RenderOptions:
    show_qualified_names: bool = False
    max_labels_per_concept: int | None = DEFAULT_MAX_LABELS  # None: never elide
    kinds: tuple[IdentifierKind | None, ...] | None = None  # None: every map

    def __post_init__(self):
        if self.max_labels_per_concept is not None and self.max_labels_per_concept < 1:
            raise ValueError("max_labels_per_concept must be at least 1")

    def wants(self, kind: IdentifierKind | None) -> bool:
        return self.kinds is None or kind in self.kinds


def _short_name(ident: Identifier) -> str:
    if ident.kind is IdentifierKind.PACKAGE:
        return ident.qualified_name
    if ident.kind is IdentifierKind.METHOD:
        return f"{ident.simple_name}({','.join(ident.params)})"
    return ident.simple_name


def display_names(idents: Iterable[Identifier], qualified: bool = False) -> dict[Identifier, str]:
    """Short labels for one block; a simple name shared by two entries falls back to qualified names.

    Packages always show their full dotted path and methods keep their parameter list.
    """
    idents = list(idents)
    if qualified:
        return {i: i.qualified_name for i in idents}
    short = {i: _short_name(i) for i in idents}
    clashes = Counter(short.values())
    return {i: (s if clashes[s] == 1 else i.qualified_name) for i, s in short.items()}


def _labels(idents: Iterable, qualified: bool) -> list[str]:
    idents = list(idents)
    if idents and all(isinstance(i, Identifier) for i in idents):
        return sorted(display_names(idents, qualified).values())
    return sorted(str(i) for i in idents)


def _elide(labels: list[str], limit: int | None) -> list[str]:
    if limit is None or len(labels) <= limit:
        return labels
    return labels[:limit] + [f"... (+{len(labels) - limit} more)"]


def _dot_escape_record(text: str) -> str:
    out = []
    for ch in text:
        if ch in '{}|<>"\\ ':
            out.append("\\" + ch)
        else:
            out.append(ch)
    return "".join(out)


def to_dot(poset: AOCPoset, opts: RenderOptions = RenderOptions(), name: str = "aoc_poset") -> str:
    """Graphviz digraph with one record node per concept and child -> parent edges.

    Node compartments: ``Concept_i`` | reduced intent | reduced extent.
    """
    lines = [
        f'digraph "{name}" {{',
        "  rankdir=BT;",
        '  node [shape=record, fontname="Helvetica"];',
    ]
    for idx, concept in enumerate(poset.concepts):
        intent = _elide(_labels(concept.reduced_intent, opts.show_qualified_names), opts.max_labels_per_concept)
        extent = _elide(sorted(concept.reduced_extent), opts.max_labels_per_concept)
        parts = [
            f"Concept_{idx}",
            "".join(_dot_escape_record(s) + "\\l" for s in intent),
            "".join(_dot_escape_record(s) + "\\l" for s in extent),
        ]
        lines.append(f'  c{idx} [label="{{{"|".join(parts)}}}"];')
    for child, parent in poset.hasse_edges:
        lines.append(f"  c{child} -> c{parent};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- JSON ---------------------------------------------------------------------------


def _id_text(ident: Identifier, kind: IdentifierKind | None) -> str:
    return ident.qualified_name if kind is not None else str(ident)


def _id_parse(text: str, kind: IdentifierKind | None) -> Identifier:
    return Identifier(kind, text) if kind is not None else Identifier.parse(text)


def map_to_dict(idmap: IdentifiersMap) -> dict:
    kind = idmap.kind

    def names(ids):
        return sorted(_id_text(i, kind) for i in ids)

    shared = [
        {"variants": sorted(vs), "identifiers": names(ids)}
        for vs, ids in sorted(idmap.shared.items(), key=lambda kv: sorted(kv[0]))
    ]
    return {
        "kind": idmap.label,
        "variants": list(idmap.variant_names),
        "common": names(idmap.common),
        "unique": {v: names(idmap.unique[v]) for v in idmap.variant_names},
        "shared": shared,
        "counts": {
            "common": len(idmap.common),
            "unique": {v: len(idmap.unique[v]) for v in idmap.variant_names},
            "shared": sum(len(s["identifiers"]) for s in shared),
            "total": idmap.total,
        },
    }


def to_json(idmap: IdentifiersMap) -> str:
    return json.dumps(map_to_dict(idmap), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def from_json(text: str) -> IdentifiersMap:
    doc = json.loads(text)
    kind = parse_kind_label(doc["kind"])
    return IdentifiersMap(
        kind,
        tuple(doc["variants"]),
        {_id_parse(t, kind) for t in doc["common"]},
        {v: {_id_parse(t, kind) for t in ids} for v, ids in doc["unique"].items()},
        {frozenset(s["variants"]): {_id_parse(t, kind) for t in s["identifiers"]} for s in doc.get("shared", [])},
    )


def evolution_to_dict(reports: Mapping[IdentifierKind | None, EvolutionReport]) -> dict:
    first = next(iter(reports.values()))
    kinds = {}
    for kind, rep in reports.items():
        kinds[kind_label(kind)] = {
            "added": sorted(_id_text(i, kind) for i in rep.added),
            "removed": sorted(_id_text(i, kind) for i in rep.removed),
            "unchanged": sorted(_id_text(i, kind) for i in rep.unchanged),
            "counts": {"added": len(rep.added), "removed": len(rep.removed), "unchanged": len(rep.unchanged)},
        }
    return {"initial": first.initial_variant, "current": first.current_variant, "kinds": kinds}


def evolution_to_json(reports: Mapping[IdentifierKind | None, EvolutionReport]) -> str:
    return json.dumps(evolution_to_dict(reports), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def evolution_from_json(text: str) -> dict[IdentifierKind | None, EvolutionReport]:
    doc = json.loads(text)
    out = {}
    for label, body in doc["kinds"].items():
        kind = parse_kind_label(label)
        out[kind] = EvolutionReport(
            doc["initial"],
            doc["current"],
            kind,
            {_id_parse(t, kind) for t in body["added"]},
            {_id_parse(t, kind) for t in body["removed"]},
            {_id_parse(t, kind) for t in body["unchanged"]},
        )
    return out


# -- text report ---------------------------------------------------------------------


def _names_block(ids: Iterable[Identifier], opts: RenderOptions, indent: str = "  ") -> list[str]:
    return [indent + s for s in _labels(ids, opts.show_qualified_names)]


def evolution_summary(reports: Mapping[IdentifierKind | None, EvolutionReport]) -> list[str]:
    lines = []
    for kind, rep in reports.items():
        label = kind_label(kind)
        if rep.has_changes:
            lines.append(
                f"{label}: added {len(rep.added)}, removed {len(rep.removed)}, unchanged {len(rep.unchanged)}"
            )
        else:
            lines.append(f"{label}: unchanged ({len(rep.unchanged)})")
    if not any(rep.has_changes for rep in reports.values()):
        lines.append("no changes detected")
    return lines


def to_text_report(
    maps: Mapping[IdentifierKind | None, IdentifiersMap],
    evolution: Mapping[IdentifierKind | None, EvolutionReport] | None = None,
    stats: StatsTable | None = None,
    metrics: Mapping[IdentifierKind | None, MetricsReport] | None = None,
    opts: RenderOptions = RenderOptions(),
) -> str:
    variants = next(iter(maps.values())).variant_names if maps else ()
    out = [
        "Software identifiers map",
        f"Variants: {', '.join(variants)}",
        "LOC counts non-blank source lines, comment lines included.",
    ]

    if evolution:
        rep0 = next(iter(evolution.values()))
        out += ["", f"== Evolution: {rep0.initial_variant} -> {rep0.current_variant} =="]
        out += evolution_summary(evolution)
        for kind, rep in evolution.items():
            if kind is None:
                continue  # the per-kind listings already cover every name
            for verb, ids in (("Added", rep.added), ("Removed", rep.removed)):
                if ids:
                    out.append(f"{verb} {kind_label(kind)}:")
                    out += _names_block(ids, opts)

    for kind, idmap in maps.items():
        if not opts.wants(kind):
            continue
        out += ["", f"== {kind_label(kind).capitalize()} map =="]
        out.append(f"Common ({len(idmap.common)}):")
        out += _names_block(idmap.common, opts)
        for v in idmap.variant_names:
            out.append(f"Unique to {v} ({len(idmap.unique[v])}):")
            out += _names_block(idmap.unique[v], opts)
        for vs, ids in sorted(idmap.shared.items(), key=lambda kv: sorted(kv[0])):
            out.append(f"Shared by {', '.join(sorted(vs))} ({len(ids)}):")
            out += _names_block(ids, opts)

    if stats is not None:
        out += ["", "== Statistics =="]
        out += format_stats_table(stats).rstrip("\n").splitlines()

    if metrics:
        out += ["", "== Metrics =="]
        out.append(f"{'map':<12}{'precision':>10}{'recall':>10}{'f-measure':>11}")
        for kind, rep in metrics.items():
            out.append(f"{kind_label(kind):<12}{rep.precision:>10.4f}{rep.recall:>10.4f}{rep.f_measure:>11.4f}")
        if len(metrics) > 1:
            per_kind = [r for k, r in metrics.items() if k is not None]
            if per_kind:
                agg = combine_reports(per_kind)
                out.append(f"{'per-kind sum':<12}{agg.precision:>10.4f}{agg.recall:>10.4f}{agg.f_measure:>11.4f}")
    return "\n".join(out) + "\n"
