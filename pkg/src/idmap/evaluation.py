"""Precision / recall / F-measure of identifier maps, ground-truth files, corpus statistics."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .code_model import CodeModel, Identifier, IdentifierKind, filter_by_kind
from .maps import IdentifiersMap, kind_label, parse_kind_label


class EvaluationError(ValueError):
    pass


class TruthFormatError(EvaluationError):
    def __init__(self, message: str, path: str, line: int):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


def precision(retrieved: Iterable, relevant: Iterable) -> float:
    """|relevant & retrieved| / |retrieved|; 1.0 for an empty retrieval."""
    retrieved, relevant = set(retrieved), set(relevant)
    if not retrieved:
        return 1.0
    return len(retrieved & relevant) / len(retrieved)


def recall(retrieved: Iterable, relevant: Iterable) -> float:
    """|relevant & retrieved| / |relevant|; 1.0 when nothing is relevant."""
    retrieved, relevant = set(retrieved), set(relevant)
    if not relevant:
        return 1.0
    return len(retrieved & relevant) / len(relevant)


def f_measure(p: float, r: float) -> float:
    if p + r == 0:
        return 0.0
    return 2 * (p * r) / (p + r)


@dataclass(frozen=True)
class GroundTruth:
    kind: IdentifierKind | None
    relevant_common: frozenset[Identifier] = frozenset()
    relevant_unique: Mapping[str, frozenset[Identifier]] = field(default_factory=dict)
    relevant_shared: Mapping[frozenset[str], frozenset[Identifier]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "relevant_common", frozenset(self.relevant_common))
        object.__setattr__(self, "relevant_unique", {v: frozenset(s) for v, s in self.relevant_unique.items()})
        object.__setattr__(
            self, "relevant_shared", {frozenset(k): frozenset(s) for k, s in self.relevant_shared.items()}
        )
        blocks = [self.relevant_common, *self.relevant_unique.values(), *self.relevant_shared.values()]
        if sum(map(len, blocks)) != len(frozenset().union(*blocks)):
            raise EvaluationError("ground-truth blocks overlap")
        if self.kind is not None:
            for block in blocks:
                stray = [i for i in block if i.kind is not self.kind]
                if stray:
                    raise EvaluationError(f"{stray[0]} does not belong in a {kind_label(self.kind)} ground truth")


def ground_truth_from_models(models: Sequence[CodeModel], kind: IdentifierKind | None) -> GroundTruth:
    """Truth by counting which variants hold each identifier (no lattice involved)."""
    holders: dict[Identifier, set[str]] = {}
    for model in models:
        for ident in filter_by_kind(model, kind):
            holders.setdefault(ident, set()).add(model.variant_name)
    n = len(models)
    common, unique, shared = set(), {m.variant_name: set() for m in models}, {}
    for ident, who in holders.items():
        if len(who) == n:
            common.add(ident)
        elif len(who) == 1:
            unique[next(iter(who))].add(ident)
        else:
            shared.setdefault(frozenset(who), set()).add(ident)
    return GroundTruth(kind, common, unique, shared)


# -- ground-truth text format ----------------------------------------------------
#
#   # comment
#   kind: classes             optional, defaults to all
#   common:
#   shapes.MyLine             bare names need a per-kind file
#   class shapes.MyShape      "<kind> <qualified name>" works everywhere
#   unique Release 1:
#   shared A | B:


def parse_ground_truth(text: str, path: str = "<truth>") -> GroundTruth:
    kind: IdentifierKind | None = None
    common: set[Identifier] = set()
    unique: dict[str, set[Identifier]] = {}
    shared: dict[frozenset[str], set[Identifier]] = {}
    block: set[Identifier] | None = None
    seen_identifier = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.endswith(":"):
            header = line[:-1].strip()
            if header == "common":
                block = common
            elif header.startswith("unique "):
                name = header[len("unique ") :].strip()
                if not name:
                    raise TruthFormatError("unique section without a variant name", path, lineno)
                block = unique.setdefault(name, set())
            elif header.startswith("shared "):
                names = frozenset(n.strip() for n in header[len("shared ") :].split("|"))
                if len(names) < 2 or "" in names:
                    raise TruthFormatError("shared section needs at least two variant names", path, lineno)
                block = shared.setdefault(names, set())
            else:
                raise TruthFormatError(f"unknown section header {header!r}", path, lineno)
            continue
        if line.startswith("kind:"):
            if seen_identifier or block is not None:
                raise TruthFormatError("kind must be declared before any section", path, lineno)
            try:
                kind = parse_kind_label(line[len("kind:") :])
            except ValueError as exc:
                raise TruthFormatError(str(exc), path, lineno) from None
            continue
        if block is None:
            raise TruthFormatError("identifier outside of any section", path, lineno)
        parts = line.split()
        try:
            if len(parts) == 1:
                if kind is None:
                    raise TruthFormatError(
                        "bare identifier needs a 'kind:' declaration; write '<kind> <name>'", path, lineno
                    )
                ident = Identifier(kind, parts[0])
            elif len(parts) == 2:
                ident = Identifier(IdentifierKind.parse(parts[0]), parts[1])
            else:
                raise TruthFormatError(f"cannot read identifier {line!r}", path, lineno)
        except ValueError as exc:
            if isinstance(exc, TruthFormatError):
                raise
            raise TruthFormatError(str(exc), path, lineno) from None
        block.add(ident)
        seen_identifier = True
    try:
        return GroundTruth(kind, common, unique, shared)
    except EvaluationError as exc:
        raise TruthFormatError(str(exc), path, 0) from None


def read_ground_truth(path: str | os.PathLike) -> GroundTruth:
    path = os.fspath(path)
    with open(path, encoding="utf-8") as fh:
        return parse_ground_truth(fh.read(), path)


def format_ground_truth(truth: GroundTruth) -> str:
    lines = [f"kind: {kind_label(truth.kind)}", "common:"]
    lines += [str(i) for i in sorted(truth.relevant_common)]
    for name in sorted(truth.relevant_unique):
        lines.append(f"unique {name}:")
        lines += [str(i) for i in sorted(truth.relevant_unique[name])]
    for names in sorted(truth.relevant_shared, key=sorted):
        lines.append(f"shared {' | '.join(sorted(names))}:")
        lines += [str(i) for i in sorted(truth.relevant_shared[names])]
    return "\n".join(lines) + "\n"


# -- metrics -----------------------------------------------------------------------


@dataclass(frozen=True)
class BlockMetrics:
    retrieved: int
    relevant: int
    hits: int

    @property
    def precision(self) -> float:
        return 1.0 if self.retrieved == 0 else self.hits / self.retrieved

    @property
    def recall(self) -> float:
        return 1.0 if self.relevant == 0 else self.hits / self.relevant

    @property
    def f_measure(self) -> float:
        return f_measure(self.precision, self.recall)

    def as_dict(self) -> dict:
        return {
            "retrieved": self.retrieved,
            "relevant": self.relevant,
            "hits": self.hits,
            "precision": self.precision,
            "recall": self.recall,
            "f_measure": self.f_measure,
        }


def _block_metrics(retrieved: set, relevant: set) -> BlockMetrics:
    return BlockMetrics(len(retrieved), len(relevant), len(retrieved & relevant))


@dataclass(frozen=True)
class MetricsReport:
    kind: IdentifierKind | None
    overall: BlockMetrics
    blocks: Mapping[str, BlockMetrics]

    @property
    def precision(self) -> float:
        return self.overall.precision

    @property
    def recall(self) -> float:
        return self.overall.recall

    @property
    def f_measure(self) -> float:
        return self.overall.f_measure

    def as_dict(self) -> dict:
        return {
            "kind": kind_label(self.kind),
            **self.overall.as_dict(),
            "blocks": {name: b.as_dict() for name, b in self.blocks.items()},
        }


def _shared_label(names: Iterable[str]) -> str:
    return "shared " + " | ".join(sorted(names))


def _labeled_blocks(common, unique, shared) -> dict[str, frozenset]:
    blocks = {"common": frozenset(common)}
    for name, ids in unique.items():
        blocks[f"unique {name}"] = frozenset(ids)
    for names, ids in shared.items():
        blocks[_shared_label(names)] = frozenset(ids)
    return blocks


def evaluate_map(idmap: IdentifiersMap, truth: GroundTruth) -> MetricsReport:
    """Per-block and whole-map metrics.

    The whole-map figures treat every identifier together with the block it
    was placed in as one retrieved item, so a correct name in the wrong block
    counts as both a false positive and a miss.
    """
    if idmap.kind is not truth.kind:
        raise EvaluationError(
            f"cannot evaluate a {kind_label(idmap.kind)} map against {kind_label(truth.kind)} ground truth"
        )
    got = _labeled_blocks(idmap.common, idmap.unique, idmap.shared)
    want = _labeled_blocks(truth.relevant_common, truth.relevant_unique, truth.relevant_shared)
    blocks = {}
    for label in sorted(set(got) | set(want), key=_block_order):
        blocks[label] = _block_metrics(set(got.get(label, ())), set(want.get(label, ())))
    retrieved = {(label, i) for label, ids in got.items() for i in ids}
    relevant = {(label, i) for label, ids in want.items() for i in ids}
    return MetricsReport(idmap.kind, _block_metrics(retrieved, relevant), blocks)


def _block_order(label: str):
    return (0 if label == "common" else 1 if label.startswith("unique") else 2, label)


def combine_reports(reports: Iterable[MetricsReport]) -> BlockMetrics:
    """Micro-averaged figures over several maps (their counts are summed)."""
    r = list(reports)
    return BlockMetrics(
        sum(x.overall.retrieved for x in r),
        sum(x.overall.relevant for x in r),
        sum(x.overall.hits for x in r),
    )


# -- descriptive statistics ------------------------------------------------------


@dataclass(frozen=True)
class VariantStats:
    name: str
    loc: int
    nop: int
    noc: int


@dataclass(frozen=True)
class MapStats:
    kind: IdentifierKind | None
    common: int
    unique: Mapping[str, int]
    shared: int
    total: int


@dataclass(frozen=True)
class StatsTable:
    variants: tuple[VariantStats, ...]
    maps: tuple[MapStats, ...]

    def as_dict(self) -> dict:
        return {
            "variants": [
                {"name": v.name, "loc": v.loc, "nop": v.nop, "noc": v.noc} for v in self.variants
            ],
            "maps": {
                kind_label(m.kind): {
                    "common": m.common,
                    "unique": dict(m.unique),
                    "shared": m.shared,
                    "total": m.total,
                }
                for m in self.maps
            },
        }


def corpus_stats(models: Sequence[CodeModel], maps: Iterable[IdentifiersMap]) -> StatsTable:
    variants = tuple(
        VariantStats(m.variant_name, m.source_stats.loc, m.source_stats.nop, m.source_stats.noc)
        for m in models
    )
    rows = []
    for idmap in maps:
        unique = {v: len(idmap.unique[v]) for v in idmap.variant_names}
        shared = sum(len(s) for s in idmap.shared.values())
        rows.append(
            MapStats(idmap.kind, len(idmap.common), unique, shared, len(idmap.common) + sum(unique.values()) + shared)
        )
    return StatsTable(variants, tuple(rows))


def format_stats_table(stats: StatsTable) -> str:
    """Plain-text rendering: a LOC/NoP/NoC table, then common/unique counts per map."""
    lines = []
    width = max([len("Variant")] + [len(v.name) for v in stats.variants])
    lines.append(f"{'Variant':<{width}}  {'LOC':>9}  {'NoP':>5}  {'NoC':>6}")
    for v in stats.variants:
        lines.append(f"{v.name:<{width}}  {v.loc:>9,}  {v.nop:>5}  {v.noc:>6}")
    for m in stats.maps:
        noun = "identifier" if m.kind is None else m.kind.value
        lines.append("")
        lines.append(f"The common {noun} names: {m.common}")
        for name, count in m.unique.items():
            lines.append(f'The unique {noun} names for "{name}": {count}')
        if m.shared:
            lines.append(f"The shared {noun} names (proper subsets of variants): {m.shared}")
        lines.append(f"Total number of {noun} names: {m.total}")
    return "\n".join(lines) + "\n"
