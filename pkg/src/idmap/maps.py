"""Identifier maps (common / unique / shared blocks) and evolution scenarios."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .code_model import CodeModel, Identifier, IdentifierKind, filter_by_kind
from .fca import AOCPoset, build_aoc_poset, build_context

#: Map kinds in output order; ``None`` is the all-identifiers map.
MAP_KINDS: tuple[IdentifierKind | None, ...] = (*IdentifierKind, None)


class MapError(ValueError):
    pass


def kind_label(kind: IdentifierKind | None) -> str:
    return "all" if kind is None else kind.plural


def parse_kind_label(label: str) -> IdentifierKind | None:
    return None if label.strip().lower() == "all" else IdentifierKind.parse(label)


@dataclass(frozen=True)
class IdentifiersMap:
    """Partition of the identifiers of a family of variants.

    ``common`` holds identifiers present in every variant, ``unique[v]`` those
    present only in ``v``.  With three or more variants, identifiers present in
    a proper subset of at least two variants go to ``shared``, keyed by that
    subset.
    """

    kind: IdentifierKind | None
    variant_names: tuple[str, ...]
    common: frozenset[Identifier] = frozenset()
    unique: Mapping[str, frozenset[Identifier]] = field(default_factory=dict)
    shared: Mapping[frozenset[str], frozenset[Identifier]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variant_names", tuple(self.variant_names))
        object.__setattr__(self, "common", frozenset(self.common))
        unique = {v: frozenset(self.unique.get(v, ())) for v in self.variant_names}
        extra = set(self.unique) - set(self.variant_names)
        if extra:
            raise MapError(f"unique blocks for unknown variants: {sorted(extra)}")
        object.__setattr__(self, "unique", unique)
        object.__setattr__(
            self, "shared", {frozenset(k): frozenset(v) for k, v in self.shared.items() if v}
        )
        blocks = [self.common, *unique.values(), *self.shared.values()]
        if sum(map(len, blocks)) != len(frozenset().union(*blocks)):
            raise MapError("map blocks overlap")

    @property
    def label(self) -> str:
        return kind_label(self.kind)

    def all_identifiers(self) -> frozenset[Identifier]:
        return frozenset().union(self.common, *self.unique.values(), *self.shared.values())

    @property
    def total(self) -> int:
        return len(self.all_identifiers())

    def has_changes(self) -> bool:
        return any(self.unique.values()) or bool(self.shared)


@dataclass(frozen=True)
class EvolutionReport:
    initial_variant: str
    current_variant: str
    kind: IdentifierKind | None = None
    added: frozenset[Identifier] = frozenset()
    removed: frozenset[Identifier] = frozenset()
    unchanged: frozenset[Identifier] = frozenset()

    def __post_init__(self):
        for name in ("added", "removed", "unchanged"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        if self.added & self.removed or self.unchanged & (self.added | self.removed):
            raise MapError("evolution classes overlap")

    @property
    def has_changes(self) -> bool:
        return bool(self.added or self.removed)

    def swapped(self) -> EvolutionReport:
        return EvolutionReport(
            self.current_variant, self.initial_variant, self.kind, self.removed, self.added, self.unchanged
        )


def extract_map(poset: AOCPoset, kind: IdentifierKind | None, variant_names: Sequence[str]) -> IdentifiersMap:
    """Read the map blocks off the reduced intents of ``poset``."""
    if set(variant_names) != set(poset.context.objects) or len(set(variant_names)) != len(variant_names):
        raise MapError(
            f"poset objects {list(poset.context.objects)} do not match variants {list(variant_names)}"
        )
    everyone = frozenset(variant_names)
    common: frozenset[Identifier] = frozenset()
    unique: dict[str, set[Identifier]] = {v: set() for v in variant_names}
    shared: dict[frozenset[str], set[Identifier]] = {}
    for concept in poset.concepts:
        if not concept.reduced_intent:
            continue
        if concept.extent == everyone:
            common = concept.reduced_intent
        elif len(concept.extent) == 1:
            (v,) = concept.extent
            unique[v] |= concept.reduced_intent
        else:
            shared.setdefault(concept.extent, set()).update(concept.reduced_intent)
    return IdentifiersMap(kind, tuple(variant_names), common, unique, shared)


def build_map(models: Sequence[CodeModel], kind: IdentifierKind | None) -> IdentifiersMap:
    poset = build_aoc_poset(build_context(models, kind))
    return extract_map(poset, kind, [m.variant_name for m in models])


def build_all_maps(models: Sequence[CodeModel]) -> dict[IdentifierKind | None, IdentifiersMap]:
    """The four per-kind maps followed by the all-identifiers map."""
    return {kind: build_map(models, kind) for kind in MAP_KINDS}


def classify_evolution(initial: CodeModel, current: CodeModel, kind: IdentifierKind | None = None) -> EvolutionReport:
    before = filter_by_kind(initial, kind)
    after = filter_by_kind(current, kind)
    return EvolutionReport(
        initial.variant_name,
        current.variant_name,
        kind,
        added=after - before,
        removed=before - after,
        unchanged=before & after,
    )


def evolution_from_map(idmap: IdentifiersMap, initial: str, current: str) -> EvolutionReport:
    """The same classification, read from a two-variant identifiers map."""
    if set(idmap.variant_names) != {initial, current} or initial == current:
        raise MapError(f"map over {list(idmap.variant_names)} cannot compare {initial!r} -> {current!r}")
    return EvolutionReport(
        initial,
        current,
        idmap.kind,
        added=idmap.unique[current],
        removed=idmap.unique[initial],
        unchanged=idmap.common,
    )
