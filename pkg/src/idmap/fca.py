"""Formal contexts over variants x identifiers and their AOC-posets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .code_model import CodeModel, IdentifierKind, filter_by_kind

ORACLE_MAX_OBJECTS = 16


class ContextError(ValueError):
    pass


@dataclass(frozen=True)
class FormalContext:
    """Objects (variant names) x attributes with a boolean incidence matrix.

    ``incidence[g][m]`` is true when object ``g`` has attribute ``m``.
    """

    objects: tuple[str, ...]
    attributes: tuple[Hashable, ...]
    incidence: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "attributes", tuple(self.attributes))
        object.__setattr__(self, "incidence", tuple(tuple(bool(x) for x in row) for row in self.incidence))
        if len(set(self.objects)) != len(self.objects):
            raise ContextError("object names must be unique")
        if len(set(self.attributes)) != len(self.attributes):
            raise ContextError("attributes must be unique")
        if len(self.incidence) != len(self.objects) or any(
            len(row) != len(self.attributes) for row in self.incidence
        ):
            raise ContextError("incidence matrix shape does not match objects x attributes")
        for j, attr in enumerate(self.attributes):
            if not any(row[j] for row in self.incidence):
                raise ContextError(f"attribute {attr} has no incident object")
        # row/column sets for the derivation operators
        rows = {
            g: frozenset(m for m, x in zip(self.attributes, row) if x)
            for g, row in zip(self.objects, self.incidence)
        }
        cols = {
            m: frozenset(g for g, row in zip(self.objects, self.incidence) if row[j])
            for j, m in enumerate(self.attributes)
        }
        object.__setattr__(self, "_rows", rows)
        object.__setattr__(self, "_cols", cols)

    @classmethod
    def from_sets(cls, rows: Mapping[str, Iterable[Hashable]]) -> FormalContext:
        """Build a context from ``object -> attribute set``, attributes sorted."""
        rows = {g: set(attrs) for g, attrs in rows.items()}
        attributes = sorted(set().union(*rows.values())) if rows else []
        return cls(
            tuple(rows),
            tuple(attributes),
            tuple(tuple(m in rows[g] for m in attributes) for g in rows),
        )

    def row(self, obj: str) -> frozenset:
        return self._rows[obj]

    def column(self, attr: Hashable) -> frozenset[str]:
        return self._cols[attr]


def build_context(models: Sequence[CodeModel], kind: IdentifierKind | None = None) -> FormalContext:
    """Variants x identifiers of ``kind`` (``None`` for every kind)."""
    if len(models) < 2:
        raise ContextError(f"a formal context needs at least 2 variants, got {len(models)}")
    names = [m.variant_name for m in models]
    dupes = sorted({n for n in names if names.count(n) > 1})
    if dupes:
        raise ContextError(f"duplicate variant names: {', '.join(dupes)}")
    per_model = [filter_by_kind(m, kind) for m in models]
    attributes = sorted(set().union(*per_model))
    return FormalContext(
        tuple(names),
        tuple(attributes),
        tuple(tuple(a in ids for a in attributes) for ids in per_model),
    )


def derive_objects(ctx: FormalContext, attrs: Iterable[Hashable]) -> frozenset[str]:
    """Objects having every attribute in ``attrs``."""
    result = frozenset(ctx.objects)
    for m in attrs:
        result &= ctx.column(m)
    return result


def derive_attributes(ctx: FormalContext, objs: Iterable[str]) -> frozenset:
    """Attributes shared by every object in ``objs``."""
    result = frozenset(ctx.attributes)
    for g in objs:
        result &= ctx.row(g)
    return result


@dataclass(frozen=True)
class Concept:
    extent: frozenset[str]
    intent: frozenset
    reduced_extent: frozenset[str] = frozenset()
    reduced_intent: frozenset = frozenset()


@dataclass(frozen=True)
class AOCPoset:
    context: FormalContext
    concepts: tuple[Concept, ...]
    hasse_edges: tuple[tuple[int, int], ...]  # (child, parent)

    def index_of_extent(self, extent: Iterable[str]) -> int | None:
        extent = frozenset(extent)
        for idx, c in enumerate(self.concepts):
            if c.extent == extent:
                return idx
        return None

    def concept_of_attribute(self, attr: Hashable) -> Concept:
        return self.concepts[self.index_of_extent(self.context.column(attr))]

    def concept_of_object(self, obj: str) -> Concept:
        for c in self.concepts:
            if obj in c.reduced_extent:
                return c
        raise KeyError(obj)

    def parents(self, idx: int) -> list[int]:
        return [p for c, p in self.hasse_edges if c == idx]

    def children(self, idx: int) -> list[int]:
        return [c for c, p in self.hasse_edges if p == idx]


def _concept_order_key(c: Concept):
    # extents are unique within a poset, so size and names already decide
    return (-len(c.extent), sorted(c.extent))


def build_aoc_poset(ctx: FormalContext) -> AOCPoset:
    """Attribute- and object-concepts of ``ctx`` with reduced labels and covers.

    Each attribute lands in the reduced intent of exactly one concept (the one
    whose extent is the attribute's column); likewise each object in the
    reduced extent of the concept generated by its row.
    """
    intents: dict[frozenset, frozenset] = {}
    reduced_intents: dict[frozenset, set] = {}
    reduced_extents: dict[frozenset, set] = {}

    for m in ctx.attributes:
        extent = derive_objects(ctx, (m,))
        if extent not in intents:
            intents[extent] = derive_attributes(ctx, extent)
        reduced_intents.setdefault(extent, set()).add(m)
    for g in ctx.objects:
        extent = derive_objects(ctx, derive_attributes(ctx, (g,)))
        if extent not in intents:
            intents[extent] = derive_attributes(ctx, extent)
        reduced_extents.setdefault(extent, set()).add(g)

    concepts = [
        Concept(
            extent,
            intent,
            frozenset(reduced_extents.get(extent, ())),
            frozenset(reduced_intents.get(extent, ())),
        )
        for extent, intent in intents.items()
    ]
    concepts.sort(key=_concept_order_key)
    return AOCPoset(ctx, tuple(concepts), hasse_edges(concepts))


def hasse_edges(concepts: Sequence[Concept]) -> tuple[tuple[int, int], ...]:
    """Covering pairs (child, parent) of strict extent inclusion."""
    edges = []
    for c, child in enumerate(concepts):
        above = [p for p, parent in enumerate(concepts) if child.extent < parent.extent]
        for p in above:
            if not any(concepts[p].extent > concepts[q].extent for q in above if q != p):
                edges.append((c, p))
    return tuple(sorted(edges))


def brute_force_lattice(ctx: FormalContext) -> set[Concept]:
    """Every formal concept of ``ctx``, by closing all object subsets.

    Exponential in the number of objects; meant as a test oracle only.
    Reduced labels are filled in from the attribute columns and object rows.
    """
    n = len(ctx.objects)
    if n > ORACLE_MAX_OBJECTS:
        raise ContextError(
            f"brute-force enumeration is a test oracle limited to {ORACLE_MAX_OBJECTS} objects, got {n}"
        )
    # plain row/column lists, independent of the derivation helpers above
    rows = [{m for m, x in zip(ctx.attributes, r) if x} for r in ctx.incidence]
    all_attrs = set(ctx.attributes)

    def common_attrs(idx):
        out = set(all_attrs)
        for i in idx:
            out &= rows[i]
        return out

    def objects_with(attrs):
        return {i for i in range(n) if attrs <= rows[i]}

    found: dict[frozenset, frozenset] = {}
    for size in range(n + 1):
        for subset in itertools.combinations(range(n), size):
            intent = common_attrs(subset)
            extent = objects_with(intent)
            found[frozenset(ctx.objects[i] for i in extent)] = frozenset(intent)

    concepts = set()
    for extent, intent in found.items():
        red_int = frozenset(
            m for m in intent if {ctx.objects[i] for i in range(n) if m in rows[i]} == extent
        )
        red_ext = frozenset(
            ctx.objects[i] for i in range(n) if ctx.objects[i] in extent and rows[i] == intent
        )
        concepts.add(Concept(extent, intent, red_ext, red_int))
    return concepts
