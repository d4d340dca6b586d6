"""Variant code inventory: identifiers, inheritance edges and the XML interchange format."""

from __future__ import annotations

import enum
import functools
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

DEFAULT_PACKAGE = "(default)"

_WHITESPACE = re.compile(r"\s")


class CodeModelError(Exception):
    """Base class for code model failures."""


class XMLParseError(CodeModelError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SchemaError(CodeModelError):
    def __init__(self, message: str, element: str):
        super().__init__(f"<{element}>: {message}")
        self.element = element


class ConsistencyError(CodeModelError):
    pass


class IdentifierKind(enum.Enum):
    PACKAGE = "package"
    CLASS = "class"
    ATTRIBUTE = "attribute"
    METHOD = "method"

    @property
    def order(self) -> int:
        return _KIND_ORDER[self]

    @property
    def plural(self) -> str:
        return _KIND_PLURAL[self]

    @classmethod
    def parse(cls, text: str) -> IdentifierKind:
        text = text.strip().lower()
        for kind in cls:
            if text in (kind.value, kind.plural):
                return kind
        raise ValueError(f"unknown identifier kind: {text!r}")


_KIND_ORDER = {k: i for i, k in enumerate(IdentifierKind)}
_KIND_PLURAL = {
    IdentifierKind.PACKAGE: "packages",
    IdentifierKind.CLASS: "classes",
    IdentifierKind.ATTRIBUTE: "attributes",
    IdentifierKind.METHOD: "methods",
}


@functools.total_ordering
@dataclass(frozen=True)
class Identifier:
    """A named program entity, identified by its kind and fully qualified name.

    Methods carry their parameter types in the qualified name, e.g.
    ``shapes.MyLine.draw(Graphics)``; ``simple_name`` drops the owner path
    and the signature.
    """

    kind: IdentifierKind
    qualified_name: str

    def __post_init__(self):
        if not self.qualified_name or _WHITESPACE.search(self.qualified_name):
            raise ValueError(f"invalid qualified name: {self.qualified_name!r}")
        if self.kind is IdentifierKind.METHOD and not (
            self.qualified_name.endswith(")") and "(" in self.qualified_name
        ):
            raise ValueError(f"method name lacks a signature: {self.qualified_name!r}")

    @property
    def name_path(self) -> str:
        """Qualified name without a method signature."""
        if self.kind is IdentifierKind.METHOD:
            return self.qualified_name[: self.qualified_name.rfind("(")]
        return self.qualified_name

    @property
    def simple_name(self) -> str:
        return self.name_path.rsplit(".", 1)[-1]

    @property
    def parent_name(self) -> str | None:
        """Qualified name of the enclosing package or class, if any."""
        head, sep, _ = self.name_path.rpartition(".")
        return head if sep else None

    @property
    def params(self) -> tuple[str, ...]:
        if self.kind is not IdentifierKind.METHOD:
            return ()
        inner = self.qualified_name[self.qualified_name.rfind("(") + 1 : -1]
        return tuple(inner.split(",")) if inner else ()

    @property
    def sort_key(self) -> tuple[int, str]:
        return (self.kind.order, self.qualified_name)

    def __lt__(self, other: Identifier) -> bool:
        if not isinstance(other, Identifier):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return f"{self.kind.value} {self.qualified_name}"

    @classmethod
    def parse(cls, text: str) -> Identifier:
        """Inverse of ``str()``: ``"<kind> <qualified_name>"``."""
        kind, _, name = text.strip().partition(" ")
        return cls(IdentifierKind.parse(kind), name.strip())


def package(name: str) -> Identifier:
    return Identifier(IdentifierKind.PACKAGE, name)


def klass(name: str) -> Identifier:
    return Identifier(IdentifierKind.CLASS, name)


def attribute(owner: str, name: str) -> Identifier:
    return Identifier(IdentifierKind.ATTRIBUTE, f"{owner}.{name}")


def method(owner: str, name: str, params: Iterable[str] = ()) -> Identifier:
    return Identifier(IdentifierKind.METHOD, f"{owner}.{name}({','.join(params)})")


class Inheritance(NamedTuple):
    """A declared supertype, recorded as written (type arguments stripped)."""

    subtype: str
    supertype: str
    relation: str = "extends"


@dataclass(frozen=True)
class SourceStats:
    loc: int = 0
    nop: int = 0
    noc: int = 0


@dataclass(frozen=True)
class CodeModel:
    variant_name: str
    identifiers: frozenset[Identifier] = frozenset()
    inheritance: frozenset[Inheritance] = frozenset()
    source_stats: SourceStats = field(default_factory=SourceStats)

    def __post_init__(self):
        object.__setattr__(self, "identifiers", frozenset(self.identifiers))
        object.__setattr__(
            self, "inheritance", frozenset(Inheritance(*e) for e in self.inheritance)
        )
        check_consistency(self)

    @classmethod
    def build(
        cls,
        variant_name: str,
        identifiers: Iterable[Identifier],
        inheritance: Iterable[Inheritance] = (),
        loc: int = 0,
    ) -> CodeModel:
        """Create a model, deriving package and class counts from ``identifiers``."""
        ids = frozenset(identifiers)
        stats = SourceStats(
            loc=loc,
            nop=sum(1 for i in ids if i.kind is IdentifierKind.PACKAGE),
            noc=sum(1 for i in ids if i.kind is IdentifierKind.CLASS),
        )
        return cls(variant_name, ids, frozenset(inheritance), stats)

    def names(self, kind: IdentifierKind) -> frozenset[str]:
        return frozenset(i.qualified_name for i in self.identifiers if i.kind is kind)


def filter_by_kind(model: CodeModel, kind: IdentifierKind | None) -> frozenset[Identifier]:
    """Identifiers of ``kind``; ``None`` selects every identifier."""
    if kind is None:
        return model.identifiers
    return frozenset(i for i in model.identifiers if i.kind is kind)


def check_consistency(model: CodeModel) -> None:
    packages = model.names(IdentifierKind.PACKAGE)
    classes = model.names(IdentifierKind.CLASS)
    for ident in model.identifiers:
        parent = ident.parent_name
        if ident.kind in (IdentifierKind.ATTRIBUTE, IdentifierKind.METHOD):
            if parent not in classes:
                raise ConsistencyError(f"{ident} has no enclosing class in {model.variant_name!r}")
        elif ident.kind is IdentifierKind.CLASS:
            if parent is None or (parent not in packages and parent not in classes):
                raise ConsistencyError(f"{ident} has no enclosing package in {model.variant_name!r}")
    for edge in model.inheritance:
        if edge.subtype not in classes:
            raise ConsistencyError(f"inheritance edge from unknown class {edge.subtype!r}")
        if edge.relation not in ("extends", "implements"):
            raise ConsistencyError(f"unknown inheritance relation {edge.relation!r}")
    stats = model.source_stats
    if stats.nop != len(packages) or stats.noc != len(classes):
        raise ConsistencyError(
            f"source stats nop={stats.nop} noc={stats.noc} disagree with "
            f"{len(packages)} packages and {len(classes)} classes"
        )
    if stats.loc < 0:
        raise ConsistencyError("negative line count")


# -- XML ---------------------------------------------------------------------


def write_xml(model: CodeModel) -> str:
    """Serialize ``model``; children are ordered by qualified name within kind."""
    by_parent: dict[str | None, list[Identifier]] = {}
    for ident in model.identifiers:
        by_parent.setdefault(ident.parent_name, []).append(ident)
    classes = model.names(IdentifierKind.CLASS)
    supertypes: dict[tuple[str, str], list[str]] = {}
    for edge in sorted(model.inheritance):
        supertypes.setdefault((edge.subtype, edge.relation), []).append(edge.supertype)

    def children(parent: str, kind: IdentifierKind) -> list[Identifier]:
        return sorted(i for i in by_parent.get(parent, ()) if i.kind is kind)

    def emit_class(parent_el: ET.Element, cls: Identifier) -> None:
        attrs = {"name": cls.simple_name}
        for relation in ("extends", "implements"):
            names = supertypes.get((cls.qualified_name, relation))
            if names:
                attrs[relation] = ",".join(names)
        el = ET.SubElement(parent_el, "class", attrs)
        for a in children(cls.qualified_name, IdentifierKind.ATTRIBUTE):
            ET.SubElement(el, "attribute", {"name": a.simple_name})
        for m in children(cls.qualified_name, IdentifierKind.METHOD):
            ET.SubElement(el, "method", {"name": m.simple_name, "params": ",".join(m.params)})
        for nested in children(cls.qualified_name, IdentifierKind.CLASS):
            emit_class(el, nested)

    root = ET.Element("variant", {"name": model.variant_name, "loc": str(model.source_stats.loc)})
    for pkg in sorted(filter_by_kind(model, IdentifierKind.PACKAGE)):
        pkg_el = ET.SubElement(root, "package", {"name": pkg.qualified_name})
        for cls in children(pkg.qualified_name, IdentifierKind.CLASS):
            if pkg.qualified_name in classes:
                # a class and a package share this name; the class wins the nesting
                continue
            emit_class(pkg_el, cls)
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def read_xml(doc: str | bytes) -> CodeModel:
    try:
        root = ET.fromstring(doc)
    except ET.ParseError as exc:
        line, column = exc.position
        raise XMLParseError(str(exc).split(":")[0], line, column + 1) from None

    if root.tag != "variant":
        raise SchemaError("expected <variant> as document element", root.tag)
    variant_name = _required(root)
    try:
        loc = int(root.get("loc", "0"))
    except ValueError:
        raise SchemaError(f"loc is not an integer: {root.get('loc')!r}", "variant") from None

    ids: set[Identifier] = set()
    edges: set[Inheritance] = set()

    def walk_class(el: ET.Element, owner: str) -> None:
        qname = f"{owner}.{_required(el)}"
        ids.add(klass(qname))
        for relation in ("extends", "implements"):
            for sup in filter(None, (el.get(relation) or "").split(",")):
                edges.add(Inheritance(qname, sup, relation))
        for child in el:
            if child.tag == "attribute":
                ids.add(attribute(qname, _required(child)))
            elif child.tag == "method":
                params = filter(None, (child.get("params") or "").split(","))
                ids.add(method(qname, _required(child), params))
            elif child.tag == "class":
                walk_class(child, qname)
            else:
                raise SchemaError("unknown element inside <class>", child.tag)

    for pkg_el in root:
        if pkg_el.tag in ("attribute", "method"):
            raise ConsistencyError(f"<{pkg_el.tag}> outside any <class>")
        if pkg_el.tag != "package":
            raise SchemaError("unknown element inside <variant>", pkg_el.tag)
        pname = _required(pkg_el)
        ids.add(package(pname))
        for child in pkg_el:
            if child.tag == "class":
                walk_class(child, pname)
            elif child.tag in ("attribute", "method"):
                raise ConsistencyError(f"<{child.tag}> outside any <class> in package {pname!r}")
            else:
                raise SchemaError("unknown element inside <package>", child.tag)

    try:
        return CodeModel.build(variant_name, ids, edges, loc=loc)
    except ValueError as exc:
        raise SchemaError(str(exc), "variant") from None


def _required(el: ET.Element) -> str:
    value = el.get("name")
    if not value:
        raise SchemaError("missing name attribute", el.tag)
    return value
