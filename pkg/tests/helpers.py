"""Shared test utilities: fixture locations, random generators, a small DOT reader."""

from __future__ import annotations

import random
import re
from pathlib import Path

from hypothesis import strategies as st

from idmap.code_model import (
    CodeModel,
    Identifier,
    IdentifierKind,
    attribute,
    klass,
    method,
    package,
)
from idmap.fca import FormalContext

FIXTURES = Path(__file__).parent / "fixtures"
DRAWING = FIXTURES / "drawing_shapes"
CORPUS = FIXTURES / "parser_corpus"

R1, R2 = "Release 1", "Release 2"
SHAPES_COLUMNS = [
    "MyRoundRectangle", "MyLine", "DrawingShapes", "PaintJPanel",
    "MyShape", "MyRectangle", "My3DRectangle", "MyOval",
]
SHAPES_ROWS = {
    R1: [False, True, True, True, True, True, False, True],
    R2: [True, True, True, True, True, False, True, False],
}


def shapes_classes(*names: str) -> set[Identifier]:
    return {klass(f"shapes.{n}") for n in names}


def read_expected_inventory(path: Path = CORPUS / "EXPECTED.txt") -> dict[str, set[Identifier]]:
    expected: dict[str, set[Identifier]] = {}
    current = None
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("== "):
            current = line[3:]
            expected[current] = set()
        else:
            expected[current].add(Identifier.parse(line))
    return expected


# -- random models -------------------------------------------------------------------

_WORDS = ["alpha", "beta", "gamma", "delta", "core", "ui", "io", "model", "util", "net"]
_TYPES = ["int", "String", "long[]", "List", "java.util.Map", "T", "byte[][]"]


def random_universe(rng: random.Random, size: int = 30) -> list[Identifier]:
    """A pool of identifiers closed under 'enclosing package/class'."""
    pool: list[Identifier] = []
    packages = [".".join(rng.sample(_WORDS, rng.randint(1, 3))) for _ in range(rng.randint(1, 4))]
    if rng.random() < 0.2:
        packages.append("(default)")
    packages = sorted(set(packages))
    pool += [package(p) for p in packages]
    classes: list[str] = []
    for i in range(rng.randint(1, max(1, size // 4))):
        if classes and rng.random() < 0.3:
            owner = rng.choice(classes)
        else:
            owner = rng.choice(packages)
        classes.append(f"{owner}.C{i}")
    pool += [klass(c) for c in classes]
    for j in range(rng.randint(0, size)):
        owner = rng.choice(classes)
        if rng.random() < 0.5:
            pool.append(attribute(owner, f"f{j}"))
        else:
            params = [rng.choice(_TYPES) for _ in range(rng.randint(0, 3))]
            pool.append(method(owner, f"m{j % 7}", params))
    return list(dict.fromkeys(pool))


def close_subset(picked: set[Identifier], universe: list[Identifier]) -> set[Identifier]:
    """Add every enclosing package/class so the subset forms a valid model."""
    by_name = {}
    for ident in universe:
        if ident.kind in (IdentifierKind.PACKAGE, IdentifierKind.CLASS):
            by_name.setdefault(ident.qualified_name, ident)
    out = set(picked)
    stack = list(picked)
    while stack:
        parent = stack.pop().parent_name
        if parent is not None and parent in by_name and by_name[parent] not in out:
            out.add(by_name[parent])
            stack.append(by_name[parent])
    return out


def random_model(rng: random.Random, name: str = "v", universe: list[Identifier] | None = None,
                 keep: float = 0.7) -> CodeModel:
    universe = universe if universe is not None else random_universe(rng)
    picked = {i for i in universe if rng.random() < keep}
    ids = close_subset(picked, universe)
    return CodeModel.build(name, ids, (), loc=rng.randint(0, 5000))


def random_model_pair(rng: random.Random) -> tuple[CodeModel, CodeModel]:
    universe = random_universe(rng, rng.randint(0, 40))
    return random_model(rng, "initial", universe), random_model(rng, "current", universe)


def random_context(rng: random.Random, max_objects: int = 6, max_attributes: int = 40) -> FormalContext:
    n_obj = rng.randint(1, max_objects)
    n_attr = rng.randint(0, max_attributes)
    density = rng.uniform(0.1, 0.9)
    objects = [f"g{i}" for i in range(n_obj)]
    rows = {g: set() for g in objects}
    for j in range(n_attr):
        holders = [g for g in objects if rng.random() < density] or [rng.choice(objects)]
        for g in holders:
            rows[g].add(Identifier(IdentifierKind.CLASS, f"p.M{j:02d}"))
    # duplicate a row now and then so object-concepts merge
    if n_obj > 1 and rng.random() < 0.3:
        rows[objects[-1]] = set(rows[objects[0]])
    return FormalContext.from_sets(rows)


@st.composite
def contexts(draw, max_objects: int = 6, max_attributes: int = 40):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_context(random.Random(seed), max_objects, max_attributes)


@st.composite
def model_pairs(draw):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_model_pair(random.Random(seed))


@st.composite
def models(draw):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    rng = random.Random(seed)
    return random_model(rng, rng.choice(["v1", "Release 1", "core & ext", "x<y>"]))


# -- DOT ----------------------------------------------------------------------------

_DOT_TOKEN = re.compile(
    r'\s+|//[^\n]*|/\*.*?\*/|(?P<str>"(?:\\.|[^"\\])*")|(?P<arrow>->|--)|(?P<id>[A-Za-z_][\w.]*|-?\d+(?:\.\d+)?)|(?P<p>[{}\[\];=,])',
    re.S,
)


class DotSyntaxError(ValueError):
    pass


def parse_dot(text: str) -> dict:
    """Parse the DOT subset graphviz accepts for simple digraphs.

    Returns ``{"name", "nodes": {id: attrs}, "edges": [(a, b)], "attrs": {...}}``;
    raises DotSyntaxError on anything malformed.
    """
    toks = []
    pos = 0
    while pos < len(text):
        m = _DOT_TOKEN.match(text, pos)
        if not m:
            raise DotSyntaxError(f"bad character at {pos}: {text[pos]!r}")
        pos = m.end()
        for kind in ("str", "arrow", "id", "p"):
            if m.group(kind) is not None:
                val = m.group(kind)
                if kind == "str":
                    val = ("str", val[1:-1])
                toks.append(val)
                break
    i = 0

    def expect(value):
        nonlocal i
        if i >= len(toks) or toks[i] != value:
            raise DotSyntaxError(f"expected {value!r} at token {i}: {toks[i] if i < len(toks) else 'EOF'!r}")
        i += 1

    def ident():
        nonlocal i
        if i >= len(toks):
            raise DotSyntaxError("unexpected end")
        tok = toks[i]
        i += 1
        if isinstance(tok, tuple):
            return tok[1]
        if tok in "{}[];=," or tok in ("->", "--"):
            raise DotSyntaxError(f"expected an id, got {tok!r}")
        return tok

    def attr_list():
        nonlocal i
        attrs = {}
        expect("[")
        while toks[i] != "]":
            key = ident()
            expect("=")
            attrs[key] = ident()
            if toks[i] in (",", ";"):
                i += 1
        expect("]")
        return attrs

    graph = {"nodes": {}, "edges": [], "attrs": {}}
    expect("digraph")
    graph["name"] = ident() if toks[i] != "{" else None
    expect("{")
    while toks[i] != "}":
        first = ident()
        if first in ("node", "edge", "graph") and toks[i] == "[":
            graph["attrs"][first] = attr_list()
        elif toks[i] == "=":
            i += 1
            graph["attrs"][first] = ident()
        elif toks[i] == "->":
            i += 1
            second = ident()
            graph["edges"].append((first, second))
            if toks[i] == "[":
                attr_list()
        else:
            graph["nodes"][first] = attr_list() if toks[i] == "[" else {}
        if toks[i] == ";":
            i += 1
    expect("}")
    if i != len(toks):
        raise DotSyntaxError("trailing tokens after graph")
    for a, b in graph["edges"]:
        if a not in graph["nodes"] or b not in graph["nodes"]:
            raise DotSyntaxError(f"edge {a}->{b} references an undeclared node")
    return graph


def record_fields(label: str) -> list[list[str]]:
    """Split a record label ``{a|b\\lc\\l|...}`` into compartments of lines."""
    assert label.startswith("{") and label.endswith("}"), label
    body = label[1:-1]
    fields, cur, lines = [], [], []
    j = 0
    while j < len(body):
        ch = body[j]
        if ch == "\\" and j + 1 < len(body):
            nxt = body[j + 1]
            if nxt == "l":
                lines.append("".join(cur))
                cur = []
            else:
                cur.append(nxt)
            j += 2
            continue
        if ch == "|":
            if cur:
                lines.append("".join(cur))
                cur = []
            fields.append(lines)
            lines = []
        else:
            cur.append(ch)
        j += 1
    if cur:
        lines.append("".join(cur))
    fields.append(lines)
    return fields


# -- acceptance summary ---------------------------------------------------------------

ACCEPTANCE_RESULTS: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}" + (f" ({detail})" if detail else "")
    ACCEPTANCE_RESULTS.append(line)
    print(line)
