"""Declaration-level Java parser that turns a variant's source tree into a CodeModel.

Only declarations are recognized: package, type declarations (class, interface,
enum, record, annotation type, including nested ones), fields, methods and
constructors.  Method bodies, initializers and field initializers are skipped by
bracket matching, so anonymous and local classes never surface.
"""

from __future__ import annotations

import enum
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .code_model import (
    DEFAULT_PACKAGE,
    CodeModel,
    Identifier,
    Inheritance,
    attribute,
    klass,
    method,
    package,
)


class TokenKind(enum.Enum):
    WORD = "word"
    KEYWORD = "keyword"
    PUNCT = "punct"
    STRING = "string"
    NUMBER = "number"
    COMMENT = "comment"
    WHITESPACE = "whitespace"


KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while true false null""".split()
)

_TYPE_KEYWORDS = frozenset({"class", "interface", "enum"})


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int

    def __repr__(self) -> str:
        return f"Token({self.kind.value}, {self.text!r}, {self.line}:{self.column})"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "warning" | "error"
    message: str
    path: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.path}:{self.line}:{self.column}: {self.severity}: {self.message}"


class ExtractionError(Exception):
    """The variant root cannot be read at all."""


_WS = re.compile("[ \\t\\r\\n\\f\\v\\ufeff]+")
_WORD = re.compile(r"(?:[^\W\d]|\$)(?:\w|\$)*")
_NUMBER = re.compile(r"(?:\d[\w]*(?:\.\w*)?|\.\d\w*)(?:(?<=[eEpP])[+-]\d\w*)?")


def tokenize(source: str, diagnostics: list[ParseDiagnostic] | None = None, path: str = "<string>") -> list[Token]:
    """Split ``source`` into tokens whose texts concatenate back to ``source``.

    Comments and string/char literals are single tokens.  An unterminated
    literal or comment is closed at the end of its line, reported to
    ``diagnostics``, and lexing resumes on the next line.
    """
    tokens: list[Token] = []
    pos, line, col = 0, 1, 1
    n = len(source)

    def report(message: str) -> None:
        if diagnostics is not None:
            diagnostics.append(ParseDiagnostic("error", message, path, line, col))

    def line_end(start: int) -> int:
        end = source.find("\n", start)
        return n if end < 0 else end

    while pos < n:
        ch = source[pos]
        if m := _WS.match(source, pos):
            kind, end = TokenKind.WHITESPACE, m.end()
        elif source.startswith("//", pos):
            kind, end = TokenKind.COMMENT, line_end(pos)
        elif source.startswith("/*", pos):
            kind, end = TokenKind.COMMENT, source.find("*/", pos + 2) + 2
            if end == 1:
                report("unterminated block comment")
                end = line_end(pos)
        elif source.startswith('"""', pos):
            kind, end = TokenKind.STRING, _scan_text_block(source, pos + 3)
            if end < 0:
                report("unterminated text block")
                end = line_end(pos)
        elif ch in "\"'":
            kind, end = TokenKind.STRING, _scan_quoted(source, pos + 1, ch)
            if end < 0:
                report("unterminated string literal" if ch == '"' else "unterminated char literal")
                end = line_end(pos)
        elif m := _WORD.match(source, pos):
            end = m.end()
            kind = TokenKind.KEYWORD if m.group() in KEYWORDS else TokenKind.WORD
        elif m := _NUMBER.match(source, pos):
            kind, end = TokenKind.NUMBER, m.end()
        elif source.startswith("...", pos):
            kind, end = TokenKind.PUNCT, pos + 3
        else:
            kind, end = TokenKind.PUNCT, pos + 1
        if end <= pos:  # an unterminated construct sitting on an empty line tail
            end = pos + 1
        text = source[pos:end]
        tokens.append(Token(kind, text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = end
    return tokens


def _scan_quoted(source: str, pos: int, quote: str) -> int:
    n = len(source)
    while pos < n:
        ch = source[pos]
        if ch == "\\":
            pos += 2
            continue
        if ch == quote:
            return pos + 1
        if ch == "\n":
            return -1
        pos += 1
    return -1


def _scan_text_block(source: str, pos: int) -> int:
    n = len(source)
    while pos < n:
        if source[pos] == "\\":
            pos += 2
            continue
        if source.startswith('"""', pos):
            return pos + 3
        pos += 1
    return -1


# -- declarations --------------------------------------------------------------


@dataclass
class UnitContribution:
    """What one compilation unit adds to its variant's model."""

    path: str
    package: str | None = None
    identifiers: set[Identifier] = field(default_factory=set)
    inheritance: set[Inheritance] = field(default_factory=set)


@dataclass
class _Owner:
    qname: str
    name: str
    kind: str  # class | interface | enum | record | annotation


class _UnitParser:
    def __init__(self, tokens: list[Token], path: str):
        self.toks = [t for t in tokens if t.kind not in (TokenKind.WHITESPACE, TokenKind.COMMENT)]
        self.i = 0
        self.path = path
        self.diagnostics: list[ParseDiagnostic] = []
        self.unit = UnitContribution(path)

    # token helpers

    def peek(self, k: int = 0) -> Token | None:
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def at(self, text: str, k: int = 0) -> bool:
        tok = self.peek(k)
        return tok is not None and tok.text == text

    def eof(self) -> bool:
        return self.i >= len(self.toks)

    def diag(self, severity: str, message: str, tok: Token | None = None) -> None:
        if tok is None:
            tok = self.peek() or (self.toks[-1] if self.toks else Token(TokenKind.PUNCT, "", 1, 1))
        self.diagnostics.append(ParseDiagnostic(severity, message, self.path, tok.line, tok.column))

    def skip_balanced(self, open_: str, close: str) -> bool:
        """Skip from the opening token at the cursor past its matching close."""
        start = self.peek()
        depth = 0
        while not self.eof():
            text = self.toks[self.i].text
            self.i += 1
            if text == open_:
                depth += 1
            elif text == close:
                depth -= 1
                if depth == 0:
                    return True
        if open_ == "{":
            self.diag("error", "unbalanced braces: '{' is never closed", start)
        else:
            self.diag("error", f"unbalanced '{open_}' is never closed", start)
        return False

    def skip_to_semicolon(self) -> None:
        depth = 0
        while not self.eof():
            text = self.toks[self.i].text
            if text in "([{":
                depth += 1
            elif text in ")]}":
                if depth == 0:
                    return
                depth -= 1
            self.i += 1
            if text == ";" and depth == 0:
                return

    def skip_annotation(self) -> None:
        """Cursor on '@' of an annotation use (not '@interface')."""
        self.i += 1
        while not self.eof():
            self.i += 1  # name segment
            if self.at(".") and self.peek(1) is not None and self.peek(1).kind is TokenKind.WORD:
                self.i += 1
                continue
            break
        if self.at("("):
            self.skip_balanced("(", ")")

    def at_annotation(self) -> bool:
        return self.at("@") and not self.at("interface", 1)

    def qualified_name(self) -> str:
        parts: list[str] = []
        while not self.eof() and not self.at(";"):
            tok = self.toks[self.i]
            if tok.kind in (TokenKind.WORD, TokenKind.KEYWORD) or tok.text in (".", "*"):
                parts.append(tok.text)
                self.i += 1
            else:
                break
        return "".join(parts)

    # grammar

    def parse(self) -> UnitContribution:
        while self.at_annotation():
            self.skip_annotation()
        if self.at("package"):
            tok = self.peek()
            self.i += 1
            name = self.qualified_name()
            if name:
                self.unit.package = name
                self.unit.identifiers.add(package(name))
            else:
                self.diag("error", "malformed package declaration", tok)
            self.skip_to_semicolon()
        while not self.eof():
            tok = self.peek()
            if tok.text == ";":
                self.i += 1
            elif tok.text == "import":
                self.skip_to_semicolon()
            elif tok.text == "}":
                self.diag("error", "unbalanced braces: unexpected '}'", tok)
                self.i += 1
            elif tok.text in ("module", "open") and self._module_declaration():
                pass
            else:
                before = self.i
                self.member(None)
                if self.i == before:
                    self.diag("warning", f"skipping unexpected token {tok.text!r}", tok)
                    self.i += 1
        return self.unit

    def _module_declaration(self) -> bool:
        j = self.i + (1 if self.at("open") else 0)
        if j >= len(self.toks) or self.toks[j].text != "module":
            return False
        self.i = j
        while not self.eof() and not self.at("{"):
            self.i += 1
        if not self.eof():
            self.skip_balanced("{", "}")
        return True

    def collect_head(self) -> tuple[list[Token], str | None]:
        """Gather a member header up to a depth-0 ';', '{', '=' or '}'.

        Annotations are dropped.  The terminator is consumed, except '}'.
        """
        head: list[Token] = []
        depth = 0
        while not self.eof():
            tok = self.peek()
            if self.at_annotation():
                self.skip_annotation()
                continue
            if tok.text == "}":
                if depth > 0:
                    self.diag("error", "unbalanced parentheses in declaration", tok)
                return head, "}"
            if tok.text in (";", "{", "="):
                if depth > 0:
                    self.diag("error", "unbalanced parentheses in declaration", tok)
                self.i += 1
                return head, tok.text
            if tok.text == "(":
                depth += 1
            elif tok.text == ")":
                depth -= 1
            head.append(tok)
            self.i += 1
        return head, None

    def member(self, owner: _Owner | None) -> None:
        start = self.peek()
        head, term = self.collect_head()
        if not head:
            if term == "{":
                self.i -= 1
                self.skip_balanced("{", "}")
            elif term == "=":
                self.skip_to_semicolon()
            return
        if term is None:
            self.diag("error", "unexpected end of file in declaration", start)
            return
        k = _type_keyword_index(head)
        if k is not None:
            self.type_declaration(head, k, term, owner)
        elif owner is None:
            self.diag("warning", "unrecognized top-level declaration", start)
            self._skip_rest(term)
        elif _depth0_index(head, "(") is not None:
            self.method_declaration(head, term, owner)
        else:
            self.field_declaration(head, term, owner, start)

    def _skip_rest(self, term: str) -> None:
        if term == "{":
            self.i -= 1
            self.skip_balanced("{", "}")
        elif term == "=":
            self.skip_to_semicolon()

    def type_declaration(self, head: list[Token], k: int, term: str, owner: _Owner | None) -> None:
        kw = head[k].text
        kind = "annotation" if kw == "interface" and k > 0 and head[k - 1].text == "@" else kw
        if k + 1 >= len(head) or head[k + 1].kind is not TokenKind.WORD:
            self.diag("error", f"missing name after '{kw}'", head[k])
            self._skip_rest(term)
            return
        name = head[k + 1].text
        if owner is not None:
            qname = f"{owner.qname}.{name}"
        else:
            pkg = self.unit.package or DEFAULT_PACKAGE
            self.unit.identifiers.add(package(pkg))
            qname = f"{pkg}.{name}"
        self.unit.identifiers.add(klass(qname))
        inner = _Owner(qname, name, kind)

        rest = head[k + 2 :]
        j = 0
        if j < len(rest) and rest[j].text == "<":
            j = _skip_angles(rest, j)
        if kind == "record" and j < len(rest) and rest[j].text == "(":
            close = _matching(rest, j, "(", ")")
            for param in _split_depth0(rest[j + 1 : close]):
                pname, _ = _param_name_and_type(param)
                if pname:
                    self.unit.identifiers.add(attribute(qname, pname))
            j = close + 1
        clause = None
        clauses: dict[str, list[list[Token]]] = {}
        for tok in rest[j:]:
            if tok.text in ("extends", "implements", "permits"):
                clause = tok.text
                clauses[clause] = [[]]
            elif clause is not None:
                clauses[clause][-1].append(tok)
        for relation in ("extends", "implements"):
            for group in clauses.get(relation, []):
                for sup in _split_depth0(group):
                    text = _type_text(sup)
                    if text:
                        self.unit.inheritance.add(Inheritance(qname, text, relation))

        if term != "{":
            self.diag("error", f"expected body for {kind} {name}", head[k + 1])
            if term == "=":
                self.skip_to_semicolon()
            return
        self.type_body(inner)

    def type_body(self, owner: _Owner) -> None:
        if owner.kind == "enum":
            self.enum_constants(owner)
        while True:
            tok = self.peek()
            if tok is None:
                self.diag("error", f"unbalanced braces: body of {owner.qname} is never closed")
                return
            if tok.text == "}":
                self.i += 1
                return
            if tok.text == ";":
                self.i += 1
            elif tok.text == "{":
                self.skip_balanced("{", "}")
            elif tok.text == "static" and self.at("{", 1):
                self.i += 1
                self.skip_balanced("{", "}")
            else:
                before = self.i
                self.member(owner)
                if self.i == before:
                    self.diag("warning", f"skipping unexpected token {tok.text!r}", tok)
                    self.i += 1

    def enum_constants(self, owner: _Owner) -> None:
        while not self.eof():
            while self.at_annotation():
                self.skip_annotation()
            tok = self.peek()
            if tok is None or tok.text == "}":
                return
            if tok.text == ";":
                self.i += 1
                return
            if tok.kind is not TokenKind.WORD:
                self.diag("warning", f"unexpected token {tok.text!r} in enum constants", tok)
                return
            self.unit.identifiers.add(attribute(owner.qname, tok.text))
            self.i += 1
            if self.at("("):
                self.skip_balanced("(", ")")
            if self.at("{"):
                self.skip_balanced("{", "}")
            if self.at(","):
                self.i += 1
            elif not (self.at(";") or self.at("}")):
                self.diag("warning", "malformed enum constant list", self.peek())
                return

    def method_declaration(self, head: list[Token], term: str, owner: _Owner) -> None:
        p = _depth0_index(head, "(")
        if p == 0 or head[p - 1].kind is not TokenKind.WORD:
            self.diag("warning", "unrecognized member declaration", head[0])
            self._skip_rest(term)
            return
        name = head[p - 1].text
        close = _matching(head, p, "(", ")")
        params = []
        for param in _split_depth0(head[p + 1 : close]):
            pname, ptype = _param_name_and_type(param)
            if pname == "this" or not ptype:
                continue
            params.append(ptype)
        self.unit.identifiers.add(method(owner.qname, name, params))
        if term == "{":
            self.i -= 1
            self.skip_balanced("{", "}")
        elif term == "=":
            self.diag("warning", f"unexpected '=' after method {name}", head[p - 1])
            self.skip_to_semicolon()

    def field_declaration(self, head: list[Token], term: str, owner: _Owner, start: Token) -> None:
        if term in ("{", "}"):
            words = [t for t in head if t.kind is TokenKind.WORD]
            if not (owner.kind == "record" and term == "{" and words and words[-1].text == owner.name):
                self.diag("warning", "unrecognized member declaration", start)
            self._skip_rest(term)
            return
        segments = _split_depth0(head)
        first = _strip_dims(segments[0])
        if len(first) < 2 or first[-1].kind is not TokenKind.WORD:
            self.diag("warning", "unrecognized field declaration", start)
            if term == "=":
                self.skip_to_semicolon()
            return
        names = [first[-1].text]
        for seg in segments[1:]:
            if seg and seg[0].kind is TokenKind.WORD:
                names.append(seg[0].text)
        while term == "=":
            term = self.skip_initializer()
            if term == ",":
                term = self.more_declarators(names)
        for n in names:
            self.unit.identifiers.add(attribute(owner.qname, n))

    def more_declarators(self, names: list[str]) -> str | None:
        """Read ``name[]... [= | , | ;]`` declarators after a comma."""
        while True:
            tok = self.peek()
            if tok is None or tok.kind is not TokenKind.WORD:
                return None
            names.append(tok.text)
            self.i += 1
            while self.at("[") and self.at("]", 1):
                self.i += 2
            tok = self.peek()
            if tok is None or tok.text not in ("=", ",", ";"):
                return None
            self.i += 1
            if tok.text != ",":
                return tok.text

    def skip_initializer(self) -> str | None:
        """Skip a field initializer; returns ',' or ';' (consumed), '}' or None."""
        depth = 0
        while not self.eof():
            tok = self.peek()
            text = tok.text
            if text in "([{" and tok.kind is TokenKind.PUNCT:
                depth += 1
            elif text in ")]}" and tok.kind is TokenKind.PUNCT:
                if depth == 0:
                    return "}"
                depth -= 1
            elif depth == 0 and text == ";":
                self.i += 1
                return ";"
            elif depth == 0 and text == "," and self._declarator_follows():
                self.i += 1
                return ","
            self.i += 1
        return None

    def _declarator_follows(self) -> bool:
        nxt = self.peek(1)
        after = self.peek(2)
        if nxt is None or nxt.kind is not TokenKind.WORD or after is None:
            return False
        if after.text in ("=", ",", ";"):
            return True
        return after.text == "[" and self.at("]", 3)


def _type_keyword_index(head: list[Token]) -> int | None:
    depth = 0
    for idx, tok in enumerate(head):
        if tok.text == "(":
            depth += 1
        elif tok.text == ")":
            depth -= 1
        elif depth == 0:
            if tok.kind is TokenKind.KEYWORD and tok.text in _TYPE_KEYWORDS:
                return idx
            if (
                tok.text == "record"
                and tok.kind is TokenKind.WORD
                and idx + 2 < len(head)
                and head[idx + 1].kind is TokenKind.WORD
                and head[idx + 2].text in ("(", "<")
            ):
                return idx
    return None


def _depth0_index(tokens: list[Token], text: str) -> int | None:
    depth = 0
    for idx, tok in enumerate(tokens):
        if tok.text == text and depth == 0:
            return idx
        if tok.text == "<":
            depth += 1
        elif tok.text == ">":
            depth = max(depth - 1, 0)
    return None


def _matching(tokens: list[Token], start: int, open_: str, close: str) -> int:
    depth = 0
    for idx in range(start, len(tokens)):
        if tokens[idx].text == open_:
            depth += 1
        elif tokens[idx].text == close:
            depth -= 1
            if depth == 0:
                return idx
    return len(tokens)


def _skip_angles(tokens: list[Token], start: int) -> int:
    return _matching(tokens, start, "<", ">") + 1


def _split_depth0(tokens: list[Token]) -> list[list[Token]]:
    """Split on commas outside of <>, () and []."""
    parts: list[list[Token]] = [[]]
    depth = 0
    for tok in tokens:
        if tok.text in ("<", "(", "["):
            depth += 1
        elif tok.text in (">", ")", "]"):
            depth -= 1
        elif tok.text == "," and depth == 0:
            parts.append([])
            continue
        parts[-1].append(tok)
    return [p for p in parts if p]


def _strip_dims(tokens: list[Token]) -> list[Token]:
    out = list(tokens)
    while len(out) >= 2 and out[-1].text == "]" and out[-2].text == "[":
        del out[-2:]
    return out


def _type_text(tokens: list[Token]) -> str:
    """Render a type as written, minus type arguments; varargs become arrays."""
    out: list[str] = []
    depth = 0
    for tok in tokens:
        if tok.text == "<":
            depth += 1
        elif tok.text == ">":
            depth -= 1
        elif depth == 0:
            if tok.text == "...":
                out.append("[]")
            elif tok.text in ("final",):
                continue
            elif tok.kind in (TokenKind.WORD, TokenKind.KEYWORD) or tok.text in (".", "[", "]"):
                out.append(tok.text)
    return "".join(out)


def _param_name_and_type(tokens: list[Token]) -> tuple[str | None, str]:
    tokens = [t for t in tokens if t.text != "final"]
    body = _strip_dims(tokens)
    dims = (len(tokens) - len(body)) // 2
    if len(body) < 2:
        return None, ""
    name = body[-1]
    if name.kind is TokenKind.WORD or name.text == "this":
        return name.text, _type_text(body[:-1]) + "[]" * dims
    return None, ""


# -- entry points --------------------------------------------------------------


def parse_compilation_unit(tokens: list[Token], file_path: str) -> tuple[UnitContribution, list[ParseDiagnostic]]:
    parser = _UnitParser(tokens, file_path)
    unit = parser.parse()
    return unit, parser.diagnostics


def parse_source(source: str, file_path: str = "<string>") -> tuple[UnitContribution, list[ParseDiagnostic]]:
    diagnostics: list[ParseDiagnostic] = []
    tokens = tokenize(source, diagnostics, file_path)
    unit, more = parse_compilation_unit(tokens, file_path)
    return unit, diagnostics + more


def count_loc(source: str) -> int:
    """Non-blank lines; comment lines count."""
    return sum(1 for line in source.splitlines() if line.strip())


def java_files(root: str | os.PathLike) -> list[Path]:
    """``.java`` files under ``root`` in lexicographic relative-path order."""
    root = Path(root)
    found = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for fn in filenames:
            if fn.endswith(".java"):
                found.append(Path(dirpath, fn))
    return sorted(found, key=lambda p: p.relative_to(root).as_posix())


def extract_variant(root: str | os.PathLike, variant_name: str) -> tuple[CodeModel, list[ParseDiagnostic]]:
    root = Path(root)
    if not root.is_dir():
        raise ExtractionError(f"variant root is not a directory: {root}")
    try:
        os.listdir(root)
    except OSError as exc:
        raise ExtractionError(f"cannot read variant root {root}: {exc.strerror}") from None

    identifiers: set[Identifier] = set()
    inheritance: set[Inheritance] = set()
    diagnostics: list[ParseDiagnostic] = []
    loc = 0
    for path in java_files(root):
        rel = path.relative_to(root).as_posix()
        try:
            raw = path.read_bytes()
        except OSError as exc:
            diagnostics.append(ParseDiagnostic("warning", f"unreadable file skipped: {exc.strerror}", rel, 0, 0))
            continue
        try:
            source = raw.decode("utf-8-sig")
        except UnicodeDecodeError:
            diagnostics.append(ParseDiagnostic("warning", "file is not valid UTF-8; undecodable bytes replaced", rel, 0, 0))
            source = raw.decode("utf-8-sig", errors="replace")
        loc += count_loc(source)
        unit, diags = parse_source(source, rel)
        identifiers |= unit.identifiers
        inheritance |= unit.inheritance
        diagnostics.extend(diags)
    return CodeModel.build(variant_name, identifiers, inheritance, loc=loc), diagnostics
