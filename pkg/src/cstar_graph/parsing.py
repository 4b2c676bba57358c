"""Parsers for the graph text format and the element expression grammar.

Element grammar (juxtaposition multiplies, ``'`` is the adjoint)::

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor+
    factor  := primary "'"*
    primary := INT ['/' INT] | 'i' | 'S' word | 'P' word
             | 'S(' path ')' | 'P(' path-or-vertex ')' | '(' expr ')'

``S212`` style digit words need a one-vertex graph with loops ``1..9``;
other graphs use dotted edge names, ``S(e1.f)``.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Element
from .graph import Graph, GraphError, Path, cuntz_graph
from .scalar import Scalar


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        self.message = message
        self.position = position
        self.line = line
        where = ""
        if line is not None:
            where = f"line {line}: "
        elif position is not None:
            where = f"at position {position}: "
        super().__init__(where + message)


# graph files

_VERTEX = re.compile(r"^vertex\s+(\S+)$")
_EDGE = re.compile(r"^edge\s+([^:\s]+)\s*:\s*(\S+)\s*->\s*(\S+)$")
_CUNTZ = re.compile(r"^cuntz\s+(\d+)$")


def parse_graph(text: str) -> Graph:
    """Parse ``vertex NAME`` / ``edge NAME: SRC -> DST`` / ``cuntz N`` lines."""
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    cuntz: int | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m := _CUNTZ.match(line):
            if cuntz is not None or vertices or edges:
                raise ParseError("'cuntz N' must be the only declaration", line=lineno)
            cuntz = int(m.group(1))
            if cuntz < 1:
                raise ParseError("cuntz N needs N >= 1", line=lineno)
            continue
        if cuntz is not None:
            raise ParseError("'cuntz N' must be the only declaration", line=lineno)
        if m := _VERTEX.match(line):
            if m.group(1) in vertices:
                raise ParseError(f"duplicate vertex {m.group(1)!r}", line=lineno)
            vertices.append(m.group(1))
            continue
        if m := _EDGE.match(line):
            name, src, dst = m.groups()
            declared = set(vertices)
            for endpoint in (src, dst):
                if endpoint not in declared:
                    raise ParseError(f"edge {name!r} uses undeclared vertex {endpoint!r}", line=lineno)
            edges.append((name, src, dst))
            continue
        raise ParseError(f"malformed line {raw.strip()!r}", line=lineno)
    if cuntz is not None:
        return cuntz_graph(cuntz)
    if not vertices:
        raise ParseError("graph declares no vertices")
    try:
        return Graph(vertices, edges)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def load_graph(source: str) -> Graph:
    """Load a graph file, or accept the inline shorthand ``cuntzN`` / ``cuntz N``."""
    m = re.fullmatch(r"cuntz\s*(\d+)", source.strip())
    if m and not os.path.exists(source):
        return cuntz_graph(int(m.group(1)))
    with open(source, encoding="utf-8") as fh:
        return parse_graph(fh.read())


# element expressions

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<spath>[SP])\s*\(\s*(?P<inner>[^()]*?)\s*\)
  | (?P<sword>[SP])(?P<digits>\d+)
  | (?P<int>\d+)
  | (?P<op>[-+/()'′i])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    value: object
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group("spath"):
            out.append(_Tok(m.group("spath") + "(", m.group("inner"), pos))
        elif m.group("sword"):
            out.append(_Tok(m.group("sword") + "w", m.group("digits"), pos))
        elif m.group("int"):
            out.append(_Tok("int", int(m.group("int")), pos))
        elif m.group("op"):
            op = m.group("op")
            if op == "′":
                op = "'"
            out.append(_Tok(op, op, pos))
        pos = m.end()
    out.append(_Tok("end", None, len(text)))
    return out


_PRIMARY_START = {"int", "i", "(", "Sw", "Pw", "S(", "P("}


class _Parser:
    def __init__(self, text: str, graph: Graph):
        self.g = graph
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str | None = None) -> _Tok:
        t = self.tok
        if kind is not None and t.kind != kind:
            shown = "end of input" if t.kind == "end" else repr(t.value)
            raise ParseError(f"expected {kind!r}, found {shown}", t.pos)
        self.i += 1
        return t

    def parse(self) -> Element:
        x = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.value!r}", self.tok.pos)
        return x

    def expr(self) -> Element:
        sign = 1
        if self.tok.kind in ("+", "-"):
            sign = -1 if self.take().kind == "-" else 1
        x = self.term()
        if sign < 0:
            x = -x
        while self.tok.kind in ("+", "-"):
            op = self.take().kind
            t = self.term()
            x = x + t if op == "+" else x - t
        return x

    def term(self) -> Element:
        if self.tok.kind not in _PRIMARY_START:
            shown = "end of input" if self.tok.kind == "end" else repr(self.tok.value)
            raise ParseError(f"expected a factor, found {shown}", self.tok.pos)
        x = self.factor()
        while self.tok.kind in _PRIMARY_START:
            x = x * self.factor()
        return x

    def factor(self) -> Element:
        x = self.primary()
        while self.tok.kind == "'":
            self.take()
            x = x.adjoint()
        return x

    def primary(self) -> Element:
        t = self.take()
        g = self.g
        if t.kind == "int":
            q = Fraction(t.value)
            if self.tok.kind == "/":
                self.take()
                den = self.take("int")
                if den.value == 0:
                    raise ParseError("zero denominator", den.pos)
                q = q / den.value
            return Element.scalar(g, q)
        if t.kind == "i":
            return Element.scalar(g, Scalar(0, 1))
        if t.kind == "(":
            x = self.expr()
            self.take(")")
            return x
        if t.kind in ("Sw", "Pw"):
            if not g.uses_digit_words:
                raise ParseError(
                    "digit-word shorthand needs a one-vertex graph with loops 1..9; use S(e1.e2)", t.pos
                )
            path = self._path(lambda: g.word(t.value), t.pos)
            return _s_or_p(g, path, t.kind[0])
        if t.kind in ("S(", "P("):
            inner = str(t.value).strip()
            if not inner:
                raise ParseError("empty path", t.pos)
            if inner in g.vertex_index:
                path = g.vertex_path(inner)
            else:
                path = self._path(lambda: g.path(p.strip() for p in inner.split(".")), t.pos)
            return _s_or_p(g, path, t.kind[0])
        shown = "end of input" if t.kind == "end" else repr(t.value)
        raise ParseError(f"unexpected {shown}", t.pos)

    @staticmethod
    def _path(build, pos) -> Path:
        try:
            return build()
        except GraphError as exc:
            raise ParseError(str(exc), pos) from exc


def _s_or_p(g: Graph, path: Path, which: str) -> Element:
    v = Path((), path.range, path.range)
    if which == "P":
        return Element._raw(g, {(path, path): Scalar(1)})
    return Element._raw(g, {(path, v): Scalar(1)})


def parse_element(text: str, graph: Graph) -> Element:
    return _Parser(text, graph).parse()


def parse_word(text: str, graph: Graph) -> Path:
    """A path argument: digit word on O_n graphs, dotted edge names otherwise; ``""`` is the vertex."""
    text = text.strip()
    if graph.uses_digit_words:
        try:
            return graph.word(text)
        except GraphError as exc:
            raise ParseError(str(exc)) from exc
    if not text:
        if len(graph.vertices) != 1:
            raise ParseError("empty path is ambiguous on a multi-vertex graph")
        return graph.vertex_path(graph.vertices[0])
    if text in graph.vertex_index:
        return graph.vertex_path(text)
    try:
        return graph.path(p.strip() for p in text.split("."))
    except GraphError as exc:
        raise ParseError(str(exc)) from exc
