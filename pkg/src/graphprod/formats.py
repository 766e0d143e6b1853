"""Line-oriented text formats: presentations, map files and separation witnesses.

All formats allow ``#`` comments and blank lines.  Parse errors carry the
1-based line number of the offending line.
"""
from __future__ import annotations

import json
import re

from .graph import SimplicialGraph
from .homs import VertexMapFamily
from .residual import (
    Identity,
    Modulus,
    QuotientFamily,
    SeparationWitness,
    TableQuotient,
)
from .vertex_groups import (
    AllFinite,
    ClassTag,
    FiniteGroupTable,
    InfiniteCyclic,
    PFinite,
    SubgroupHandle,
)
from .words import Presentation, format_word, parse_word


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _key_value(no: int, line: str) -> tuple[str, str]:
    if ":" not in line:
        raise ParseError(f"expected 'key: value', got {line!r}", no)
    key, value = line.split(":", 1)
    return key.strip(), value.strip()


def _int(no: int, text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {text!r}", no) from None


def _parse_edges(no: int, text: str) -> list[tuple[int, int]]:
    edges = []
    for item in filter(None, (x.strip() for x in text.split(","))):
        m = re.fullmatch(r"(\d+)\s*-\s*(\d+)", item)
        if not m:
            raise ParseError(f"bad edge {item!r}, expected u-v", no)
        edges.append((int(m.group(1)), int(m.group(2))))
    return edges


def _parse_group(no: int, text: str):
    if text == "Z":
        return InfiniteCyclic()
    if not text.startswith("table"):
        raise ParseError(f"group must be 'Z' or 'table [[...]]', got {text!r}", no)
    try:
        rows = json.loads(text[len("table"):])
        table = FiniteGroupTable(tuple(tuple(int(x) for x in r) for r in rows))
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad product table: {exc}", no) from None
    return table


class _Header:
    """Accumulates the vertices/edges/group lines shared by presentation and witness files."""

    def __init__(self):
        self.vertices = None
        self.edges = None
        self.groups = {}

    def take(self, no: int, key: str, value: str) -> bool:
        if key == "vertices":
            if self.vertices is not None:
                raise ParseError("duplicate 'vertices' line", no)
            self.vertices = _int(no, value, "vertex count")
            if self.vertices < 1:
                raise ParseError("need at least one vertex", no)
        elif key == "edges":
            if self.edges is not None:
                raise ParseError("duplicate 'edges' line", no)
            self.edges = (no, _parse_edges(no, value))
        elif key.startswith("group "):
            v = _int(no, key[len("group "):].strip(), "group vertex")
            if v in self.groups:
                raise ParseError(f"duplicate group line for vertex {v}", no)
            self.groups[v] = (no, _parse_group(no, value))
        else:
            return False
        return True

    def build(self, last: int) -> Presentation:
        if self.vertices is None:
            raise ParseError("missing 'vertices' line", last)
        if self.edges is None:
            raise ParseError("missing 'edges' line", last)
        n = self.vertices
        eno, edges = self.edges
        try:
            graph = SimplicialGraph.from_edges(n, edges)
        except ValueError as exc:
            raise ParseError(str(exc), eno) from None
        for v, (no, _) in self.groups.items():
            if not 0 <= v < n:
                raise ParseError(f"group line for vertex {v} outside 0..{n - 1}", no)
        missing = [v for v in range(n) if v not in self.groups]
        if missing:
            raise ParseError(f"missing group line for vertex {missing[0]}", last)
        for v in range(n):
            no, g = self.groups[v]
            try:
                Presentation(SimplicialGraph.edgeless(1), (g,))
            except ValueError as exc:
                raise ParseError(f"group {v}: {exc}", no) from None
        return Presentation(graph, tuple(self.groups[v][1] for v in range(n)))


def parse_presentation(text: str) -> Presentation:
    head = _Header()
    last = 0
    for no, line in _lines(text):
        last = no
        key, value = _key_value(no, line)
        if not head.take(no, key, value):
            raise ParseError(f"unknown line {key!r}", no)
    return head.build(last)


def _format_group(g) -> str:
    if isinstance(g, InfiniteCyclic):
        return "Z"
    return "table " + json.dumps([list(r) for r in g.product], separators=(",", ":"))


def format_presentation(p: Presentation) -> str:
    lines = [f"vertices: {p.vertex_count}",
             "edges: " + ", ".join(f"{u}-{v}" for u, v in sorted(p.graph.edges))]
    lines += [f"group {v}: {_format_group(g)}" for v, g in enumerate(p.groups)]
    return "\n".join(line.rstrip() for line in lines) + "\n"


_MAP_ENTRY = re.compile(r'\s*(-?\w+)\s*->\s*"([^"]*)"\s*(?:,|$)')


def _parse_word_at(no: int, p: Presentation, text: str):
    try:
        return parse_word(p, text)
    except ValueError as exc:
        raise ParseError(str(exc), no) from None


def parse_map(text: str, source: Presentation, target: Presentation | None = None) -> VertexMapFamily:
    """Parse ``map V: e -> "word", ...`` lines (``gen -> "word"`` for a Z vertex)."""
    target = source if target is None else target
    maps: dict[int, dict[int, tuple]] = {}
    last = 0
    for no, line in _lines(text):
        last = no
        key, value = _key_value(no, line)
        if not key.startswith("map "):
            raise ParseError(f"unknown line {key!r}", no)
        v = _int(no, key[4:].strip(), "map vertex")
        if not 0 <= v < source.vertex_count:
            raise ParseError(f"map for vertex {v} outside the presentation", no)
        if v in maps:
            raise ParseError(f"duplicate map line for vertex {v}", no)
        entries = {}
        pos = 0
        while pos < len(value):
            m = _MAP_ENTRY.match(value, pos)
            if not m:
                raise ParseError(f"bad map entry near {value[pos:]!r}", no)
            pos = m.end()
            name, word = m.group(1), m.group(2)
            if isinstance(source.groups[v], InfiniteCyclic):
                if name != "gen":
                    raise ParseError(f"Z vertex {v} takes a single 'gen' entry", no)
                e = 1
            else:
                e = _int(no, name, "element")
            if e in entries:
                raise ParseError(f"duplicate entry for element {name}", no)
            entries[e] = _parse_word_at(no, target, word)
        maps[v] = entries
    try:
        return VertexMapFamily(source, target, maps)
    except ValueError as exc:
        raise ParseError(str(exc), last) from None


def format_map(f: VertexMapFamily) -> str:
    lines = []
    for v in range(f.source.vertex_count):
        if isinstance(f.source.groups[v], InfiniteCyclic):
            body = f'gen -> "{format_word(f.maps[v][1])}"'
        else:
            body = ", ".join(f'{e} -> "{format_word(w)}"' for e, w in sorted(f.maps[v].items()))
        lines.append(f"map {v}: {body}")
    return "\n".join(lines) + "\n"


def parse_class(text: str) -> ClassTag:
    text = text.strip()
    if text == "all":
        return AllFinite()
    m = re.fullmatch(r"(?:p=)?(\d+)", text)
    if not m:
        raise ValueError(f"class must be 'all' or a prime, got {text!r}")
    return PFinite(int(m.group(1)))


def _format_quotient(q) -> str:
    if isinstance(q, Modulus):
        return f"modulus {q.n}"
    if isinstance(q, TableQuotient):
        return "kernel " + ",".join(str(x) for x in q.kernel.members)
    return "identity"


def _parse_quotient(no: int, text: str, g):
    parts = text.split(None, 1)
    kind = parts[0] if parts else ""
    try:
        if kind == "identity" and len(parts) == 1:
            return Identity()
        if kind == "modulus" and len(parts) == 2:
            return Modulus(_int(no, parts[1], "modulus"))
        if kind == "kernel" and len(parts) == 2:
            if not isinstance(g, FiniteGroupTable):
                raise ParseError("kernel quotient needs a table vertex", no)
            members = tuple(_int(no, x.strip(), "kernel element") for x in parts[1].split(","))
            return TableQuotient(SubgroupHandle(g, members))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), no) from None
    raise ParseError(f"bad quotient {text!r}", no)


def format_witness(w: SeparationWitness) -> str:
    q = w.family
    lines = ["# separation witness", format_presentation(q.source).rstrip("\n"),
             f"class: {q.cls}"]
    lines += [f"quotient {v}: {_format_quotient(x)}" for v, x in enumerate(q.quotients)]
    if q.moduli_tried:
        lines.append("moduli: " + " ".join(str(n) for n in q.moduli_tried))
    lines += [f"kind: {w.kind}",
              f"x: {format_word(w.source_x)}",
              f"y: {format_word(w.source_y)}",
              f"image_x: {format_word(w.image_x)}",
              f"image_y: {format_word(w.image_y)}"]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse_witness(text: str) -> SeparationWitness:
    head = _Header()
    fields: dict[str, tuple[int, str]] = {}
    quotients: dict[int, tuple[int, str]] = {}
    last = 0
    for no, line in _lines(text):
        last = no
        key, value = _key_value(no, line)
        if head.take(no, key, value):
            continue
        if key.startswith("quotient "):
            v = _int(no, key[len("quotient "):].strip(), "quotient vertex")
            if v in quotients:
                raise ParseError(f"duplicate quotient line for vertex {v}", no)
            quotients[v] = (no, value)
        elif key in ("class", "moduli", "kind", "x", "y", "image_x", "image_y"):
            if key in fields:
                raise ParseError(f"duplicate {key!r} line", no)
            fields[key] = (no, value)
        else:
            raise ParseError(f"unknown line {key!r}", no)
    p = head.build(last)
    for key in ("class", "kind", "x", "y", "image_x", "image_y"):
        if key not in fields:
            raise ParseError(f"missing {key!r} line", last)
    if sorted(quotients) != list(range(p.vertex_count)):
        raise ParseError("need exactly one quotient line per vertex", last)
    qs = tuple(_parse_quotient(quotients[v][0], quotients[v][1], p.groups[v])
               for v in range(p.vertex_count))
    cno, ctext = fields["class"]
    try:
        cls = parse_class(ctext)
    except ValueError as exc:
        raise ParseError(str(exc), cno) from None
    tried = ()
    if "moduli" in fields:
        mno, mtext = fields["moduli"]
        tried = tuple(_int(mno, x, "modulus") for x in mtext.split())
    try:
        family = QuotientFamily(p, qs, cls, tried)
    except ValueError as exc:
        raise ParseError(str(exc), last) from None
    words = {}
    for key in ("x", "y"):
        no, value = fields[key]
        words[key] = _parse_word_at(no, p, value)
    for key in ("image_x", "image_y"):
        no, value = fields[key]
        try:
            words[key] = parse_word(None, value)
        except ValueError as exc:
            raise ParseError(str(exc), no) from None
    return SeparationWitness(family, words["x"], words["y"], words["image_x"],
                             words["image_y"], fields["kind"][1])
