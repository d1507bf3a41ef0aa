"""Text formats for signatures and signature grids."""

from __future__ import annotations

import re
from pathlib import Path
from typing import Callable, Iterator

from .cyclo import format_cyc8, parse_cyc8
from .errors import DuplicateEntry, ParseError, UnknownSignature
from .grid import SignatureGrid, validate_grid
from .signatures import Signature, bits_to_str, lex_key

_HEADER = re.compile(r"sig\s+(\S+)\s+arity\s+(\d+)$")
_ENTRY = re.compile(r"([01]*)\s*:\s*(.+)$")
_PORT = re.compile(r"([A-Za-z_][\w\-]*)\.(\d+)$")


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


class _SigBuilder:
    def __init__(self, name: str, arity: int, line: int) -> None:
        self.name, self.arity, self.line = name, arity, line
        self.entries: dict[int, object] = {}

    def add(self, line_no: int, bits: str, value: str) -> None:
        if len(bits) != self.arity:
            raise ParseError(f"bitstring {bits!r} has length {len(bits)}, expected {self.arity}", line_no)
        x = sum(1 << i for i, ch in enumerate(bits) if ch == "1")
        if x in self.entries:
            raise DuplicateEntry(f"duplicate entry {bits} in signature {self.name}", line_no)
        try:
            self.entries[x] = parse_cyc8(value)
        except ParseError as exc:
            raise type(exc)(str(exc), line_no) from None

    def build(self) -> Signature:
        return Signature(self.arity, self.entries, self.name)


def _header(line_no: int, line: str) -> _SigBuilder:
    m = _HEADER.match(line)
    if not m:
        raise ParseError(f"malformed signature header {line!r}", line_no)
    arity = int(m.group(2))
    if arity > 64:
        raise ParseError(f"arity {arity} exceeds 64", line_no)
    return _SigBuilder(m.group(1), arity, line_no)


def parse_signatures(text: str) -> list[Signature]:
    """All signatures in a file: ``sig NAME arity N`` headers followed by ``BITS : VALUE`` lines."""
    out: list[Signature] = []
    cur: _SigBuilder | None = None
    for no, line in _lines(text):
        if line.startswith("sig ") or line == "sig":
            if cur is not None:
                out.append(cur.build())
            cur = _header(no, line)
            continue
        m = _ENTRY.match(line)
        if not m:
            raise ParseError(f"cannot read {line!r}", no)
        if cur is None:
            raise ParseError("entry before any 'sig' header", no)
        cur.add(no, m.group(1), m.group(2))
    if cur is not None:
        out.append(cur.build())
    return out


def parse_signature_file(text: str) -> Signature:
    sigs = parse_signatures(text)
    if len(sigs) != 1:
        raise ParseError(f"expected exactly one signature, found {len(sigs)}")
    return sigs[0]


def serialize_signature(f: Signature, name: str | None = None) -> str:
    lines = [f"sig {name or f.name or 'f'} arity {f.arity}"]
    for x in sorted(f.entries, key=lambda x: lex_key(x, f.arity)):
        lines.append(f"{bits_to_str(x, f.arity)} : {format_cyc8(f.entries[x])}")
    return "\n".join(lines) + "\n"


def load_signature(path: str | Path) -> Signature:
    return parse_signature_file(Path(path).read_text(encoding="utf-8"))


# -- grids ------------------------------------------------------------------------------

def _port(token: str, vertices: dict[str, int], line_no: int) -> tuple[int, int]:
    m = _PORT.match(token)
    if not m:
        raise ParseError(f"malformed port {token!r} (expected VERTEX.INDEX)", line_no)
    if m.group(1) not in vertices:
        raise ParseError(f"unknown vertex {m.group(1)!r}", line_no)
    return vertices[m.group(1)], int(m.group(2))


def parse_grid_file(
    text: str,
    base_dir: str | Path | None = None,
    reader: Callable[[Path], str] | None = None,
) -> SignatureGrid:
    """Grid text: ``use``/inline ``sig`` definitions, ``vertex``, ``edge`` and ``dangle`` lines."""
    base = Path(base_dir) if base_dir is not None else Path(".")
    read = reader or (lambda p: p.read_text(encoding="utf-8"))
    sigs: dict[str, Signature] = {}
    vertices: dict[str, int] = {}
    g = SignatureGrid([], [], [], [])
    cur: _SigBuilder | None = None

    def close_sig() -> None:
        nonlocal cur
        if cur is not None:
            sigs[cur.name] = cur.build()
            cur = None

    for no, line in _lines(text):
        word = line.split(None, 1)[0]
        if word != "sig" and _ENTRY.match(line) and cur is not None:
            m = _ENTRY.match(line)
            cur.add(no, m.group(1), m.group(2))
            continue
        close_sig()
        parts = line.split()
        if word == "sig":
            cur = _header(no, line)
        elif word == "use":
            if len(parts) != 3:
                raise ParseError("expected 'use NAME FILE'", no)
            name, fname = parts[1], parts[2]
            try:
                found = parse_signatures(read(base / fname))
            except OSError as exc:
                raise UnknownSignature(f"cannot read {fname}: {exc.strerror or exc}", no) from None
            match = [s for s in found if s.name == name]
            if not match and len(found) == 1:
                match = found
            if not match:
                raise UnknownSignature(f"no signature {name!r} in {fname}", no)
            sigs[name] = match[0].renamed(name)
        elif word == "vertex":
            if len(parts) != 4 or parts[2] != "=":
                raise ParseError("expected 'vertex V = NAME'", no)
            vname, sname = parts[1], parts[3]
            if sname not in sigs:
                raise UnknownSignature(f"unknown signature {sname!r}", no)
            if vname in vertices:
                raise ParseError(f"vertex {vname!r} declared twice", no)
            vertices[vname] = g.add_vertex(sigs[sname], vname)
        elif word == "edge":
            if len(parts) != 3:
                raise ParseError("expected 'edge V1.P1 V2.P2'", no)
            g.edges.append((_port(parts[1], vertices, no), _port(parts[2], vertices, no)))
        elif word == "dangle":
            if len(parts) < 2:
                raise ParseError("expected 'dangle V.P'", no)
            g.dangling.extend(_port(tok, vertices, no) for tok in parts[1:])
        else:
            raise ParseError(f"unknown directive {word!r}", no)
    close_sig()
    validate_grid(g)
    return g


def load_grid(path: str | Path) -> SignatureGrid:
    p = Path(path)
    return parse_grid_file(p.read_text(encoding="utf-8"), p.parent)


def serialize_grid(g: SignatureGrid) -> str:
    """Self-contained grid text with every signature defined inline."""
    names: dict[Signature, str] = {}
    blocks = []
    for f in g.vertices:
        if f in names:
            continue
        base = f.name or "s"
        name, k = base, 1
        while name in names.values():
            name = f"{base}_{k}"
            k += 1
        names[f] = name
        blocks.append(serialize_signature(f, name))
    vnames = [g.vertex_name(v) for v in range(len(g.vertices))]
    if len(set(vnames)) != len(vnames) or not all(_PORT.match(f"{n}.0") for n in vnames):
        vnames = [f"v{v}" for v in range(len(g.vertices))]
    lines = ["".join(blocks).rstrip("\n")]
    lines += [f"vertex {vn} = {names[f]}" for vn, f in zip(vnames, g.vertices)]
    lines += [f"edge {vnames[p[0]]}.{p[1]} {vnames[q[0]]}.{q[1]}" for p, q in g.edges]
    lines += [f"dangle {vnames[p[0]]}.{p[1]}" for p in g.dangling]
    return "\n".join(lines) + "\n"

