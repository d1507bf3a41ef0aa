"""Signature grids, the brute-force Holant oracle, and gadget composition."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .cyclo import Cyc8
from .errors import MalformedGrid, TooLarge
from .signatures import Signature

Port = tuple[int, int]  # (vertex index, port index)
Edge = tuple[Port, Port]

DEFAULT_MAX_EDGES = 24


@dataclass
class SignatureGrid:
    vertices: list[Signature]
    edges: list[Edge] = field(default_factory=list)
    dangling: list[Port] = field(default_factory=list)
    # display names of the vertices, parallel to ``vertices``
    names: list[str] | None = None

    def vertex_name(self, v: int) -> str:
        if self.names is not None and v < len(self.names):
            return self.names[v]
        return f"v{v}"

    @property
    def closed(self) -> bool:
        return not self.dangling

    def signature_set(self) -> list[Signature]:
        seen: dict[Signature, None] = {}
        for f in self.vertices:
            seen.setdefault(f, None)
        return list(seen)

    def add_vertex(self, f: Signature, name: str | None = None) -> int:
        self.vertices.append(f)
        if self.names is not None:
            self.names.append(name or f"v{len(self.vertices) - 1}")
        return len(self.vertices) - 1


def validate_grid(g: SignatureGrid) -> None:
    used: dict[Port, str] = {}

    def claim(p: Port, where: str) -> None:
        v, k = p
        if not 0 <= v < len(g.vertices):
            raise MalformedGrid(f"{where} refers to missing vertex {v}", p)
        if not 0 <= k < g.vertices[v].arity:
            raise MalformedGrid(
                f"{where} uses port {k} of {g.vertex_name(v)} (arity {g.vertices[v].arity})", p
            )
        if p in used:
            raise MalformedGrid(f"port {v}.{k} appears in {used[p]} and in {where}", p)
        used[p] = where

    for n, (p, q) in enumerate(g.edges):
        if p == q:
            raise MalformedGrid(f"edge {n} joins port {p[0]}.{p[1]} to itself", p)
        claim(p, f"edge {n}")
        claim(q, f"edge {n}")
    for p in g.dangling:
        claim(p, "the dangling list")
    for v, f in enumerate(g.vertices):
        for k in range(f.arity):
            if (v, k) not in used:
                raise MalformedGrid(f"port {v}.{k} of {g.vertex_name(v)} is not connected", (v, k))


def _vertex_order(g: SignatureGrid, port_var: dict[Port, int]) -> list[int]:
    """Small supports first, preferring vertices already tied to assigned variables."""
    remaining = set(range(len(g.vertices)))
    known: set[int] = set()
    order = []
    while remaining:
        def key(v: int) -> tuple[int, int, int]:
            vs = {port_var[(v, k)] for k in range(g.vertices[v].arity)}
            return (0 if vs & known or not known else 1, len(g.vertices[v].entries), v)

        v = min(remaining, key=key)
        remaining.discard(v)
        order.append(v)
        known |= {port_var[(v, k)] for k in range(g.vertices[v].arity)}
    return order


def _contract(g: SignatureGrid, max_edges: int) -> dict[int, Cyc8]:
    """Sum over internal edges; result keyed by the dangling assignment."""
    validate_grid(g)
    if len(g.edges) > max_edges:
        raise TooLarge(f"{len(g.edges)} internal edges exceed the brute-force cap of {max_edges}")
    port_var: dict[Port, int] = {}
    for e, (p, q) in enumerate(g.edges):
        port_var[p] = port_var[q] = e
    n_edges = len(g.edges)
    for k, p in enumerate(g.dangling):
        port_var[p] = n_edges + k
    order = _vertex_order(g, port_var)
    # each vertex entry becomes (mask of variables, their values, value); self-loop
    # entries that disagree on the two ports of one edge are dropped up front
    tables = []
    for v in order:
        f = g.vertices[v]
        vmask = 0
        for k in range(f.arity):
            vmask |= 1 << port_var[(v, k)]
        rows = []
        for x, val in f.entries.items():
            bits, ok, seen = 0, True, 0
            for k in range(f.arity):
                var = port_var[(v, k)]
                bit = (x >> k) & 1
                if (seen >> var) & 1:
                    if ((bits >> var) & 1) != bit:
                        ok = False
                        break
                seen |= 1 << var
                bits |= bit << var
            if ok:
                rows.append((bits, val))
        if not rows:
            return {}
        tables.append((vmask, rows))
    shift = n_edges
    out: dict[int, Cyc8] = {}

    def walk(level: int, known: int, value_bits: int, acc: Cyc8) -> None:
        if level == len(tables):
            key = value_bits >> shift
            out[key] = out[key] + acc if key in out else acc
            return
        vmask, rows = tables[level]
        overlap = known & vmask
        for bits, val in rows:
            if (bits ^ value_bits) & overlap:
                continue
            walk(level + 1, known | vmask, value_bits | bits, acc * val)

    walk(0, 0, 0, Cyc8.coerce(1))
    return {k: v for k, v in out.items() if v}


def holant_brute(g: SignatureGrid, max_edges: int = DEFAULT_MAX_EDGES) -> Cyc8:
    if g.dangling:
        raise MalformedGrid("holant_brute needs a closed grid", g.dangling[0])
    return _contract(g, max_edges).get(0, Cyc8.coerce(0))


def compose_gadget(g: SignatureGrid, max_edges: int = DEFAULT_MAX_EDGES, name: str | None = None) -> Signature:
    """The derived signature of a gadget; variable k is the k-th dangling port."""
    return Signature(len(g.dangling), _contract(g, max_edges), name)


def attach(f: Signature, gadgets: Sequence[tuple[int, Signature]]) -> SignatureGrid:
    """Grid with f at vertex 0 and each (var, h) joining f's var to port 0 of a new h vertex."""
    g = SignatureGrid([f])
    for var, h in gadgets:
        w = g.add_vertex(h)
        g.edges.append(((0, var), (w, 0)))
    return g
