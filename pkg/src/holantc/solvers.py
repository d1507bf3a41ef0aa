"""Polynomial-time Holant evaluation for product-type, affine and local affine grids."""

from __future__ import annotations

from typing import Callable

from .classes import in_A, in_A_alpha, in_L, in_P
from .cyclo import I, ONE, Cyc8, alpha_pow
from .errors import MalformedGrid, NotInClass, TooLarge
from .gauss import QuadraticExponent, gauss_sum_eval
from .gf2 import GF2System, GF2Solution, gf2_solve
from .grid import DEFAULT_MAX_EDGES, SignatureGrid, holant_brute, validate_grid
from .signatures import Signature, fit_alpha_form, local_alpha_transform, popcount, tensor_factorize

# [1, 0, -i]: undoes M_a (x) M_a on an edge carrying 1
COMPENSATOR = Signature(2, {0: 1, 3: -I}, "comp")
# [1, 0, i]: undoes the inverse transform used for the alpha-affine reduction
ALPHA_COMPENSATOR = Signature(2, {0: 1, 3: I}, "comp_alpha")

ZERO = Cyc8.coerce(0)


def _closed(g: SignatureGrid) -> dict[tuple[int, int], int]:
    validate_grid(g)
    if g.dangling:
        raise MalformedGrid("solvers need a closed grid", g.dangling[0])
    port_edge = {}
    for e, (p, q) in enumerate(g.edges):
        port_edge[p] = port_edge[q] = e
    return port_edge


def _require(g: SignatureGrid, test: Callable[[Signature], bool], family: str) -> None:
    for v, f in enumerate(g.vertices):
        if not test(f):
            raise NotInClass(f"vertex {g.vertex_name(v)} is not in {family}", v)


def _support_system(g: SignatureGrid, port_edge) -> GF2System | None:
    """Every vertex's affine support as equations over edge variables.

    Both ports of a self-loop read the same edge variable, so their
    contributions XOR together.  None if some vertex is identically zero.
    """
    sys = GF2System(len(g.edges))
    for v, f in enumerate(g.vertices):
        if f.is_zero():
            return None
        if f.arity == 0:
            continue
        sup = fit_alpha_form(f).support
        for i in range(f.arity):
            mask = 1 << port_edge[(v, i)]
            for j, fv in enumerate(sup.free):
                if (sup.rows[i] >> j) & 1:
                    mask ^= 1 << port_edge[(v, fv)]
            if i in sup.free:
                continue
            sys.add(mask, (sup.b >> i) & 1)
    return sys


def _affine_value(g: SignatureGrid, port_edge) -> Cyc8:
    sys = _support_system(g, port_edge)
    if sys is None:
        return ZERO
    e = QuadraticExponent(len(g.edges))
    for v, f in enumerate(g.vertices):
        if f.arity == 0:
            e.prefactor = e.prefactor * f.value(0)
            continue
        form = fit_alpha_form(f)
        e.prefactor = e.prefactor * form.lam
        free_edge = [port_edge[(v, fv)] for fv in form.support.free]
        for s, c in form.coeffs.items():
            pos = [j for j in range(len(free_edge)) if (s >> j) & 1]
            if len(pos) == 1:
                e.add_lin(free_edge[pos[0]], c // 2)
            elif (c // 4) % 2:
                e.add_quad(free_edge[pos[0]], free_edge[pos[1]])
    return gauss_sum_eval(e, sys)


def solve_affine_grid(g: SignatureGrid) -> Cyc8:
    port_edge = _closed(g)
    _require(g, in_A, "the affine family")
    return _affine_value(g, port_edge)


def solve_product_grid(g: SignatureGrid) -> Cyc8:
    port_edge = _closed(g)
    _require(g, in_P, "the product family")
    n = len(g.edges)
    parent = list(range(n))
    par = [0] * n  # x_e = x_parent ^ par

    def find(e: int) -> tuple[int, int]:
        p = 0
        path = []
        while parent[e] != e:
            path.append(e)
            p ^= par[e]
            e = parent[e]
        root, acc = e, p
        for node in path:  # path compression
            nxt = par[node]
            parent[node], par[node] = root, acc
            acc ^= nxt
        return root, p

    def union(a: int, b: int, d: int) -> bool:
        """Impose x_a ^ x_b = d; False on contradiction."""
        ra, pa = find(a)
        rb, pb = find(b)
        if ra == rb:
            return (pa ^ pb) == d
        parent[rb], par[rb] = ra, pa ^ pb ^ d
        return True

    scalar = ONE
    # (edge, port bit offset, weight if s == 0, weight if s == 1), s = x_edge ^ offset
    weights: list[tuple[int, int, Cyc8, Cyc8]] = []
    for v, f in enumerate(g.vertices):
        if f.is_zero():
            return ZERO
        for fac in tensor_factorize(f):
            h = fac.sig
            if h.arity == 0:
                scalar = scalar * h.value(0)
                continue
            edges = [port_edge[(v, var)] for var in fac.vars]
            if h.arity == 1:
                weights.append((edges[0], 0, h.value(0), h.value(1)))
                continue
            pts = sorted(h.entries)
            a = pts[0]
            for k in range(1, h.arity):
                d = ((a >> k) & 1) ^ (a & 1)
                if not union(edges[0], edges[k], d):
                    return ZERO
            abar = pts[1] if len(pts) > 1 else None
            w1 = h.entries[abar] if abar is not None else ZERO
            weights.append((edges[0], a & 1, h.entries[a], w1))
    comps: dict[int, list[Cyc8]] = {}
    for e in range(n):
        root, _ = find(e)
        comps.setdefault(root, [ONE, ONE])
    for e, off, w0, w1 in weights:
        root, p = find(e)
        cell = comps[root]
        # x_e = x_root ^ p, factor value w0 when x_e == off
        for xr in (0, 1):
            cell[xr] = cell[xr] * (w0 if (xr ^ p) == off else w1)
    total = scalar
    for cell in comps.values():
        total = total * (cell[0] + cell[1])
    return total


def _sigma_star(g: SignatureGrid, port_edge) -> GF2Solution | None:
    sys = _support_system(g, port_edge)
    if sys is None:
        return None
    return gf2_solve(sys)


def solve_local_affine_grid(g: SignatureGrid) -> Cyc8:
    port_edge = _closed(g)
    _require(g, in_L, "the local affine family")
    sol = _sigma_star(g, port_edge)
    if sol is None:
        return ZERO
    sigma = sol.x0
    new = SignatureGrid([], [], [])
    for v, f in enumerate(g.vertices):
        sv = 0
        for i in range(f.arity):
            if (sigma >> port_edge[(v, i)]) & 1:
                sv |= 1 << i
        new.vertices.append(local_alpha_transform(f, sv) if sv else f)
    for e, (p, q) in enumerate(g.edges):
        if (sigma >> e) & 1:
            c = new.add_vertex(COMPENSATOR)
            new.edges.append((p, (c, 0)))
            new.edges.append((q, (c, 1)))
        else:
            new.edges.append((p, q))
    return solve_affine_grid(new)


def solve_alpha_affine_grid(g: SignatureGrid) -> Cyc8:
    """Undo M_a on every port, paying [1, 0, i] on every edge, then solve affinely."""
    _closed(g)
    _require(g, in_A_alpha, "the alpha-affine family")
    new = SignatureGrid([], [], [])
    for f in g.vertices:
        new.vertices.append(
            Signature(f.arity, {x: v * alpha_pow(-popcount(x)) for x, v in f.entries.items()})
        )
    for p, q in g.edges:
        c = new.add_vertex(ALPHA_COMPENSATOR)
        new.edges.append((p, (c, 0)))
        new.edges.append((q, (c, 1)))
    return solve_affine_grid(new)


DISPATCH = (
    ("product", in_P, solve_product_grid),
    ("affine", in_A, solve_affine_grid),
    ("alpha-affine", in_A_alpha, solve_alpha_affine_grid),
    ("local-affine", in_L, solve_local_affine_grid),
)


def solve_auto(
    g: SignatureGrid, max_brute_edges: int = DEFAULT_MAX_EDGES, force_brute: bool = False
) -> tuple[Cyc8, str]:
    _closed(g)
    if not force_brute:
        sigs = g.signature_set()
        for tag, test, solver in DISPATCH:
            if all(test(f) for f in sigs):
                return solver(g), tag
    if len(g.edges) > max_brute_edges:
        raise TooLarge(
            f"no polynomial-time method applies and {len(g.edges)} edges exceed the cap of {max_brute_edges}"
        )
    return holant_brute(g, max_brute_edges), "brute"
