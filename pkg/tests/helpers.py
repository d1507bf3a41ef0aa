"""Random instance generators and an independent floating-point Holant oracle."""

from __future__ import annotations

import cmath
import itertools
import random

from holantc.classes import in_A, in_L, in_P
from holantc.corpus import gen_delta, gen_equality, gen_f7_alpha_pm
from holantc.cyclo import ALPHA, I, Cyc8
from holantc.grid import SignatureGrid
from holantc.signatures import Signature, popcount, signature_from_alpha_coeffs


def to_complex_table(f: Signature) -> dict[int, complex]:
    return {x: complex(v) for x, v in f.entries.items()}


def complex_holant(g: SignatureGrid) -> complex:
    """Plain enumeration over all edge assignments in floating point."""
    port_edge = {}
    for e, (p, q) in enumerate(g.edges):
        port_edge[p] = port_edge[q] = e
    tables = [to_complex_table(f) for f in g.vertices]
    total = 0j
    for sigma in range(1 << len(g.edges)):
        prod = 1 + 0j
        for v, f in enumerate(g.vertices):
            x = 0
            for k in range(f.arity):
                x |= ((sigma >> port_edge[(v, k)]) & 1) << k
            prod *= tables[v].get(x, 0)
            if prod == 0:
                break
        total += prod
    return total


def close(a: Cyc8, b: complex, tol: float = 1e-9) -> bool:
    return cmath.isclose(complex(a), b, abs_tol=tol)


def random_cyc8(rng: random.Random, nonzero: bool = True, span: int = 3) -> Cyc8:
    while True:
        z = Cyc8(*(rng.randint(-span, span) for _ in range(4)))
        if z or not nonzero:
            return z


def random_rows(rng: random.Random, n: int, r: int) -> list[int]:
    """n row masks over r free variables containing every unit vector."""
    units = [1 << j for j in range(r)]
    rest = [rng.randrange(0, 1 << r) if r else 0 for _ in range(n - r)]
    rows = units + rest
    rng.shuffle(rows)
    return rows


def random_alpha_signature(rng: random.Random, n: int | None = None, r: int | None = None) -> Signature:
    """Affine support with random Z_8 coefficients (n <= 8, r <= 3)."""
    if r is None:
        r = rng.randint(0, 3 if n is None else min(3, n))
    n = rng.randint(max(r, 1), 8) if n is None else n
    rows = random_rows(rng, n, r)
    b = rng.getrandbits(n)
    coeffs = {s: rng.randrange(8) for s in range(1, 1 << r) if rng.random() < 0.6}
    lam = rng.choice([1, -1, I, ALPHA, 2, Cyc8(1, 1)])
    return signature_from_alpha_coeffs(n, rows, b, coeffs, lam)


def random_local_affine(rng: random.Random, max_arity: int = 8) -> Signature:
    """Every row used an even number of times, c_S chosen to satisfy the offset parities."""
    r = rng.randint(0, 3)
    rows: list[int] = []
    for j in range(r):
        rows += [1 << j, 1 << j]
    while len(rows) + 2 <= max_arity and rng.random() < 0.5 and r:
        m = rng.randrange(1, 1 << r)
        rows += [m, m]
    while len(rows) < max_arity and rng.random() < 0.3:
        rows.append(0)
    if not rows:
        rows = [0]
    order = list(range(len(rows)))
    rng.shuffle(order)
    rows = [rows[i] for i in order]
    n = len(rows)
    # the first occurrence of each unit row is the free variable and carries offset 0
    b = 0
    first_unit = {}
    for i, m in enumerate(rows):
        if popcount(m) == 1 and m not in first_unit:
            first_unit[m] = i
            continue
        if rng.random() < 0.5:
            b |= 1 << i
    coeffs = {}
    for s in range(1, 1 << r):
        deg = popcount(s)
        if deg > 3:
            continue
        hat = sum(1 for i, m in enumerate(rows) if m & s == s and (b >> i) & 1) % 2
        if deg == 1:
            c = 2 * rng.randrange(4) + hat
        elif deg == 2:
            c = 4 * rng.randrange(2) + 2 * hat
        else:
            c = 4 * hat
        if c:
            coeffs[s] = c
    lam = rng.choice([1, -1, I, ALPHA])
    return signature_from_alpha_coeffs(n, rows, b, coeffs, lam)


def random_affine(rng: random.Random, max_arity: int = 6) -> Signature:
    r = rng.randint(0, 3)
    n = rng.randint(max(r, 1), max_arity)
    rows = random_rows(rng, n, r)
    b = rng.getrandbits(n)
    coeffs = {}
    for s in range(1, 1 << r):
        deg = popcount(s)
        if deg == 1:
            coeffs[s] = 2 * rng.randrange(4)
        elif deg == 2:
            coeffs[s] = 4 * rng.randrange(2)
    lam = rng.choice([1, 2, -1, I, Cyc8(1, 0, 1)])
    return signature_from_alpha_coeffs(n, rows, b, coeffs, lam)


def random_product(rng: random.Random, max_arity: int = 5) -> Signature:
    """Tensor product of unaries and weighted generalized (dis)equalities."""
    arity = rng.randint(1, max_arity)
    parts = []
    left = arity
    while left:
        k = rng.randint(1, min(3, left))
        left -= k
        if k == 1:
            parts.append((1, {0: random_cyc8(rng, False), 1: random_cyc8(rng, False)}))
        else:
            a = rng.getrandbits(k)
            parts.append((k, {a: random_cyc8(rng), a ^ ((1 << k) - 1): random_cyc8(rng, rng.random() < 0.7)}))
    cur = {0: Cyc8.coerce(1)}
    shift = 0
    for k, table in parts:
        cur = {x | (y << shift): v * w for x, v in cur.items() for y, w in table.items() if v and w}
        shift += k
    perm = list(range(arity))
    rng.shuffle(perm)
    return Signature(arity, cur).permuted(perm)


def random_matching_grid(rng: random.Random, pool: list[Signature], max_edges: int) -> SignatureGrid:
    """A closed grid over signatures from pool with at most max_edges edges."""
    while True:
        verts: list[Signature] = []
        ports = 0
        budget = 2 * max_edges
        for _ in range(rng.randint(1, 8)):
            cand = [f for f in pool if ports + f.arity <= budget]
            if not cand:
                break
            f = rng.choice(cand)
            verts.append(f)
            ports += f.arity
        if ports % 2:
            odd = [f for f in pool if f.arity % 2 and ports + f.arity <= budget]
            if not odd:
                continue
            f = rng.choice(odd)
            verts.append(f)
            ports += f.arity
        if ports == 0 or ports % 2:
            continue
        plist = [(v, k) for v, f in enumerate(verts) for k in range(f.arity)]
        rng.shuffle(plist)
        edges = [(plist[i], plist[i + 1]) for i in range(0, len(plist), 2)]
        return SignatureGrid(verts, edges, [], [f"v{i}" for i in range(len(verts))])


def random_planted_grid(rng: random.Random, pool: list[Signature], max_edges: int) -> SignatureGrid:
    """Closed grid that has at least one nonzero assignment: ports are matched
    only to ports carrying the same bit of a sampled support point."""
    budget = 2 * max_edges
    while True:
        verts: list[Signature] = []
        points: list[int] = []
        ports = 0
        for _ in range(rng.randint(1, 8)):
            cand = [f for f in pool if f.entries and ports + f.arity <= budget - 2]
            if not cand:
                break
            f = rng.choice(cand)
            verts.append(f)
            points.append(rng.choice(sorted(f.entries)))
            ports += f.arity
        groups: dict[int, list] = {0: [], 1: []}
        for v, (f, x) in enumerate(zip(verts, points)):
            for k in range(f.arity):
                groups[(x >> k) & 1].append((v, k))
        for bit in (0, 1):
            if len(groups[bit]) % 2:
                verts.append(Signature(1, {bit: 1}, f"delta{bit}"))
                groups[bit].append((len(verts) - 1, 0))
        if not verts or len(groups[0]) + len(groups[1]) > budget:
            continue
        edges = []
        for bit in (0, 1):
            plist = groups[bit]
            rng.shuffle(plist)
            edges += [(plist[i], plist[i + 1]) for i in range(0, len(plist), 2)]
        if not edges:
            continue
        rng.shuffle(edges)
        return SignatureGrid(verts, edges, [], [f"v{i}" for i in range(len(verts))])


def local_affine_pool(rng: random.Random, extra: int = 6) -> list[Signature]:
    pool = [
        gen_equality(2),
        gen_equality(4),
        gen_delta(0),
        gen_delta(1),
        Signature(2, {0: 1, 3: -I}, "comp"),
        gen_f7_alpha_pm(),
    ]
    while len(pool) < 6 + extra:
        f = random_local_affine(rng)
        if in_L(f) and f.arity <= 8:
            pool.append(f)
    return pool


def affine_pool(rng: random.Random, extra: int = 6) -> list[Signature]:
    pool = [gen_equality(2), gen_equality(3), gen_equality(4), gen_delta(0), gen_delta(1),
            Signature(2, {0: 1, 3: -I}), Signature(1, {0: 1, 1: I})]
    while len(pool) < 7 + extra:
        f = random_affine(rng)
        assert in_A(f)
        pool.append(f)
    return pool


def product_pool(rng: random.Random, extra: int = 8) -> list[Signature]:
    pool = [gen_equality(2), gen_equality(3), Signature(2, {1: 1, 2: 1}), gen_delta(0)]
    while len(pool) < 4 + extra:
        f = random_product(rng)
        assert in_P(f)
        pool.append(f)
    return pool


def all_permutations_iso(a: frozenset[int], b: frozenset[int], n: int) -> bool:
    """Whether some variable permutation maps the point set a onto b."""
    for perm in itertools.permutations(range(n)):
        img = frozenset(sum(((x >> perm[i]) & 1) << i for i in range(n)) for x in a)
        if img == b:
            return True
    return False


