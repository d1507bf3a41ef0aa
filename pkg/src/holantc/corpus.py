"""Generators for the named signatures and gadget constructions."""

from __future__ import annotations

from typing import Callable, Sequence

from .cyclo import Cyc8, Scalar
from .errors import BundleViolation, HolantError
from .grid import SignatureGrid, compose_gadget
from .signatures import (
    Signature,
    bundles_of,
    essential_of,
    popcount,
    proportional_to,
    signature_from_affine,
)

# columns of the 3x7 generator matrix of the dual Hamming code, top row first
HAMMING_COLUMNS = ((0, 0, 1), (0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 0, 1), (1, 1, 0), (1, 1, 1))
# positions of x1, x2, x4 among the seven columns
HAMMING_FREE = (0, 1, 3)


def gen_equality(n: int) -> Signature:
    if n < 1:
        raise ValueError("equality needs arity at least 1")
    return Signature(n, {0: 1, (1 << n) - 1: 1}, f"eq{n}")


def gen_delta(bit: int) -> Signature:
    if bit not in (0, 1):
        raise ValueError("delta takes a bit")
    return Signature(1, {bit: 1}, f"delta{bit}")


def gen_f_chain(r: int) -> Signature:
    """f_{2^r - 1}: variable d-1 carries <d, x> for every nonzero d in Z_2^r."""
    if not 1 <= r <= 6:
        raise ValueError("f_chain is defined here for r in 1..6")
    n = (1 << r) - 1
    out = {}
    for x in range(1 << r):
        y = 0
        for d in range(1, n + 1):
            if popcount(d & x) & 1:
                y |= 1 << (d - 1)
        out[y] = 1
    return Signature(n, out, f"f{n}")


def _hamming_word(y: int) -> int:
    """The codeword yH for y = (y1, y2, y3), y1 the top row (bit 2 of the int)."""
    w = 0
    for i, col in enumerate(HAMMING_COLUMNS):
        dot = sum(((y >> (2 - k)) & 1) * col[k] for k in range(3)) % 2
        w |= dot << i
    return w


def gen_f7_alpha_pm(weights: Callable[[int, int, int], Scalar] | None = None) -> Signature:
    """Arity 14, support {w w-bar : w in the dual Hamming code}, value (-1)^(x1 x2 x4).

    ``weights`` may replace the value as a function of (x1, x2, x4).
    """
    out = {}
    for y in range(8):
        w = _hamming_word(y)
        x1, x2, x4 = ((w >> i) & 1 for i in HAMMING_FREE)
        val = weights(x1, x2, x4) if weights else (-1 if x1 and x2 and x4 else 1)
        out[w | ((w ^ 0x7F) << 7)] = val
    return Signature(14, out, "f7a_pm")


def gen_f7_alpha_essential() -> Signature:
    """The arity-7 essential function of f7^a(+-)."""
    return essential_of(gen_f7_alpha_pm()).renamed("f7a")


# -- bundle operations --------------------------------------------------------------

# support {001, 110}: port 0 = y, port 1 = y, port 2 = not y
PLUS_MINUS_SPLITTER = Signature(3, {0b100: 1, 0b011: 1}, "split_pm")


def retype(f: Signature, pattern: str | Sequence[str]) -> Signature:
    """Duplicate every variable of f into a (++) or (+-) pair.

    Output layout: the n first copies (same as f's variables), then the n
    second copies.
    """
    n = f.arity
    pats = [pattern] * n if isinstance(pattern, str) else list(pattern)
    if len(pats) != n or any(p not in ("++", "+-") for p in pats):
        raise BundleViolation("retype needs one pattern, '++' or '+-', per variable")
    table = bundles_of(f)
    if table.constants or any(len(bd.members) != 1 for bd in table.bundles):
        raise BundleViolation("retype applies to signatures whose bundles are singletons")
    g = SignatureGrid([f])
    splitters = []
    for i, p in enumerate(pats):
        h = _eq(3) if p == "++" else PLUS_MINUS_SPLITTER
        w = g.add_vertex(h)
        g.edges.append(((0, i), (w, 0)))
        splitters.append(w)
    g.dangling = [(w, 1) for w in splitters] + [(w, 2) for w in splitters]
    suffix = "".join("pp" if p == "++" else "pm" for p in set(pats))
    return compose_gadget(g, name=f"{f.name or 'f'}_{suffix}")


def _eq(n: int) -> Signature:
    return Signature(n, {0: 1, (1 << n) - 1: 1}, f"eq{n}")


def triple(f: Signature, var: int) -> Signature:
    """Replace variable ``var`` by three copies (positions var, var+1, var+2)."""
    try:
        bundles_of(f)
    except HolantError as exc:
        raise BundleViolation(f"triple needs affine support: {exc}") from exc
    if not 0 <= var < f.arity:
        raise BundleViolation(f"no variable {var} in arity {f.arity}")
    g = SignatureGrid([f, _eq(4)], [((0, var), (1, 0))])
    ports = [(0, i) for i in range(var)] + [(1, 1), (1, 2), (1, 3)]
    ports += [(0, i) for i in range(var + 1, f.arity)]
    g.dangling = ports
    return compose_gadget(g, name=f.name)


def collate(f: Signature, i: int, j: int) -> Signature:
    """Join two same-sign variables of one bundle that keeps at least one member."""
    try:
        table = bundles_of(f)
    except HolantError as exc:
        raise BundleViolation(f"collation needs affine support: {exc}") from exc
    if i == j:
        raise BundleViolation("collation needs two distinct variables")
    bd = table.bundle_of(i)
    if bd is None or table.bundle_of(j) != bd:
        raise BundleViolation(f"variables {i} and {j} are not in one bundle")
    signs = dict(bd.members)
    if signs[i] != signs[j]:
        raise BundleViolation(f"variables {i} and {j} have opposite signs")
    if len(bd.members) < 3:
        raise BundleViolation("collation would empty the bundle")
    g = SignatureGrid([f], [((0, i), (0, j))], [(0, k) for k in range(f.arity) if k not in (i, j)])
    return compose_gadget(g, name=f.name)


def bundle_variant(f: Signature, op: str, *args) -> Signature:
    """Dispatch 'triple' (var), 'collate' (i, j) or 'retype' (pattern)."""
    ops = {"triple": triple, "collate": collate, "retype": retype}
    if op not in ops:
        raise ValueError(f"unknown bundle operation {op!r}")
    return ops[op](f, *args)


def square_doubled(f: Signature) -> Signature:
    """f^2 on doubled variables (x1, y1, x2, y2, ...), built from two copies of f and (=4)'s."""
    n = f.arity
    g = SignatureGrid([f, f])
    for i in range(n):
        w = g.add_vertex(_eq(4))
        g.edges += [((0, i), (w, 0)), ((1, i), (w, 1))]
        g.dangling += [(w, 2), (w, 3)]
    return compose_gadget(g, name=f"{f.name}_sq" if f.name else None)


# -- f7^a(++) gadget -----------------------------------------------------------------

def figure1_grid() -> SignatureGrid:
    """One f7^a(+-) and three f3(+-) copies wired so the gadget realizes f7^a(++).

    f3(+-) variables: 0 = u1+, 1 = u2+, 2 = (u1+u2)+, then 3, 4, 5 the (-) copies.
    f7^a(+-) variables 0..6 carry x1, x2, x1+x2, x3, x1+x3, x2+x3, x1+x2+x3
    (x3 standing for the fourth column), 7..13 their complements.
    """
    f7 = gen_f7_alpha_pm()
    f3 = retype(gen_f_chain(2), "+-").renamed("f3_pm")
    F, U, V, W = 0, 1, 2, 3
    edges = [
        ((U, 3), (F, 7)),  # u1 = x1
        ((U, 4), (F, 12)),  # u2 = x2 + x3
        ((V, 3), (F, 8)),  # v1 = x2
        ((V, 4), (F, 11)),  # v2 = x1 + x3
        ((W, 3), (F, 10)),  # w1 = x3
        ((W, 4), (F, 9)),  # w2 = x1 + x2
        ((U, 5), (F, 13)),  # u1 + u2 = x1 + x2 + x3
        ((U, 2), (V, 2)),  # u1 + u2 = v1 + v2
        ((V, 5), (W, 5)),  # v1 + v2 = w1 + w2
    ]
    dangling = [(F, i) for i in range(7)]
    dangling += [(U, 0), (V, 0), (W, 1), (W, 0), (V, 1), (U, 1), (W, 2)]
    return SignatureGrid([f7, f3, f3, f3], edges, dangling, ["f7", "u", "v", "w"])


def gen_f7_alpha_pp() -> Signature:
    return retype(gen_f7_alpha_essential(), "++").renamed("f7a_pp")


def replay_figure1() -> tuple[Signature, bool, Cyc8 | None]:
    """Compose the gadget; report whether it is proportional to f7^a(++) and the constant."""
    derived = compose_gadget(figure1_grid(), name="figure1")
    c = proportional_to(derived, gen_f7_alpha_pp())
    return derived, c is not None, c


GENERATORS: dict[str, Callable[..., Signature]] = {
    "equality": gen_equality,
    "delta": gen_delta,
    "f-chain": gen_f_chain,
    "f7-alpha-pm": gen_f7_alpha_pm,
    "f7-alpha-pp": gen_f7_alpha_pp,
    "f7-alpha": gen_f7_alpha_essential,
}
