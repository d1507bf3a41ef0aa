"""Sparse signatures and their affine-support structure.

A signature of arity n stores only its nonzero values.  Assignments are
packed into ints with variable ``i`` at bit ``i``; the text form of an
assignment lists variable 0 first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .cyclo import ONE, Cyc8, Scalar, alpha_pow
from .errors import BundleViolation, EmptySupport, NotAffine, NotUnimodular

MAX_ARITY = 64


def bits_to_str(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def str_to_bits(s: str) -> int:
    x = 0
    for i, ch in enumerate(s):
        if ch == "1":
            x |= 1 << i
        elif ch != "0":
            raise ValueError(f"not a bitstring: {s!r}")
    return x


def popcount(x: int) -> int:
    return bin(x).count("1")


def lex_key(x: int, n: int) -> int:
    """Sort key placing assignments in lexicographic order of their bitstrings."""
    return int(bits_to_str(x, n)[::-1] or "0", 2)


class Signature:
    """A function {0,1}^n -> Q(zeta_8) kept as its support with values."""

    __slots__ = ("arity", "entries", "name", "_cache")

    def __init__(self, arity: int, entries: Mapping[int, Scalar], name: str | None = None) -> None:
        if not 0 <= arity <= MAX_ARITY:
            raise ValueError(f"arity must be in 0..{MAX_ARITY}, got {arity}")
        clean: dict[int, Cyc8] = {}
        for x, v in entries.items():
            if x < 0 or x >> arity:
                raise ValueError(f"assignment {x} does not fit in {arity} bits")
            v = Cyc8.coerce(v)
            if v:
                clean[x] = v
        self.arity = arity
        self.entries: Mapping[int, Cyc8] = MappingProxyType(clean)
        self.name = name
        self._cache: dict = {}

    @classmethod
    def from_values(cls, values: Sequence[Scalar], name: str | None = None) -> Signature:
        """Dense constructor; ``values[k]`` is f at the bitstring spelling k in binary."""
        n = len(values).bit_length() - 1
        if len(values) != 1 << n:
            raise ValueError("length of a value table must be a power of two")
        entries = {}
        for k, v in enumerate(values):
            x = 0
            for i in range(n):
                if (k >> (n - 1 - i)) & 1:
                    x |= 1 << i
            entries[x] = v
        return cls(n, entries, name)

    @classmethod
    def from_symmetric(cls, values: Sequence[Scalar], name: str | None = None) -> Signature:
        """Expand the ``[f0, f1, ..., fn]`` notation (value by Hamming weight)."""
        n = len(values) - 1
        if n > 20:
            raise ValueError("symmetric notation is only expanded up to arity 20")
        return cls(n, {x: values[popcount(x)] for x in range(1 << n)}, name)

    def value(self, x: int) -> Cyc8:
        return self.entries.get(x, Cyc8.coerce(0))

    def __call__(self, *bits: int) -> Cyc8:
        return self.value(sum(b << i for i, b in enumerate(bits)))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def scaled(self, c: Scalar) -> Signature:
        c = Cyc8.coerce(c)
        return Signature(self.arity, {x: v * c for x, v in self.entries.items()}, self.name)

    def permuted(self, perm: Sequence[int]) -> Signature:
        """New signature g with g's variable k being this signature's variable perm[k]."""
        if sorted(perm) != list(range(self.arity)):
            raise ValueError("not a permutation of the variables")
        out = {}
        for x, v in self.entries.items():
            y = 0
            for k, src in enumerate(perm):
                if (x >> src) & 1:
                    y |= 1 << k
            out[y] = v
        return Signature(self.arity, out, self.name)

    def renamed(self, name: str | None) -> Signature:
        s = Signature(self.arity, self.entries, name)
        s._cache = self._cache
        return s

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        return self.arity == other.arity and dict(self.entries) == dict(other.entries)

    def __hash__(self) -> int:
        return hash((self.arity, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        shown = ", ".join(
            f"{bits_to_str(x, self.arity)}: {v}"
            for x, v in sorted(self.entries.items(), key=lambda kv: lex_key(kv[0], self.arity))[:8]
        )
        more = ", ..." if len(self.entries) > 8 else ""
        label = f"{self.name} " if self.name else ""
        return f"<Signature {label}arity={self.arity} {{{shown}{more}}}>"


def support_of(f: Signature) -> frozenset[int]:
    return f.support


# -- affine support ----------------------------------------------------------

@dataclass(frozen=True)
class AffineSupport:
    """supp(f) = {x : x_i = <rows[i], t> + b_i, t in Z_2^r}, t read off the free variables.

    ``rows[i]`` is an r-bit mask (bit j = coefficient of the j-th free
    variable); ``b`` is the support point with every free variable 0.
    """

    n: int
    free: tuple[int, ...]
    rows: tuple[int, ...]
    b: int
    cols: tuple[int, ...] = field(repr=False, compare=False, default=())

    @property
    def r(self) -> int:
        return len(self.free)

    @property
    def perm(self) -> tuple[int, ...]:
        fs = set(self.free)
        return self.free + tuple(i for i in range(self.n) if i not in fs)

    def matrix(self) -> list[list[int]]:
        """The n x r matrix A in permuted order (identity block on top)."""
        return [[(self.rows[i] >> j) & 1 for j in range(self.r)] for i in self.perm]

    def offsets(self) -> list[int]:
        return [(self.b >> i) & 1 for i in self.perm]

    def point(self, t: int) -> int:
        x = self.b
        j = 0
        while t:
            if t & 1:
                x ^= self.cols[j]
            t >>= 1
            j += 1
        return x

    def free_coords(self, x: int) -> int:
        t = 0
        for j, v in enumerate(self.free):
            if (x >> v) & 1:
                t |= 1 << j
        return t

    def contains(self, x: int) -> bool:
        return self.point(self.free_coords(x)) == x


def _make_support(n: int, basis: dict[int, int], p0: int) -> AffineSupport:
    free = tuple(sorted(basis))
    cols = tuple(basis[p] for p in free)
    rows = []
    for i in range(n):
        m = 0
        for j, c in enumerate(cols):
            if (c >> i) & 1:
                m |= 1 << j
        rows.append(m)
    b = p0
    for p, c in zip(free, cols):
        if (p0 >> p) & 1:
            b ^= c
    return AffineSupport(n, free, tuple(rows), b, cols)


def affine_support_of(f: Signature) -> AffineSupport:
    """Affine structure of supp(f), free variables chosen as lowest-index pivots."""
    cached = f._cache.get("affine")
    if cached is not None:
        if isinstance(cached, Exception):
            raise cached
        return cached
    if not f.entries:
        raise EmptySupport("the zero signature has no support")
    pts = iter(f.entries)
    p0 = next(pts)
    basis: dict[int, int] = {}  # pivot bit -> reduced vector, pivot = lowest set bit
    for x in pts:
        v = x ^ p0
        for p, vec in basis.items():
            if (v >> p) & 1:
                v ^= vec
        if v:
            p = (v & -v).bit_length() - 1
            for q in list(basis):
                if (basis[q] >> p) & 1:
                    basis[q] ^= v
            basis[p] = v
    if len(f.entries) != 1 << len(basis):
        err = NotAffine(
            f"support of size {len(f.entries)} spans an affine space of size {1 << len(basis)}"
        )
        f._cache["affine"] = err
        raise err
    sup = _make_support(f.arity, basis, p0)
    f._cache["affine"] = sup
    return sup


def has_affine_support(f: Signature) -> bool:
    try:
        affine_support_of(f)
    except (NotAffine, EmptySupport):
        return False
    return True


# -- bundles -----------------------------------------------------------------

@dataclass(frozen=True)
class Bundle:
    name: int  # r-bit mask over the free variables
    members: tuple[tuple[int, str], ...]

    @property
    def type(self) -> str:
        return "".join(s for _, s in self.members)

    @property
    def odd(self) -> bool:
        return len(self.members) % 2 == 1

    @property
    def even(self) -> bool:
        return not self.odd

    @property
    def consistent(self) -> bool:
        return self.even and self.type.count("+") % 2 == 0

    @property
    def opposite(self) -> bool:
        return self.even and self.type.count("+") % 2 == 1

    def label(self) -> str:
        terms = [f"x{j + 1}" for j in range(self.name.bit_length()) if (self.name >> j) & 1]
        return "+".join(terms)


@dataclass(frozen=True)
class BundleTable:
    support: AffineSupport
    bundles: tuple[Bundle, ...]
    # variables constant on the support, as (variable, value); they belong to no bundle
    constants: tuple[tuple[int, int], ...] = ()

    @property
    def rank(self) -> int:
        return self.support.r

    @property
    def essential_arity(self) -> int:
        return len(self.bundles)

    def by_name(self, name: int) -> Bundle | None:
        for bd in self.bundles:
            if bd.name == name:
                return bd
        return None

    def bundle_of(self, var: int) -> Bundle | None:
        for bd in self.bundles:
            if any(v == var for v, _ in bd.members):
                return bd
        return None

    def types(self) -> list[str]:
        return [bd.type for bd in self.bundles]

    def describe(self) -> str:
        return " ".join(f"({bd.label()})({bd.type})" for bd in self.bundles)


def bundles_of(f: Signature) -> BundleTable:
    sup = affine_support_of(f)
    groups: dict[int, list[tuple[int, str]]] = {}
    consts = []
    for i in range(f.arity):
        bit = (sup.b >> i) & 1
        if sup.rows[i] == 0:
            consts.append((i, bit))
            continue
        groups.setdefault(sup.rows[i], []).append((i, "-" if bit else "+"))
    bundles = tuple(Bundle(name, tuple(ms)) for name, ms in groups.items())
    return BundleTable(sup, bundles, tuple(consts))


def compressed_of(f: Signature) -> list[Cyc8]:
    """Values of f indexed by the free-variable assignment t (bit j = j-th free variable)."""
    sup = affine_support_of(f)
    out: list[Cyc8] = [ONE] * (1 << sup.r)
    for x, v in f.entries.items():
        out[sup.free_coords(x)] = v
    return out


def essential_of(f: Signature) -> Signature:
    """One variable per non-empty bundle (in order of first member), same compressed values."""
    table = bundles_of(f)
    out = {}
    for x, v in f.entries.items():
        y = 0
        for k, bd in enumerate(table.bundles):
            var, sign = bd.members[0]
            bit = ((x >> var) & 1) ^ (sign == "-")
            y |= bit << k
        out[y] = v
    return Signature(len(table.bundles), out)


# -- alpha normal form ---------------------------------------------------------

@dataclass(frozen=True)
class AlphaForm:
    """f = lam * chi_supp * a^(sum_S c_S prod_{j in S} t_j), coefficients in Z_8."""

    lam: Cyc8
    support: AffineSupport
    coeffs: Mapping[int, int]  # nonempty subset of free-variable positions (mask) -> c_S

    def exponent(self, t: int) -> int:
        return sum(c for s, c in self.coeffs.items() if s & t == s) % 8

    def value(self, x: int) -> Cyc8:
        if not self.support.contains(x):
            return Cyc8.coerce(0)
        return self.lam * alpha_pow(self.exponent(self.support.free_coords(x)))

    def coeff(self, *free_positions: int) -> int:
        s = 0
        for j in free_positions:
            s |= 1 << j
        return self.coeffs.get(s, 0)

    def max_degree(self) -> int:
        return max((popcount(s) for s in self.coeffs), default=0)


def fit_alpha_form(f: Signature) -> AlphaForm:
    cached = f._cache.get("alpha")
    if cached is not None:
        if isinstance(cached, Exception):
            raise cached
        return cached
    sup = affine_support_of(f)
    lam = f.entries[sup.b]  # b is the lexicographically least support point
    inv = lam.inverse()
    r = sup.r
    e = [0] * (1 << r)
    for x, v in f.entries.items():
        k = (v * inv).alpha_exponent()
        if k is None:
            err = NotUnimodular(f"value {v} is not lambda times a power of alpha (lambda = {lam})")
            f._cache["alpha"] = err
            raise err
        e[sup.free_coords(x)] = k
    c = list(e)
    for j in range(r):
        bit = 1 << j
        for t in range(1 << r):
            if t & bit:
                c[t] -= c[t ^ bit]
    coeffs = {s: c[s] % 8 for s in range(1, 1 << r) if c[s] % 8}
    form = AlphaForm(lam, sup, MappingProxyType(coeffs))
    for x, v in f.entries.items():
        if form.value(x) != v:  # pragma: no cover - Moebius inversion is exact
            raise AssertionError("alpha form does not reproduce the signature")
    f._cache["alpha"] = form
    return form


def signature_from_affine(
    n: int,
    rows: Sequence[int],
    b: int,
    values: Callable[[int], Scalar] | Scalar = 1,
    name: str | None = None,
) -> Signature:
    """Build f with support {x(t) : x_i = <rows[i], t> + b_i} and f(x(t)) = values(t)."""
    r = max((m.bit_length() for m in rows), default=0)
    out: dict[int, Scalar] = {}
    for t in range(1 << r):
        x = b
        for i, m in enumerate(rows):
            if popcount(m & t) & 1:
                x ^= 1 << i
        if x in out:
            raise ValueError("rows do not have full column rank")
        out[x] = values(t) if callable(values) else values
    return Signature(n, out, name)


def signature_from_alpha_coeffs(
    n: int, rows: Sequence[int], b: int, coeffs: Mapping[int, int], lam: Scalar = 1,
    name: str | None = None,
) -> Signature:
    """Signature in normal form: value lam * a^(sum_S c_S prod t_j) at the point indexed by t."""
    lam = Cyc8.coerce(lam)

    def value(t: int) -> Cyc8:
        return lam * alpha_pow(sum(c for s, c in coeffs.items() if s & t == s))

    return signature_from_affine(n, rows, b, value, name)


# -- pinning and transforms ------------------------------------------------------

def pin(f: Signature, var: int, bit: int) -> Signature:
    if not 0 <= var < f.arity:
        raise IndexError(f"variable {var} out of range for arity {f.arity}")
    low = (1 << var) - 1
    out = {}
    for x, v in f.entries.items():
        if (x >> var) & 1 == bit:
            out[(x & low) | ((x >> (var + 1)) << var)] = v
    return Signature(f.arity - 1, out)


Matrix2 = Sequence[Sequence[Scalar]]


def apply_transform(f: Signature, mats: Sequence[Matrix2]) -> Signature:
    """(M_0 (x) M_1 (x) ... ) f, with f viewed as a column vector; M_i acts on variable i."""
    if len(mats) != f.arity:
        raise ValueError("need one 2x2 matrix per variable")
    cur: dict[int, Cyc8] = dict(f.entries)
    for i, m in enumerate(mats):
        m = [[Cyc8.coerce(m[0][0]), Cyc8.coerce(m[0][1])],
             [Cyc8.coerce(m[1][0]), Cyc8.coerce(m[1][1])]]
        bit = 1 << i
        if not m[0][1] and not m[1][0]:
            d0, d1 = m[0][0], m[1][1]
            if d0 == 1 and d1 == 1:
                continue
            cur = {x: v * (d1 if x & bit else d0) for x, v in cur.items()}
            continue
        nxt: dict[int, Cyc8] = {}
        for x, v in cur.items():
            src = 1 if x & bit else 0
            base = x & ~bit
            for out in (0, 1):
                coef = m[out][src]
                if coef:
                    y = base | (bit if out else 0)
                    nxt[y] = nxt[y] + coef * v if y in nxt else coef * v
        cur = nxt
    return Signature(f.arity, cur)


def local_alpha_transform(f: Signature, sigma: int) -> Signature:
    """M_sigma f: multiply f(x) by a^(number of positions where sigma and x are both 1)."""
    return Signature(f.arity, {x: v * alpha_pow(popcount(x & sigma)) for x, v in f.entries.items()})


def inverse2(m: Matrix2) -> list[list[Cyc8]]:
    a, b = Cyc8.coerce(m[0][0]), Cyc8.coerce(m[0][1])
    c, d = Cyc8.coerce(m[1][0]), Cyc8.coerce(m[1][1])
    det = a * d - b * c
    if not det:
        raise ZeroDivisionError("singular 2x2 matrix")
    inv = det.inverse()
    return [[d * inv, -b * inv], [-c * inv, a * inv]]


def proportional_to(f: Signature, g: Signature) -> Cyc8 | None:
    """c with f = c*g, or None."""
    if f.arity != g.arity or f.entries.keys() != g.entries.keys():
        return None
    if not f.entries:
        return Cyc8.coerce(1)
    x0 = next(iter(g.entries))
    c = f.entries[x0] / g.entries[x0]
    for x, v in g.entries.items():
        if f.entries[x] != c * v:
            return None
    return c


# -- tensor factorization ----------------------------------------------------------

class Factor(NamedTuple):
    vars: tuple[int, ...]  # variables of the parent signature, increasing
    sig: Signature


def _project(x: int, block: Sequence[int]) -> int:
    y = 0
    for k, v in enumerate(block):
        if (x >> v) & 1:
            y |= 1 << k
    return y


def _mask(vars_: Iterable[int]) -> int:
    m = 0
    for v in vars_:
        m |= 1 << v
    return m


def _is_rank_one(entries: Mapping[int, Cyc8], smask: int, rmask: int) -> bool:
    rows: dict[int, dict[int, Cyc8]] = {}
    for x, v in entries.items():
        rows.setdefault(x & smask, {})[x & rmask] = v
    it = iter(rows.values())
    first = next(it)
    keys = first.keys()
    k0 = next(iter(keys))
    inv0 = first[k0].inverse()
    for row in it:
        if row.keys() != keys:
            return False
        ratio = row[k0] * inv0
        for k, v in row.items():
            if v != ratio * first[k]:
                return False
    return True


def _general_blocks(entries: Mapping[int, Cyc8], vars_: list[int]) -> list[list[int]]:
    if len(vars_) <= 1:
        return [vars_]
    v0, others = vars_[0], vars_[1:]
    full = _mask(vars_)
    for size in range(len(others)):
        for comb in combinations(others, size):
            block = [v0, *comb]
            smask = _mask(block)
            if _is_rank_one(entries, smask, full & ~smask):
                rest = [v for v in others if v not in comb]
                # slice through one support point to get the rest factor up to scale
                x0 = next(iter(entries))
                sliced = {x: v for x, v in entries.items() if (x ^ x0) & smask == 0}
                return [sorted(block)] + _general_blocks(sliced, rest)
    return [vars_]


def _affine_blocks(f: Signature, sup: AffineSupport) -> list[list[int]]:
    n, r = f.arity, sup.r
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    # components of the column matroid: fundamental circuits w.r.t. the free variables
    for i in range(n):
        m = sup.rows[i]
        j = 0
        while m:
            if m & 1:
                union(i, sup.free[j])
            m >>= 1
            j += 1
    # value level: merge blocks joined by a nontrivial multiplicative Moebius term
    psi = compressed_of(f)
    for j in range(r):
        bit = 1 << j
        for t in range(1 << r):
            if t & bit:
                psi[t] = psi[t] / psi[t ^ bit]
    for s in range(1, 1 << r):
        if s & (s - 1) and psi[s] != 1:
            js = [j for j in range(r) if (s >> j) & 1]
            for j in js[1:]:
                union(sup.free[js[0]], sup.free[j])
    blocks: dict[int, list[int]] = {}
    for i in range(n):
        blocks.setdefault(find(i), []).append(i)
    return sorted(blocks.values())


def tensor_factorize(f: Signature) -> list[Factor]:
    """Finest factorization into non-decomposable factors on disjoint variable blocks.

    The product of the factors equals f exactly; the overall scalar sits in the
    first factor.  A zero-arity signature returns a single zero-arity factor.
    """
    if not f.entries:
        raise EmptySupport("cannot factorize the zero signature")
    cached = f._cache.get("factors")
    if cached is not None:
        return cached
    if f.arity <= 1:
        out = [Factor(tuple(range(f.arity)), f)]
        f._cache["factors"] = out
        return out
    try:
        sup = affine_support_of(f)
        blocks = _affine_blocks(f, sup)
        x_ref = sup.b
    except NotAffine:
        blocks = _general_blocks(f.entries, list(range(f.arity)))
        x_ref = next(iter(f.entries))
    if len(blocks) == 1:
        out = [Factor(tuple(range(f.arity)), f)]
        f._cache["factors"] = out
        return out
    ref_val = f.entries[x_ref]
    factors = []
    for block in blocks:
        bmask = _mask(block)
        vals = {}
        for x, v in f.entries.items():
            if (x ^ x_ref) & ~bmask == 0:
                vals[_project(x, block)] = v
        factors.append([tuple(block), vals])
    scale = ref_val.inverse() ** (len(blocks) - 1)
    factors[0][1] = {y: v * scale for y, v in factors[0][1].items()}
    out = [Factor(vs, Signature(len(vs), vals)) for vs, vals in factors]
    f._cache["factors"] = out
    return out


def tensor_product(factors: Sequence[Factor], arity: int) -> Signature:
    """Reassemble a signature from factors on disjoint variable blocks."""
    cur: dict[int, Cyc8] = {0: ONE}
    for fac in factors:
        nxt = {}
        for x, v in cur.items():
            for y, w in fac.sig.entries.items():
                z = x
                for k, var in enumerate(fac.vars):
                    if (y >> k) & 1:
                        z |= 1 << var
                nxt[z] = v * w
        cur = nxt
    return Signature(arity, cur)


def check_bundle_precondition(cond: bool, message: str) -> None:
    if not cond:
        raise BundleViolation(message)
