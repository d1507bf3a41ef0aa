"""Membership tests for the tractable signature families and the set classifiers."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .cyclo import ALPHA, I, ONE, Cyc8, alpha_pow, is_real, sqrt
from .errors import NotAffine, NotRealValued, NotUnimodular
from .signatures import (
    Signature,
    apply_transform,
    fit_alpha_form,
    inverse2,
    local_alpha_transform,
    popcount,
    tensor_factorize,
)

Z_PLUS = ((ONE, ONE), (I, -I))
Z_MINUS = ((ONE, ONE), (-I, I))


# -- single-signature membership --------------------------------------------------

def in_P(f: Signature) -> bool:
    """Product type: every non-decomposable factor is unary or a generalized equality."""
    if f.is_zero():
        return True
    full_masks = {}
    for fac in tensor_factorize(f):
        n = fac.sig.arity
        if n <= 1:
            continue
        pts = list(fac.sig.entries)
        if len(pts) > 2:
            return False
        if len(pts) == 2:
            full = full_masks.setdefault(n, (1 << n) - 1)
            if pts[0] ^ pts[1] != full:
                return False
    return True


def in_A(f: Signature) -> bool:
    if f.is_zero():
        return True
    try:
        form = fit_alpha_form(f)
    except (NotAffine, NotUnimodular):
        return False
    for s, c in form.coeffs.items():
        deg = popcount(s)
        if deg == 1 and c % 2:
            return False
        if deg == 2 and c % 4:
            return False
        if deg >= 3:
            return False
    return True


def in_A_alpha(f: Signature) -> bool:
    """f = M_a^(x)n g with g affine, tested by undoing M_a on every variable."""
    if f.is_zero():
        return True
    g = Signature(f.arity, {x: v * alpha_pow(-popcount(x)) for x, v in f.entries.items()})
    return in_A(g)


def in_L_definition(f: Signature) -> bool:
    """Local affine by definition: M_sigma f is affine for every support point sigma."""
    if f.is_zero():
        return True
    try:
        fit_alpha_form(f)
    except (NotAffine, NotUnimodular):
        return False
    return all(in_A(local_alpha_transform(f, sigma)) for sigma in f.entries)


@dataclass(frozen=True)
class LCertificate:
    ok: bool
    reason: str
    # "zero", "support", "square", "degree", "homogeneous" or "inhomogeneous"
    kind: str
    degree: int | None = None
    subset: tuple[int, ...] | None = None  # 1-based free-variable positions
    value: int | None = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return self.reason


def in_L_characterization(f: Signature) -> LCertificate:
    """Local affine via the parity equations on (A, b) and the Z_8 coefficients."""
    if f.is_zero():
        return LCertificate(True, "identically zero", "zero")
    try:
        form = fit_alpha_form(f)
    except NotAffine:
        return LCertificate(False, "support is not affine", "support")
    except NotUnimodular:
        return LCertificate(False, "f^2 is not affine: a value ratio is not a power of alpha", "square")
    for s in sorted(form.coeffs, key=lambda s: (popcount(s), s)):
        c = form.coeffs[s]
        deg = popcount(s)
        subset = tuple(j + 1 for j in range(s.bit_length()) if (s >> j) & 1)
        if (deg == 2 and c % 2) or (deg >= 3 and c % 4):
            return LCertificate(
                False, f"f^2 is not affine: coefficient of {subset} is {c} mod 8", "square",
                deg, subset, c,
            )
        if deg >= 4:
            return LCertificate(
                False, f"cubic part not homogeneous: degree-{deg} term {subset}", "degree",
                deg, subset, c,
            )
    sup = form.support
    r = sup.r
    rows = sup.rows
    bvec = [(sup.b >> i) & 1 for i in range(sup.n)]
    for deg in range(1, 5):
        for combo in combinations(range(r), deg):
            s = sum(1 << j for j in combo)
            total = sum(1 for m in rows if m & s == s)
            if total % 2:
                subset = tuple(j + 1 for j in combo)
                return LCertificate(
                    False,
                    f"homogeneous degree-{deg} parity fails for {subset}: {total} rows",
                    "homogeneous", deg, subset, total,
                )
    for deg in range(1, 4):
        for combo in combinations(range(r), deg):
            s = sum(1 << j for j in combo)
            total = sum(1 for i, m in enumerate(rows) if m & s == s and bvec[i])
            c = form.coeffs.get(s, 0)
            chat = (c >> (deg - 1)) & 1  # c_S / 2^(|S|-1) mod 2
            if total % 2 != chat:
                subset = tuple(j + 1 for j in combo)
                return LCertificate(
                    False,
                    f"inhomogeneous degree-{deg} parity fails for {subset}: "
                    f"{total} offset rows vs coefficient bit {chat}",
                    "inhomogeneous", deg, subset, total,
                )
    return LCertificate(True, f"local affine (rank {r})", "ok")


def in_L(f: Signature) -> bool:
    return in_L_characterization(f).ok


def in_M(f: Signature) -> bool:
    """Matching type: zero outside inputs of Hamming weight at most 1."""
    return all(popcount(x) <= 1 for x in f.entries)


# -- two-term decomposition ----------------------------------------------------------

Vec2 = tuple[Cyc8, Cyc8]


@dataclass(frozen=True)
class TwoTerm:
    """f = w1 * u[0] (x) ... (x) u[n-1]  +  w2 * v[0] (x) ... (x) v[n-1]."""

    u: tuple[Vec2, ...]
    v: tuple[Vec2, ...]
    w1: Cyc8
    w2: Cyc8

    def value(self, x: int) -> Cyc8:
        a, b = self.w1, self.w2
        for i, (ui, vi) in enumerate(zip(self.u, self.v)):
            bit = (x >> i) & 1
            a = a * ui[bit]
            b = b * vi[bit]
        return a + b


def _parallel(p: Vec2, q: Vec2) -> bool:
    return p[0] * q[1] == p[1] * q[0]


def _matmul(a, b):
    return [[a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]]]


def _nonzero_column(m) -> Vec2 | None:
    for k in (0, 1):
        if m[0][k] or m[1][k]:
            return (m[0][k], m[1][k])
    return None


def _first_variable_pair(f: Signature) -> tuple[Vec2, Vec2] | None:
    """The directions u_0, v_0 from simultaneous diagonalization of 2x2 slices."""
    slices: dict[int, list[list[Cyc8]]] = {}
    zero = Cyc8.coerce(0)
    for x, val in f.entries.items():
        m = slices.setdefault(x >> 2, [[zero, zero], [zero, zero]])
        m[x & 1][(x >> 1) & 1] = val
    keys = sorted(slices)
    for seed in range(6):
        rng = random.Random(seed)
        phi = [[zero, zero], [zero, zero]]
        psi = [[zero, zero], [zero, zero]]
        for c in keys:
            a, b = rng.randint(-4, 4), rng.randint(-4, 4)
            m = slices[c]
            for i in (0, 1):
                for j in (0, 1):
                    phi[i][j] = phi[i][j] + m[i][j] * a
                    psi[i][j] = psi[i][j] + m[i][j] * b
        try:
            g = _matmul(phi, inverse2(psi))
        except ZeroDivisionError:
            continue
        tr = g[0][0] + g[1][1]
        det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
        disc = tr * tr - det * 4
        if not disc:
            continue
        sd = sqrt(disc)
        if sd is None:
            return None
        l1, l2 = (tr + sd) / 2, (tr - sd) / 2
        u = _nonzero_column([[g[0][0] - l2, g[0][1]], [g[1][0], g[1][1] - l2]])
        v = _nonzero_column([[g[0][0] - l1, g[0][1]], [g[1][0], g[1][1] - l1]])
        if u is None or v is None:
            continue
        return u, v
    return None


def _product_tensor(entries: dict[int, Cyc8], n: int) -> tuple[Cyc8, list[Vec2]] | None:
    """Split a rank-one tensor into (scale, per-variable vectors) normalized at a support point."""
    entries = {y: v for y, v in entries.items() if v}
    if not entries:
        return None
    y0 = next(iter(entries))
    w = entries[y0]
    inv = w.inverse()
    vecs = []
    zero = Cyc8.coerce(0)
    for i in range(n):
        other = entries.get(y0 ^ (1 << i), zero) * inv
        vecs.append((ONE, other) if not (y0 >> i) & 1 else (other, ONE))
    return w, vecs


def two_term_decompose(f: Signature) -> TwoTerm | None:
    if f.arity < 3 or f.is_zero():
        return None
    pair = _first_variable_pair(f)
    if pair is None:
        return None
    u0, v0 = pair
    if _parallel(u0, v0):
        return None
    try:
        dual = inverse2([[u0[0], v0[0]], [u0[1], v0[1]]])
    except ZeroDivisionError:
        return None
    # dual[0] . u0 = 1, dual[0] . v0 = 0 and vice versa
    rest_u: dict[int, Cyc8] = {}
    rest_v: dict[int, Cyc8] = {}
    for x, val in f.entries.items():
        b, y = x & 1, x >> 1
        pu, pv = dual[0][b] * val, dual[1][b] * val
        if pu:
            rest_u[y] = rest_u[y] + pu if y in rest_u else pu
        if pv:
            rest_v[y] = rest_v[y] + pv if y in rest_v else pv
    tu = _product_tensor(rest_u, f.arity - 1)
    tv = _product_tensor(rest_v, f.arity - 1)
    if tu is None or tv is None:
        return None
    cand = TwoTerm((u0, *tu[1]), (v0, *tv[1]), tu[0], tv[0])
    if any(_parallel(p, q) for p, q in zip(cand.u, cand.v)):
        return None
    if not _matches(f, cand):
        return None
    return cand


def _matches(f: Signature, dec: TwoTerm) -> bool:
    """Exact comparison of f with the decomposition, enumerating only where it can be nonzero."""
    def supp_sizes(vecs):
        return [[b for b in (0, 1) if vec[b]] for vec in vecs]

    su, sv = supp_sizes(dec.u), supp_sizes(dec.v)
    size_u = size_v = 1
    for a, b in zip(su, sv):
        size_u *= len(a)
        size_v *= len(b)
    # a two-term sum cancels on at most half of the common support
    if size_u + size_v > 4 * len(f.entries) + 4:
        return False
    seen = set()
    for choices in (su, sv):
        stack = [(0, 0)]
        while stack:
            i, x = stack.pop()
            if i == f.arity:
                if x in seen:
                    continue
                seen.add(x)
                if dec.value(x) != f.value(x):
                    return False
                continue
            for b in choices[i]:
                stack.append((i + 1, x | (b << i)))
    return all(x in seen for x in f.entries)


# -- Holant* families -------------------------------------------------------------------

@dataclass(frozen=True)
class HolantStarWitness:
    family: str  # "T", "HP", "ZP" or "ZM"
    matrix: tuple[tuple[Cyc8, Cyc8], tuple[Cyc8, Cyc8]] | None = None

    def __str__(self) -> str:
        if self.matrix is None:
            return self.family
        rows = "; ".join(", ".join(str(v) for v in row) for row in self.matrix)
        return f"{self.family} [{rows}]"


def _normalize(vec: Vec2) -> Vec2:
    lead = vec[0] if vec[0] else vec[1]
    inv = lead.inverse()
    return (vec[0] * inv, vec[1] * inv)


def _dot(p: Vec2, q: Vec2) -> Cyc8:
    return p[0] * q[0] + p[1] * q[1]


def _factors(F: Iterable[Signature]) -> list[Signature]:
    return [fac.sig for f in F if not f.is_zero() for fac in tensor_factorize(f)]


def _in_KP(s: Signature, k_cols: tuple[Vec2, Vec2], k_inv) -> bool:
    if s.arity <= 2:
        return in_P(apply_transform(s, [k_inv] * s.arity))
    dec = two_term_decompose(s)
    if dec is None:
        return False
    c0, c1 = k_cols
    for ui, vi in zip(dec.u, dec.v):
        if not ((_parallel(ui, c0) and _parallel(vi, c1)) or (_parallel(ui, c1) and _parallel(vi, c0))):
            return False
    return True


def _in_transformed(s: Signature, m_inv, test) -> bool:
    n = s.arity
    # Z^(x)n of a product-type or matching-type function is nonzero on at least half the cube
    if n >= 3 and len(s.entries) < 1 << (n - 1):
        return False
    return test(apply_transform(s, [m_inv] * n))


def holant_star_tractable(F: Sequence[Signature]) -> HolantStarWitness | None:
    factors = _factors(F)
    if all(s.arity <= 2 for s in factors):
        return HolantStarWitness("T")
    big = next(s for s in factors if s.arity >= 3)
    dec = two_term_decompose(big)
    if dec is not None:
        c0, c1 = _normalize(dec.u[0]), _normalize(dec.v[0])
        if not _dot(c0, c1) and _dot(c0, c0) and _dot(c1, c1):
            k = ((c0[0], c1[0]), (c0[1], c1[1]))
            k_inv = inverse2(k)
            if all(_in_KP(s, (c0, c1), k_inv) for s in factors):
                return HolantStarWitness("HP", k)
    for z in (Z_PLUS, Z_MINUS):
        z_inv = inverse2(z)
        if all(_in_transformed(s, z_inv, in_P) for s in factors):
            return HolantStarWitness("ZP", z)
    for z in (Z_PLUS, Z_MINUS):
        z_inv = inverse2(z)
        if all(_in_transformed(s, z_inv, in_M) for s in factors):
            return HolantStarWitness("ZM", z)
    return None


# -- set classifiers ----------------------------------------------------------------

TRACTABLE_CSP = (
    ("TractableP", in_P),
    ("TractableA", in_A),
    ("TractableAalpha", in_A_alpha),
    ("TractableL", in_L),
)
SHARP_P_HARD = "SharpPHard"
HOLANT_STAR = "TractableHolantStar"


@dataclass
class ClassVerdict:
    label: str
    certificates: list[tuple[str, str]] = field(default_factory=list)
    witness: HolantStarWitness | None = None

    @property
    def tractable(self) -> bool:
        return self.label != SHARP_P_HARD

    def serialize(self) -> str:
        head = self.label if self.witness is None else f"{self.label}({self.witness})"
        lines = [f"VERDICT {head}"]
        lines += [f"CERT {name}: {text}" for name, text in self.certificates]
        return "\n".join(lines) + "\n"


def _sig_name(f: Signature, k: int) -> str:
    return f.name or f"f{k}"


def _membership_line(f: Signature) -> str:
    marks = []
    for label, test in TRACTABLE_CSP:
        short = label.removeprefix("Tractable")
        marks.append(f"{short}{'+' if test(f) else '-'}")
    lcert = in_L_characterization(f)
    return " ".join(marks) + ("" if lcert.ok else f"; L fails: {lcert}")


def classify_csp2c(F: Sequence[Signature]) -> ClassVerdict:
    for label, test in TRACTABLE_CSP:
        if all(test(f) for f in F):
            certs = []
            for k, f in enumerate(F):
                text = str(in_L_characterization(f)) if label == "TractableL" else f"member of {label.removeprefix('Tractable')}"
                certs.append((_sig_name(f, k), text))
            return ClassVerdict(label, certs)
    return ClassVerdict(SHARP_P_HARD, [(_sig_name(f, k), _membership_line(f)) for k, f in enumerate(F)])


def classify_holant_c(F: Sequence[Signature]) -> ClassVerdict:
    for k, f in enumerate(F):
        for x, v in f.entries.items():
            if not is_real(v):
                raise NotRealValued(f"{_sig_name(f, k)} takes the non-real value {v}")
    w = holant_star_tractable(F)
    if w is not None:
        certs = [(_sig_name(f, k), f"factors inside the {w.family} family") for k, f in enumerate(F)]
        return ClassVerdict(HOLANT_STAR, certs, w)
    return classify_csp2c(F)


def verify_verdict(verdict: ClassVerdict, F: Sequence[Signature]) -> bool:
    """Re-check a tractable verdict against every signature of F."""
    if verdict.label == HOLANT_STAR:
        w = holant_star_tractable(F)
        return w is not None and w.family == verdict.witness.family
    tests = dict(TRACTABLE_CSP)
    if verdict.label in tests:
        return all(tests[verdict.label](f) for f in F)
    return not any(all(t(f) for f in F) for _, t in TRACTABLE_CSP)
