"""Exact sums of i^(L + 2Q) over affine subspaces of Z_2^k."""

from __future__ import annotations

from typing import Iterable

from .cyclo import I, ONE, Cyc8
from .gf2 import GF2System, gf2_solve

ONE_PLUS_I = ONE + I
ONE_MINUS_I = ONE - I


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class QuadraticExponent:
    """prefactor * i^(const + sum_j lin[j] x_j + 2 * sum_{j<k, k in quad[j]} x_j x_k).

    ``quad[j]`` is a symmetric adjacency bitmask (the 2*x_j*x_k terms only
    matter mod 2); linear coefficients and the constant live in Z_4.
    """

    def __init__(self, k: int, prefactor: Cyc8 | int = 1) -> None:
        self.k = k
        self.const = 0
        self.lin = [0] * k
        self.quad = [0] * k
        self.prefactor = Cyc8.coerce(prefactor)

    def copy(self) -> QuadraticExponent:
        e = QuadraticExponent(self.k, self.prefactor)
        e.const, e.lin, e.quad = self.const, list(self.lin), list(self.quad)
        return e

    def add_const(self, c: int) -> None:
        self.const = (self.const + c) % 4

    def add_lin(self, j: int, c: int) -> None:
        self.lin[j] = (self.lin[j] + c) % 4

    def add_quad(self, j: int, k: int) -> None:
        """Add the monomial 2*x_j*x_k (2*x_j when j == k)."""
        if j == k:
            self.add_lin(j, 2)
        else:
            self.quad[j] ^= 1 << k
            self.quad[k] ^= 1 << j

    def add_parity(self, mask: int, bit: int, c: int) -> None:
        """Add c * ((sum_{a in mask} x_a + bit) mod 2), kept quadratic mod 4.

        Uses parity(s) = sum x_a + 2 sum_{a<b} x_a x_b (mod 4) and
        parity(s + 1) = 1 + 3 parity(s) (mod 4).
        """
        c %= 4
        if not c:
            return
        if bit:
            self.add_const(c)
            c = (3 * c) % 4
        vs = list(_bits(mask))
        for a in vs:
            self.add_lin(a, c)
        if c % 2:
            for i, a in enumerate(vs):
                for b in vs[i + 1:]:
                    self.add_quad(a, b)

    def exponent(self, x: int) -> int:
        e = self.const
        for j in range(self.k):
            if (x >> j) & 1:
                e += self.lin[j]
                e += 2 * bin(self.quad[j] & x & ~((2 << j) - 1)).count("1")
        return e % 4

    def value(self, x: int) -> Cyc8:
        return self.prefactor * I ** self.exponent(x)


def _substitute_affine(e: QuadraticExponent, forms: list[tuple[int, int]], k_new: int) -> QuadraticExponent:
    """Rewrite e under x_j = parity(forms[j].mask . t) + forms[j].bit."""
    out = QuadraticExponent(k_new, e.prefactor)
    out.const = e.const
    for j, (m, b) in enumerate(forms):
        out.add_parity(m, b, e.lin[j])
    for j in range(e.k):
        mj, bj = forms[j]
        for k in _bits(e.quad[j] & ~((2 << j) - 1)):
            mk, bk = forms[k]
            # 2 x_j x_k depends only on x_j x_k mod 2
            for a in _bits(mj):
                for c in _bits(mk):
                    out.add_quad(a, c)
            if bk:
                for a in _bits(mj):
                    out.add_lin(a, 2)
            if bj:
                for c in _bits(mk):
                    out.add_lin(c, 2)
            if bj and bk:
                out.add_const(2)
    return out


def _eliminate_var(e: QuadraticExponent, q: int, alive: int) -> None:
    """Remove every term of the exponent that mentions x_q."""
    for r in _bits(e.quad[q] & alive):
        e.quad[r] &= ~(1 << q)
    e.quad[q] = 0
    e.lin[q] = 0


def _substitute_one(e: QuadraticExponent, q: int, mask: int, bit: int, alive: int) -> None:
    """Replace x_q by parity(mask . x) + bit, mask not containing q."""
    c = e.lin[q]
    neigh = e.quad[q] & alive & ~(1 << q)
    _eliminate_var(e, q, alive)
    e.add_parity(mask, bit, c)
    for r in _bits(neigh):
        if bit:
            e.add_lin(r, 2)
        for a in _bits(mask):
            e.add_quad(r, a)


def _sum_all(e: QuadraticExponent) -> Cyc8:
    """Sum of e over all of Z_2^k, eliminating the lowest live variable first."""
    e = e.copy()
    alive = (1 << e.k) - 1
    factor = e.prefactor
    while alive:
        p = (alive & -alive).bit_length() - 1
        alive &= ~(1 << p)
        l = e.lin[p] % 4
        nb = e.quad[p] & alive
        _eliminate_var(e, p, alive)
        if l % 2 == 0:
            factor = factor * 2
            need = l // 2  # the t_p sum forces parity(nb . t) = need
            if not nb:
                if need:
                    return Cyc8.coerce(0)
                continue
            q = (nb & -nb).bit_length() - 1
            alive &= ~(1 << q)
            _substitute_one(e, q, nb & ~(1 << q), need, alive)
        elif l == 1:
            # 1 + i^(1 + 2s) = (1 + i) * i^(3s)
            factor = factor * ONE_PLUS_I
            e.add_parity(nb, 0, 3)
        else:
            # 1 + i^(3 + 2s) = (1 - i) * i^s
            factor = factor * ONE_MINUS_I
            e.add_parity(nb, 0, 1)
    return factor * I ** e.const


def gauss_sum_eval(e: QuadraticExponent, constraints: GF2System | None = None) -> Cyc8:
    """Sum of e(x) over the solutions x of the constraint system."""
    if constraints is None or not constraints.rows:
        return _sum_all(e)
    sol = gf2_solve(constraints)
    if sol is None:
        return Cyc8.coerce(0)
    forms = []
    for j in range(e.k):
        m = 0
        for t, n in enumerate(sol.basis):
            if (n >> j) & 1:
                m |= 1 << t
        forms.append((m, (sol.x0 >> j) & 1))
    return _sum_all(_substitute_affine(e, forms, sol.dim))


def brute_gauss_sum(e: QuadraticExponent, constraints: GF2System | None = None) -> Cyc8:
    """Direct enumeration, for cross-checking small instances."""
    total = Cyc8.coerce(0)
    for x in range(1 << e.k):
        if constraints is None or constraints.satisfied_by(x):
            total = total + e.value(x)
    return total
