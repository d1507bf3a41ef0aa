"""Linear systems over GF(2) with rows packed into Python ints."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class GF2System:
    """Equations <row, x> = rhs over k variables; bit j of a row is variable j."""

    k: int
    rows: list[tuple[int, int]] = field(default_factory=list)

    def add(self, mask: int, rhs: int) -> None:
        self.rows.append((mask, rhs & 1))

    def satisfied_by(self, x: int) -> bool:
        return all(bin(m & x).count("1") % 2 == d for m, d in self.rows)


@dataclass(frozen=True)
class GF2Solution:
    x0: int
    basis: tuple[int, ...]
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def point(self, t: int) -> int:
        x = self.x0
        for j, n in enumerate(self.basis):
            if (t >> j) & 1:
                x ^= n
        return x


def gf2_solve(sys: GF2System) -> GF2Solution | None:
    """Reduced row echelon form; pivot of a row is its lowest set bit.

    Returns the particular solution with every free variable 0 and one
    null-space vector per free variable, or None when inconsistent.
    """
    piv: dict[int, tuple[int, int]] = {}
    for mask, rhs in sys.rows:
        for p, (m, d) in piv.items():
            if (mask >> p) & 1:
                mask ^= m
                rhs ^= d
        if not mask:
            if rhs:
                return None
            continue
        p = (mask & -mask).bit_length() - 1
        for q, (m, d) in piv.items():
            if (m >> p) & 1:
                piv[q] = (m ^ mask, d ^ rhs)
        piv[p] = (mask, rhs)
    x0 = 0
    for p, (_, d) in piv.items():
        if d:
            x0 |= 1 << p
    basis = []
    for j in range(sys.k):
        if j in piv:
            continue
        n = 1 << j
        for p, (m, _) in piv.items():
            if (m >> j) & 1:
                n |= 1 << p
        basis.append(n)
    return GF2Solution(x0, tuple(basis), tuple(sorted(piv)))
