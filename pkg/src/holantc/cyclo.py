"""Exact arithmetic in the cyclotomic field Q(alpha), alpha = exp(i*pi/4).

An element is stored as ``(c0 + c1*a + c2*a^2 + c3*a^3) / den`` with integer
coordinates, ``den > 0`` and the five integers coprime, so equal field
elements have equal representations.  Reduction uses ``a^4 = -1``.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import reduce
from typing import Union

from .errors import ParseError, ValueOutsideRing

Scalar = Union["Cyc8", int, Fraction]


class Cyc8:
    __slots__ = ("_n", "_d", "_hash")

    def __init__(self, c0: int | Fraction = 0, c1: int | Fraction = 0,
                 c2: int | Fraction = 0, c3: int | Fraction = 0) -> None:
        coords = [Fraction(c) for c in (c0, c1, c2, c3)]
        den = reduce(math.lcm, (c.denominator for c in coords), 1)
        self._set(tuple(int(c * den) for c in coords), den)

    @classmethod
    def _raw(cls, nums: tuple[int, int, int, int], den: int = 1) -> Cyc8:
        obj = object.__new__(cls)
        obj._set(nums, den)
        return obj

    def _set(self, nums: tuple[int, ...], den: int) -> None:
        if den != 1:
            g = math.gcd(*nums, den)
            if den < 0:
                g = -g
            if g != 1:
                nums = tuple(x // g for x in nums)
                den //= g
        self._n = nums
        self._d = den
        self._hash = None

    # -- coordinates -----------------------------------------------------

    @property
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        d = self._d
        return tuple(Fraction(x, d) for x in self._n)  # type: ignore[return-value]

    c0 = property(lambda self: Fraction(self._n[0], self._d))
    c1 = property(lambda self: Fraction(self._n[1], self._d))
    c2 = property(lambda self: Fraction(self._n[2], self._d))
    c3 = property(lambda self: Fraction(self._n[3], self._d))

    def is_rational(self) -> bool:
        return not (self._n[1] or self._n[2] or self._n[3])

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def coerce(x: Scalar) -> Cyc8:
        if isinstance(x, Cyc8):
            return x
        if isinstance(x, int):
            return Cyc8._raw((x, 0, 0, 0))
        if isinstance(x, Fraction):
            return Cyc8._raw((x.numerator, 0, 0, 0), x.denominator)
        raise TypeError(f"cannot convert {type(x).__name__} to Cyc8")

    def __add__(self, other: Scalar) -> Cyc8:
        if not isinstance(other, (Cyc8, int, Fraction)):
            return NotImplemented
        o = Cyc8.coerce(other)
        if self._d == o._d:
            a, b = self._n, o._n
            return Cyc8._raw((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]), self._d)
        d1, d2 = self._d, o._d
        return Cyc8._raw(tuple(x * d2 + y * d1 for x, y in zip(self._n, o._n)), d1 * d2)

    __radd__ = __add__

    def __neg__(self) -> Cyc8:
        a = self._n
        return Cyc8._raw((-a[0], -a[1], -a[2], -a[3]), self._d)

    def __pos__(self) -> Cyc8:
        return self

    def __sub__(self, other: Scalar) -> Cyc8:
        if not isinstance(other, (Cyc8, int, Fraction)):
            return NotImplemented
        return self + (-Cyc8.coerce(other))

    def __rsub__(self, other: Scalar) -> Cyc8:
        return Cyc8.coerce(other) - self

    def __mul__(self, other: Scalar) -> Cyc8:
        if isinstance(other, int):
            a = self._n
            return Cyc8._raw((a[0] * other, a[1] * other, a[2] * other, a[3] * other), self._d)
        if not isinstance(other, (Cyc8, Fraction)):
            return NotImplemented
        o = Cyc8.coerce(other)
        a0, a1, a2, a3 = self._n
        b0, b1, b2, b3 = o._n
        # a^4 = -1 folds the degree 4..6 products back with a sign flip
        r0 = a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1
        r1 = a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2
        r2 = a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3
        r3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
        return Cyc8._raw((r0, r1, r2, r3), self._d * o._d)

    __rmul__ = __mul__

    def galois(self, k: int) -> Cyc8:
        """Image under the automorphism a -> a^k (k odd)."""
        if k % 2 == 0:
            raise ValueError("Galois automorphisms of Q(zeta_8) need odd k")
        out = [0, 0, 0, 0]
        for j, x in enumerate(self._n):
            m = (j * k) % 8
            if m >= 4:
                out[m - 4] -= x
            else:
                out[m] += x
        return Cyc8._raw(tuple(out), self._d)

    def norm(self) -> Fraction:
        """Field norm down to Q: the product of the four Galois conjugates."""
        p = self * self.galois(3) * self.galois(5) * self.galois(7)
        return p.c0

    def inverse(self) -> Cyc8:
        if not self:
            raise ZeroDivisionError("division by zero in Q(zeta_8)")
        others = self.galois(3) * self.galois(5) * self.galois(7)
        n = (self * others).c0
        return others * (1 / n)

    def __truediv__(self, other: Scalar) -> Cyc8:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta_8)")
            return self * (1 / Fraction(other))
        if not isinstance(other, Cyc8):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> Cyc8:
        return Cyc8.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> Cyc8:
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = ONE
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> Cyc8:
        return self.galois(7)

    # -- comparisons / hashing -------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyc8.coerce(other)
        if not isinstance(other, Cyc8):
            return NotImplemented
        return self._d == other._d and self._n == other._n

    def __hash__(self) -> int:
        if self._hash is None:
            # agree with int and Fraction hashes for rational values
            rational = not any(self._n[1:])
            self._hash = hash(Fraction(self._n[0], self._d)) if rational else hash((self._n, self._d))
        return self._hash

    def __bool__(self) -> bool:
        return any(self._n)

    # -- conversions -----------------------------------------------------

    def __complex__(self) -> complex:
        z = 0j
        for j, x in enumerate(self._n):
            if x:
                z += x * cmath.exp(1j * math.pi * j / 4)
        return z / self._d

    def alpha_exponent(self) -> int | None:
        """Return k in 0..7 with self == a^k, or None."""
        if self._d != 1:
            return None
        nz = [j for j, x in enumerate(self._n) if x]
        if len(nz) != 1 or abs(self._n[nz[0]]) != 1:
            return None
        j = nz[0]
        return j if self._n[j] == 1 else j + 4

    def __repr__(self) -> str:
        return f"Cyc8({format_cyc8(self)!r})"

    def __str__(self) -> str:
        return format_cyc8(self)


ZERO = Cyc8._raw((0, 0, 0, 0))
ONE = Cyc8._raw((1, 0, 0, 0))
ALPHA = Cyc8._raw((0, 1, 0, 0))
I = Cyc8._raw((0, 0, 1, 0))
SQRT2 = Cyc8._raw((0, 1, 0, -1))

_ALPHA_POWERS = tuple(
    Cyc8._raw(tuple((1 if j == k % 4 else 0) * (1 if k < 4 else -1) for j in range(4)))
    for k in range(8)
)


def alpha_pow(k: int) -> Cyc8:
    """a^k for any integer k; powers reduce mod 8."""
    return _ALPHA_POWERS[k % 8]


def conjugate_is_real(a: Cyc8) -> tuple[Cyc8, bool]:
    c = a.conjugate()
    return c, c == a


def is_real(a: Cyc8) -> bool:
    return a.conjugate() == a


# -- square roots ------------------------------------------------------------
#
# Q(zeta_8) = Q(i)(sqrt2).  Elements of Q(i) are handled as pairs of
# Fractions (re, im); the tower is descended one quadratic step at a time.

def _sqrt_q(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def _qi_mul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _sqrt_qi(z: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction] | None:
    a, b = z
    if b == 0:
        r = _sqrt_q(a)
        if r is not None:
            return (r, Fraction(0))
        r = _sqrt_q(-a)
        return None if r is None else (Fraction(0), r)
    m = _sqrt_q(a * a + b * b)
    if m is None:
        return None
    x = _sqrt_q((a + m) / 2)
    if x is None or x == 0:
        return None
    return (x, b / (2 * x))


def _to_tower(z: Cyc8):
    c0, c1, c2, c3 = z.coords
    # c1*a + c3*a^3 = sqrt2/2 * ((c1 - c3) + (c1 + c3) i)
    return (c0, c2), ((c1 - c3) / 2, (c1 + c3) / 2)


def _from_tower(p, q) -> Cyc8:
    # p + q*sqrt2 with sqrt2 = a - a^3 and i = a^2
    return Cyc8(p[0], 0, p[1], 0) + Cyc8(q[0], 0, q[1], 0) * SQRT2


def sqrt(z: Cyc8) -> Cyc8 | None:
    """An exact square root inside Q(zeta_8), or None if z is not a square there."""
    if not z:
        return ZERO
    z0, z1 = _to_tower(z)
    # (p + q*sqrt2)^2 = z0 + z1*sqrt2  <=>  p^2 + 2q^2 = z0, 2pq = z1
    disc = _sqrt_qi((lambda s, t: (s[0] - 2 * t[0], s[1] - 2 * t[1]))(_qi_mul(z0, z0), _qi_mul(z1, z1)))
    candidates = []
    if disc is not None:
        for sign in (1, -1):
            p2 = ((z0[0] + sign * disc[0]) / 2, (z0[1] + sign * disc[1]) / 2)
            p = _sqrt_qi(p2)
            if p is None:
                continue
            if p != (0, 0):
                den = 2 * (p[0] * p[0] + p[1] * p[1])
                # q = z1 / (2p)
                q = _qi_mul(z1, (p[0] / den, -p[1] / den))
                candidates.append(_from_tower(p, q))
            else:
                q = _sqrt_qi((z0[0] / 2, z0[1] / 2))
                if q is not None:
                    candidates.append(_from_tower((Fraction(0), Fraction(0)), q))
    for y in candidates:
        if y * y == z:
            return y
    return None


# -- text form ---------------------------------------------------------------

def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_cyc8(z: Cyc8) -> str:
    """Canonical rendering, e.g. ``1/2 - a^3``; zero coordinates are omitted."""
    parts: list[str] = []
    for j, c in enumerate(z.coords):
        if c == 0:
            continue
        mono = ("", "a", "a^2", "a^3")[j]
        mag = abs(c)
        if not mono:
            body = _frac_str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_frac_str(mag)}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        num, ident, sym = m.groups()
        if num is not None:
            out.append(("num", num))
        elif ident is not None:
            out.append(("id", ident))
        elif sym is not None and not sym.isspace():
            if sym not in "+-*/^()":
                raise ParseError(f"unexpected character {sym!r} in value {text!r}")
            out.append(("sym", sym))
    return out


class _ValueParser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str] | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of value {self.text!r}")
        self.i += 1
        return tok

    def expect(self, sym: str) -> None:
        tok = self.take()
        if tok != ("sym", sym):
            raise ParseError(f"expected {sym!r} in value {self.text!r}")

    def parse(self) -> Cyc8:
        if not self.toks:
            raise ParseError("empty value")
        v = self.expr()
        if self.peek() is not None:
            raise ParseError(f"trailing input in value {self.text!r}")
        return v

    def expr(self) -> Cyc8:
        v = self.term()
        while (tok := self.peek()) in (("sym", "+"), ("sym", "-")):
            self.take()
            rhs = self.term()
            v = v + rhs if tok[1] == "+" else v - rhs
        return v

    def term(self) -> Cyc8:
        v = self.unary()
        while True:
            tok = self.peek()
            if tok in (("sym", "*"), ("sym", "/")):
                self.take()
                rhs = self.unary()
                if tok[1] == "*":
                    v = v * rhs
                else:
                    if not rhs:
                        raise ParseError(f"division by zero in value {self.text!r}")
                    v = v / rhs
            elif tok is not None and (tok[0] in ("num", "id") or tok == ("sym", "(")):
                v = v * self.power()  # juxtaposition, e.g. "2i"
            else:
                return v

    def unary(self) -> Cyc8:
        tok = self.peek()
        if tok == ("sym", "-"):
            self.take()
            return -self.unary()
        if tok == ("sym", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Cyc8:
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            k = self.int_exponent()
            if k < 0 and not base:
                raise ParseError(f"division by zero in value {self.text!r}")
            base = base ** k
        return base

    def int_exponent(self) -> int:
        tok = self.take()
        if tok == ("sym", "("):
            k = self.int_exponent()
            self.expect(")")
            return k
        if tok == ("sym", "-"):
            return -self.int_exponent()
        if tok[0] == "num" and "." not in tok[1]:
            return int(tok[1])
        raise ParseError(f"exponent must be an integer in value {self.text!r}")

    def atom(self) -> Cyc8:
        tok = self.take()
        kind, s = tok
        if kind == "num":
            return Cyc8.coerce(Fraction(s))
        if kind == "id":
            if s == "i":
                return I
            if s == "a":
                return ALPHA
            if s == "sqrt" and self.peek() == ("sym", "("):
                self.take()
                arg = self.expr()
                self.expect(")")
                root = sqrt(arg)
                if root is None:
                    raise ValueOutsideRing(f"sqrt({arg}) is not in Q(zeta_8)")
                return root
            raise ValueOutsideRing(f"unknown constant {s!r}; values must lie in Q(zeta_8)")
        if tok == ("sym", "("):
            v = self.expr()
            self.expect(")")
            return v
        raise ParseError(f"unexpected {s!r} in value {self.text!r}")


def parse_cyc8(text: str) -> Cyc8:
    """Parse an expression over rationals, ``i``, ``a``, ``+ - * / ^`` and ``sqrt``."""
    return _ValueParser(text).parse()
