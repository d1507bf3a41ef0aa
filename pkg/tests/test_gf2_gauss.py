from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from holantc.cyclo import I, Cyc8
from holantc.gauss import QuadraticExponent, brute_gauss_sum, gauss_sum_eval
from holantc.gf2 import GF2System, gf2_solve

seeds = st.integers(0, 10**6)


def enumerate_solutions(sys: GF2System) -> set[int]:
    return {x for x in range(1 << sys.k) if sys.satisfied_by(x)}


class TestGF2:
    def test_unique_solution(self):
        # x1 + x2 = 0, x2 = 1
        sol = gf2_solve(GF2System(2, [(0b11, 0), (0b10, 1)]))
        assert sol.x0 == 0b11 and sol.basis == ()

    def test_inconsistent(self):
        assert gf2_solve(GF2System(2, [(0b11, 1), (0b11, 0)])) is None

    def test_empty_system(self):
        sol = gf2_solve(GF2System(3))
        assert sol.x0 == 0 and sol.dim == 3

    def test_zero_row_with_rhs(self):
        assert gf2_solve(GF2System(2, [(0, 1)])) is None

    @settings(max_examples=200)
    @given(seeds)
    def test_solution_set(self, seed):
        rng = random.Random(seed)
        k = rng.randint(0, 10)
        sys = GF2System(k)
        for _ in range(rng.randint(0, 12)):
            sys.add(rng.getrandbits(k) if k else 0, rng.randint(0, 1))
        sol = gf2_solve(sys)
        expected = enumerate_solutions(sys)
        if sol is None:
            assert not expected
            return
        assert sys.satisfied_by(sol.x0)
        for n in sol.basis:
            assert GF2System(k, [(m, 0) for m, _ in sys.rows]).satisfied_by(n)
        assert {sol.point(t) for t in range(1 << sol.dim)} == expected
        # free parameters all zero: no free variable is set in x0
        free = [j for j in range(k) if j not in sol.pivots]
        assert all(not (sol.x0 >> j) & 1 for j in free)


class TestGaussSum:
    def test_single_linear(self):
        e = QuadraticExponent(1)
        e.add_lin(0, 1)
        assert gauss_sum_eval(e) == 1 + I

    def test_quadratic_only(self):
        e = QuadraticExponent(2)
        e.add_quad(0, 1)
        assert gauss_sum_eval(e) == 2

    def test_mixed(self):
        # exponents at 00, 01, 10, 11: 0, 1, 1, 4
        e = QuadraticExponent(2)
        e.add_lin(0, 1)
        e.add_lin(1, 1)
        e.add_quad(0, 1)
        assert gauss_sum_eval(e) == 2 + 2 * I

    def test_inconsistent_constraints_give_zero(self):
        e = QuadraticExponent(2)
        assert gauss_sum_eval(e, GF2System(2, [(0b11, 1), (0b11, 0)])) == 0

    def test_prefactor_and_constant(self):
        e = QuadraticExponent(0, prefactor=Cyc8(3))
        e.add_const(2)
        assert gauss_sum_eval(e) == -3

    def test_parity_lift(self):
        e = QuadraticExponent(3)
        e.add_parity(0b111, 1, 1)
        for x in range(8):
            assert e.exponent(x) == (bin(x).count("1") + 1) % 2

    @settings(max_examples=300, deadline=None)
    @given(seeds)
    def test_matches_enumeration(self, seed):
        rng = random.Random(seed)
        k = rng.randint(0, 12)
        e = QuadraticExponent(k, rng.choice([1, 2, I, Cyc8(1, 1)]))
        e.add_const(rng.randrange(4))
        for j in range(k):
            e.add_lin(j, rng.randrange(4))
            for m in range(j, k):
                if rng.random() < 0.3:
                    e.add_quad(j, m)
        sys = GF2System(k)
        for _ in range(rng.randint(0, 5)):
            sys.add(rng.getrandbits(k) if k else 0, rng.randint(0, 1))
        assert gauss_sum_eval(e, sys) == brute_gauss_sum(e, sys)
