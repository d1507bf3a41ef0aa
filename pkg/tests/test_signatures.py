from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holantc.corpus import gen_delta, gen_equality, gen_f7_alpha_pm, gen_f_chain
from holantc.cyclo import ALPHA, I, ONE, Cyc8, alpha_pow
from holantc.errors import EmptySupport, NotAffine, NotUnimodular
from holantc.signatures import (
    Signature,
    affine_support_of,
    apply_transform,
    bits_to_str,
    bundles_of,
    compressed_of,
    essential_of,
    fit_alpha_form,
    inverse2,
    pin,
    popcount,
    proportional_to,
    signature_from_affine,
    str_to_bits,
    support_of,
    tensor_factorize,
    tensor_product,
)

from helpers import random_alpha_signature, random_cyc8, random_product

seeds = st.integers(0, 10**6)


class TestSignature:
    def test_zero_entries_dropped(self):
        f = Signature(2, {0: 1, 3: 0})
        assert dict(f.entries) == {0: ONE}

    def test_bad_assignment(self):
        with pytest.raises(ValueError):
            Signature(2, {4: 1})

    def test_dense_order(self):
        # [f(00), f(01), f(10), f(11)], the first listed bit being variable 0
        f = Signature.from_values([1, 2, 3, 4])
        assert f(0, 1) == 2 and f(1, 0) == 3

    def test_symmetric(self):
        f = Signature.from_symmetric([1, 0, 0, 1])
        assert f == gen_equality(3)

    def test_bitstrings(self):
        assert bits_to_str(0b001, 3) == "100"
        assert str_to_bits("100") == 1

    def test_permuted(self):
        f = Signature.from_values([0, 1, 0, 0])  # support {01}
        assert f.permuted([1, 0]).support == {0b01}


class TestSupport:
    def test_examples(self):
        assert support_of(gen_delta(0)) == {0}
        assert support_of(gen_equality(4)) == {0, 0b1111}
        f7 = gen_f7_alpha_pm()
        assert len(support_of(f7)) == 8 and f7.arity == 14

    def test_affine_support_eq2(self):
        sup = affine_support_of(gen_equality(2))
        assert sup.r == 1 and sup.free == (0,)
        assert sup.matrix() == [[1], [1]] and sup.offsets() == [0, 0]

    def test_f7_support(self):
        sup = affine_support_of(gen_f7_alpha_pm())
        assert (sup.r, sup.n) == (3, 14)
        assert all(popcount(x) == 7 for x in gen_f7_alpha_pm().entries)

    def test_not_affine(self):
        with pytest.raises(NotAffine):
            affine_support_of(Signature.from_values([0, 1, 1, 1]))

    def test_empty(self):
        with pytest.raises(EmptySupport):
            affine_support_of(Signature(2, {}))

    @settings(max_examples=100)
    @given(seeds)
    def test_affine_invariants(self, seed):
        f = random_alpha_signature(random.Random(seed))
        sup = affine_support_of(f)
        assert len(f.entries) == 1 << sup.r
        a, off = sup.matrix(), sup.offsets()
        assert [row for row in a[: sup.r]] == [[int(i == j) for j in range(sup.r)] for i in range(sup.r)]
        assert off[: sup.r] == [0] * sup.r
        for x in f.entries:
            bits = [(x >> v) & 1 for v in sup.perm]
            for i in range(f.arity):
                assert bits[i] == (sum(a[i][j] * bits[j] for j in range(sup.r)) + off[i]) % 2


class TestBundles:
    def test_definition_example(self):
        # x1(++), x2(+), (x1+x2)(--) over variables (x1, x1, x2, x1+x2+1, x1+x2+1)
        f = signature_from_affine(5, [1, 1, 2, 3, 3], 0b11000)
        table = bundles_of(f)
        assert (table.rank, table.essential_arity, f.arity) == (2, 3, 5)
        assert sorted(bd.type for bd in table.bundles) == ["+", "++", "--"]
        assert r <= table.essential_arity <= (1 << r) - 1 if (r := table.rank) else True

    def test_eq4(self):
        (bd,) = bundles_of(gen_equality(4)).bundles
        assert bd.type == "++++" and bd.even and bd.consistent and not bd.opposite

    def test_f7(self):
        table = bundles_of(gen_f7_alpha_pm())
        assert len(table.bundles) == 7
        assert all(bd.type == "+-" and bd.even and bd.opposite for bd in table.bundles)

    def test_constants_kept_apart(self):
        f = Signature(3, {0b010: 1, 0b111: 1})  # variable 1 always 1
        table = bundles_of(f)
        assert table.constants == ((1, 1),)
        assert sum(len(bd.members) for bd in table.bundles) == 2

    @settings(max_examples=60)
    @given(seeds)
    def test_members_partition(self, seed):
        f = random_alpha_signature(random.Random(seed))
        table = bundles_of(f)
        seen = [v for bd in table.bundles for v, _ in bd.members] + [v for v, _ in table.constants]
        assert sorted(seen) == list(range(f.arity))
        r = table.rank
        assert r <= table.essential_arity <= max((1 << r) - 1, 0)


class TestCompressedAndForm:
    def test_compressed_examples(self):
        assert compressed_of(gen_equality(4)) == [1, 1]
        assert compressed_of(gen_delta(1)) == [1]
        vals = compressed_of(gen_f7_alpha_pm())
        assert vals == [1] * 7 + [-1]

    def test_alpha_form_examples(self):
        form = fit_alpha_form(Signature.from_values([1, ALPHA]))
        assert form.lam == 1 and dict(form.coeffs) == {1: 1}
        form = fit_alpha_form(gen_f7_alpha_pm())
        assert dict(form.coeffs) == {0b111: 4}

    def test_not_unimodular(self):
        with pytest.raises(NotUnimodular):
            fit_alpha_form(Signature.from_values([1, 1 + I]))

    @settings(max_examples=100)
    @given(seeds)
    def test_form_reproduces_entries(self, seed):
        f = random_alpha_signature(random.Random(seed))
        form = fit_alpha_form(f)
        assert all(form.value(x) == v for x, v in f.entries.items())
        assert all(0 < c < 8 for c in form.coeffs.values())


class TestPin:
    def test_examples(self):
        assert pin(gen_equality(2), 0, 1) == gen_delta(1)
        z = pin(gen_delta(0), 0, 1)
        assert z.arity == 0 and z.is_zero()

    def test_pin_f15(self):
        for var in range(15):
            table = bundles_of(pin(gen_f_chain(4), var, 1))
            assert table.rank == 3 and len(table.bundles) == 7
            assert all(sorted(bd.type) == ["+", "-"] for bd in table.bundles)

    @settings(max_examples=80)
    @given(seeds)
    def test_pin_drops_rank(self, seed):
        rng = random.Random(seed)
        f = random_alpha_signature(rng)
        var, bit = rng.randrange(f.arity), rng.randrange(2)
        g = pin(f, var, bit)
        if g.is_zero():
            return
        r = affine_support_of(f).r
        fixed = all((x >> var) & 1 == bit for x in f.entries)
        assert affine_support_of(g).r == (r if fixed else r - 1)


class TestTransform:
    def test_identity(self):
        f = gen_f7_alpha_pm()
        assert apply_transform(f, [[[1, 0], [0, 1]]] * 14) == f

    def test_diagonal(self):
        assert apply_transform(Signature.from_values([1, 1]), [[[1, 0], [0, ALPHA]]]) == Signature.from_values([1, ALPHA])

    def test_dense_matches_hand_computation(self):
        h = [[1, 1], [1, -1]]
        f = apply_transform(gen_equality(2), [h, h])
        assert f == Signature.from_values([2, 0, 0, 2])

    @settings(max_examples=40)
    @given(seeds)
    def test_inverse_round_trip(self, seed):
        rng = random.Random(seed)
        f = random_alpha_signature(rng, n=rng.randint(1, 5))
        mats = []
        for _ in range(f.arity):
            while True:
                m = [[random_cyc8(rng, False, 2) for _ in range(2)] for _ in range(2)]
                if m[0][0] * m[1][1] - m[0][1] * m[1][0]:
                    break
            mats.append(m)
        g = apply_transform(f, mats)
        assert apply_transform(g, [inverse2(m) for m in mats]) == f


class TestFactorize:
    def test_single_point(self):
        f = Signature(2, {0: 1})
        facs = tensor_factorize(f)
        assert [fac.sig for fac in facs] == [Signature(1, {0: 1}), Signature(1, {0: 1})]

    def test_equality_is_prime(self):
        (fac,) = tensor_factorize(gen_equality(2))
        assert fac.sig == gen_equality(2)

    def test_zero_rejected(self):
        with pytest.raises(EmptySupport):
            tensor_factorize(Signature(3, {}))

    @settings(max_examples=60)
    @given(seeds)
    def test_product_of_random_pieces(self, seed):
        rng = random.Random(seed)
        g = Signature(2, {x: random_cyc8(rng) for x in rng.sample(range(4), 3)})
        h = Signature(3, {x: random_cyc8(rng) for x in rng.sample(range(8), 5)})
        f = Signature(5, {x | (y << 2): a * b for x, a in g.entries.items() for y, b in h.entries.items()})
        facs = tensor_factorize(f)
        assert tensor_product(facs, 5) == f
        blocks = [fac.vars for fac in facs]
        assert (0, 1) in blocks or all(len(b) == 1 for b in blocks if set(b) <= {0, 1})
        for fac in facs:
            if fac.vars == (0, 1):
                assert proportional_to(fac.sig, g) is not None
            if fac.vars == (2, 3, 4):
                assert proportional_to(fac.sig, h) is not None

    @settings(max_examples=80)
    @given(seeds)
    def test_round_trip(self, seed):
        rng = random.Random(seed)
        f = random_product(rng) if seed % 2 else random_alpha_signature(rng)
        assert tensor_product(tensor_factorize(f), f.arity) == f

    def test_large_arity_is_sparse(self):
        f = gen_f_chain(6)
        assert len(tensor_factorize(f)) == 1


class TestProportional:
    def test_examples(self):
        g = gen_f7_alpha_pm()
        assert proportional_to(g, g) == 1
        assert proportional_to(g.scaled(2 * I), g) == 2 * I
        assert proportional_to(gen_equality(2), Signature(2, {0: 1})) is None

    def test_essential_of_f7(self):
        e = essential_of(gen_f7_alpha_pm())
        assert e.arity == 7 and len(e.entries) == 8
        assert sorted(str(v) for v in e.entries.values()) == ["-1"] + ["1"] * 7

    def test_alpha_pow_values(self):
        f = Signature(1, {0: 1, 1: alpha_pow(3)})
        assert dict(fit_alpha_form(f).coeffs) == {1: 3}
        assert Cyc8.coerce(1) == ONE
