"""Two-site exchange and twist operators on the spin chain."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinsym.exact import RationalFunction
from spinsym.lie import AlgebraSpec, generator_op
from spinsym.operators import Operator, OpSpace, apply_operator, operator_sum
from spinsym.spin_ops import (pair_contraction, permutation_op, twist_op,
                              unit_pair_contraction)

F = Fraction

SP2 = AlgebraSpec(2, -1)
SO3 = AlgebraSpec(3, 1)
LEGAL = [AlgebraSpec(2, 1), SP2, SO3, AlgebraSpec(4, 1), AlgebraSpec(4, -1)]


def one(npos=2):
    return RationalFunction.const(npos, 1)


def ket(*indices):
    return {tuple(indices): one(2)}


class TestPermutationAction:
    def test_swaps_product_kets(self):
        space = OpSpace(2, 2)
        p = permutation_op(SP2, space, 1, 2)
        assert apply_operator(p, ket(1, 2)) == ket(2, 1)
        assert apply_operator(p, ket(2, 1)) == ket(1, 2)
        assert apply_operator(p, ket(1, 1)) == ket(1, 1)

    @settings(max_examples=30, deadline=None)
    @given(c=st.integers(1, 3), d=st.integers(1, 3))
    def test_swap_property(self, c, d):
        space = OpSpace(3, 2)
        p = permutation_op(SO3, space, 1, 2)
        vec = {(c, d): RationalFunction.const(2, 1)}
        assert apply_operator(p, vec) == {(d, c): RationalFunction.const(2, 1)}

    def test_square_is_identity(self):
        for spec in (SP2, SO3):
            space = OpSpace(spec.N, 2)
            p = permutation_op(spec, space, 1, 2)
            assert p * p == Operator.identity(space)


class TestTwistAction:
    def test_sp2_frozen_action(self):
        # Q|c,d> = [d == bar c] * sum_a th_a th_c |a, bar a>
        # with theta = (+1, -1): Q|1,2> = |1,2> - |2,1>, Q|1,1> = 0
        space = OpSpace(2, 2)
        q = twist_op(SP2, space, 1, 2)
        got = apply_operator(q, ket(1, 2))
        assert got == {(1, 2): one(), (2, 1): -one()}
        assert apply_operator(q, ket(1, 1)) == {}
        assert apply_operator(q, ket(2, 1)) == {(1, 2): -one(), (2, 1): one()}

    def test_so3_frozen_action(self):
        # all theta = +1, bar a = 4 - a
        space = OpSpace(3, 2)
        q = twist_op(SO3, space, 1, 2)
        v = {(2, 2): RationalFunction.const(2, 1)}
        got = apply_operator(q, v)
        c = RationalFunction.const(2, 1)
        assert got == {(1, 3): c, (2, 2): c, (3, 1): c}

    def test_square_absorbs_dimension(self):
        for spec in (SP2, SO3):
            space = OpSpace(spec.N, 2)
            q = twist_op(spec, space, 1, 2)
            assert q * q == q.scaled(spec.N)

    def test_exchange_twist_products(self):
        for spec in LEGAL:
            space = OpSpace(spec.N, 2)
            p = permutation_op(spec, space, 1, 2)
            q = twist_op(spec, space, 1, 2)
            assert p * q == q.scaled(spec.theta0)
            assert q * p == q.scaled(spec.theta0)


class TestPairDifference:
    @pytest.mark.parametrize("spec", LEGAL, ids=lambda s: s.describe())
    def test_exchange_minus_twist_is_half_contraction(self, spec):
        space = OpSpace(spec.N, 2)
        p = permutation_op(spec, space, 1, 2)
        q = twist_op(spec, space, 1, 2)
        total = operator_sum(space, [
            generator_op(spec, space, 1, a, b) * generator_op(spec, space, 2, b, a)
            for a in range(1, spec.N + 1) for b in range(1, spec.N + 1)])
        assert p - q == total.scaled(F(1, 2))

    def test_generators_swap_through_exchange(self):
        for spec in (SP2, SO3):
            space = OpSpace(spec.N, 2)
            p = permutation_op(spec, space, 1, 2)
            for a in range(1, spec.N + 1):
                for b in range(1, spec.N + 1):
                    f1 = generator_op(spec, space, 1, a, b)
                    f2 = generator_op(spec, space, 2, a, b)
                    assert p * f1 == f2 * p
                    assert q_annihilates_difference(spec, space, a, b)


def q_annihilates_difference(spec, space, a, b):
    q = twist_op(spec, space, 1, 2)
    f1 = generator_op(spec, space, 1, a, b)
    f2 = generator_op(spec, space, 2, a, b)
    return q * f1 == (q * f2).scaled(-1)


class TestContractions:
    def test_pair_contraction_is_product_sum(self):
        for spec in (SP2, SO3):
            space = OpSpace(spec.N, 2)
            for (a, b) in ((1, 1), (1, 2), (2, 1)):
                direct = operator_sum(space, [
                    generator_op(spec, space, 1, a, c)
                    * generator_op(spec, space, 2, c, b)
                    for c in range(1, spec.N + 1)])
                assert pair_contraction(spec, space, 1, 2, a, b) == direct

    def test_unit_contraction_on_distinct_sites(self):
        space = OpSpace(2, 2)
        got = unit_pair_contraction(SP2, space, 1, 2, 1, 1)
        direct = operator_sum(space, [
            Operator.spin_unit(space, 1, 1, c) * Operator.spin_unit(space, 2, c, 1)
            for c in (1, 2)])
        assert got == direct

    def test_sites_must_be_present(self):
        space = OpSpace(2, 2)
        with pytest.raises(ValueError):
            permutation_op(SP2, space, 1, 3)
