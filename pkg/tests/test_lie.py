"""Lie structure layer: bases, structure constants, metric, raising maps.

Frozen values for sp(2) are hand-derived from 2x2 matrix products:
F^{11} = E11 - E22, F^{12} = 2 E12, F^{21} = 2 E21.
"""

from fractions import Fraction

import pytest

from spinsym.errors import DegenerateCouplingError
from spinsym.lie import (AlgebraSpec, basis, conjugate_index,
                         generator_matrix, generator_op, lowered_adjoint_constants,
                         metric, raised_constants, restore_second_pair,
                         structure_row, structure_table, theta)
from spinsym.operators import OpSpace, commutator, operator_sum, Operator

F = Fraction

ALL_SPECS = [AlgebraSpec(2, -1), AlgebraSpec(3, 1), AlgebraSpec(4, 1),
             AlgebraSpec(4, -1), AlgebraSpec(5, 1), AlgebraSpec(6, 1),
             AlgebraSpec(6, -1)]

SP2 = AlgebraSpec(2, -1)
SO3 = AlgebraSpec(3, 1)


class TestSpecAndBasis:
    def test_family_names(self):
        assert SP2.describe() == "sp(2)"
        assert SO3.describe() == "so(3)"

    def test_odd_symplectic_rejected(self):
        with pytest.raises(ValueError):
            AlgebraSpec(3, -1)

    def test_dimensions(self):
        # so(N): N(N-1)/2, sp(N): N(N+1)/2
        expected = {("so", 3): 3, ("so", 4): 6, ("so", 5): 10, ("so", 6): 15,
                    ("sp", 2): 3, ("sp", 4): 10, ("sp", 6): 21}
        for spec in ALL_SPECS:
            assert len(basis(spec)) == expected[(spec.family, spec.N)]

    def test_sp2_basis_frozen(self):
        assert basis(SP2) == ((1, 1), (1, 2), (2, 1))

    def test_conjugation_involution(self):
        for spec in ALL_SPECS:
            for a in range(1, spec.N + 1):
                assert conjugate_index(spec, conjugate_index(spec, a)) == a

    def test_theta_signs(self):
        # odd N: all +1.  even N: +1 on the first half, theta0 on the second.
        assert [theta(SO3, a) for a in (1, 2, 3)] == [1, 1, 1]
        assert [theta(SP2, a) for a in (1, 2)] == [1, -1]
        sp4 = AlgebraSpec(4, -1)
        assert [theta(sp4, a) for a in (1, 2, 3, 4)] == [1, 1, -1, -1]


class TestGeneratorMatrices:
    def test_sp2_matrices_frozen(self):
        assert generator_matrix(SP2, 1, 1) == ((F(1), F(0)), (F(0), F(-1)))
        assert generator_matrix(SP2, 1, 2) == ((F(0), F(2)), (F(0), F(0)))
        assert generator_matrix(SP2, 2, 1) == ((F(0), F(0)), (F(2), F(0)))

    def test_defining_symmetry(self):
        # F^{ab} = -theta_a theta_b F^{bar b bar a} on the full index square
        for spec in ALL_SPECS:
            n = spec.N
            for a in range(1, n + 1):
                for b in range(1, n + 1):
                    lhs = generator_matrix(spec, a, b)
                    mirror = generator_matrix(spec, conjugate_index(spec, b),
                                              conjugate_index(spec, a))
                    sign = -theta(spec, a) * theta(spec, b)
                    assert lhs == tuple(tuple(sign * x for x in row)
                                        for row in mirror)

    def test_operator_matches_matrix(self):
        for spec in (SP2, SO3):
            space = OpSpace(spec.N, 1)
            for (a, b) in basis(spec):
                op = generator_op(spec, space, 1, a, b)
                m = generator_matrix(spec, a, b)
                direct = operator_sum(space, [
                    Operator.spin_unit(space, 1, i + 1, j + 1).scaled(m[i][j])
                    for i in range(spec.N) for j in range(spec.N)
                    if m[i][j]])
                assert op == direct


def _dense_bracket(spec, ab, cd):
    x, y = generator_matrix(spec, *ab), generator_matrix(spec, *cd)
    n = spec.N
    out = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[i][j] = sum((x[i][k] * y[k][j] - y[i][k] * x[k][j]
                             for k in range(n)), F(0))
    return out


class TestStructureConstants:
    def test_sp2_table_frozen(self):
        # hand: [F11,F12]=2F12, [F11,F21]=-2F21, [F12,F21]=4F11
        assert structure_row(SP2, (1, 1), (1, 2)) == {(1, 2): F(2)}
        assert structure_row(SP2, (1, 1), (2, 1)) == {(2, 1): F(-2)}
        assert structure_row(SP2, (1, 2), (2, 1)) == {(1, 1): F(4)}
        assert structure_row(SP2, (1, 2), (1, 2)) == {}

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=lambda s: s.describe())
    def test_rows_reproduce_dense_brackets(self, spec):
        # dual route: expand the defining-representation commutator densely
        labels = basis(spec)
        for ab in labels:
            for cd in labels:
                dense = _dense_bracket(spec, ab, cd)
                recon = [[F(0)] * spec.N for _ in range(spec.N)]
                for ef, c in structure_row(spec, ab, cd).items():
                    m = generator_matrix(spec, *ef)
                    for i in range(spec.N):
                        for j in range(spec.N):
                            recon[i][j] += c * m[i][j]
                assert recon == dense, (ab, cd)

    def test_antisymmetry(self):
        table = structure_table(SO3)
        for (ab, cd), row in table.items():
            flipped = table[(cd, ab)]
            assert flipped == {k: -v for k, v in row.items()}


class TestMetric:
    def test_sp2_metric_frozen(self):
        # g = (1/2) tr(F F): g(11,11)=1, g(12,21)=g(21,12)=2, rest 0
        g = metric(SP2)
        expect = {((1, 1), (1, 1)): F(1),
                  ((1, 2), (2, 1)): F(2),
                  ((2, 1), (1, 2)): F(2)}
        for ab in basis(SP2):
            for cd in basis(SP2):
                assert g.entry(ab, cd) == expect.get((ab, cd), F(0))

    def test_metric_is_half_trace(self):
        for spec in ALL_SPECS:
            g = metric(spec)
            for ab in basis(spec):
                for cd in basis(spec):
                    x, y = generator_matrix(spec, *ab), generator_matrix(spec, *cd)
                    tr = sum((x[i][k] * y[k][i]
                              for i in range(spec.N) for k in range(spec.N)),
                             F(0))
                    assert g.entry(ab, cd) == tr / 2

    def test_inverse_is_exact(self):
        for spec in ALL_SPECS:
            g = metric(spec)
            dim = len(g.labels)
            for i in range(dim):
                for j in range(dim):
                    s = sum((g.matrix[i][k] * g.inverse[k][j]
                             for k in range(dim)), F(0))
                    assert s == (F(1) if i == j else F(0))


class TestRaisingMaps:
    def test_round_trip(self):
        for spec in (SP2, SO3, AlgebraSpec(4, 1)):
            table = structure_table(spec)
            for ab in basis(spec):
                restored = restore_second_pair(spec, ab)
                direct = {(cd, ij): v
                          for cd in basis(spec)
                          for ij, v in table[(ab, cd)].items()}
                assert restored == direct

    def test_raised_agrees_with_metric_contraction(self):
        for spec in (SP2, SO3):
            g = metric(spec)
            table = structure_table(spec)
            raised = raised_constants(spec)
            for ij in basis(spec):
                for kl in basis(spec):
                    for m, mn in enumerate(g.labels):
                        total = sum(
                            (v * g.matrix[g.index(pq)][m]
                             for pq, v in table[(ij, kl)].items()), F(0))
                        assert raised.get((ij, kl, mn), F(0)) == total

    def test_lowered_matches_inverse_contraction(self):
        spec = SP2
        g = metric(spec)
        table = structure_table(spec)
        lowered = lowered_adjoint_constants(spec)
        for ab in basis(spec):
            direct = {}
            for p, pq in enumerate(g.labels):
                for c, cd in enumerate(g.labels):
                    w = g.inverse[p][c]
                    if not w:
                        continue
                    for ij, v in table[(ab, cd)].items():
                        key = (pq, ij)
                        total = direct.get(key, F(0)) + w * v
                        if total:
                            direct[key] = total
                        elif key in direct:
                            del direct[key]
            assert lowered[ab] == direct


class TestDegeneracyGuard:
    def test_so4_star_is_rejected(self):
        from spinsym.models import star_coupling
        with pytest.raises(DegenerateCouplingError):
            star_coupling(AlgebraSpec(4, 1))
