from fractions import Fraction

import pytest

from groups_util import (
    a4_characters,
    a4_group,
    q8_char2,
    q8_group,
    s3_characters,
    s3_group,
)
from padickit.chars import (
    ClassFunction,
    Cyc,
    GroupTable,
    LocalCharacterData,
    d_minus,
    d_plus,
    epsilon_factorization,
    h1_corank_prediction,
    hypothesis_A_check,
    multiplicity,
    reconstruct_epsilon,
    trivial_zero_multiplicity,
    unit_rank,
)
from padickit.errors import DomainError
from padickit.padic import PadicParams


class TestCyc:
    def test_reduction_zeta3(self):
        # zeta_3^2 = -1 - zeta_3
        z = Cyc.root(3)
        assert z * z == Cyc(3, [-1, -1])

    def test_conjugation(self):
        z = Cyc.root(5)
        assert z.conj() == Cyc.root(5, 4)
        assert (z * z.conj()).rational_value() == 1

    def test_orders(self):
        assert Cyc.root(12).multiplicative_order() == 12
        assert Cyc.rational(3, -1).multiplicative_order() == 2
        assert Cyc.rational(3, 2).multiplicative_order() is None

    def test_cross_order_arithmetic(self):
        # zeta_6 = -zeta_3^2
        z6 = Cyc.root(6)
        z3 = Cyc.root(3)
        assert z6 == -(z3 * z3)

    def test_embed_quadratic(self):
        params = PadicParams(5, 4)
        i = Cyc.root(4)  # fourth root of unity, 4 | p - 1
        x = i.embed(params)
        assert (x * x + 1).is_zero()

    def test_embed_rejects_bad_order(self):
        params = PadicParams(5, 4)
        with pytest.raises(DomainError):
            Cyc.root(3).embed(params)  # 3 does not divide 4


class TestGroupTable:
    def test_s3_classes(self):
        g = s3_group()
        sizes = sorted(len(c) for c in g.classes)
        assert sizes == [1, 2, 3]

    def test_bad_table_rejected(self):
        with pytest.raises(DomainError):
            GroupTable([[0, 1], [1, 1]])

    def test_subgroup_closure_enforced(self):
        g = s3_group()
        with pytest.raises(DomainError):
            g.subgroup([0, 4])  # 3-cycle without its inverse: not closed

    def test_column_orthogonality_s3(self):
        g = s3_group()
        chars = s3_characters(g)
        for ci, cls in enumerate(g.classes):
            total = Cyc.rational(1, 0)
            for chi in chars:
                total = total + chi.values[ci] * chi.values[ci].conj()
            assert total.rational_value() == g.centralizer_order(cls[0])

    def test_column_orthogonality_a4(self):
        g = a4_group()
        chars = a4_characters(g)
        for ci, cls in enumerate(g.classes):
            total = Cyc.rational(1, 0)
            for chi in chars:
                total = total + chi.values[ci] * chi.values[ci].conj()
            assert total.rational_value() == g.centralizer_order(cls[0])

    def test_irreducibility_certificates(self):
        g = s3_group()
        for chi in s3_characters(g):
            assert chi.inner(chi) == 1


class TestMultiplicity:
    def test_s3_std_on_order2(self):
        g = s3_group()
        _, _, std = s3_characters(g)
        H = g.subgroup(g.decomposition)
        theta = ClassFunction(H, [1, -1], name="eps")
        assert multiplicity(std, H, theta) == 1

    def test_trivial_subgroup_gives_dimension(self):
        g = s3_group()
        _, _, std = s3_characters(g)
        H = g.subgroup([g.identity])
        assert multiplicity(std, H, ClassFunction.trivial(H)) == std.dimension == 2

    def test_q8_center_multiplicity_two(self):
        g = q8_group()
        chi = q8_char2(g)
        Z = g.subgroup([0, 1])
        theta = ClassFunction(Z, [1, -1], name="central")
        assert multiplicity(chi, Z, theta) == 2


class TestDPlus:
    def test_trivial_character(self):
        g = s3_group()
        assert d_plus(ClassFunction.trivial(g)) == 1

    def test_a4_three_dim(self):
        g = a4_group()
        *_, std3 = a4_characters(g)
        assert d_plus(std3) == 1

    def test_s3_std(self):
        g = s3_group()
        _, _, std = s3_characters(g)
        assert d_plus(std) == 1 and d_minus(std) == 1


class TestUnitRank:
    def test_trivial_rank_zero(self):
        g = a4_group()
        trivial, *_ = a4_characters(g)
        assert unit_rank(trivial) == 0

    def test_a4_aggregate_dirichlet_rank(self):
        g = a4_group()
        chars = a4_characters(g)
        total = sum(chi.dimension * unit_rank(chi) for chi in chars)
        assert total == 5  # = r1 + r2 - 1 with r1 = 0, r2 = 6

    def test_two_dim_odd(self):
        g = s3_group()
        _, _, std = s3_characters(g)
        assert unit_rank(std) == 1

    def test_unit_rank_equals_dplus_for_nontrivial(self):
        g = a4_group()
        for chi in a4_characters(g)[1:]:
            assert unit_rank(chi) == d_plus(chi)


class TestHypothesisA:
    def test_s3_p23_holds(self):
        g = s3_group()
        _, _, std = s3_characters(g)
        H = g.subgroup(g.decomposition)
        eps = ClassFunction(H, [1, -1], name="eps")
        rep = hypothesis_A_check(g, std, eps, 23)
        assert rep["holds"] and not rep["reasons"]

    def test_p_divides_order_fails(self):
        g = s3_group()
        _, _, std = s3_characters(g)
        H = g.subgroup(g.decomposition)
        eps = ClassFunction(H, [1, -1], name="eps")
        rep = hypothesis_A_check(g, std, eps, 3)
        assert not rep["holds"]
        assert not rep["conditions"]["p_does_not_divide_group_order"]

    def test_q8_multiplicity_two_fails(self):
        g = q8_group()
        chi = q8_char2(g)
        Z = g.subgroup([0, 1])
        theta = ClassFunction(Z, [1, -1], name="central")
        rep = hypothesis_A_check(g, chi, theta, 5)
        assert not rep["holds"]
        assert not rep["conditions"]["epsilon_multiplicity_one"]


class TestTrivialZeroMultiplicity:
    def test_s3_p23_t_is_one(self):
        g = s3_group()
        _, _, std = s3_characters(g)
        H = g.subgroup(g.decomposition)
        eps = ClassFunction(H, [1, -1])
        assert trivial_zero_multiplicity(std, eps, H) == 1

    def test_trivial_epsilon_removes_the_constituent(self):
        g = s3_group()
        _, _, std = s3_characters(g)
        H = g.subgroup(g.decomposition)
        eps0 = ClassFunction.trivial(H)
        assert trivial_zero_multiplicity(std, eps0, H) == 0

    def test_faithful_on_cyclic_three(self):
        g = s3_group()
        _, _, std = s3_characters(g)
        A3 = g.subgroup([0, 4, 5])
        eps = ClassFunction(A3, [Cyc.rational(3, 1), Cyc.root(3, 1), Cyc.root(3, 2)], m=3)
        assert trivial_zero_multiplicity(std, eps, A3) == 0


class TestEpsilonFactorization:
    def test_unramified(self):
        data = epsilon_factorization(Cyc.rational(1, 1), Cyc.rational(1, -1), 2, 5)
        assert data.a == 0 and data.b == 2 and data.f == 24

    def test_omega_itself(self):
        p = 7
        data = epsilon_factorization(Cyc.root(p - 1), Cyc.rational(1, 1), 3, p)
        assert data.a == 1 and data.b == 1 and data.f == p - 1

    def test_quadratic_tame_and_quadratic_unramified(self):
        p = 7
        data = epsilon_factorization(Cyc.rational(1, -1), Cyc.rational(1, -1), 3, p)
        assert data.a == (p - 1) // 2 and data.b == 2

    def test_rejects_inertia_order_not_dividing_p_minus_1(self):
        with pytest.raises(DomainError):
            epsilon_factorization(Cyc.root(5), Cyc.rational(1, 1), 3, 7)

    def test_reconstruction_bijection(self):
        p = 7
        cases = [
            (Cyc.rational(1, 1), Cyc.rational(1, -1)),
            (Cyc.root(p - 1), Cyc.rational(1, 1)),
            (Cyc.rational(1, -1), Cyc.rational(1, -1)),
            (Cyc.root(p - 1, 2), Cyc.root(4)),
        ]
        for iv, fv in cases:
            data = epsilon_factorization(iv, fv, 3, p)
            riv, rfv = reconstruct_epsilon(data, 3)
            assert riv == iv.lift_order(riv.m) if iv.m != riv.m else riv == iv
            assert rfv == fv


class TestCorankPrediction:
    def test_two_dim_odd(self):
        g = s3_group()
        _, _, std = s3_characters(g)
        assert h1_corank_prediction(std) == 1

    def test_trivial(self):
        g = s3_group()
        assert h1_corank_prediction(ClassFunction.trivial(g)) == 1

    def test_three_dim(self):
        g = a4_group()
        *_, std3 = a4_characters(g)
        assert h1_corank_prediction(std3) == 2


class TestHypothesisAImpliesTRange:
    def test_t_bounded_by_dimension(self):
        g = s3_group()
        _, _, std = s3_characters(g)
        H = g.subgroup(g.decomposition)
        eps = ClassFunction(H, [1, -1])
        rep = hypothesis_A_check(g, std, eps, 23)
        assert rep["holds"]
        t = trivial_zero_multiplicity(std, eps, H)
        assert 0 <= t <= std.dimension - 1
