import random
from fractions import Fraction

import pytest

from padickit.errors import DomainError
from padickit.padic import PadicParams, PadicScalar, plog
from padickit.tower import (
    GaloisLabel,
    build_tower,
    cyclotomic_polynomial,
    embed_scalar,
    galois_act,
    norm_down,
    plog_tower,
    principal_part,
    teichmueller_part,
    unit_log,
)


def fp_factors(p, ff):
    """Brute-force list of monic irreducible factors of Phi_ff mod p."""
    from padickit.tower import _fp_divmod, _monic_candidates

    phi = [c % p for c in cyclotomic_polynomial(ff)]
    out = []
    b = 1
    while True:
        found = [g for g in _monic_candidates(p, b) if not _fp_divmod(phi, g, p)[1]]
        if found:
            return found, b
        b += 1
        assert b < 10


class TestCyclotomicPolynomial:
    def test_small_values(self):
        assert cyclotomic_polynomial(1) == (-1, 1)
        assert cyclotomic_polynomial(2) == (1, 1)
        assert cyclotomic_polynomial(4) == (1, 0, 1)
        assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
        assert cyclotomic_polynomial(24) == (1, 0, 0, 0, -1, 0, 0, 0, 1)

    def test_degree_is_euler_phi(self):
        for n, phi in [(5, 4), (12, 4), (24, 8), (22, 10)]:
            assert len(cyclotomic_polynomial(n)) == phi + 1


class TestBuildTower:
    def test_b1_degenerate_f4(self):
        ring = build_tower(PadicParams(5, 4), 1, 0)
        assert ring.f == 4 and ring.dim == 4
        zf = ring.zeta_f()
        assert (zf**4 - 1).is_zero()
        assert not (zf**2 - 1).is_zero()

    def test_p5_b2_dimension_and_orbit(self):
        ring = build_tower(PadicParams(5, 4), 2, 0)
        assert ring.dim == 8
        # residue orbit {z, z^5} independent over F_5: exhaustive check
        from padickit.tower import _normal_basis_ok

        h0 = [c % 5 for c in ring.h]
        assert _normal_basis_ok(h0, 5, 2)

    def test_p3_b2_n1_dimension_and_divisibility(self):
        ring = build_tower(PadicParams(3, 4), 2, 1)
        assert ring.dim == 12
        # h mod 3 divides Phi_8 mod 3: brute-force factorization oracle
        factors, b = fp_factors(3, 8)
        assert b == 2
        assert [c % 3 for c in ring.h] in factors

    def test_hensel_lift_is_exact_factor(self):
        ring = build_tower(PadicParams(5, 6), 2, 0)
        m = 5**6
        phi24 = cyclotomic_polynomial(24)
        from padickit.tower import _poly_mul, _zip_pad_int, _fp_divmod

        # h divides Phi_24 mod 5^6: verify via the lifted cofactor recomputation
        zf = ring.zeta_f()
        acc = ring.zero()
        val = ring.one()
        for c in phi24:
            acc = acc + val * c
            val = val * zf
        assert acc.is_zero()

    def test_zeta_f_satisfies_h_exactly(self):
        ring = build_tower(PadicParams(5, 5), 2, 1)
        zf = ring.zeta_f()
        acc = ring.zero()
        val = ring.one()
        for c in ring.h:
            acc = acc + val * c
            val = val * zf
        assert acc.is_zero()

    def test_deterministic(self):
        r1 = build_tower(PadicParams(3, 4), 2, 1)
        r2 = build_tower(PadicParams(3, 4), 2, 1)
        assert r1 is r2


class TestZetaOrders:
    @pytest.mark.parametrize("p,b,n", [(5, 1, 0), (5, 2, 0), (3, 2, 1)])
    def test_zeta_f_has_exact_order_f(self, p, b, n):
        ring = build_tower(PadicParams(p, 4), b, n)
        zf = ring.zeta_f()
        assert (zf**ring.f - 1).is_zero()
        for q in {d for d in range(2, ring.f + 1) if ring.f % d == 0 and _isprime(d)}:
            assert not (zf ** (ring.f // q) - 1).is_zero()

    def test_zeta_fp_has_exact_order_f_pn1(self):
        ring = build_tower(PadicParams(5, 3), 2, 1)
        x = ring.zeta_fp()
        order = ring.f * ring.pn1
        assert (x**order - 1).is_zero()
        for q in (2, 3, 5):
            assert order % q == 0
            assert not (x ** (order // q) - 1).is_zero()

    def test_ramification_degree(self):
        # (zeta_p - 1)^(p-1) is p times a unit at level 0
        ring = build_tower(PadicParams(5, 4), 1, 0)
        x = (ring.zeta_p() - ring.one()) ** (5 - 1)
        assert x.valuation() == 1
        s, unit = x.unit_part()
        assert s == ring.e and unit.is_unit()


def _isprime(n):
    return n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))


class TestGaloisAction:
    def setup_method(self):
        self.ring = build_tower(PadicParams(5, 4), 2, 1)
        rng = random.Random(99)
        self.x = self._random_elt(rng)

    def _random_elt(self, rng):
        ring = self.ring
        c = [[rng.randrange(ring.mod) for _ in range(ring.b)] for _ in range(ring.phi)]
        from padickit.tower import TowerElement

        return TowerElement(ring, c)

    def test_identity_label(self):
        assert galois_act(GaloisLabel(0, 1), self.x) == self.x

    def test_frobenius_order_b(self):
        y = self.ring.zeta_f()
        z = y
        for _ in range(self.ring.b):
            z = galois_act(GaloisLabel(1, 1), z)
        assert z == y
        assert galois_act(GaloisLabel(1, 1), self.x * self.x) == (
            galois_act(GaloisLabel(1, 1), self.x) ** 2
        )

    def test_componentwise_composition(self):
        rng = random.Random(5)
        for _ in range(10):
            l1 = GaloisLabel(rng.randrange(2), rng.choice([c for c in range(1, 25) if c % 5]))
            l2 = GaloisLabel(rng.randrange(2), rng.choice([c for c in range(1, 25) if c % 5]))
            lhs = galois_act(l1, galois_act(l2, self.x))
            rhs = galois_act(self.ring.compose_labels(l1, l2), self.x)
            assert lhs == rhs

    def test_action_is_ring_homomorphism(self):
        rng = random.Random(17)
        y = self._random_elt(rng)
        for lab in [GaloisLabel(1, 7), GaloisLabel(0, 2), GaloisLabel(1, 24)]:
            assert galois_act(lab, self.x * y) == galois_act(lab, self.x) * galois_act(lab, y)
            assert galois_act(lab, self.x + y) == galois_act(lab, self.x) + galois_act(lab, y)

    def test_faithful_on_zeta_fp(self):
        seen = set()
        base = self.ring.zeta_fp()
        for lab in self.ring.labels():
            img = galois_act(lab, base)
            key = tuple(tuple(r) for r in img.c)
            assert key not in seen
            seen.add(key)

    def test_frobenius_root_consistency(self):
        # h(Frob(y)) = 0 mod (h, p^N) exactly
        ring = self.ring
        fy = ring.from_y_poly(ring.frob_pows[1])
        acc = ring.zero()
        val = ring.one()
        for c in ring.h:
            acc = acc + val * c
            val = val * fy
        assert acc.is_zero()


class TestNormDown:
    def test_norm_of_one(self):
        ring = build_tower(PadicParams(5, 3), 1, 1)
        assert norm_down(ring.one()) == ring.lower().one()

    def test_norm_of_z_is_lower_z(self):
        for p, b in [(5, 1), (3, 2)]:
            ring = build_tower(PadicParams(p, 3), b, 1)
            assert norm_down(ring.zeta_p()) == ring.lower().zeta_p()

    def test_norm_of_y_is_y_to_p(self):
        ring = build_tower(PadicParams(3, 3), 2, 1)
        got = norm_down(ring.zeta_f())
        assert got == ring.lower().y_pow(3)

    def test_level0_rejected(self):
        ring = build_tower(PadicParams(5, 3), 1, 0)
        with pytest.raises(DomainError):
            norm_down(ring.one())

    def test_transitivity_to_level_zero(self):
        # norm twice from level 2 equals the product over c = 1 mod p at level 2
        ring = build_tower(PadicParams(3, 3), 1, 2)
        x = ring.zeta_p() + ring.zeta_f() * 2
        twice = norm_down(norm_down(x))
        prod = None
        for c in range(1, ring.pn1):
            if c % 3 == 0 or c % 3**1 != 1 % 3:
                pass
            if c % 3 != 0 and (c - 1) % 3 == 0:
                img = galois_act(GaloisLabel(0, c), x)
                prod = img if prod is None else prod * img
        from padickit.tower import embed_down

        low0 = build_tower(PadicParams(3, 3), 1, 0)
        assert embed_down(embed_down(prod, ring.lower()), low0) == twice


class TestPlogTower:
    def test_log_of_one(self):
        ring = build_tower(PadicParams(5, 4), 1, 0)
        assert plog_tower(ring.one()).is_zero()

    def test_agrees_with_scalar_plog(self):
        params = PadicParams(5, 5)
        ring = build_tower(params, 2, 0)
        u = PadicScalar.from_int(params, 1 + 5 * 13)
        lhs = plog_tower(embed_scalar(u, ring))
        rhs = embed_scalar(plog(u), ring)
        assert lhs.indistinguishable_from(rhs)

    def test_homomorphism_on_squares(self):
        ring = build_tower(PadicParams(5, 4), 1, 1)
        rng = random.Random(3)
        hits = 0
        for _ in range(8):
            c = [[rng.randrange(ring.mod)] for _ in range(ring.phi)]
            from padickit.tower import TowerElement

            u = ring.one() + TowerElement(ring, c) * (ring.zeta_p() - 1)
            if not u.is_principal_unit():
                continue
            hits += 1
            assert plog_tower(u * u).indistinguishable_from(plog_tower(u) * 2)
        assert hits >= 3

    def test_galois_equivariance(self):
        ring = build_tower(PadicParams(3, 5), 2, 1)
        u = ring.one() + (ring.zeta_p() - 1) * ring.zeta_f()
        lo = plog_tower(u)
        for lab in [GaloisLabel(1, 1), GaloisLabel(0, 2), GaloisLabel(1, 5)]:
            lhs = plog_tower(galois_act(lab, u))
            rhs = lo.galois(lab)
            assert lhs.indistinguishable_from(rhs)

    def test_rejects_non_unit(self):
        ring = build_tower(PadicParams(5, 3), 1, 0)
        with pytest.raises(DomainError):
            plog_tower(ring.zeta_p() - 1)
        with pytest.raises(DomainError):
            plog_tower(ring.zeta_f())


class TestUnitStructure:
    def test_teichmueller_part_of_scalar(self):
        params = PadicParams(5, 4)
        ring = build_tower(params, 2, 0)
        u = embed_scalar(PadicScalar.from_int(params, 7), ring)
        w = teichmueller_part(u)
        assert (w ** (5**2 - 1) - 1).is_zero()
        assert principal_part(u).is_principal_unit()

    def test_unit_log_kills_roots_of_unity(self):
        ring = build_tower(PadicParams(5, 4), 2, 0)
        assert unit_log(ring.zeta_f()).is_zero()

    def test_embed_scalar_respects_ring_ops(self):
        params = PadicParams(7, 4)
        ring = build_tower(params, 1, 0)
        a = PadicScalar.from_int(params, 12)
        b = PadicScalar.from_int(params, 30)
        assert embed_scalar(a, ring) * embed_scalar(b, ring) == embed_scalar(a * b, ring)
        assert embed_scalar(PadicScalar.from_int(params, 1), ring) == ring.one()

    def test_valuation_of_pi_powers(self):
        ring = build_tower(PadicParams(5, 3), 1, 1)
        pi = ring.zeta_p() - 1
        assert pi.valuation() == Fraction(1, ring.e)
        assert (pi * pi).valuation() == Fraction(2, ring.e)
        assert ring.one().valuation() == 0
        assert ring.zero().valuation() is None
