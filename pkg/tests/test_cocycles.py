"""Exact rational 2-cocycles: identity checking, coboundaries, classes."""

from fractions import Fraction

import numpy as np
import pytest

from twistkit.cocycles import (
    Cochain1,
    Cocycle2,
    builtin_cocycle,
    check_cocycle,
    coboundary,
    cocycle_from_json,
    cohomologous,
    conjugate,
    induced_character,
    klein_bicharacter,
    multiply,
    normalize,
    sigma_chi,
    subgroup_characters,
    trivial_cocycle,
)
from twistkit.errors import IdentityViolationError, InvalidGroupError
from twistkit.groups import (
    Subgroup,
    center,
    cyclic,
    dihedral,
    klein,
    quaternion8,
    symmetric,
)
from twistkit.homology import build_chain, h2_presentation, make_splitting

F = Fraction


def random_cochain(G, rng, denom=8):
    return Cochain1(G, tuple(F(int(rng.integers(0, denom)), denom) for _ in range(G.order)))


@pytest.fixture(scope="module")
def klein_pres():
    return h2_presentation(build_chain(klein()))


class TestIdentityCheck:
    def test_zero_table_valid_everywhere(self):
        for G in [cyclic(1), cyclic(2), klein(), symmetric(3)]:
            om = trivial_cocycle(G)
            assert om.is_trivial_table()

    def test_klein_bicharacter_is_a_cocycle(self):
        om = klein_bicharacter()
        # omega(a^i b^j, a^k b^l) = jk/2 with index i + 2j
        assert om.angle(0, 1) == 0 and om.angle(1, 0) == 0
        assert om.angle(2, 1) == F(1, 2)  # b against a
        assert om.angle(1, 2) == 0  # a against b
        assert om.angle(3, 3) == F(1, 2)  # ab against ab: not normalized

    def test_identity_slot_constraint(self):
        # any table with omega(e, g) != omega(e, e) fails at (e, e, g)
        K = klein()
        bad = np.full((4, 4), F(0), dtype=object)
        bad[0, 3] = F(1, 2)
        with pytest.raises(IdentityViolationError) as ei:
            check_cocycle(K, bad)
        assert ei.value.triple is not None
        g1, g2, g3 = ei.value.triple
        assert g1 == 0 and g2 == 0

    def test_sign_formula_table_rejected(self):
        # the tempting alternating table (ij - kl)/2 violates the identity
        K = klein()
        bad = np.empty((4, 4), dtype=object)
        for s in range(4):
            for t in range(4):
                i, j = s & 1, (s >> 1) & 1
                k, l = t & 1, (t >> 1) & 1
                bad[s, t] = F((i * j - k * l) % 2, 2)
        with pytest.raises(IdentityViolationError):
            check_cocycle(K, bad)

    def test_violation_reports_concrete_triple(self):
        C2 = cyclic(2)
        bad = np.array([[F(0), F(0)], [F(1, 3), F(0)]], dtype=object)
        with pytest.raises(IdentityViolationError) as ei:
            check_cocycle(C2, bad)
        t = ei.value.triple
        # re-check the reported triple by hand
        tbl = C2.table
        g1, g2, g3 = t
        lhs = bad[g1, tbl[g2, g3]] + bad[g2, g3]
        rhs = bad[tbl[g1, g2], g3] + bad[g1, g2]
        assert (lhs - rhs) % 1 != 0

    def test_huge_denominator_falls_back_to_exact_loop(self):
        # lcm beyond the int64 fast path still validates correctly
        C2 = cyclic(2)
        big = (1 << 40) + 1
        gamma = Cochain1(C2, (F(0), F(1, big)))
        om = coboundary(gamma)  # valid; constructor check ran the slow path
        assert om.angle(1, 1) == F(2, big)
        bad = np.array(om.angles, dtype=object)
        bad[0, 1] += F(1, 7)  # breaks omega(e, g) = omega(e, e)
        with pytest.raises(IdentityViolationError) as ei:
            check_cocycle(C2, bad)
        assert ei.value.triple == (0, 0, 1)

    def test_shape_and_range_validation(self):
        K = klein()
        with pytest.raises(ValueError):
            check_cocycle(K, np.zeros((3, 4)))
        # integer shifts reduce into [0, 1) without changing the cocycle
        shifted = np.array(klein_bicharacter().angles, dtype=object)
        shifted[2, 1] += 1
        shifted[3, 1] -= 2
        om = check_cocycle(K, shifted)
        assert om.angle(2, 1) == F(1, 2) and om.angle(3, 1) == F(1, 2)

    def test_angles_readonly(self):
        om = trivial_cocycle(cyclic(3))
        with pytest.raises(ValueError):
            om.angles[0, 0] = F(1, 2)


class TestCoboundariesAndProducts:
    def test_zero_cochain_gives_trivial(self):
        g0 = coboundary(Cochain1(klein(), (0, 0, 0, 0)))
        assert g0.is_trivial_table()

    def test_coboundary_formula(self):
        C4 = cyclic(4)
        gamma = Cochain1(C4, (F(0), F(1, 4), F(1, 2), F(3, 4)))
        om = coboundary(gamma)
        for i in range(4):
            for j in range(4):
                assert om.angle(i, j) == (gamma(i) + gamma(j) - gamma(C4.mul(i, j))) % 1

    def test_random_coboundaries_always_valid(self):
        rng = np.random.default_rng(11)
        for G in [klein(), cyclic(6), dihedral(4)]:
            for _ in range(5):
                coboundary(random_cochain(G, rng))  # raises if invalid

    def test_multiply_and_conjugate(self):
        om = klein_bicharacter()
        sq = multiply(om, om)
        assert sq.is_trivial_table()  # order 2 on the nose
        assert conjugate(om).angle(2, 1) == F(1, 2)  # -1/2 = 1/2 mod 1
        with pytest.raises(ValueError):
            multiply(om, trivial_cocycle(cyclic(4)))

    def test_cochain_validation(self):
        with pytest.raises(ValueError):
            Cochain1(klein(), (0, 0))


class TestNormalize:
    def test_already_normalized_unchanged(self):
        K = klein()
        om, gamma = normalize(trivial_cocycle(K))
        assert om.is_trivial_table()
        assert all(a == 0 for a in gamma.angles)

    def test_bicharacter_requires_adjustment(self):
        # omega(ab, ab) = 1/2 so the inverse-pair condition fails before
        # normalization; after it, every omega'(g, g^-1) vanishes
        om = klein_bicharacter()
        nom, gamma = normalize(om)
        K = om.group
        for g in range(4):
            assert nom.angle(g, K.inv(g)) == 0
        assert gamma.angles == (F(0), F(0), F(0), F(1, 4))
        renom, gamma2 = normalize(nom)
        assert all(a == 0 for a in gamma2.angles)

    def test_normalize_preserves_class(self, klein_pres):
        om = klein_bicharacter()
        nom, _ = normalize(om)
        assert cohomologous(om, nom, klein_pres)

    def test_normalize_with_nonzero_identity_angle(self):
        # omega(e, e) != 0 is legal for a cocycle; normalization clears it
        C3 = cyclic(3)
        gamma = Cochain1(C3, (F(1, 3), F(0), F(2, 3)))
        om = coboundary(gamma)
        assert om.angle(0, 0) != 0
        nom, _ = normalize(om)
        assert nom.angle(0, 0) == 0
        for g in range(3):
            assert nom.angle(g, C3.inv(g)) == 0

    def test_normalize_random_cocycles(self):
        rng = np.random.default_rng(5)
        for G in [klein(), cyclic(5), quaternion8()]:
            base = klein_bicharacter() if G.order == 4 else trivial_cocycle(G)
            for _ in range(4):
                om = multiply(base, coboundary(random_cochain(G, rng)))
                nom, _ = normalize(om)
                for g in range(G.order):
                    assert nom.angle(g, G.inv(g)) == 0


class TestClasses:
    def test_trivial_maps_to_trivial_character(self, klein_pres):
        chi = induced_character(trivial_cocycle(klein()), klein_pres)
        assert chi.angles == (F(0),)
        assert chi.invariant_factors == (2,)

    def test_bicharacter_generates_h2(self, klein_pres):
        chi = induced_character(klein_bicharacter(), klein_pres)
        assert chi.angles == (F(1, 2),)

    def test_accepts_splitting_or_presentation(self, klein_pres):
        split = make_splitting(build_chain(klein()), presentation=klein_pres)
        om = klein_bicharacter()
        assert induced_character(om, split).angles == induced_character(om, klein_pres).angles

    def test_character_invariant_under_coboundary(self, klein_pres):
        rng = np.random.default_rng(7)
        om = klein_bicharacter()
        base = induced_character(om, klein_pres).angles
        for _ in range(20):
            shifted = multiply(om, coboundary(random_cochain(klein(), rng)))
            assert induced_character(shifted, klein_pres).angles == base

    def test_cohomologous_pairs(self, klein_pres):
        om = klein_bicharacter()
        t = trivial_cocycle(klein())
        rng = np.random.default_rng(2)
        db = coboundary(random_cochain(klein(), rng))
        assert cohomologous(db, t, klein_pres)
        assert not cohomologous(om, t, klein_pres)
        assert cohomologous(om, conjugate(om), klein_pres)  # class has order 2
        assert cohomologous(om, multiply(om, db), klein_pres)

    def test_cohomologous_builds_presentation_when_missing(self):
        assert cohomologous(trivial_cocycle(cyclic(3)), trivial_cocycle(cyclic(3)))

    def test_group_mismatch_rejected(self, klein_pres):
        with pytest.raises(ValueError):
            induced_character(trivial_cocycle(cyclic(4)), klein_pres)


class TestSubgroupCharacters:
    def test_counts_match_subgroup_order(self):
        C4 = cyclic(4)
        assert len(subgroup_characters(Subgroup(C4, (0, 2)))) == 2
        assert len(subgroup_characters(Subgroup(C4, (0, 1, 2, 3)))) == 4
        Q8 = quaternion8()
        assert len(subgroup_characters(center(Q8))) == 2

    def test_trivial_character_first_and_all_multiplicative(self):
        C6 = cyclic(6)
        chars = subgroup_characters(Subgroup(C6, tuple(range(6))))
        assert all(v == 0 for v in chars[0].values())
        for chi in chars:
            for a in range(6):
                for b in range(6):
                    assert (chi[a] + chi[b]) % 1 == chi[C6.mul(a, b)]

    def test_distinct_characters(self):
        K = klein()
        chars = subgroup_characters(Subgroup(K, (0, 1, 2, 3)))
        assert len({tuple(sorted(c.items())) for c in chars}) == 4

    def test_nonabelian_rejected(self):
        S3 = symmetric(3)
        full = Subgroup(S3, tuple(range(6)))
        with pytest.raises(InvalidGroupError):
            subgroup_characters(full)


class TestSigmaChi:
    def test_trivial_character_gives_trivial_cocycle(self):
        C4 = cyclic(4)
        N = Subgroup(C4, (0, 2))
        chars = subgroup_characters(N)
        sig = sigma_chi(C4, N, chars[0])
        assert sig.is_trivial_table()

    def test_c4_mod_c2_hand_value(self):
        # lifts of C4/{0,2} are 0 and 1; 1*1 = 2 lands in N, chi(2) = 1/2
        C4 = cyclic(4)
        N = Subgroup(C4, (0, 2))
        chi = subgroup_characters(N)[1]
        sig = sigma_chi(C4, N, chi)
        assert sig.group.order == 2
        assert sig.angle(1, 1) == F(1, 2)
        assert sig.angle(0, 0) == 0 and sig.angle(0, 1) == 0

    def test_q8_center_realizes_both_classes(self):
        Q8 = quaternion8()
        Zq = center(Q8)
        pres = None
        seen = set()
        for chi in subgroup_characters(Zq):
            sig = sigma_chi(Q8, Zq, chi)
            assert sig.group.order == 4 and sig.group.is_abelian()
            if pres is None:
                pres = h2_presentation(build_chain(sig.group))
            seen.add(induced_character(sig, pres).angles)
        assert len(seen) == 2  # the extension class detects nontriviality

    def test_d4_center_also_realizes_both_classes(self):
        D4 = dihedral(4)
        Z = center(D4)
        assert len(Z.members) == 2
        pres = None
        seen = set()
        for chi in subgroup_characters(Z):
            sig = sigma_chi(D4, Z, chi)
            if pres is None:
                pres = h2_presentation(build_chain(sig.group))
            seen.add(induced_character(sig, pres).angles)
        assert len(seen) == 2

    def test_noncentral_subgroup_rejected(self):
        S3 = symmetric(3)
        A3 = Subgroup(S3, (0, 3, 4))  # normal but not central
        chi = {0: F(0), 3: F(1, 3), 4: F(2, 3)}
        with pytest.raises(InvalidGroupError):
            sigma_chi(S3, A3, chi)

    def test_bad_character_rejected(self):
        C4 = cyclic(4)
        N = Subgroup(C4, (0, 2))
        with pytest.raises(InvalidGroupError):
            sigma_chi(C4, N, {0: F(0), 2: F(1, 3)})  # not multiplicative
        with pytest.raises(InvalidGroupError):
            sigma_chi(C4, N, {0: F(1, 2), 2: F(0)})  # identity not fixed
        with pytest.raises(InvalidGroupError):
            sigma_chi(C4, N, {0: F(0)})  # wrong domain


class TestShippedAndJson:
    def test_builtin_dispatch(self):
        K = klein()
        assert builtin_cocycle("trivial", cyclic(5)).is_trivial_table()
        om = builtin_cocycle("paper-klein", K)
        assert om.angle(2, 1) == F(1, 2)
        with pytest.raises(ValueError):
            builtin_cocycle("paper-klein", cyclic(4))
        with pytest.raises(ValueError):
            builtin_cocycle("nope", K)

    def test_json_round_trip(self):
        om = klein_bicharacter()
        doc = om.to_json()
        back = cocycle_from_json(doc)
        assert np.array_equal(back.group.table, om.group.table)
        assert all(back.angle(i, j) == om.angle(i, j) for i in range(4) for j in range(4))

    def test_json_with_builtin_group_name(self):
        doc = {"group": "cyclic:3", "angles": [["0"] * 3] * 3}
        om = cocycle_from_json(doc)
        assert om.group.order == 3 and om.is_trivial_table()

    def test_json_with_explicit_group(self):
        om = cocycle_from_json({"angles": [["0", "0"], ["0", "1/2"]]}, group=cyclic(2))
        assert om.angle(1, 1) == F(1, 2)

    def test_json_validation_errors(self):
        with pytest.raises(ValueError):
            cocycle_from_json({"angles": [["0"]]})  # missing group
        with pytest.raises(ValueError):
            cocycle_from_json({"group": "klein"})  # missing angles
        with pytest.raises(ValueError):
            cocycle_from_json({"group": "klein", "angles": [["0"] * 4] * 3})
        with pytest.raises(ValueError):
            cocycle_from_json({"group": "cyclic:2", "angles": [["0", "x"], ["0", "0"]]})
        with pytest.raises(IdentityViolationError):
            cocycle_from_json({"group": "cyclic:2", "angles": [["0", "1/3"], ["0", "0"]]})
