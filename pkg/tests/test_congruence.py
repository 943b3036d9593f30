"""Congruence lattices, induced point equivalences, subdirect embeddings,
and the Boolean round trips.

The congruence oracle enumerates every partition of the carrier and filters
by operation compatibility, independently of the principal-join closure the
library uses.
"""

from itertools import product

import numpy as np
import pytest

from itealg import congruence, decision, models, terms
from itealg.congruence import (
    CongruencePair,
    Partition,
    all_congruences,
    boolean_ada_roundtrip,
    boolean_atoms,
    bset_ultrafilter_decompose,
    disjoint_pairs_ada,
    e_theta,
    find_ada_isomorphism,
    find_boolean_isomorphism,
    maximal_congruences,
    powerset_algebra,
    principal_congruence,
    quotient_is_three,
    respects_operations,
    subdirect_embed,
)
from itealg.decision import GuardError
from itealg.logic import T, F, U, power, three, two
from itealg.models import ModelError, basic_cset, functional_bset, functional_cset, self_cset


def all_partitions(n):
    """Every partition of range(n), as block-id tuples (restricted growth)."""
    def rec(i, maxb, current):
        if i == n:
            yield Partition(tuple(current))
            return
        for b in range(maxb + 1):
            current.append(b)
            yield from rec(i + 1, max(maxb, b + 1), current)
            current.pop()
    yield from rec(0, 0, [])


def oracle_congruences(tables):
    return sorted(
        (p for p in all_partitions(tables.size) if respects_operations(tables, p)),
        key=lambda p: p.block_of,
    )


class TestPartition:
    def test_canonical(self):
        p = Partition.canonical([5, 5, 2, 5, 2])
        assert p.block_of == (0, 0, 1, 0, 1)
        assert p.num_blocks == 2
        assert p.blocks() == [[0, 1, 3], [2, 4]]

    def test_join(self):
        a = Partition.canonical([0, 0, 1, 2])
        b = Partition.canonical([0, 1, 1, 2])
        assert a.join(b) == Partition.canonical([0, 0, 0, 1])

    def test_refines(self):
        fine = Partition.delta(4)
        coarse = Partition.nabla(4)
        assert fine.refines(coarse)
        assert not coarse.refines(fine)


class TestCongruenceEnumeration:
    def test_three_is_simple(self):
        congs = all_congruences(three())
        assert sorted(c.block_of for c in congs) == sorted(
            [Partition.delta(3).block_of, Partition.nabla(3).block_of]
        )
        assert maximal_congruences(three()) == [Partition.delta(3)]

    def test_two_is_simple(self):
        congs = all_congruences(two())
        assert len(congs) == 2

    def test_power_matches_partition_oracle(self):
        # independent oracle over all 21147 partitions of the 9 elements
        t = power(three(), 2)
        oracle = oracle_congruences(t)
        got = sorted(all_congruences(t), key=lambda p: p.block_of)
        assert got == oracle
        assert len(got) == 4

    def test_power_maximal_are_coordinate_kernels(self):
        t = power(three(), 2)
        maxes = maximal_congruences(t)
        assert len(maxes) == 2
        first = Partition.canonical([i % 3 for i in range(9)])
        second = Partition.canonical([i // 3 for i in range(9)])
        assert {m.block_of for m in maxes} == {first.block_of, second.block_of}
        for m in maxes:
            assert quotient_is_three(t, m)

    def test_maximal_intersection_trivial(self):
        # pairwise meet of the maximal congruences separates everything
        t = power(three(), 2)
        maxes = maximal_congruences(t)
        meet = [
            tuple(m.block_of[i] for m in maxes) for i in range(t.size)
        ]
        assert len(set(meet)) == t.size

    def test_principal_congruence_contained_in_all(self):
        t = power(three(), 2)
        congs = all_congruences(t)
        for a, b in ((0, 1), (3, 7), (2, 2)):
            pc = principal_congruence(t, a, b)
            assert pc in congs
            for c in congs:
                if c.relates(a, b):
                    assert pc.refines(c)

    def test_guard(self):
        with pytest.raises(GuardError):
            all_congruences(power(three(), 4))


class TestETheta:
    def test_basic_cset_delta(self):
        m = basic_cset(4)
        theta = Partition.delta(3)
        e = e_theta(m, theta)
        assert e == Partition.delta(4)

    def test_self_model_coordinate_kernel(self):
        t = power(three(), 2)
        m = self_cset(t)
        # theta = kernel of the first coordinate (digit 0 of the encoding)
        theta = Partition.canonical([i % 3 for i in range(9)])
        e = e_theta(m, theta)
        # oracle: witness search straight from the definition
        tblock = [b for b in range(9) if theta.block_of[b] == theta.block_of[t.const_T]]
        for s in range(9):
            for r in range(9):
                related = any(m.action[b, s, r] == m.action[b, r, r] for b in tblock)
                assert e.relates(s, r) == related
        # and it coincides with first-coordinate equality of the underlying
        # algebra elements (points are re-indexed with U first)
        perm = [t.const_U] + [i for i in range(9) if i != t.const_U]
        for s in range(9):
            for r in range(9):
                assert e.relates(s, r) == (perm[s] % 3 == perm[r] % 3)

    def test_pair_is_congruence(self):
        t = power(three(), 2)
        m = self_cset(t)
        for theta in maximal_congruences(t):
            pair = CongruencePair(e_theta(m, theta), theta)
            assert pair.is_compatible(m)

    def test_e_theta_on_self_model_refines_theta(self):
        # on the self-action model the induced point partition, read back
        # through the point indexing, never separates less than theta
        t = power(three(), 2)
        m = self_cset(t)
        perm = [t.const_U] + [i for i in range(9) if i != t.const_U]
        for theta in maximal_congruences(t):
            e = e_theta(m, theta)
            for s in range(9):
                for r in range(9):
                    if e.relates(s, r):
                        assert theta.block_of[perm[s]] == theta.block_of[perm[r]]

    def test_rejects_non_maximal(self):
        m = basic_cset(3)
        with pytest.raises(ModelError):
            e_theta(m, Partition.nabla(3))


class TestAlphaSTFactorwise:
    def test_factor_cases(self):
        m = functional_cset(2)
        for theta in maximal_congruences(m.tests):
            e = e_theta(m, theta)
            tb, pb = theta.block_of, e.block_of
            t_of = {theta.block_of[m.tests.const_T]: T,
                    theta.block_of[m.tests.const_F]: F,
                    theta.block_of[m.tests.const_U]: U}
            for a in range(m.tests.size):
                cls = t_of[tb[a]]
                for s in range(m.points):
                    for t_ in range(m.points):
                        out = pb[m.action[a, s, t_]]
                        if cls == T:
                            assert out == pb[s]
                        elif cls == F:
                            assert out == pb[t_]
                        else:
                            assert out == pb[0]


class TestSubdirect:
    def test_self_power_two_factors(self):
        m = self_cset(power(three(), 2))
        emb = subdirect_embed(m, agreeable=True)
        assert len(emb.factors) == 2
        assert emb.injective_points and emb.injective_tests
        assert emb.star_preserved is True
        report = emb.to_report()
        assert report["injective"] is True
        assert report["star_preserved"] is True
        assert len(report["factors"]) == 2

    def test_basic_identity_embedding(self):
        emb = subdirect_embed(basic_cset(4))
        assert len(emb.factors) == 1
        f = emb.factors[0]
        assert f.e_theta == Partition.delta(4)
        assert list(f.test_map) == [T, F, U]
        assert emb.star_preserved is None

    def test_functional_agreeable(self):
        emb = subdirect_embed(functional_cset(2), agreeable=True)
        assert len(emb.factors) == 2
        assert emb.injective and emb.star_preserved

    def test_factor_surjectivity(self):
        # subdirect: every factor value is hit on both sorts
        emb = subdirect_embed(functional_cset(2))
        for f in emb.factors:
            assert set(f.test_map.tolist()) == {T, F, U}
            assert set(f.point_map.tolist()) == set(range(f.e_theta.num_blocks))

    def test_rejects_non_ada_tests(self):
        m = self_cset(three())
        stripped = models.FiniteCSet(
            congruence.AlgebraTables(
                3, m.tests.and_table, m.tests.or_table, m.tests.neg_table,
                None, T, F, U
            ),
            m.points, m.action, m.star,
        )
        with pytest.raises(ModelError):
            subdirect_embed(stripped)

    def test_rejects_broken_model(self):
        m = basic_cset(3)
        m.action[T, 1, 2] = 2
        with pytest.raises(ModelError):
            subdirect_embed(m)


class TestUltrafilterRoute:
    def test_two_point_identity(self):
        b = models.basic_bset(3)
        emb = bset_ultrafilter_decompose(b)
        assert len(emb.factors) == 1
        assert emb.factors[0].e_theta == Partition.delta(3)
        assert emb.injective

    def test_functional_bset(self):
        b = functional_bset(2)
        emb = bset_ultrafilter_decompose(b)
        assert len(emb.factors) == 2
        assert emb.injective
        assert emb.star_preserved is True

    def test_filter_witness_reduces_to_atom(self):
        # the induced relation equals the one witnessed by the atom alone
        b = functional_bset(2)
        for atom in boolean_atoms(b.tests):
            in_filter = [g for g in range(b.tests.size)
                         if b.tests.op_and(g, atom) == atom]
            rng = np.arange(b.points)
            full = np.zeros((b.points, b.points), dtype=bool)
            for g in in_filter:
                full |= b.action[g] == rng[None, :]
            only_atom = b.action[atom] == rng[None, :]
            assert np.array_equal(full, only_atom)

    def test_rejects_cset(self):
        with pytest.raises(ModelError):
            bset_ultrafilter_decompose(basic_cset(3))


class TestRoundTrips:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_powerset_roundtrip(self, n):
        rep = boolean_ada_roundtrip(n)
        assert rep.boolean_size == 2**n
        assert rep.star_size == 3**n
        assert rep.ada_suite.passed
        assert rep.skeleton_matches
        assert rep.ada_roundtrip
        assert rep.passed

    def test_coarse_atoms(self):
        # universe of 3 points, two atom blocks: a 4-element algebra
        rep = boolean_ada_roundtrip(3, atom_blocks=[[0, 2], [1]])
        assert rep.boolean_size == 4
        assert rep.star_size == 9
        assert rep.passed

    def test_pairs_over_one_point_is_three(self):
        _, masks = powerset_algebra(1)
        star, _ = disjoint_pairs_ada(masks, 1)
        assert find_ada_isomorphism(star, three()) is not None

    def test_pairs_over_two_points_is_power(self):
        _, masks = powerset_algebra(2)
        star, _ = disjoint_pairs_ada(masks, 2)
        iso = find_ada_isomorphism(star, power(three(), 2))
        assert iso is not None

    @pytest.mark.parametrize("n", [1, 2])
    def test_rebuild_from_skeleton_on_powers(self, n):
        # an ada built independently of the pairs construction round-trips
        # through its Boolean part
        from itealg.congruence import ada_from_skeleton

        original = power(three(), n)
        rebuilt = ada_from_skeleton(original)
        assert rebuilt.size == original.size
        assert find_ada_isomorphism(rebuilt, original) is not None

    def test_boolean_iso(self):
        a, _ = powerset_algebra(2)
        assert find_boolean_isomorphism(a, power(two(), 2)) is not None
        b, _ = powerset_algebra(1)
        assert find_boolean_isomorphism(a, b) is None

    def test_non_isomorphic_adas(self):
        assert find_ada_isomorphism(three(), power(three(), 2)) is None

    def test_atoms(self):
        t, masks = powerset_algebra(3)
        atoms = boolean_atoms(t)
        assert sorted(masks[a] for a in atoms) == [1, 2, 4]

    def test_atoms_reject_non_boolean(self):
        from itealg.logic import LogicError

        with pytest.raises(LogicError):
            boolean_atoms(three())

    def test_iso_guard(self):
        a, _ = powerset_algebra(5)
        with pytest.raises(GuardError):
            find_boolean_isomorphism(a, a)

    def test_broken_pair_not_compatible(self):
        # merging T with F while keeping points apart breaks compatibility:
        # selection by the merged tests lands in different point classes
        m = basic_cset(3)
        pair = CongruencePair(Partition.delta(3), Partition.canonical([0, 0, 1]))
        assert not pair.is_compatible(m)

    def test_point_partitions_compatible_with_identity_tests(self):
        # with the identity test partition, selection never leaves a block
        m = basic_cset(3)
        pair = CongruencePair(Partition.canonical([0, 1, 1]), Partition.delta(3))
        assert pair.is_compatible(m)
