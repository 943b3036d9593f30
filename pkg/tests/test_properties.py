"""Randomized structural properties.

Random sub-models of products of selection models give conditional-action
models that none of the library constructors build directly; on every one
of them the axiom suites must pass and the subdirect decomposition must
come back injective with the equality test descending to the factors.
"""

import random
from itertools import product

import numpy as np
import pytest

from itealg import decision, models, terms
from itealg.congruence import subdirect_embed
from itealg.logic import AlgebraTables, T, F, U, power, three
from itealg.models import FiniteCSet, basic_action, basic_star


def product_cset(k1: int, k2: int) -> FiniteCSet:
    """Componentwise product of two selection models, over paired tests."""
    tests = power(three(), 2)
    pts = [(s1, s2) for s1 in range(k1) for s2 in range(k2)]
    pidx = {p: i for i, p in enumerate(pts)}
    # error state is the pair of error states; move it to index 0
    assert pts[0] == (0, 0)
    n = len(pts)
    action = np.zeros((tests.size, n, n), dtype=np.int64)
    star = np.zeros((n, n), dtype=np.int64)
    for a in range(tests.size):
        a1, a2 = a % 3, a // 3
        for i, (s1, s2) in enumerate(pts):
            for j, (t1, t2) in enumerate(pts):
                action[a, i, j] = pidx[(basic_action(a1, s1, t1), basic_action(a2, s2, t2))]
    for i, (s1, s2) in enumerate(pts):
        for j, (t1, t2) in enumerate(pts):
            star[i, j] = basic_star(s1, t1) + 3 * basic_star(s2, t2)
    m = FiniteCSet(tests, n, action, star)
    m.label = f"product:{k1}x{k2}"
    return m


def random_sub_cset(rng: random.Random, base: FiniteCSet) -> FiniteCSet:
    """Random substructure closed on both sorts: tests closed under the
    connectives and the equality-test values, points closed under the
    action."""
    tests = base.tests
    test_set = {tests.const_T, tests.const_F, tests.const_U}
    for _ in range(rng.randint(0, 2)):
        test_set.add(rng.randrange(tests.size))
    point_set = {0}
    for _ in range(rng.randint(1, 3)):
        point_set.add(rng.randrange(base.points))
    while True:
        new_tests = set(test_set)
        new_points = set(point_set)
        for a in test_set:
            new_tests.add(tests.op_neg(a))
            new_tests.add(tests.op_down(a))
            for b in test_set:
                new_tests.add(tests.op_and(a, b))
                new_tests.add(tests.op_or(a, b))
        for s in point_set:
            for t in point_set:
                new_tests.add(int(base.star[s, t]))
                for a in test_set:
                    new_points.add(int(base.action[a, s, t]))
        if new_tests == test_set and new_points == point_set:
            break
        test_set, point_set = new_tests, new_points

    t_elems = sorted(test_set)
    t_back = {old: new for new, old in enumerate(t_elems)}
    p_elems = sorted(point_set)
    p_back = {old: new for new, old in enumerate(p_elems)}
    k = len(t_elems)
    and_t = np.zeros((k, k), dtype=np.int64)
    or_t = np.zeros((k, k), dtype=np.int64)
    neg_t = np.zeros(k, dtype=np.int64)
    down_t = np.zeros(k, dtype=np.int64)
    for i, a in enumerate(t_elems):
        neg_t[i] = t_back[tests.op_neg(a)]
        down_t[i] = t_back[tests.op_down(a)]
        for j, b in enumerate(t_elems):
            and_t[i, j] = t_back[tests.op_and(a, b)]
            or_t[i, j] = t_back[tests.op_or(a, b)]
    sub_tests = AlgebraTables(
        k, and_t, or_t, neg_t, down_t,
        const_T=t_back[tests.const_T],
        const_F=t_back[tests.const_F],
        const_U=t_back[tests.const_U],
    )
    n = len(p_elems)
    action = np.zeros((k, n, n), dtype=np.int64)
    star = np.zeros((n, n), dtype=np.int64)
    for ai, a in enumerate(t_elems):
        for si, s in enumerate(p_elems):
            for ti, t in enumerate(p_elems):
                action[ai, si, ti] = p_back[int(base.action[a, s, t])]
    for si, s in enumerate(p_elems):
        for ti, t in enumerate(p_elems):
            star[si, ti] = t_back[int(base.star[s, t])]
    m = FiniteCSet(sub_tests, n, action, star)
    m.label = f"sub({base.label})[{k}t,{n}p]"
    return m


class TestRandomSubmodels:
    def test_random_submodels_decompose(self):
        rng = random.Random(310)
        bases = [product_cset(2, 3), product_cset(3, 3), product_cset(2, 2)]
        seen_sizes = set()
        for i in range(25):
            m = random_sub_cset(rng, bases[i % len(bases)])
            seen_sizes.add((m.tests.size, m.points))
            assert decision.verify_axiom_suite(m, "cset").passed, m.label
            assert decision.verify_axiom_suite(m, "agreeable").passed, m.label
            emb = subdirect_embed(m, agreeable=True)
            assert emb.injective_points and emb.injective_tests, m.label
            assert emb.star_preserved, m.label
            for f in emb.factors:
                assert set(f.test_map.tolist()) == {T, F, U}
        # the generator produced genuinely different shapes
        assert len(seen_sizes) > 3

    def test_full_products_decompose(self):
        for k1, k2 in ((2, 2), (2, 3), (3, 3)):
            m = product_cset(k1, k2)
            emb = subdirect_embed(m, agreeable=True)
            assert len(emb.factors) == 2
            assert emb.injective and emb.star_preserved
            sizes = sorted(f.e_theta.num_blocks for f in emb.factors)
            assert sizes == sorted((k1, k2))


class TestEThetaFallback:
    def test_down_fixed_witnesses_suffice(self):
        # the fallback pass over non-down-fixed tests adds no pairs: a
        # collapsing witness stays collapsing under down
        for m in (models.self_ada_cset(2), models.functional_cset(2),
                  product_cset(2, 3)):
            from itealg.congruence import maximal_congruences

            for theta in maximal_congruences(m.tests):
                tblock = [b for b in range(m.tests.size)
                          if theta.block_of[b] == theta.block_of[m.tests.const_T]]
                fixed = [b for b in tblock if m.tests.op_down(b) == b]
                rest = [b for b in tblock if m.tests.op_down(b) != b]
                rel_fixed = np.zeros((m.points, m.points), dtype=bool)
                for b in fixed:
                    page = m.action[b]
                    rel_fixed |= page == page.diagonal()[None, :]
                rel_full = rel_fixed.copy()
                for b in rest:
                    page = m.action[b]
                    rel_full |= page == page.diagonal()[None, :]
                assert np.array_equal(rel_fixed, rel_full)


class TestQuasiCounterexamples:
    def test_invalid_quasi_reports_witness(self):
        q = terms.parse_quasi("s*t = T => s = bot")
        v = decision.check_quasi_identity(q, "agcset")
        assert not v.valid
        # the witness satisfies the premise and violates the conclusion
        env = v.counterexample.raw_env
        assert env["s"] == env["t"] != 0

    def test_unsatisfiable_premises_vacuously_valid(self):
        q = terms.parse_quasi("T = F => s = bot")
        assert decision.check_quasi_identity(q, "agcset").valid
