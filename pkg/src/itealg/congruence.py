"""Congruences of finite test algebras and the subdirect decomposition of
conditional-action models into selection models.

Principal congruences are closed under the unary translations of the
operations (Mal'cev style); all congruences arise as joins of principal
ones.  For each maximal test congruence the induced point equivalence
relates s to t when some test in the T-block collapses the pair; the pair
of partitions is a two-sorted congruence and the product over all maximal
congruences separates points and tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .decision import GuardError, verify_axiom_suite
from .logic import (
    AlgebraTables,
    LogicError,
    SuiteReport,
    boolean_skeleton,
    classify_algebra,
    subalgebra,
)
from .models import FiniteBSet, FiniteCSet, ModelError

T, F, U = 0, 1, 2


@dataclass(frozen=True)
class Partition:
    """Partition of range(n) as a block-id tuple, canonicalized so block ids
    appear in first-occurrence order."""

    block_of: tuple[int, ...]

    @staticmethod
    def canonical(seq) -> "Partition":
        remap: dict[int, int] = {}
        out = []
        for b in seq:
            if b not in remap:
                remap[b] = len(remap)
            out.append(remap[b])
        return Partition(tuple(out))

    @staticmethod
    def delta(n: int) -> "Partition":
        return Partition(tuple(range(n)))

    @staticmethod
    def nabla(n: int) -> "Partition":
        return Partition((0,) * n)

    @property
    def n(self) -> int:
        return len(self.block_of)

    @property
    def num_blocks(self) -> int:
        return max(self.block_of) + 1 if self.block_of else 0

    def relates(self, a: int, b: int) -> bool:
        return self.block_of[a] == self.block_of[b]

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for i, b in enumerate(self.block_of):
            out[b].append(i)
        return out

    def refines(self, other: "Partition") -> bool:
        """Every block of self lies inside a block of other."""
        seen: dict[int, int] = {}
        for i, b in enumerate(self.block_of):
            o = other.block_of[i]
            if b in seen:
                if seen[b] != o:
                    return False
            else:
                seen[b] = o
        return True

    def join(self, other: "Partition") -> "Partition":
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[ry] = rx

        for part in (self, other):
            first: dict[int, int] = {}
            for i, b in enumerate(part.block_of):
                if b in first:
                    union(first[b], i)
                else:
                    first[b] = i
        return Partition.canonical(find(i) for i in range(self.n))


def _translations(t: AlgebraTables):
    """Unary polynomial translations generating congruence closure."""
    fns = [lambda x, t=t: int(t.neg_table[x])]
    if t.down_table is not None:
        fns.append(lambda x, t=t: int(t.down_table[x]))
    for c in range(t.size):
        fns.append(lambda x, t=t, c=c: int(t.and_table[x, c]))
        fns.append(lambda x, t=t, c=c: int(t.and_table[c, x]))
        fns.append(lambda x, t=t, c=c: int(t.or_table[x, c]))
        fns.append(lambda x, t=t, c=c: int(t.or_table[c, x]))
    return fns


def principal_congruence(t: AlgebraTables, a: int, b: int) -> Partition:
    """Smallest congruence relating a and b."""
    fns = _translations(t)
    parent = list(range(t.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = [(a, b)]
    while work:
        x, y = work.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[ry] = rx
        for f in fns:
            work.append((f(x), f(y)))
        # merging two classes relates all cross pairs; translations of the
        # generating pair chain through them, so pushing images of (x, y)
        # suffices
    return Partition.canonical(find(i) for i in range(t.size))


def respects_operations(t: AlgebraTables, p: Partition) -> bool:
    blocks = np.asarray(p.block_of, dtype=np.int64)
    for table in (t.and_table, t.or_table):
        b = blocks[table]
        for bi in range(p.num_blocks):
            rows = b[blocks == bi]
            for bj in range(p.num_blocks):
                cols = rows[:, blocks == bj]
                if cols.size and (cols != cols.flat[0]).any():
                    return False
    for table in (t.neg_table, t.down_table):
        if table is None:
            continue
        b = blocks[table]
        for bi in range(p.num_blocks):
            vals = b[blocks == bi]
            if vals.size and (vals != vals[0]).any():
                return False
    return True


def all_congruences(t: AlgebraTables, force: bool = False) -> list[Partition]:
    """Every operation-compatible partition, as joins of principal
    congruences.  Guarded above 27 elements."""
    if t.size > 27 and not force:
        raise GuardError(f"congruence closure over {t.size} elements; pass force=True")
    principals = set()
    for a in range(t.size):
        for b in range(a + 1, t.size):
            principals.add(principal_congruence(t, a, b))
    congs = {Partition.delta(t.size)} | principals
    frontier = list(congs)
    while frontier:
        nxt = []
        for c in frontier:
            for p in principals:
                j = c.join(p)
                if j not in congs:
                    congs.add(j)
                    nxt.append(j)
        frontier = nxt
    ordered = sorted(congs, key=lambda c: (c.num_blocks, c.block_of), reverse=True)
    return ordered


def quotient_tables(t: AlgebraTables, p: Partition) -> AlgebraTables:
    reps = [blk[0] for blk in p.blocks()]
    k = len(reps)
    blocks = p.block_of
    and_t = np.zeros((k, k), dtype=np.int64)
    or_t = np.zeros((k, k), dtype=np.int64)
    neg_t = np.zeros(k, dtype=np.int64)
    down_t = None if t.down_table is None else np.zeros(k, dtype=np.int64)
    for i, ri in enumerate(reps):
        neg_t[i] = blocks[t.op_neg(ri)]
        if down_t is not None:
            down_t[i] = blocks[t.op_down(ri)]
        for j, rj in enumerate(reps):
            and_t[i, j] = blocks[t.op_and(ri, rj)]
            or_t[i, j] = blocks[t.op_or(ri, rj)]
    return AlgebraTables(
        k, and_t, or_t, neg_t, down_t,
        const_T=blocks[t.const_T],
        const_F=blocks[t.const_F],
        const_U=None if t.const_U is None else blocks[t.const_U],
    )


def quotient_is_three(t: AlgebraTables, p: Partition) -> bool:
    """Quotient has exactly the three constant classes and their tables."""
    if t.const_U is None or t.down_table is None or p.num_blocks != 3:
        return False
    bt, bf, bu = p.block_of[t.const_T], p.block_of[t.const_F], p.block_of[t.const_U]
    if len({bt, bf, bu}) != 3:
        return False
    if not respects_operations(t, p):
        return False
    q = quotient_tables(t, p)
    from .logic import three

    remap = {bt: T, bf: F, bu: U}
    m = [remap[b] for b in range(3)]
    ref = three()
    for i in range(3):
        if m[q.op_neg(i)] != ref.op_neg(m[i]) or m[q.op_down(i)] != ref.op_down(m[i]):
            return False
        for j in range(3):
            if m[q.op_and(i, j)] != ref.op_and(m[i], m[j]):
                return False
            if m[q.op_or(i, j)] != ref.op_or(m[i], m[j]):
                return False
    return True


def maximal_congruences(t: AlgebraTables, force: bool = False) -> list[Partition]:
    """Maximal proper congruences; for tables passing the ada suite each
    quotient must be the three-element algebra."""
    congs = all_congruences(t, force=force)
    proper = [c for c in congs if c.num_blocks > 1]
    maximal = []
    for c in proper:
        if not any(other != c and c.refines(other) for other in proper):
            maximal.append(c)
    if t.down_table is not None and t.const_U is not None:
        for m in maximal:
            if not quotient_is_three(t, m):
                raise ModelError(
                    "maximal congruence quotient is not the three-element algebra; "
                    "input is not an ada"
                )
    return maximal


# -- point equivalence induced by a maximal test congruence --------------------


def e_theta(m: FiniteCSet, theta: Partition) -> Partition:
    """Points s, t are related when some test in the T-block of theta sends
    (s, t) to the same state as (t, t).

    Witness search runs over the down-fixed members of the T-block first;
    the remaining members are a fallback that provably adds nothing (a
    collapsing test stays collapsing under down).
    """
    tests = m.tests
    if theta.n != tests.size:
        raise ModelError("test partition size does not match the model")
    if not quotient_is_three(tests, theta):
        raise ModelError("theta is not a maximal congruence with three-element quotient")
    tblock = [b for b in range(tests.size)
              if theta.block_of[b] == theta.block_of[tests.const_T]]
    if tests.down_table is not None:
        fixed = [b for b in tblock if tests.op_down(b) == b]
    else:
        fixed = []
    rest = [b for b in tblock if b not in set(fixed)]
    rel = np.zeros((m.points, m.points), dtype=bool)
    for group in (fixed, rest):
        for b in group:
            page = m.action[b]
            rel |= page == page.diagonal()[None, :]
        if rel.all():
            break
    if not np.array_equal(rel, rel.T):
        raise ModelError("induced point relation is not symmetric")
    if not rel.diagonal().all():
        raise ModelError("induced point relation is not reflexive")
    closure = rel.copy()
    for k in range(m.points):
        closure |= closure[:, k][:, None] & closure[k, :][None, :]
    if not np.array_equal(closure, rel):
        raise ModelError("induced point relation is not transitive")
    block_of = [-1] * m.points
    nb = 0
    for i in range(m.points):
        if block_of[i] < 0:
            for j in range(i, m.points):
                if rel[i, j]:
                    block_of[j] = nb
            nb += 1
    return Partition.canonical(block_of)


@dataclass(frozen=True)
class CongruencePair:
    point_partition: Partition
    test_partition: Partition

    def is_compatible(self, m) -> bool:
        """(s,t),(u,v) related and (a,b) related imply a[s,u] ~ b[t,v]:
        equivalently, the point block of a[s,u] depends only on the blocks
        of a, s, u."""
        pb = np.asarray(self.point_partition.block_of, dtype=np.int64)
        tb = np.asarray(self.test_partition.block_of, dtype=np.int64)
        mapped = pb[m.action]
        for ta in range(self.test_partition.num_blocks):
            sel_a = tb == ta
            for ps in range(self.point_partition.num_blocks):
                sel_s = pb == ps
                for pu in range(self.point_partition.num_blocks):
                    vals = mapped[np.ix_(sel_a, sel_s, pb == pu)]
                    if vals.size and (vals != vals.flat[0]).any():
                        return False
        return True


# -- subdirect decomposition ----------------------------------------------------


@dataclass
class Factor:
    theta: Partition
    e_theta: Partition
    test_map: np.ndarray
    point_map: np.ndarray


@dataclass
class Embedding:
    factors: list[Factor]
    injective_points: bool
    injective_tests: bool
    star_preserved: bool | None

    @property
    def injective(self) -> bool:
        return self.injective_points and self.injective_tests

    def to_report(self) -> dict:
        return {
            "factors": [
                {"theta": f.theta.blocks(), "e_theta": f.e_theta.blocks()}
                for f in self.factors
            ],
            "injective": self.injective,
            "star_preserved": self.star_preserved,
        }


def _require_suite(model, suite):
    report = verify_axiom_suite(model, suite)
    if not report.passed:
        bad = report.first_failure()
        raise ModelError(f"model fails {suite} axiom {bad.label} at {bad.witness}")


def _factor_for(m: FiniteCSet, theta: Partition) -> Factor:
    e = e_theta(m, theta)
    tm = np.zeros(m.tests.size, dtype=np.int64)
    remap = {
        theta.block_of[m.tests.const_T]: T,
        theta.block_of[m.tests.const_F]: F,
        theta.block_of[m.tests.const_U]: U,
    }
    for a in range(m.tests.size):
        tm[a] = remap[theta.block_of[a]]
    pm = np.asarray(e.block_of, dtype=np.int64)
    if pm[0] != 0:
        raise ModelError("error-state class must be factor point 0")
    # two-sorted homomorphism: the image of a[s,t] is selection by the
    # image test on the image points
    lhs = pm[m.action]
    rhs = np.zeros_like(lhs)
    rhs[tm == T] = pm[:, None]
    rhs[tm == F] = pm[None, :]
    rhs[tm == U] = 0
    if not np.array_equal(lhs, rhs):
        raise ModelError("factor map is not a homomorphism")
    return Factor(theta, e, tm, pm)


def subdirect_embed(m: FiniteCSet, agreeable: bool = False, force: bool = False) -> Embedding:
    """Decompose a model into selection-model factors, one per maximal test
    congruence, and verify the product map is injective on both sorts.

    With agreeable=True the equality test must exist and descend to each
    factor's canonical equality test.
    """
    if not isinstance(m, FiniteCSet):
        raise ModelError("subdirect decomposition expects an error-state model")
    try:
        report = classify_algebra(m.tests, "ada")
    except LogicError as exc:
        raise ModelError(str(exc)) from exc
    if not report.passed:
        bad = report.first_failure()
        raise ModelError(f"tests fail ada axiom {bad.label} at {bad.witness}")
    _require_suite(m, "cset")
    if agreeable:
        if m.star is None:
            raise ModelError("agreeable decomposition needs a star table")
        _require_suite(m, "agreeable")
    factors = [_factor_for(m, theta) for theta in maximal_congruences(m.tests, force=force)]
    star_preserved: bool | None = None
    if agreeable:
        star_preserved = True
        for f in factors:
            got = f.test_map[m.star]
            ps, pt = f.point_map[:, None], f.point_map[None, :]
            expected = np.where((ps == 0) | (pt == 0), U, np.where(ps == pt, T, F))
            if not np.array_equal(got, expected):
                star_preserved = False
                raise ModelError("equality test does not descend to a factor")
    pmat = np.stack([f.point_map for f in factors])
    tmat = np.stack([f.test_map for f in factors])
    inj_p = len({tuple(col) for col in pmat.T.tolist()}) == m.points
    inj_t = len({tuple(col) for col in tmat.T.tolist()}) == m.tests.size
    if not (inj_p and inj_t):
        raise ModelError("product map is not injective; an axiom suite was violated upstream")
    return Embedding(factors, inj_p, inj_t, star_preserved)


# -- halting models: one factor per ultrafilter ---------------------------------


def boolean_atoms(t: AlgebraTables) -> list[int]:
    """Atoms of a Boolean algebra given by tables."""
    report = classify_algebra(t, "boolean")
    if not report.passed:
        bad = report.first_failure()
        raise LogicError(f"tables fail boolean axiom {bad.label} at {bad.witness}")
    out = []
    for a in range(t.size):
        if a == t.const_F:
            continue
        below = [b for b in range(t.size) if t.op_and(b, a) == b]
        if len(below) == 2:
            out.append(a)
    return out


def bset_ultrafilter_decompose(m: FiniteBSet) -> Embedding:
    """Decompose a halting model into two-valued selection factors, one per
    ultrafilter of its Boolean tests (one per atom, in the finite case)."""
    if not isinstance(m, FiniteBSet):
        raise ModelError("ultrafilter decomposition expects a halting model")
    _require_suite(m, "bset")
    if m.star is not None:
        _require_suite(m, "agbset")
    atoms = boolean_atoms(m.tests)
    factors = []
    star_preserved: bool | None = None if m.star is None else True
    rng = np.arange(m.points)
    for atom in atoms:
        in_filter = np.array(
            [m.tests.op_and(g, atom) == atom for g in range(m.tests.size)], dtype=bool
        )
        tm = np.where(in_filter, T, F).astype(np.int64)
        theta = Partition.canonical(0 if f else 1 for f in in_filter)
        rel = np.zeros((m.points, m.points), dtype=bool)
        for g in np.nonzero(in_filter)[0]:
            rel |= m.action[g] == rng[None, :]
        if not (np.array_equal(rel, rel.T) and rel.diagonal().all()):
            raise ModelError("ultrafilter point relation is not an equivalence")
        closure = rel.copy()
        for k in range(m.points):
            closure |= closure[:, k][:, None] & closure[k, :][None, :]
        if not np.array_equal(closure, rel):
            raise ModelError("ultrafilter point relation is not transitive")
        block_of = [-1] * m.points
        nb = 0
        for i in range(m.points):
            if block_of[i] < 0:
                for j in range(i, m.points):
                    if rel[i, j]:
                        block_of[j] = nb
                nb += 1
        e = Partition.canonical(block_of)
        pm = np.asarray(e.block_of, dtype=np.int64)
        lhs = pm[m.action]
        rhs = np.zeros_like(lhs)
        rhs[tm == T] = pm[:, None]
        rhs[tm == F] = pm[None, :]
        if not np.array_equal(lhs, rhs):
            raise ModelError("ultrafilter factor map is not a homomorphism")
        if m.star is not None:
            got = tm[m.star]
            expected = np.where(pm[:, None] == pm[None, :], T, F)
            if not np.array_equal(got, expected):
                raise ModelError("equality test does not descend to an ultrafilter factor")
        factors.append(Factor(theta, e, tm, pm))
    pmat = np.stack([f.point_map for f in factors])
    tmat = np.stack([f.test_map for f in factors])
    inj_p = len({tuple(col) for col in pmat.T.tolist()}) == m.points
    inj_t = len({tuple(col) for col in tmat.T.tolist()}) == m.tests.size
    if not (inj_p and inj_t):
        raise ModelError("ultrafilter product map is not injective")
    return Embedding(factors, inj_p, inj_t, star_preserved)


# -- Boolean algebras of subsets and the disjoint-pairs construction ------------


def powerset_algebra(universe_size: int, atom_blocks=None) -> tuple[AlgebraTables, list[int]]:
    """Boolean algebra of subsets of a finite universe, as masks.

    atom_blocks optionally partitions the universe; the algebra then
    consists of the unions of blocks (default: all singletons, the full
    power set).
    """
    n = universe_size
    full = (1 << n) - 1
    if atom_blocks is None:
        atom_blocks = [[x] for x in range(n)]
    block_masks = []
    seen = 0
    for blk in atom_blocks:
        mask = 0
        for x in blk:
            if not 0 <= x < n or seen >> x & 1:
                raise LogicError("atom blocks must partition the universe")
            mask |= 1 << x
        if mask == 0:
            raise LogicError("empty atom block")
        seen |= mask
        block_masks.append(mask)
    if seen != full:
        raise LogicError("atom blocks must cover the universe")
    k = len(block_masks)
    masks = sorted(
        {sum(block_masks[j] for j in range(k) if sel >> j & 1) for sel in range(1 << k)}
    )
    index = {mask: i for i, mask in enumerate(masks)}
    size = len(masks)
    and_t = np.zeros((size, size), dtype=np.int64)
    or_t = np.zeros((size, size), dtype=np.int64)
    neg_t = np.zeros(size, dtype=np.int64)
    for i, p in enumerate(masks):
        neg_t[i] = index[full & ~p]
        for j, q in enumerate(masks):
            and_t[i, j] = index[p & q]
            or_t[i, j] = index[p | q]
    tables = AlgebraTables(size, and_t, or_t, neg_t, None,
                           const_T=index[full], const_F=index[0], const_U=None)
    return tables, masks


def disjoint_pairs_ada(masks: list[int], universe_size: int) -> tuple[AlgebraTables, list[tuple[int, int]]]:
    """The algebra of disjoint pairs (true-set, false-set) drawn from a
    Boolean algebra of subsets, with the pairwise operations and down."""
    full = (1 << universe_size) - 1
    mask_set = set(masks)
    pairs = sorted((p, q) for p in masks for q in masks if p & q == 0)
    index = {pq: i for i, pq in enumerate(pairs)}
    size = len(pairs)

    def conv(p, q):
        if p not in mask_set or q not in mask_set or (p, q) not in index:
            raise LogicError("pair operations escaped the algebra")
        return index[(p, q)]

    and_t = np.zeros((size, size), dtype=np.int64)
    or_t = np.zeros((size, size), dtype=np.int64)
    neg_t = np.zeros(size, dtype=np.int64)
    down_t = np.zeros(size, dtype=np.int64)
    for i, (p1, q1) in enumerate(pairs):
        neg_t[i] = conv(q1, p1)
        down_t[i] = conv(p1, full & ~p1)
        for j, (p2, q2) in enumerate(pairs):
            and_t[i, j] = conv(p1 & p2, q1 | (p1 & q2))
            or_t[i, j] = conv(p1 | (q1 & p2), q1 & q2)
    tables = AlgebraTables(
        size, and_t, or_t, neg_t, down_t,
        const_T=index[(full, 0)], const_F=index[(0, full)], const_U=index[(0, 0)],
    )
    return tables, pairs


# -- isomorphism search ----------------------------------------------------------


def _atom_masks(skel: AlgebraTables) -> dict[int, int]:
    """Map each element of a Boolean algebra to the bit mask of atoms below it."""
    atoms = boolean_atoms(skel)
    out = {}
    for e in range(skel.size):
        mask = 0
        for j, a in enumerate(atoms):
            if skel.op_and(a, e) == a:
                mask |= 1 << j
        out[e] = mask
    return out


def find_boolean_isomorphism(a: AlgebraTables, b: AlgebraTables,
                             force: bool = False) -> list[int] | None:
    """Boolean isomorphism a -> b as a mapping list, or None.

    Searches atom bijections only: a Boolean isomorphism is determined by
    where it sends the atoms.
    """
    if a.size != b.size:
        return None
    if a.size > 27 and not force:
        raise GuardError("isomorphism search guarded above 27 elements")
    atoms_a, atoms_b = boolean_atoms(a), boolean_atoms(b)
    if len(atoms_a) != len(atoms_b):
        return None
    masks_a = _atom_masks(a)
    masks_b = _atom_masks(b)
    by_mask_b = {m: e for e, m in masks_b.items()}
    for perm in permutations(range(len(atoms_b))):
        mapping = []
        for e in range(a.size):
            img_mask = 0
            for j in range(len(atoms_a)):
                if masks_a[e] >> j & 1:
                    img_mask |= 1 << perm[j]
            mapping.append(by_mask_b[img_mask])
        if _is_homomorphism(a, b, mapping, check_down=False):
            return mapping
    return None


def _is_homomorphism(a: AlgebraTables, b: AlgebraTables, h: list[int], check_down: bool) -> bool:
    if h[a.const_T] != b.const_T or h[a.const_F] != b.const_F:
        return False
    if a.const_U is not None and (b.const_U is None or h[a.const_U] != b.const_U):
        return False
    for i in range(a.size):
        if h[a.op_neg(i)] != b.op_neg(h[i]):
            return False
        if check_down and h[a.op_down(i)] != b.op_down(h[i]):
            return False
        for j in range(a.size):
            if h[a.op_and(i, j)] != b.op_and(h[i], h[j]):
                return False
            if h[a.op_or(i, j)] != b.op_or(h[i], h[j]):
                return False
    return True


def find_ada_isomorphism(a: AlgebraTables, b: AlgebraTables,
                         force: bool = False) -> list[int] | None:
    """Ada isomorphism search via skeleton atoms.

    Every element is pinned by the pair (down of it, down of its negation),
    both in the Boolean skeleton, so a skeleton isomorphism extends in at
    most one way; candidates come from atom bijections of the skeletons.
    """
    if a.size != b.size:
        return None
    if a.size > 27 and not force:
        raise GuardError("isomorphism search guarded above 27 elements")
    skel_a, elems_a = subalgebra(a, boolean_skeleton(a))
    skel_b, elems_b = subalgebra(b, boolean_skeleton(b))
    if skel_a.size != skel_b.size:
        return None
    pos_b = {e: i for i, e in enumerate(elems_b)}

    def key_b(beta):
        return (b.op_down(beta), b.op_down(b.op_neg(beta)))

    by_key_b = {}
    for beta in range(b.size):
        by_key_b[key_b(beta)] = beta

    skel_a_plain = AlgebraTables(skel_a.size, skel_a.and_table, skel_a.or_table,
                                 skel_a.neg_table, None, skel_a.const_T, skel_a.const_F, None)
    skel_b_plain = AlgebraTables(skel_b.size, skel_b.and_table, skel_b.or_table,
                                 skel_b.neg_table, None, skel_b.const_T, skel_b.const_F, None)
    atoms_a = boolean_atoms(skel_a_plain)
    atoms_b = boolean_atoms(skel_b_plain)
    if len(atoms_a) != len(atoms_b):
        return None
    masks_a = _atom_masks(skel_a_plain)
    masks_b = _atom_masks(skel_b_plain)
    by_mask_b = {m: e for e, m in masks_b.items()}
    for perm in permutations(range(len(atoms_b))):
        skel_map = {}
        for e in range(skel_a.size):
            img_mask = 0
            for j in range(len(atoms_a)):
                if masks_a[e] >> j & 1:
                    img_mask |= 1 << perm[j]
            skel_map[elems_a[e]] = elems_b[by_mask_b[img_mask]]
        mapping = []
        good = True
        for alpha in range(a.size):
            k0 = skel_map[a.op_down(alpha)]
            k1 = skel_map[a.op_down(a.op_neg(alpha))]
            beta = by_key_b.get((k0, k1))
            if beta is None:
                good = False
                break
            mapping.append(beta)
        if not good or len(set(mapping)) != a.size:
            continue
        if _is_homomorphism(a, b, mapping, check_down=True):
            return mapping
    return None


# -- round trips between Boolean algebras and pair adas ---------------------------


@dataclass
class RoundtripReport:
    boolean_size: int
    star_size: int
    ada_suite: SuiteReport
    skeleton_matches: bool
    ada_roundtrip: bool

    @property
    def passed(self) -> bool:
        return self.ada_suite.passed and self.skeleton_matches and self.ada_roundtrip

    def to_json(self) -> dict:
        return {
            "boolean_size": self.boolean_size,
            "star_size": self.star_size,
            "ada_suite": self.ada_suite.to_json(),
            "skeleton_matches": self.skeleton_matches,
            "ada_roundtrip": self.ada_roundtrip,
            "passed": self.passed,
        }


def ada_from_skeleton(t: AlgebraTables, force: bool = False) -> AlgebraTables:
    """Rebuild an algebra of disjoint pairs from the Boolean part of an ada,
    representing the Boolean part by its atoms."""
    skel_sub, _ = subalgebra(t, boolean_skeleton(t))
    skel_plain = AlgebraTables(skel_sub.size, skel_sub.and_table, skel_sub.or_table,
                               skel_sub.neg_table, None, skel_sub.const_T, skel_sub.const_F, None)
    masks = sorted(_atom_masks(skel_plain).values())
    n_atoms = len(boolean_atoms(skel_plain))
    rebuilt, _ = disjoint_pairs_ada(masks, n_atoms)
    return rebuilt


def boolean_ada_roundtrip(universe_size: int, atom_blocks=None, force: bool = False) -> RoundtripReport:
    """Build the disjoint-pairs algebra over a Boolean algebra of subsets,
    check it passes the ada suite, its Boolean part recovers the input, and
    rebuilding from that Boolean part recovers the pair algebra."""
    b_tables, masks = powerset_algebra(universe_size, atom_blocks)
    full = (1 << universe_size) - 1
    star_tables, pairs = disjoint_pairs_ada(masks, universe_size)
    ada_suite = classify_algebra(star_tables, "ada")

    pair_index = {pq: i for i, pq in enumerate(pairs)}
    skel = set(boolean_skeleton(star_tables))
    expected_skel = {pair_index[(p, full & ~p)] for p in masks}
    skeleton_matches = skel == expected_skel
    if skeleton_matches:
        mapping = [pair_index[(p, full & ~p)] for p in masks]
        skeleton_matches = _is_homomorphism(b_tables, star_tables, mapping, check_down=False)

    rebuilt = ada_from_skeleton(star_tables, force=force)
    ada_roundtrip = find_ada_isomorphism(rebuilt, star_tables, force=force) is not None
    return RoundtripReport(
        boolean_size=b_tables.size,
        star_size=star_tables.size,
        ada_suite=ada_suite,
        skeleton_matches=skeleton_matches,
        ada_roundtrip=ada_roundtrip,
    )
