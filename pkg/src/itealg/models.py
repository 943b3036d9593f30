"""Finite conditional-action models, table-driven.

Two shapes:

* FiniteCSet — a pointed set of program states (index 0 is the error state
  `bot`) acted on by a test algebra with T, F, U.  The U row of the action
  is constantly `bot` and the F row returns the else-branch; both are
  enforced at construction so malformed ingested models fail fast.
* FiniteBSet — the halting analogue: no error state, Boolean tests.

Both may carry an optional equality-test table `star` mapping a pair of
points to a test.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
import numpy as np

from .logic import (
    AlgebraTables,
    F,
    LogicError,
    T,
    TestVector,
    U,
    boolean_skeleton,
    element_name,
    power,
    subalgebra,
    three,
    two,
)


class ModelError(ValueError):
    """Malformed or inconsistent model data."""


# -- pointwise building blocks ------------------------------------------------


def basic_action(alpha: int, s: int, t: int) -> int:
    """Selection by a bare truth value: T picks s, F picks t, U errors out.

    Points are indices with 0 = bot.
    """
    if alpha == T:
        return s
    if alpha == F:
        return t
    if alpha == U:
        return 0
    raise ModelError(f"not a truth value: {alpha!r}")


def basic_star(s: int, t: int) -> int:
    """Equality test on points: U if either is bot, else T iff equal."""
    if s == 0 or t == 0:
        return U
    return T if s == t else F


@dataclass(frozen=True)
class PartialFn:
    """A possibly-undefined program over a finite input set.

    Stored as the restriction to the inputs: image[x] is None where the
    program diverges.  The error point itself always maps to error, so it
    is not stored.
    """

    universe_size: int
    image: tuple[int | None, ...]

    def __post_init__(self):
        if len(self.image) != self.universe_size:
            raise ModelError("image length differs from universe size")
        for y in self.image:
            if y is not None and not 0 <= y < self.universe_size:
                raise ModelError(f"image value {y!r} outside universe")
        object.__setattr__(self, "image", tuple(self.image))

    @classmethod
    def everywhere_undefined(cls, universe_size: int) -> "PartialFn":
        return cls(universe_size, (None,) * universe_size)

    def __call__(self, x: int) -> int | None:
        return self.image[x]

    def domain(self) -> frozenset[int]:
        return frozenset(x for x in range(self.universe_size) if self.image[x] is not None)


def fn_action(alpha, f: PartialFn, g: PartialFn) -> PartialFn:
    """if alpha then f else g, pointwise: f where the test is true, g where
    false, undefined where the test diverges."""
    n = f.universe_size
    if g.universe_size != n or alpha.universe_size != n:
        raise ModelError("universe sizes differ")
    out = []
    for x in range(n):
        v = alpha.value_at(x)
        if v == T:
            out.append(f(x))
        elif v == F:
            out.append(g(x))
        else:
            out.append(None)
    return PartialFn(n, tuple(out))


def fn_star(f: PartialFn, g: PartialFn) -> TestVector:
    """Equality test of two programs: true where both are defined and agree,
    false where both are defined and differ, diverging elsewhere."""
    n = f.universe_size
    if g.universe_size != n:
        raise ModelError("universe sizes differ")
    trues, falses = 0, 0
    for x in range(n):
        a, b = f(x), g(x)
        if a is None or b is None:
            continue
        if a == b:
            trues |= 1 << x
        else:
            falses |= 1 << x
    return TestVector(n, trues, falses)


def self_action(t: AlgebraTables, alpha: int, beta: int, gamma: int) -> int:
    """The algebra acting on itself: (alpha & beta) | (~alpha & gamma)."""
    return t.op_or(t.op_and(alpha, beta), t.op_and(t.op_neg(alpha), gamma))


def self_star(t: AlgebraTables, alpha: int, beta: int) -> int:
    """Equality test inside the algebra: (alpha & beta) | (~alpha & ~beta)."""
    return t.op_or(t.op_and(alpha, beta), t.op_and(t.op_neg(alpha), t.op_neg(beta)))


# -- table-driven models -------------------------------------------------------


def _check_action_shape(tests, points, action):
    action = np.asarray(action, dtype=np.int64)
    if action.shape != (tests.size, points, points):
        raise ModelError(f"action table has shape {action.shape}, expected "
                         f"({tests.size}, {points}, {points})")
    if points and (action.min() < 0 or action.max() >= points):
        raise ModelError("action entry out of range")
    return action


def _check_star_shape(tests, points, star):
    star = np.asarray(star, dtype=np.int64)
    if star.shape != (points, points):
        raise ModelError(f"star table has shape {star.shape}, expected ({points}, {points})")
    if points and (star.min() < 0 or star.max() >= tests.size):
        raise ModelError("star entry out of range")
    return star


@dataclass(eq=False)
class FiniteCSet:
    tests: AlgebraTables
    points: int
    action: np.ndarray
    star: np.ndarray | None = None
    label: str = "cset"

    def __post_init__(self):
        if self.tests.const_U is None:
            raise ModelError("tests of a C-set need a U constant")
        if self.points < 1:
            raise ModelError("need at least the bot point")
        self.action = _check_action_shape(self.tests, self.points, self.action)
        if (self.action[self.tests.const_U] != 0).any():
            raise ModelError("U row of the action must be constantly bot")
        expect = np.broadcast_to(np.arange(self.points), (self.points, self.points))
        if not np.array_equal(self.action[self.tests.const_F], expect):
            raise ModelError("F row of the action must return the else branch")
        if self.star is not None:
            self.star = _check_star_shape(self.tests, self.points, self.star)
            cu = self.tests.const_U
            if (self.star[0, :] != cu).any() or (self.star[:, 0] != cu).any():
                raise ModelError("star against bot must be U")

    def point_name(self, i: int) -> str:
        return "bot" if i == 0 else f"s{i}"

    def test_name(self, i: int) -> str:
        return element_name(self.tests, i)

    def to_json(self) -> dict:
        return {
            "tests": self.tests.to_json(),
            "points": self.points,
            "action": self.action.tolist(),
            "star": None if self.star is None else self.star.tolist(),
        }


@dataclass(eq=False)
class FiniteBSet:
    tests: AlgebraTables
    points: int
    action: np.ndarray
    star: np.ndarray | None = None
    label: str = "bset"

    def __post_init__(self):
        if self.tests.const_U is not None:
            raise ModelError("tests of a B-set must not have a U constant")
        if self.points < 1:
            raise ModelError("need at least one point")
        self.action = _check_action_shape(self.tests, self.points, self.action)
        expect = np.broadcast_to(np.arange(self.points), (self.points, self.points))
        if not np.array_equal(self.action[self.tests.const_F], expect):
            raise ModelError("F row of the action must return the else branch")
        if self.star is not None:
            self.star = _check_star_shape(self.tests, self.points, self.star)

    def point_name(self, i: int) -> str:
        return f"s{i + 1}"

    def test_name(self, i: int) -> str:
        return element_name(self.tests, i)

    def to_json(self) -> dict:
        return {
            "tests": self.tests.to_json(),
            "points": self.points,
            "action": self.action.tolist(),
            "star": None if self.star is None else self.star.tolist(),
        }


def model_from_json(obj: dict) -> FiniteCSet | FiniteBSet:
    try:
        tests = AlgebraTables.from_json(obj["tests"])
        points = int(obj["points"])
        action = obj["action"]
        star = obj.get("star")
    except (KeyError, TypeError) as exc:
        raise ModelError(f"malformed model: {exc}") from exc
    cls = FiniteBSet if tests.const_U is None else FiniteCSet
    try:
        return cls(tests, points, action, star)
    except LogicError as exc:
        raise ModelError(str(exc)) from exc


def load_model(path: str) -> FiniteCSet | FiniteBSet:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}: {exc}") from exc
    m = model_from_json(obj)
    m.label = path
    return m


def table_eval(m: FiniteCSet | FiniteBSet, kind: str, indices: tuple[int, ...]) -> int:
    """Raw table lookup with range checks; kind is 'action' or 'star'."""
    if kind == "action":
        a, s, t = indices
        if not (0 <= a < m.tests.size and 0 <= s < m.points and 0 <= t < m.points):
            raise ModelError("action index out of range")
        return int(m.action[a, s, t])
    if kind == "star":
        if m.star is None:
            raise ModelError("model has no star table")
        s, t = indices
        if not (0 <= s < m.points and 0 <= t < m.points):
            raise ModelError("star index out of range")
        return int(m.star[s, t])
    raise ModelError(f"unknown table kind {kind!r}")


# -- constructors ---------------------------------------------------------------


def basic_cset(points: int, with_star: bool = True) -> FiniteCSet:
    """Selection model: `points` states including bot, tests = {T, F, U}."""
    if points < 1:
        raise ModelError("need at least the bot point")
    tests = three()
    action = np.zeros((3, points, points), dtype=np.int64)
    rng = np.arange(points)
    action[T] = rng[:, None]
    action[F] = rng[None, :]
    action[U] = 0
    star = None
    if with_star:
        star = np.zeros((points, points), dtype=np.int64)
        for s in range(points):
            for t in range(points):
                star[s, t] = basic_star(s, t)
    m = FiniteCSet(tests, points, action, star)
    m.label = f"basic:{points}"
    return m


def basic_bset(points: int, with_star: bool = True) -> FiniteBSet:
    """Halting selection model: tests = {T, F}, no error state."""
    if points < 1:
        raise ModelError("need at least one point")
    tests = two()
    action = np.zeros((2, points, points), dtype=np.int64)
    rng = np.arange(points)
    action[T] = rng[:, None]
    action[F] = rng[None, :]
    star = None
    if with_star:
        star = np.where(np.eye(points, dtype=bool), T, F).astype(np.int64)
    m = FiniteBSet(tests, points, action, star)
    m.label = f"basic-bset:{points}"
    return m


def _fn_decode(code: int, n: int) -> PartialFn:
    img = []
    for _ in range(n):
        d = code % (n + 1)
        code //= n + 1
        img.append(None if d == 0 else d - 1)
    return PartialFn(n, tuple(img))


def _fn_encode(f: PartialFn) -> int:
    code = 0
    for x in range(f.universe_size - 1, -1, -1):
        y = f(x)
        code = code * (f.universe_size + 1) + (0 if y is None else y + 1)
    return code


def _vec_decode(code: int, n: int) -> TestVector:
    return TestVector.from_codes([(code // 3**x) % 3 for x in range(n)])


def _vec_encode(v) -> int:
    return sum(v.value_at(x) * 3**x for x in range(v.universe_size))


def functional_cset(universe_size: int, with_star: bool = True) -> FiniteCSet:
    """All possibly-undefined programs on a universe of the given size,
    acted on by all three-valued tests over that universe.

    Point 0 is the everywhere-undefined program.  (n+1)^n points and 3^n
    tests, so keep the universe small.
    """
    n = universe_size
    if n < 0:
        raise ModelError("universe size must be >= 0")
    tests = power(three(), n)
    npoints = (n + 1) ** n
    fns = [_fn_decode(c, n) for c in range(npoints)]
    vecs = [_vec_decode(c, n) for c in range(tests.size)]
    action = np.zeros((tests.size, npoints, npoints), dtype=np.int64)
    for a, alpha in enumerate(vecs):
        for i, f in enumerate(fns):
            for j, g in enumerate(fns):
                action[a, i, j] = _fn_encode(fn_action(alpha, f, g))
    star = None
    if with_star:
        star = np.zeros((npoints, npoints), dtype=np.int64)
        for i, f in enumerate(fns):
            for j, g in enumerate(fns):
                star[i, j] = _vec_encode(fn_star(f, g))
    m = FiniteCSet(tests, npoints, action, star)
    m.label = f"functional:{n}"
    return m


def self_cset(tables: AlgebraTables, with_star: bool = True) -> FiniteCSet:
    """The algebra acting on itself, with U as the error point.

    Points are the algebra elements re-indexed so that U comes first.
    """
    from .logic import classify_algebra

    report = classify_algebra(tables, "c_algebra")
    if not report.passed:
        bad = report.first_failure()
        raise ModelError(f"tables fail c_algebra axiom {bad.label} at {bad.witness}")
    if tables.const_U is None:
        raise ModelError("self-action model needs a U constant")
    perm = [tables.const_U] + [i for i in range(tables.size) if i != tables.const_U]
    to_point = {alg: pt for pt, alg in enumerate(perm)}
    npoints = tables.size
    action = np.zeros((tables.size, npoints, npoints), dtype=np.int64)
    for a in range(tables.size):
        for i in range(npoints):
            for j in range(npoints):
                action[a, i, j] = to_point[self_action(tables, a, perm[i], perm[j])]
    star = None
    if with_star:
        star = np.zeros((npoints, npoints), dtype=np.int64)
        for i in range(npoints):
            for j in range(npoints):
                star[i, j] = self_star(tables, perm[i], perm[j])
    m = FiniteCSet(tables, npoints, action, star)
    m.label = f"self:{tables.size}"
    return m


def self_ada_cset(exponent: int, with_star: bool = True) -> FiniteCSet:
    """Self-action model over the `exponent`-th power of the three-element
    test algebra."""
    m = self_cset(power(three(), exponent), with_star=with_star)
    m.label = f"self-ada:{exponent}"
    return m


def functional_bset(universe_size: int, with_star: bool = True) -> FiniteBSet:
    """All total programs on a universe, acted on by Boolean tests.

    n^n points, 2^n tests; subsets are encoded as bit masks.
    """
    n = universe_size
    if n < 1:
        raise ModelError("universe size must be >= 1")
    ntests = 1 << n
    full = ntests - 1
    and_t = np.zeros((ntests, ntests), dtype=np.int64)
    or_t = np.zeros((ntests, ntests), dtype=np.int64)
    neg_t = np.zeros(ntests, dtype=np.int64)
    for a in range(ntests):
        neg_t[a] = full & ~a
        for b in range(ntests):
            and_t[a, b] = a & b
            or_t[a, b] = a | b
    tests = AlgebraTables(ntests, and_t, or_t, neg_t, None, const_T=full, const_F=0, const_U=None)

    npoints = n**n
    def decode(code):
        out = []
        for _ in range(n):
            out.append(code % n)
            code //= n
        return out

    fns = [decode(c) for c in range(npoints)]
    def encode(img):
        code = 0
        for x in range(n - 1, -1, -1):
            code = code * n + img[x]
        return code

    action = np.zeros((ntests, npoints, npoints), dtype=np.int64)
    star = np.zeros((npoints, npoints), dtype=np.int64) if with_star else None
    for a in range(ntests):
        for i, f in enumerate(fns):
            for j, g in enumerate(fns):
                img = [f[x] if a >> x & 1 else g[x] for x in range(n)]
                action[a, i, j] = encode(img)
    if with_star:
        for i, f in enumerate(fns):
            for j, g in enumerate(fns):
                star[i, j] = sum(1 << x for x in range(n) if f[x] == g[x])
    m = FiniteBSet(tests, npoints, action, star)
    m.label = f"bset-functional:{n}"
    return m


def bset_view(m: FiniteCSet) -> FiniteBSet:
    """Restrict a model to the Boolean part of its tests.

    The resulting tests all satisfy a | ~a = T, so selection by any of them
    never reaches the error state row; the view satisfies the halting-model
    axioms.  The equality test does not restrict (it returns U against bot),
    so the view drops star.
    """
    skel = boolean_skeleton(m.tests)
    sub, elems = subalgebra(m.tests, skel, keep_down=False)
    action = m.action[np.array(elems, dtype=np.int64)]
    view = FiniteBSet(sub, m.points, action, None)
    view.label = f"{m.label}#boolean"
    return view
