"""Three-valued test logic: truth values, test vectors, finite operation tables.

Truth values are encoded as integers package-wide: T=0, F=1, U=2.  U is the
diverging ("undefined") outcome of a test; the binary connectives evaluate
their left operand first, so U on the left swallows the right operand.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

T, F, U = 0, 1, 2
TRUTH_NAMES = ("T", "F", "U")

# Sequential (left-to-right) connectives on {T, F, U}.  Rows index the left
# operand, so the F row of `and` and the U rows are constant.
TV_AND = np.array([[T, F, U], [F, F, F], [U, U, U]], dtype=np.int64)
TV_OR = np.array([[T, T, T], [T, F, U], [U, U, U]], dtype=np.int64)
TV_NEG = np.array([F, T, U], dtype=np.int64)
# Halting oracle: keeps T, collapses both F and U to F.
TV_DOWN = np.array([T, F, F], dtype=np.int64)

CONNECTIVE_ARITY = {"and": 2, "or": 2, "neg": 1, "down": 1}


class LogicError(ValueError):
    """Malformed tables, vectors, or connective applications."""


def tv_apply(conn: str, *args: int) -> int:
    """Apply a connective name ('and', 'or', 'neg', 'down') to truth codes."""
    arity = CONNECTIVE_ARITY.get(conn)
    if arity is None:
        raise LogicError(f"unknown connective {conn!r}")
    if len(args) != arity:
        raise LogicError(f"{conn} expects {arity} argument(s), got {len(args)}")
    for a in args:
        if a not in (T, F, U):
            raise LogicError(f"not a truth value code: {a!r}")
    if conn == "and":
        return int(TV_AND[args[0], args[1]])
    if conn == "or":
        return int(TV_OR[args[0], args[1]])
    if conn == "neg":
        return int(TV_NEG[args[0]])
    return int(TV_DOWN[args[0]])


def _as_mask(universe_size: int, indices) -> int:
    if isinstance(indices, int):
        mask = indices
    else:
        mask = 0
        for i in indices:
            mask |= 1 << i
    if mask < 0 or mask >> universe_size:
        raise LogicError("index set outside universe")
    return mask


@dataclass(frozen=True)
class TestVector:
    """A three-valued test on a finite universe, stored as a disjoint pair
    of index sets (where it is true, where it is false).

    The sets are kept as bit masks; Python integers keep this exact for
    universes past 64 points as well.
    """

    universe_size: int
    trues: int
    falses: int

    def __post_init__(self):
        t = _as_mask(self.universe_size, self.trues)
        f = _as_mask(self.universe_size, self.falses)
        if t & f:
            raise LogicError("true and false sets overlap")
        object.__setattr__(self, "trues", t)
        object.__setattr__(self, "falses", f)

    @classmethod
    def from_sets(cls, universe_size: int, trues: Iterable[int], falses: Iterable[int]) -> "TestVector":
        return cls(universe_size, _as_mask(universe_size, trues), _as_mask(universe_size, falses))

    @classmethod
    def from_codes(cls, codes: Sequence[int]) -> "TestVector":
        t = f = 0
        for x, c in enumerate(codes):
            if c == T:
                t |= 1 << x
            elif c == F:
                f |= 1 << x
            elif c != U:
                raise LogicError(f"bad truth code {c!r}")
        return cls(len(codes), t, f)

    def value_at(self, x: int) -> int:
        if not 0 <= x < self.universe_size:
            raise LogicError(f"coordinate {x} outside universe")
        if self.trues >> x & 1:
            return T
        if self.falses >> x & 1:
            return F
        return U

    def to_codes(self) -> tuple[int, ...]:
        return tuple(self.value_at(x) for x in range(self.universe_size))

    def true_set(self) -> frozenset[int]:
        return frozenset(x for x in range(self.universe_size) if self.trues >> x & 1)

    def false_set(self) -> frozenset[int]:
        return frozenset(x for x in range(self.universe_size) if self.falses >> x & 1)

    def __str__(self):
        return "".join(TRUTH_NAMES[c] for c in self.to_codes())


def pair_apply(conn: str, *args: TestVector) -> TestVector:
    """Connectives on test vectors, computed directly on the index-set pairs.

    neg swaps the pair; `and`/`or` are the sequential set formulas; `down`
    keeps the true set and sends everything else to false.  Agrees with
    tv_apply coordinatewise.
    """
    arity = CONNECTIVE_ARITY.get(conn)
    if arity is None:
        raise LogicError(f"unknown connective {conn!r}")
    if len(args) != arity:
        raise LogicError(f"{conn} expects {arity} argument(s), got {len(args)}")
    n = args[0].universe_size
    if any(v.universe_size != n for v in args):
        raise LogicError("universe sizes differ")
    full = (1 << n) - 1
    if conn == "neg":
        v = args[0]
        return TestVector(n, v.falses, v.trues)
    if conn == "down":
        v = args[0]
        return TestVector(n, v.trues, full & ~v.trues)
    a, b = args
    if conn == "and":
        return TestVector(n, a.trues & b.trues, a.falses | (a.trues & b.falses))
    return TestVector(n, a.trues | (a.falses & b.trues), a.falses & b.falses)


def _np_table(rows, size, name) -> np.ndarray:
    arr = np.asarray(rows, dtype=np.int64)
    if arr.shape not in ((size, size), (size,)):
        raise LogicError(f"{name} table has wrong shape {arr.shape}")
    if arr.size and (arr.min() < 0 or arr.max() >= size):
        raise LogicError(f"{name} table entry out of range")
    arr.setflags(write=False)
    return arr


@dataclass(eq=False)
class AlgebraTables:
    """A finite algebra of tests given by explicit operation tables.

    One interchange representation covers Boolean algebras (const_U and
    down_table are None), plain conditional-test algebras, and algebras
    carrying the halting operation `down`.
    """

    size: int
    and_table: np.ndarray
    or_table: np.ndarray
    neg_table: np.ndarray
    down_table: np.ndarray | None = None
    const_T: int = 0
    const_F: int = 0
    const_U: int | None = None

    def __post_init__(self):
        self.and_table = _np_table(self.and_table, self.size, "and")
        self.or_table = _np_table(self.or_table, self.size, "or")
        self.neg_table = _np_table(self.neg_table, self.size, "neg")
        if self.neg_table.ndim != 1:
            raise LogicError("neg table must be unary")
        if self.down_table is not None:
            self.down_table = _np_table(self.down_table, self.size, "down")
            if self.down_table.ndim != 1:
                raise LogicError("down table must be unary")
        for label, c in (("T", self.const_T), ("F", self.const_F), ("U", self.const_U)):
            if c is not None and not 0 <= c < self.size:
                raise LogicError(f"constant {label} out of range")

    def equals(self, other: "AlgebraTables") -> bool:
        if self.size != other.size:
            return False
        if (self.down_table is None) != (other.down_table is None):
            return False
        if self.const_U != other.const_U or self.const_T != other.const_T or self.const_F != other.const_F:
            return False
        same = (
            np.array_equal(self.and_table, other.and_table)
            and np.array_equal(self.or_table, other.or_table)
            and np.array_equal(self.neg_table, other.neg_table)
        )
        if same and self.down_table is not None:
            same = np.array_equal(self.down_table, other.down_table)
        return bool(same)

    def op_and(self, a: int, b: int) -> int:
        return int(self.and_table[a, b])

    def op_or(self, a: int, b: int) -> int:
        return int(self.or_table[a, b])

    def op_neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def op_down(self, a: int) -> int:
        if self.down_table is None:
            raise LogicError("algebra has no down operation")
        return int(self.down_table[a])

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "and": self.and_table.tolist(),
            "or": self.or_table.tolist(),
            "neg": self.neg_table.tolist(),
            "down": None if self.down_table is None else self.down_table.tolist(),
            "T": self.const_T,
            "F": self.const_F,
            "U": self.const_U,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AlgebraTables":
        try:
            return cls(
                size=int(obj["size"]),
                and_table=obj["and"],
                or_table=obj["or"],
                neg_table=obj["neg"],
                down_table=obj.get("down"),
                const_T=int(obj["T"]),
                const_F=int(obj["F"]),
                const_U=None if obj.get("U") is None else int(obj["U"]),
            )
        except (KeyError, TypeError) as exc:
            raise LogicError(f"malformed algebra tables: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "AlgebraTables":
        return cls.from_json(json.loads(text))


def three() -> AlgebraTables:
    """The three-element algebra of sequential tests, with down."""
    return AlgebraTables(3, TV_AND, TV_OR, TV_NEG, TV_DOWN, const_T=T, const_F=F, const_U=U)


def two() -> AlgebraTables:
    """The two-element Boolean algebra {T, F}."""
    return AlgebraTables(
        2,
        [[T, F], [F, F]],
        [[T, T], [T, F]],
        [F, T],
        down_table=None,
        const_T=T,
        const_F=F,
        const_U=None,
    )


def power(base: AlgebraTables, n: int) -> AlgebraTables:
    """The n-th direct power with coordinatewise operations.

    Element i encodes the tuple of base elements given by the base-`size`
    digits of i, least significant digit = coordinate 0.
    """
    if n < 0:
        raise LogicError("power exponent must be >= 0")
    b = base.size
    size = b**n
    strides = [b**k for k in range(n)]

    def digits(i):
        return [(i // s) % b for s in strides]

    def undigits(ds):
        return sum(d * s for d, s in zip(ds, strides))

    and_t = np.zeros((size, size), dtype=np.int64)
    or_t = np.zeros((size, size), dtype=np.int64)
    neg_t = np.zeros(size, dtype=np.int64)
    down_t = None if base.down_table is None else np.zeros(size, dtype=np.int64)
    for i in range(size):
        di = digits(i)
        neg_t[i] = undigits([base.neg_table[d] for d in di])
        if down_t is not None:
            down_t[i] = undigits([base.down_table[d] for d in di])
        for j in range(size):
            dj = digits(j)
            and_t[i, j] = undigits([base.and_table[x, y] for x, y in zip(di, dj)])
            or_t[i, j] = undigits([base.or_table[x, y] for x, y in zip(di, dj)])
    const = lambda c: undigits([c] * n)
    return AlgebraTables(
        size,
        and_t,
        or_t,
        neg_t,
        down_t,
        const_T=const(base.const_T),
        const_F=const(base.const_F),
        const_U=None if base.const_U is None else const(base.const_U),
    )


def vector_algebra(universe_size: int) -> AlgebraTables:
    """All test vectors over a universe, materialized as tables.

    Built through the pair-of-sets operations, so it is an independent
    construction of the same algebra as power(three(), universe_size); the
    element encoding matches (digit x of the index = truth code at x).
    """
    n = universe_size
    size = 3**n

    def vec(i):
        return TestVector.from_codes([(i // 3**x) % 3 for x in range(n)])

    def idx(v: TestVector) -> int:
        return sum(v.value_at(x) * 3**x for x in range(n))

    vecs = [vec(i) for i in range(size)]
    and_t = np.zeros((size, size), dtype=np.int64)
    or_t = np.zeros((size, size), dtype=np.int64)
    neg_t = np.zeros(size, dtype=np.int64)
    down_t = np.zeros(size, dtype=np.int64)
    for i, vi in enumerate(vecs):
        neg_t[i] = idx(pair_apply("neg", vi))
        down_t[i] = idx(pair_apply("down", vi))
        for j, vj in enumerate(vecs):
            and_t[i, j] = idx(pair_apply("and", vi, vj))
            or_t[i, j] = idx(pair_apply("or", vi, vj))
    return AlgebraTables(
        size,
        and_t,
        or_t,
        neg_t,
        down_t,
        const_T=idx(TestVector.from_codes([T] * n)),
        const_F=idx(TestVector.from_codes([F] * n)),
        const_U=idx(TestVector.from_codes([U] * n)),
    )


def subalgebra(t: AlgebraTables, elements: Sequence[int], keep_down: bool = True) -> tuple[AlgebraTables, list[int]]:
    """Materialize the subalgebra on the given elements.

    Returns the new tables and the list mapping new indices to old ones.
    Raises if the subset is not closed or misses T/F.
    """
    elems = sorted(set(elements))
    back = {old: new for new, old in enumerate(elems)}
    k = len(elems)

    def conv(old):
        if old not in back:
            raise LogicError(f"subset not closed: element {old} escapes")
        return back[old]

    and_t = np.zeros((k, k), dtype=np.int64)
    or_t = np.zeros((k, k), dtype=np.int64)
    neg_t = np.zeros(k, dtype=np.int64)
    use_down = keep_down and t.down_table is not None
    down_t = np.zeros(k, dtype=np.int64) if use_down else None
    for i, ei in enumerate(elems):
        neg_t[i] = conv(t.op_neg(ei))
        if use_down:
            down_t[i] = conv(t.op_down(ei))
        for j, ej in enumerate(elems):
            and_t[i, j] = conv(t.op_and(ei, ej))
            or_t[i, j] = conv(t.op_or(ei, ej))
    if t.const_T not in back or t.const_F not in back:
        raise LogicError("subset misses a required constant")
    const_u = back.get(t.const_U) if t.const_U is not None else None
    sub = AlgebraTables(
        k, and_t, or_t, neg_t, down_t,
        const_T=back[t.const_T],
        const_F=back[t.const_F],
        const_U=const_u,
    )
    return sub, elems


# ---------------------------------------------------------------------------
# Axiom suites on raw tables.
#
# These checks are deliberately independent of the term machinery: each axiom
# is a direct numpy broadcast over all substitution tuples.


@dataclass
class AxiomResult:
    label: str
    statement: str
    holds: bool
    witness: dict[str, str] | None = None

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "statement": self.statement,
            "holds": self.holds,
            "witness": self.witness,
        }


@dataclass
class SuiteReport:
    suite: str
    subject: str
    results: list[AxiomResult]

    @property
    def passed(self) -> bool:
        return all(r.holds for r in self.results)

    def first_failure(self) -> AxiomResult | None:
        for r in self.results:
            if not r.holds:
                return r
        return None

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "subject": self.subject,
            "passed": self.passed,
            "axioms": [r.to_json() for r in self.results],
        }


def _grid(t: AlgebraTables, nvars: int):
    idx = np.arange(t.size, dtype=np.int64)
    shape = [1] * nvars
    out = []
    for v in range(nvars):
        s = shape.copy()
        s[v] = t.size
        out.append(idx.reshape(s))
    return out


def element_name(t: AlgebraTables, i: int) -> str:
    if i == t.const_T:
        return "T"
    if i == t.const_F:
        return "F"
    if t.const_U is not None and i == t.const_U:
        return "U"
    return str(i)


def _check_axiom(t, label, statement, varnames, lhs_fn, rhs_fn) -> AxiomResult:
    nv = len(varnames)
    args = _grid(t, nv)
    lhs = np.broadcast_to(np.asarray(lhs_fn(*args)), (t.size,) * nv)
    rhs = np.broadcast_to(np.asarray(rhs_fn(*args)), (t.size,) * nv)
    bad = np.argwhere(lhs != rhs)
    if bad.size == 0:
        return AxiomResult(label, statement, True)
    first = bad[0]
    witness = {name: element_name(t, int(v)) for name, v in zip(varnames, first)}
    return AxiomResult(label, statement, False, witness)


def _core_axioms(t: AlgebraTables):
    A, O, N = t.and_table, t.or_table, t.neg_table
    axioms = [
        ("C1", "~~a = a", "a", lambda a: N[N[a]], lambda a: a),
        ("C2", "~(a&b) = ~a | ~b", "ab", lambda a, b: N[A[a, b]], lambda a, b: O[N[a], N[b]]),
        ("C3", "(a&b)&c = a&(b&c)", "abc", lambda a, b, c: A[A[a, b], c], lambda a, b, c: A[a, A[b, c]]),
        ("C4", "a&(b|c) = (a&b)|(a&c)", "abc", lambda a, b, c: A[a, O[b, c]], lambda a, b, c: O[A[a, b], A[a, c]]),
        ("C5", "(a|b)&c = (a&c)|(~a&b&c)", "abc",
         lambda a, b, c: A[O[a, b], c], lambda a, b, c: O[A[a, c], A[A[N[a], b], c]]),
        ("C6", "a|(a&b) = a", "ab", lambda a, b: O[a, A[a, b]], lambda a, b: a),
        ("C7", "(a&b)|(b&a) = (b&a)|(a&b)", "ab",
         lambda a, b: O[A[a, b], A[b, a]], lambda a, b: O[A[b, a], A[a, b]]),
    ]
    return axioms


def _constant_axioms(t: AlgebraTables):
    A, O, N = t.and_table, t.or_table, t.neg_table
    ct, cf, cu = t.const_T, t.const_F, t.const_U
    axioms = [
        ("T-and", "T&a = a", "a", lambda a: A[ct, a], lambda a: a),
        ("and-T", "a&T = a", "a", lambda a: A[a, ct], lambda a: a),
        ("F-or", "F|a = a", "a", lambda a: O[cf, a], lambda a: a),
        ("or-F", "a|F = a", "a", lambda a: O[a, cf], lambda a: a),
        ("F-and", "F&a = F", "a", lambda a: A[cf, a], lambda a: np.full_like(a, cf)),
        ("T-or", "T|a = T", "a", lambda a: O[ct, a], lambda a: np.full_like(a, ct)),
        ("neg-T", "~T = F", "", lambda: N[ct], lambda: cf),
    ]
    if cu is not None:
        axioms += [
            ("neg-U", "~U = U", "", lambda: N[cu], lambda: cu),
            ("U-and", "U&a = U", "a", lambda a: A[cu, a], lambda a: np.full_like(a, cu)),
            ("U-or", "U|a = U", "a", lambda a: O[cu, a], lambda a: np.full_like(a, cu)),
        ]
    return axioms


def _ada_axioms(t: AlgebraTables):
    A, O, N, D = t.and_table, t.or_table, t.neg_table, t.down_table
    ct, cf, cu = t.const_T, t.const_F, t.const_U
    return [
        ("A1", "F^ = F", "", lambda: D[cf], lambda: cf),
        ("A2", "U^ = F", "", lambda: D[cu], lambda: cf),
        ("A3", "T^ = T", "", lambda: D[ct], lambda: ct),
        ("A4", "a & b^ = a & (a&b)^", "ab", lambda a, b: A[a, D[b]], lambda a, b: A[a, D[A[a, b]]]),
        ("A5", "a^ | ~(a^) = T", "a", lambda a: O[D[a], N[D[a]]], lambda a: np.full_like(a, ct)),
        ("A6", "a = a^ | a", "a", lambda a: a, lambda a: O[D[a], a]),
    ]


def _boolean_axioms(t: AlgebraTables):
    A, O, N = t.and_table, t.or_table, t.neg_table
    ct, cf = t.const_T, t.const_F
    return [
        ("compl-or", "a|~a = T", "a", lambda a: O[a, N[a]], lambda a: np.full_like(a, ct)),
        ("compl-and", "a&~a = F", "a", lambda a: A[a, N[a]], lambda a: np.full_like(a, cf)),
        ("comm-and", "a&b = b&a", "ab", lambda a, b: A[a, b], lambda a, b: A[b, a]),
        ("comm-or", "a|b = b|a", "ab", lambda a, b: O[a, b], lambda a, b: O[b, a]),
    ]


CLASS_TARGETS = ("boolean", "c_algebra", "ada")


def classify_algebra(t: AlgebraTables, target: str) -> SuiteReport:
    """Exhaustively check the axioms of the requested class on the tables.

    Fail reports carry the first failing axiom and a witness assignment.
    The core sequential-logic axioms come first; the Boolean target adds
    complement and commutativity laws, the ada target adds the halting-
    operation laws (and requires both U and the down table).
    """
    if target not in CLASS_TARGETS:
        raise LogicError(f"unknown classification target {target!r}")
    axioms = _core_axioms(t)
    if target == "boolean":
        axioms = axioms + _boolean_axioms(t) + _constant_axioms(t)
    elif target == "c_algebra":
        axioms = axioms + _constant_axioms(t)
    else:
        if t.down_table is None:
            raise LogicError("ada classification requested but down table absent")
        if t.const_U is None:
            raise LogicError("ada classification requested but U constant absent")
        axioms = axioms + _constant_axioms(t) + _ada_axioms(t)
    results = []
    for label, stmt, varnames, lhs_fn, rhs_fn in axioms:
        if varnames:
            results.append(_check_axiom(t, label, stmt, varnames, lhs_fn, rhs_fn))
        else:
            l, r = int(lhs_fn()), int(rhs_fn())
            results.append(AxiomResult(label, stmt, l == r, None if l == r else {}))
    return SuiteReport(target, f"tables[{t.size}]", results)


def boolean_skeleton(t: AlgebraTables) -> list[int]:
    """Elements satisfying a | ~a = T; they form a Boolean algebra inside
    any algebra passing the c_algebra suite (and equal the down-fixed
    elements when a down table is present)."""
    report = classify_algebra(t, "c_algebra")
    if not report.passed:
        bad = report.first_failure()
        raise LogicError(f"tables fail c_algebra axiom {bad.label} at {bad.witness}")
    return [a for a in range(t.size) if t.op_or(a, t.op_neg(a)) == t.const_T]
