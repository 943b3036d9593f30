"""Validity of identities and quasi-identities, decided on small models.

Test-sort laws over the pure test theories are checked by enumerating the
two- or three-element algebra of truth values; element-sort laws are checked
on a selection model with one named point per element variable.  For
identities without the equality test, a single all-distinct assignment of
the named points suffices: any assignment into any selection model factors
through a base-point-preserving map that commutes with selection.  With the
equality test (or for quasi-identities, whose premises can encode equality
patterns), all maps from the variables into the named points (plus the
error point, where the theory has one) are enumerated instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from . import kernels, terms
from .logic import (
    AlgebraTables,
    AxiomResult,
    SuiteReport,
    classify_algebra,
    element_name,
    three,
    two,
)
from .models import ModelError, basic_bset, basic_cset, basic_star
from .terms import ELEMENT, TEST, Identity, QuasiIdentity, Term, free_vars


class TheoryError(ValueError):
    """Statement uses a construct outside the selected theory."""


class GuardError(RuntimeError):
    """Search size exceeds the guard; pass force=True to override."""


@dataclass(frozen=True)
class TheorySpec:
    name: str
    long_name: str
    consts: frozenset
    allow_down: bool
    allow_star: bool
    allow_action: bool
    allow_bot: bool
    generic_identities: bool


def _spec(name, long_name, consts, down=False, star=False, act=False, bot=False, generic=False):
    return TheorySpec(name, long_name, frozenset(consts), down, star, act, bot, generic)


THEORIES = {
    "bool": _spec("bool", "boolean", "TF"),
    "calg": _spec("calg", "c_algebra", "TFU"),
    "ada": _spec("ada", "ada", "TFU", down=True),
    "bset": _spec("bset", "b_set", "TF", act=True),
    "agbset": _spec("agbset", "agreeable_b_set", "TF", star=True, act=True),
    "cset": _spec("cset", "c_set_over_ada", "TFU", down=True, act=True, bot=True, generic=True),
    "agcset": _spec("agcset", "agreeable_c_set_over_ada", "TFU", down=True, star=True,
                    act=True, bot=True),
}

_THEORY_ALIASES = {spec.long_name: name for name, spec in THEORIES.items()}


def theory_spec(name: str) -> TheorySpec:
    key = name.lower()
    key = _THEORY_ALIASES.get(key, key)
    if key not in THEORIES:
        raise TheoryError(f"unknown theory {name!r}")
    return THEORIES[key]


def _validate_term(t: Term, spec: TheorySpec):
    if t.op == "const" and t.name not in spec.consts:
        raise TheoryError(f"constant {t.name} is not available in theory {spec.name}")
    if t.op == "bot" and not spec.allow_bot:
        raise TheoryError(f"bot is not available in theory {spec.name}")
    if t.op == "down" and not spec.allow_down:
        raise TheoryError(f"^ is not available in theory {spec.name}")
    if t.op == "star" and not spec.allow_star:
        raise TheoryError(f"* is not available in theory {spec.name}")
    if t.op == "action" and not spec.allow_action:
        raise TheoryError(f"conditional action is not available in theory {spec.name}")
    if t.op == "var" and t.var_sort == ELEMENT and not spec.allow_action:
        raise TheoryError(f"element variables are not available in theory {spec.name}")
    for a in t.args:
        _validate_term(a, spec)


def _validate_statement(stmt, spec: TheorySpec):
    if isinstance(stmt, Identity):
        _validate_term(stmt.lhs, spec)
        _validate_term(stmt.rhs, spec)
    else:
        for p in stmt.premises:
            _validate_statement(p, spec)
        _validate_statement(stmt.conclusion, spec)


# -- compilation ---------------------------------------------------------------


def _compile_term(t: Term, slots: dict[str, int], tables: AlgebraTables, out: list):
    if t.op == "const":
        value = {"T": tables.const_T, "F": tables.const_F, "U": tables.const_U}[t.name]
        if value is None:
            raise ModelError("model has no U constant")
        out.append((kernels.OP_CONST, value))
    elif t.op == "bot":
        out.append((kernels.OP_CONST, 0))
    elif t.op == "var":
        out.append((kernels.OP_VAR, slots[t.name]))
    elif t.op == "neg":
        _compile_term(t.args[0], slots, tables, out)
        out.append((kernels.OP_NEG, 0))
    elif t.op == "down":
        if tables.down_table is None:
            raise ModelError("model tests have no down operation")
        _compile_term(t.args[0], slots, tables, out)
        out.append((kernels.OP_DOWN, 0))
    elif t.op in ("and", "or"):
        _compile_term(t.args[0], slots, tables, out)
        _compile_term(t.args[1], slots, tables, out)
        out.append((kernels.OP_AND if t.op == "and" else kernels.OP_OR, 0))
    elif t.op == "action":
        for a in t.args:
            _compile_term(a, slots, tables, out)
        out.append((kernels.OP_ACTION, 0))
    elif t.op == "star":
        _compile_term(t.args[0], slots, tables, out)
        _compile_term(t.args[1], slots, tables, out)
        out.append((kernels.OP_STAR, 0))
    else:
        raise ModelError(f"cannot compile node {t.op!r}")


@dataclass
class _Compiled:
    progs: np.ndarray
    offsets: np.ndarray
    var_order: list[tuple[str, str]]  # (name, sort), tests first
    radices: np.ndarray
    domains: np.ndarray
    domain_lists: list[list[int]]


def _compile_statement(stmt, tables: AlgebraTables, test_domain: list[int],
                       element_domains) -> _Compiled:
    """element_domains: maps sorted element-variable position -> domain list."""
    tvars, evars = free_vars(stmt)
    var_order = [(v, TEST) for v in sorted(tvars)] + [(v, ELEMENT) for v in sorted(evars)]
    slots = {name: i for i, (name, _) in enumerate(var_order)}
    domain_lists = [list(test_domain) for _ in sorted(tvars)]
    for pos, _ in enumerate(sorted(evars)):
        domain_lists.append(list(element_domains(pos)))
    identities = [stmt] if isinstance(stmt, Identity) else list(stmt.premises) + [stmt.conclusion]
    chunks, offsets = [], [0]
    for ident in identities:
        for side in (ident.lhs, ident.rhs):
            code: list = []
            _compile_term(side, slots, tables, code)
            chunks.extend(code)
            offsets.append(len(chunks))
    progs = np.array(chunks, dtype=np.int64).reshape(-1, 2)
    radices = np.array([len(d) for d in domain_lists], dtype=np.int64)
    maxd = max([len(d) for d in domain_lists], default=1)
    domains = np.zeros((len(domain_lists), maxd), dtype=np.int64)
    for i, d in enumerate(domain_lists):
        domains[i, : len(d)] = d
    return _Compiled(progs, np.array(offsets, dtype=np.int64), var_order,
                     radices, domains, domain_lists)


def _decode_env(comp: _Compiled, index: int) -> dict[str, int]:
    env = {}
    rem = index
    for v in range(len(comp.var_order) - 1, -1, -1):
        r = int(comp.radices[v])
        env[comp.var_order[v][0]] = comp.domain_lists[v][rem % r]
        rem //= r
    return env


# -- verdicts ------------------------------------------------------------------


@dataclass
class Counterexample:
    model: str
    env: dict[str, str]
    raw_env: dict[str, int]
    lhs: str
    rhs: str

    def to_json(self) -> dict:
        return {"model": self.model, "env": self.env, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class Verdict:
    valid: bool
    counterexample: Counterexample | None = None

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "counterexample": None if self.counterexample is None else self.counterexample.to_json(),
        }


def _value_label(model, sort: str, value: int) -> str:
    if sort == TEST:
        return element_name(model.tests, value) if hasattr(model, "tests") else element_name(model, value)
    return model.point_name(value)


def _make_counterexample(stmt, comp: _Compiled, model, index: int) -> Counterexample:
    # the independent tree evaluator must reproduce the violation; a
    # disagreement here means a kernel bug, not an invalid statement
    env = _decode_env(comp, index)
    concl = stmt if isinstance(stmt, Identity) else stmt.conclusion
    lhs_v = terms.evaluate(concl.lhs, env, model)
    rhs_v = terms.evaluate(concl.rhs, env, model)
    if lhs_v == rhs_v:
        raise AssertionError("kernel counterexample does not re-evaluate to a violation")
    if isinstance(stmt, QuasiIdentity):
        for p in stmt.premises:
            if terms.evaluate(p.lhs, env, model) != terms.evaluate(p.rhs, env, model):
                raise AssertionError("kernel counterexample does not satisfy the premises")
    sorts = dict(comp.var_order)
    shown = {name: _value_label(model, sorts[name], value) for name, value in env.items()}
    return Counterexample(
        model=model.label,
        env=shown,
        raw_env=env,
        lhs=_value_label(model, concl.lhs.sort, lhs_v),
        rhs=_value_label(model, concl.rhs.sort, rhs_v),
    )


class _AlgebraModel:
    """Adapter giving bare tables the model surface used for reporting."""

    def __init__(self, tables: AlgebraTables, label: str):
        self.tests = tables
        self.action = None
        self.star = None
        self.points = 0
        self.label = label

    def point_name(self, i):
        return str(i)


def _canonical_setup(stmt, spec: TheorySpec):
    tvars, evars = free_vars(stmt)
    k = len(evars)
    if spec.name in ("bool", "calg", "ada"):
        tables = two() if spec.name == "bool" else three()
        model = _AlgebraModel(tables, spec.name)
        element_domains = lambda pos: []
    elif spec.name in ("bset", "agbset"):
        model = basic_bset(max(k, 1), with_star=spec.allow_star)
        element_domains = lambda pos: list(range(model.points))
    else:
        model = basic_cset(k + 1, with_star=spec.allow_star)
        generic = spec.generic_identities and isinstance(stmt, Identity)
        if generic:
            element_domains = lambda pos: [pos + 1]
        else:
            element_domains = lambda pos: list(range(model.points))
    test_domain = list(range(model.tests.size))
    return model, test_domain, element_domains


def _run_statement(stmt, model, test_domain, element_domains, backend, jobs) -> Verdict:
    comp = _compile_statement(stmt, model.tests, test_domain, element_domains)
    idx = kernels.find_violation(
        comp.progs, comp.offsets, comp.radices, comp.domains,
        model.tests.and_table, model.tests.or_table, model.tests.neg_table,
        model.tests.down_table, getattr(model, "action", None),
        getattr(model, "star", None), backend=backend, jobs=jobs,
    )
    if idx < 0:
        return Verdict(True)
    return Verdict(False, _make_counterexample(stmt, comp, model, idx))


def check_identity(ident: Identity, theory: str, backend: str | None = None,
                   jobs: int = 1) -> Verdict:
    """Decide whether an identity holds throughout the theory's model class."""
    spec = theory_spec(theory)
    _validate_statement(ident, spec)
    model, test_domain, element_domains = _canonical_setup(ident, spec)
    return _run_statement(ident, model, test_domain, element_domains, backend, jobs)


def check_quasi_identity(quasi: QuasiIdentity, theory: str, backend: str | None = None,
                         jobs: int = 1) -> Verdict:
    """Decide a quasi-identity by enumerating premise-satisfying assignments.

    Validity is decided over the selection models; it transfers to every
    model of the theory because quasi-identities survive subalgebras and
    direct products, and every model embeds subdirectly into selection
    models.
    """
    spec = theory_spec(theory)
    _validate_statement(quasi, spec)
    model, test_domain, element_domains = _canonical_setup(quasi, spec)
    return _run_statement(quasi, model, test_domain, element_domains, backend, jobs)


def check_statement(stmt, theory: str, backend: str | None = None, jobs: int = 1) -> Verdict:
    if isinstance(stmt, Identity):
        return check_identity(stmt, theory, backend, jobs)
    if isinstance(stmt, QuasiIdentity):
        return check_quasi_identity(stmt, theory, backend, jobs)
    raise TheoryError("bare terms have no truth value; provide an identity")


def _uses_bot(stmt) -> bool:
    def walk(t):
        return t.op == "bot" or any(walk(a) for a in t.args)

    identities = [stmt] if isinstance(stmt, Identity) else list(stmt.premises) + [stmt.conclusion]
    return any(walk(i.lhs) or walk(i.rhs) for i in identities)


def check_statement_on_model(stmt, model, backend: str | None = None, jobs: int = 1) -> Verdict:
    """Exhaustively check a statement over all assignments into one model."""
    if model.tests.const_U is None and _uses_bot(stmt):
        raise ModelError("halting models have no error point; bot is meaningless here")
    test_domain = list(range(model.tests.size))
    element_domains = lambda pos: list(range(model.points))
    return _run_statement(stmt, model, test_domain, element_domains, backend, jobs)


# -- axiom suites ---------------------------------------------------------------

CSET_SUITE = [
    ("EC1", ["U[s,t] = bot"]),
    ("EC6", ["F[s,t] = t"]),
    ("EC5", ["(~a)[s,t] = a[t,s]"]),
    ("EC3", ["a[a[s,t],u] = a[s,u]"]),
    ("EC4", ["a[s,a[t,u]] = a[s,u]"]),
    ("EC7", ["(a&b)[s,t] = a[b[s,t],t]"]),
    ("EC2", ["a[b[s,t],b[u,v]] = b[a[s,u],a[t,v]]"]),
    ("EC8", ["a[s,t] = a[t,t] => (a&b)[s,t] = (a&b)[t,t]"]),
]

AGREEABLE_SUITE = [
    ("EA4", ["(s*s)[s,bot] = s"]),
    ("EA1", ["bot*s = U", "s*bot = U"]),
    ("EA2", ["(s*t)[s,t] = (s*t)[t,t]"]),
    ("EA3", ["a[s,t]*a[u,v] = (a&(s*u))|(~a&(t*v))"]),
    ("EA5", ["s*s = T, s*t = U => t = bot"]),
]

BSET_SUITE = [
    ("B1", ["a[s,s] = s"]),
    ("B2", ["a[a[s,t],u] = a[s,u]"]),
    ("B3", ["a[s,a[t,u]] = a[s,u]"]),
    ("B4", ["F[s,t] = t"]),
    ("B5", ["(~a)[s,t] = a[t,s]"]),
    ("B6", ["(a&b)[s,t] = a[b[s,t],t]"]),
]

AGBSET_SUITE = [
    ("AB1", ["s*s = T"]),
    ("AB2", ["(s*t)[s,t] = t"]),
    ("AB3", ["a[s,t]*a[u,v] = (a&(s*u))|(~a&(t*v))"]),
]

SUITE_NAMES = ("calg", "ada", "bset", "agbset", "cset", "agreeable")

_SUITE_ALIASES = {
    "c_algebra": "calg",
    "b_set": "bset",
    "agreeable_b_set": "agbset",
    "c_set": "cset",
    "agreeable_c_set": "agreeable",
}

_parsed_cache: dict[str, object] = {}


def _parsed(text: str):
    if text not in _parsed_cache:
        _parsed_cache[text] = terms.parse(text)
    return _parsed_cache[text]


def verify_axiom_suite(model, suite: str, backend: str | None = None,
                       jobs: int = 1) -> SuiteReport:
    """Run a named axiom suite exhaustively over a finite model.

    calg/ada delegate to the table classifier; the other suites substitute
    every combination of the model's tests and points into each axiom.
    """
    name = _SUITE_ALIASES.get(suite, suite)
    if name not in SUITE_NAMES:
        raise ModelError(f"unknown suite {suite!r}")
    tables = model if isinstance(model, AlgebraTables) else model.tests
    label = getattr(model, "label", f"tables[{tables.size}]")
    if name in ("calg", "ada"):
        target = "c_algebra" if name == "calg" else "ada"
        report = classify_algebra(tables, target)
        report.suite = name
        report.subject = label
        return report
    if isinstance(model, AlgebraTables):
        raise ModelError(f"suite {name} needs a model with an action, not bare tables")
    if name == "cset" and tables.const_U is None:
        raise ModelError("cset suite needs tests with a U constant")
    if name in ("agreeable", "agbset") and model.star is None:
        raise ModelError(f"suite {name} needs a model with a star table")
    if name == "agreeable" and tables.const_U is None:
        raise ModelError("agreeable suite needs tests with a U constant")
    suite_def = {"cset": CSET_SUITE, "agreeable": AGREEABLE_SUITE,
                 "bset": BSET_SUITE, "agbset": AGBSET_SUITE}[name]
    results = []
    for axiom_label, stmt_texts in suite_def:
        holds, witness = True, None
        for text in stmt_texts:
            verdict = check_statement_on_model(_parsed(text), model, backend, jobs)
            if not verdict.valid:
                holds = False
                witness = dict(verdict.counterexample.env)
                break
        results.append(AxiomResult(axiom_label, " ; ".join(stmt_texts), holds, witness))
    return SuiteReport(name, label, results)


# -- uniqueness search for the equality test -------------------------------------


def unique_star_search(point_count: int, force: bool = False,
                       backend: str | None = None, jobs: int = 1) -> list[np.ndarray]:
    """All equality-test tables making the selection model on `point_count`
    points agreeable, by brute force over all 3^(n^2) candidates."""
    if point_count < 2:
        raise GuardError("need at least two points (bot plus one state)")
    if point_count > 4 and not force:
        raise GuardError(
            f"3^{point_count * point_count} candidate tables; pass force=True to proceed"
        )
    codes = kernels.star_search(point_count, backend=backend, jobs=jobs)
    out = []
    for code in sorted(int(c) for c in codes):
        table = np.zeros((point_count, point_count), dtype=np.int64)
        c = code
        for i in range(point_count):
            for j in range(point_count):
                table[i, j] = c % 3
                c //= 3
        out.append(table)
    return out


def expected_basic_star(point_count: int) -> np.ndarray:
    table = np.zeros((point_count, point_count), dtype=np.int64)
    for i in range(point_count):
        for j in range(point_count):
            table[i, j] = basic_star(i, j)
    return table


# -- random statements (for oracle comparisons) ----------------------------------


def _random_term(rng: random.Random, sort: str, depth: int, tvars, evars, allow_star) -> Term:
    if sort == ELEMENT:
        options = ["var"] * 3 + ["bot"]
        if depth > 0:
            options += ["action"] * 4
        pick = rng.choice(options)
        if pick == "var" and evars:
            return terms.var(rng.choice(evars), ELEMENT)
        if pick == "action":
            return terms.action(
                _random_term(rng, TEST, depth - 1, tvars, evars, allow_star),
                _random_term(rng, ELEMENT, depth - 1, tvars, evars, allow_star),
                _random_term(rng, ELEMENT, depth - 1, tvars, evars, allow_star),
            )
        return terms.bot()
    options = ["var"] * 3 + ["const"]
    if depth > 0:
        options += ["neg", "and", "or", "down"]
        if allow_star:
            options += ["star", "star"]
    pick = rng.choice(options)
    if pick == "var" and tvars:
        return terms.var(rng.choice(tvars), TEST)
    if pick == "neg":
        return terms.neg(_random_term(rng, TEST, depth - 1, tvars, evars, allow_star))
    if pick == "down":
        return terms.down(_random_term(rng, TEST, depth - 1, tvars, evars, allow_star))
    if pick in ("and", "or"):
        l = _random_term(rng, TEST, depth - 1, tvars, evars, allow_star)
        r = _random_term(rng, TEST, depth - 1, tvars, evars, allow_star)
        return terms.and_(l, r) if pick == "and" else terms.or_(l, r)
    if pick == "star":
        return terms.star(
            _random_term(rng, ELEMENT, depth - 1, tvars, evars, allow_star),
            _random_term(rng, ELEMENT, depth - 1, tvars, evars, allow_star),
        )
    return terms.const(rng.choice("TFU"))


def random_statement(rng: random.Random, allow_star: bool, quasi: bool = False,
                     max_depth: int = 3):
    """A random identity or quasi-identity over at most two test variables
    and three element variables."""
    tvars = ["a", "b"][: rng.randint(1, 2)]
    evars = ["s", "t", "u"][: rng.randint(1, 3)]

    def rand_identity():
        sort = ELEMENT if rng.random() < 0.6 else TEST
        lhs = _random_term(rng, sort, max_depth, tvars, evars, allow_star)
        if rng.random() < 0.25:
            return Identity(lhs, lhs)
        return Identity(lhs, _random_term(rng, sort, max_depth, tvars, evars, allow_star))

    if not quasi:
        return rand_identity()
    premises = tuple(rand_identity() for _ in range(rng.randint(1, 2)))
    return QuasiIdentity(premises, rand_identity())
