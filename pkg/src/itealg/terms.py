"""Two-sorted term language for tests and program elements.

Grammar, precedence high to low:

    postfix  ^            halting test (on tests)
    prefix   ~            negation
    infix    &            sequential and
    infix    |            sequential or
    infix    *            equality test on two elements (yields a test)

    t[e1,e2]              conditional action: a test applied to two elements
    constants             T F U (tests), bot (element)
    a = b                 identity between terms of equal sort
    p1, p2 => c           quasi-identity (premises imply a conclusion)
    #                     comment to end of line (corpus files)

Binary connectives are left-associative.  A variable's sort is inferred from
its first determining use; using one name at both sorts is an error.  A
variable never constrained by context defaults to the element sort.
"""

from __future__ import annotations

from dataclasses import dataclass

TEST, ELEMENT = "test", "element"

_CONSTS = {"T": TEST, "F": TEST, "U": TEST, "bot": ELEMENT}


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class SortError(ParseError):
    pass


@dataclass(frozen=True)
class Term:
    """AST node.  op is one of: const, var, neg, and, or, down, star,
    action, bot.  Variables carry their inferred sort."""

    op: str
    name: str = ""
    args: tuple["Term", ...] = ()
    var_sort: str = ""

    @property
    def sort(self) -> str:
        if self.op in ("const",):
            return _CONSTS[self.name]
        if self.op == "bot":
            return ELEMENT
        if self.op == "var":
            return self.var_sort
        if self.op == "action":
            return ELEMENT
        return TEST  # neg, and, or, down, star


def const(name: str) -> Term:
    return Term("const", name)


def bot() -> Term:
    return Term("bot")


def var(name: str, sort: str) -> Term:
    return Term("var", name, var_sort=sort)


def neg(t: Term) -> Term:
    return Term("neg", args=(t,))


def down(t: Term) -> Term:
    return Term("down", args=(t,))


def and_(l: Term, r: Term) -> Term:
    return Term("and", args=(l, r))


def or_(l: Term, r: Term) -> Term:
    return Term("or", args=(l, r))


def star(l: Term, r: Term) -> Term:
    return Term("star", args=(l, r))


def action(test: Term, then: Term, els: Term) -> Term:
    return Term("action", args=(test, then, els))


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if self.lhs.sort != self.rhs.sort:
            raise SortError(
                f"identity sides have different sorts ({self.lhs.sort} vs {self.rhs.sort})"
            )

    @property
    def sort(self) -> str:
        return self.lhs.sort


@dataclass(frozen=True)
class QuasiIdentity:
    premises: tuple[Identity, ...]
    conclusion: Identity

    def __post_init__(self):
        if not self.premises:
            raise ParseError("quasi-identity needs at least one premise")


# -- tokenizer ---------------------------------------------------------------

_SYMBOLS = ("=>", "~", "&", "|", "*", "^", "[", "]", "(", ")", ",", "=")


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c == "#":
            break
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((text[i:j], i))
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append((sym, i))
                i += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.var_sorts: dict[str, str | None] = {}

    def peek(self):
        return self.tokens[self.pos][0]

    def here(self):
        return self.tokens[self.pos][1]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, sym):
        tok, at = self.next()
        if tok != sym:
            raise ParseError(f"expected {sym!r}, found {tok!r}", at)

    def bind_var(self, name: str, sort: str | None, at: int) -> Term:
        known = self.var_sorts.get(name)
        if known is None:
            self.var_sorts[name] = sort
        elif sort is not None and known != sort:
            raise SortError(
                f"variable {name!r} used at both sorts ({known} and {sort})", at
            )
        return Term("var", name)

    def require(self, t: Term, sort: str, at: int) -> None:
        """Constrain a parsed term to a sort, resolving bare variables."""
        if t.op == "var":
            self.bind_var(t.name, sort, at)
            return
        if t.sort != sort:
            raise SortError(f"{sort}-sort term expected", at)

    # expression levels: star < or < and < unary < postfix
    def parse_expr(self) -> Term:
        t = self.parse_or()
        while self.peek() == "*":
            _, at = self.next()
            self.require(t, ELEMENT, at)
            r = self.parse_or()
            self.require(r, ELEMENT, at)
            t = star(t, r)
        return t

    def parse_or(self) -> Term:
        t = self.parse_and()
        while self.peek() == "|":
            _, at = self.next()
            self.require(t, TEST, at)
            r = self.parse_and()
            self.require(r, TEST, at)
            t = or_(t, r)
        return t

    def parse_and(self) -> Term:
        t = self.parse_unary()
        while self.peek() == "&":
            _, at = self.next()
            self.require(t, TEST, at)
            r = self.parse_unary()
            self.require(r, TEST, at)
            t = and_(t, r)
        return t

    def parse_unary(self) -> Term:
        if self.peek() == "~":
            _, at = self.next()
            t = self.parse_unary()
            self.require(t, TEST, at)
            return neg(t)
        return self.parse_postfix()

    def parse_postfix(self) -> Term:
        t = self.parse_primary()
        while True:
            if self.peek() == "^":
                _, at = self.next()
                self.require(t, TEST, at)
                t = down(t)
            elif self.peek() == "[":
                _, at = self.next()
                self.require(t, TEST, at)
                e1 = self.parse_expr()
                self.require(e1, ELEMENT, at)
                self.expect(",")
                e2 = self.parse_expr()
                self.require(e2, ELEMENT, self.here())
                self.expect("]")
                t = action(t, e1, e2)
            else:
                return t

    def parse_primary(self) -> Term:
        tok, at = self.next()
        if tok == "(":
            t = self.parse_expr()
            self.expect(")")
            return t
        if tok in ("T", "F", "U"):
            return const(tok)
        if tok == "bot":
            return bot()
        if tok and (tok[0].isalpha() or tok[0] == "_"):
            return self.bind_var(tok, None, at)
        raise ParseError(f"unexpected token {tok!r}" if tok else "unexpected end of input", at)

    def parse_sides(self) -> tuple[Term, Term]:
        lhs = self.parse_expr()
        self.expect("=")
        rhs = self.parse_expr()
        return lhs, rhs

    def parse_statement(self):
        if not self._has_eq():
            first = self.parse_expr()
            if self.peek() != "":
                raise ParseError(f"unexpected token {self.peek()!r}", self.here())
            return self.finish_term(first)
        identities = [self.parse_sides()]
        while self.peek() == ",":
            self.next()
            identities.append(self.parse_sides())
        if self.peek() == "=>":
            self.next()
            conclusion = self.parse_sides()
            if self.peek() != "":
                raise ParseError(f"unexpected token {self.peek()!r}", self.here())
            return self.finish_quasi(identities, conclusion)
        if len(identities) > 1:
            raise ParseError("premise list without '=>' conclusion", self.here())
        if self.peek() != "":
            raise ParseError(f"unexpected token {self.peek()!r}", self.here())
        return self.finish_identity(identities[0])

    def _has_eq(self) -> bool:
        return any(tok == "=" for tok, _ in self.tokens[self.pos:])

    def _resolve(self, t: Term) -> Term:
        if t.op == "var":
            sort = self.var_sorts.get(t.name) or ELEMENT
            return Term("var", t.name, var_sort=sort)
        if t.args:
            return Term(t.op, t.name, tuple(self._resolve(a) for a in t.args))
        return t

    def finish_term(self, t: Term) -> Term:
        return self._resolve(t)

    def _unify_sides(self, lhs: Term, rhs: Term) -> None:
        # a bare variable equated with a determined term takes its sort
        for a, b in ((lhs, rhs), (rhs, lhs)):
            if a.op == "var" and self.var_sorts.get(a.name) is None:
                if not (b.op == "var" and self.var_sorts.get(b.name) is None):
                    other = self.var_sorts[b.name] if b.op == "var" else b.sort
                    self.bind_var(a.name, other, 0)

    def _unify_all(self, pairs) -> None:
        # inference can cascade through chains of equated variables, so
        # iterate to a fixpoint over the whole statement
        while True:
            before = dict(self.var_sorts)
            for lhs, rhs in pairs:
                self._unify_sides(lhs, rhs)
            if before == self.var_sorts:
                return

    def finish_identity(self, pair) -> Identity:
        self._unify_all([pair])
        lhs, rhs = pair
        return Identity(self._resolve(lhs), self._resolve(rhs))

    def finish_quasi(self, identities, conclusion) -> QuasiIdentity:
        pairs = list(identities) + [conclusion]
        self._unify_all(pairs)
        premises = tuple(
            Identity(self._resolve(l), self._resolve(r)) for l, r in identities
        )
        return QuasiIdentity(
            premises, Identity(self._resolve(conclusion[0]), self._resolve(conclusion[1]))
        )


def parse(text: str) -> Term | Identity | QuasiIdentity:
    """Parse one statement: a term, an identity, or a quasi-identity."""
    parser = _Parser(text)
    if parser.peek() == "":
        raise ParseError("empty input", 0)
    return parser.parse_statement()


def parse_identity(text: str) -> Identity:
    stmt = parse(text)
    if not isinstance(stmt, Identity):
        raise ParseError("expected an identity (one '=')")
    return stmt


def parse_quasi(text: str) -> QuasiIdentity:
    stmt = parse(text)
    if not isinstance(stmt, QuasiIdentity):
        raise ParseError("expected a quasi-identity ('premises => conclusion')")
    return stmt


def parse_corpus(text: str) -> list[tuple[int, Identity | QuasiIdentity]]:
    """One statement per line; '#' starts a comment; blank lines skipped."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        stmt = parse(body)
        if isinstance(stmt, Term):
            raise ParseError(f"line {lineno}: bare term is not a statement")
        out.append((lineno, stmt))
    return out


# -- rendering ---------------------------------------------------------------

_LEVEL = {"star": 0, "or": 1, "and": 2, "neg": 3, "down": 4, "action": 4,
          "const": 5, "var": 5, "bot": 5}


def _render(t: Term, min_level: int) -> str:
    lvl = _LEVEL[t.op]
    if t.op == "const":
        s = t.name
    elif t.op == "bot":
        s = "bot"
    elif t.op == "var":
        s = t.name
    elif t.op == "neg":
        s = "~" + _render(t.args[0], 3)
    elif t.op == "down":
        s = _render(t.args[0], 4) + "^"
    elif t.op == "action":
        s = "{}[{},{}]".format(
            _render(t.args[0], 4), _render(t.args[1], 0), _render(t.args[2], 0)
        )
    elif t.op == "and":
        s = _render(t.args[0], 2) + "&" + _render(t.args[1], 3)
    elif t.op == "or":
        s = _render(t.args[0], 1) + "|" + _render(t.args[1], 2)
    else:  # star
        s = _render(t.args[0], 1) + "*" + _render(t.args[1], 1)
    if lvl < min_level:
        return "(" + s + ")"
    return s


def render(obj: Term | Identity | QuasiIdentity) -> str:
    """Canonical text; parse(render(x)) reproduces x structurally."""
    if isinstance(obj, Term):
        return _render(obj, 0)
    if isinstance(obj, Identity):
        return f"{_render(obj.lhs, 0)} = {_render(obj.rhs, 0)}"
    premises = ", ".join(render(p) for p in obj.premises)
    return f"{premises} => {render(obj.conclusion)}"


def free_vars(t: Term | Identity | QuasiIdentity) -> tuple[frozenset[str], frozenset[str]]:
    """(test variables, element variables) occurring free."""
    tests: set[str] = set()
    elems: set[str] = set()

    def walk(node: Term):
        if node.op == "var":
            (tests if node.var_sort == TEST else elems).add(node.name)
        for a in node.args:
            walk(a)

    if isinstance(t, Term):
        walk(t)
    elif isinstance(t, Identity):
        walk(t.lhs)
        walk(t.rhs)
    else:
        for p in t.premises:
            walk(p.lhs)
            walk(p.rhs)
        walk(t.conclusion.lhs)
        walk(t.conclusion.rhs)
    return frozenset(tests), frozenset(elems)


class EvalError(ValueError):
    pass


def evaluate(t: Term, env: dict[str, int], model) -> int:
    """Structural evaluation over a table model.

    `model` is anything exposing `tests` (operation tables), `action`
    (ntests x n x n array) and `star` (n x n array or None); bare
    AlgebraTables work for pure test terms.  Values are table indices:
    test terms yield a test index, element terms a point index.
    """
    try:
        return _evaluate(t, env, model)
    except IndexError:
        raise EvalError("assignment value out of range for the model") from None


def _evaluate(t: Term, env: dict[str, int], model) -> int:
    tables = getattr(model, "tests", model)
    if t.op == "const":
        value = {"T": tables.const_T, "F": tables.const_F, "U": tables.const_U}[t.name]
        if value is None:
            raise EvalError("model has no U constant")
        return value
    if t.op == "bot":
        return 0
    if t.op == "var":
        if t.name not in env:
            raise EvalError(f"unbound variable {t.name!r}")
        value = int(env[t.name])
        if value < 0:
            raise EvalError(f"negative value for {t.name!r}")
        return value
    if t.op == "neg":
        return tables.op_neg(_evaluate(t.args[0], env, model))
    if t.op == "down":
        return tables.op_down(_evaluate(t.args[0], env, model))
    if t.op == "and":
        return tables.op_and(_evaluate(t.args[0], env, model), _evaluate(t.args[1], env, model))
    if t.op == "or":
        return tables.op_or(_evaluate(t.args[0], env, model), _evaluate(t.args[1], env, model))
    if t.op == "action":
        action_table = getattr(model, "action", None)
        if action_table is None:
            raise EvalError("model has no conditional action")
        a = _evaluate(t.args[0], env, model)
        e1 = _evaluate(t.args[1], env, model)
        e2 = _evaluate(t.args[2], env, model)
        return int(action_table[a, e1, e2])
    if t.op == "star":
        star_table = getattr(model, "star", None)
        if star_table is None:
            raise EvalError("model has no equality test")
        l = _evaluate(t.args[0], env, model)
        r = _evaluate(t.args[1], env, model)
        return int(star_table[l, r])
    raise EvalError(f"unknown node {t.op!r}")
