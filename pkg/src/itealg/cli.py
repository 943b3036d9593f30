"""Command-line front end.

Exit codes are the machine contract: 0 = valid/pass, 1 = counterexample or
failed check, 2 = usage or input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

import numpy as np

from . import congruence, decision, models, terms
from .logic import AlgebraTables, LogicError, TRUTH_NAMES, element_name
from .models import ModelError
from .terms import ParseError


def _add_model_source(p: argparse.ArgumentParser, positional: bool = True):
    if positional:
        p.add_argument("model", nargs="?", help="path to a model JSON file")
    group = p.add_argument_group("model generators")
    group.add_argument("--basic", type=int, metavar="N",
                       help="selection model with N states including bot")
    group.add_argument("--functional", type=int, metavar="N",
                       help="partial-program model over an N-point universe")
    group.add_argument("--self-ada", type=int, metavar="N", dest="self_ada",
                       help="self-action model over the N-th power of the three-valued tests")
    group.add_argument("--bset-functional", type=int, metavar="N", dest="bset_functional",
                       help="total-program halting model over an N-point universe")


def _resolve_model(args) -> models.FiniteCSet | models.FiniteBSet:
    sources = [
        args.model is not None,
        args.basic is not None,
        args.functional is not None,
        args.self_ada is not None,
        args.bset_functional is not None,
    ]
    if sum(sources) != 1:
        raise ModelError("give exactly one model: a JSON path or one generator flag")
    if args.model is not None:
        return models.load_model(args.model)
    if args.basic is not None:
        return models.basic_cset(args.basic)
    if args.functional is not None:
        return models.functional_cset(args.functional)
    if args.self_ada is not None:
        return models.self_ada_cset(args.self_ada)
    return models.functional_bset(args.bset_functional)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _counterexample_text(verdict) -> str:
    ce = verdict.counterexample
    env = ", ".join(f"{k}={v}" for k, v in sorted(ce.env.items()))
    return (f"invalid in {ce.model}: [{env}] gives {ce.lhs} on the left "
            f"but {ce.rhs} on the right")


def _cmd_check(args, quasi: bool) -> int:
    statements = []
    if args.file:
        with open(args.file, "r", encoding="utf-8") as fh:
            statements = [stmt for _, stmt in terms.parse_corpus(fh.read())]
    if args.statement:
        stmt = terms.parse(args.statement)
        if isinstance(stmt, terms.Term):
            raise ParseError("a bare term has no truth value; write an identity")
        statements.append(stmt)
    if not statements:
        raise ParseError("no statement given (positional argument or --file)")
    exit_code = 0
    reports = []
    for stmt in statements:
        if quasi and not isinstance(stmt, terms.QuasiIdentity):
            raise ParseError(f"check-quasi expects a quasi-identity: {terms.render(stmt)}")
        verdict = decision.check_statement(stmt, args.theory, jobs=args.jobs)
        payload = {"statement": terms.render(stmt), "theory": args.theory}
        payload.update(verdict.to_json())
        reports.append(payload)
        if verdict.valid:
            text = f"valid over {args.theory}: {terms.render(stmt)}"
        else:
            text = f"{terms.render(stmt)}\n  {_counterexample_text(verdict)}"
            exit_code = 1
        _emit(args, payload, text)
    return exit_code


def _cmd_verify(args) -> int:
    model = _resolve_model(args)
    report = decision.verify_axiom_suite(model, args.suite, jobs=args.jobs)
    lines = [f"suite {report.suite} on {report.subject}:"]
    for r in report.results:
        mark = "pass" if r.holds else f"FAIL at {r.witness}"
        lines.append(f"  {r.label:>4}  {r.statement:<55} {mark}")
    lines.append("all axioms hold" if report.passed else "suite failed")
    _emit(args, report.to_json(), "\n".join(lines))
    return 0 if report.passed else 1


def _cmd_decompose(args) -> int:
    model = _resolve_model(args)
    if isinstance(model, models.FiniteBSet):
        emb = congruence.bset_ultrafilter_decompose(model)
    else:
        emb = congruence.subdirect_embed(model, agreeable=args.agreeable)
    report = emb.to_report()
    lines = [f"{len(emb.factors)} factor(s); injective: {emb.injective}"]
    for i, f in enumerate(emb.factors):
        lines.append(f"  factor {i}: tests -> {f.theta.num_blocks} classes, "
                     f"points -> {f.e_theta.num_blocks} classes")
    if emb.star_preserved is not None:
        lines.append(f"equality test preserved: {emb.star_preserved}")
    _emit(args, report, "\n".join(lines))
    return 0 if emb.injective else 1


def _parse_env(text: str | None, model) -> dict[str, int]:
    env: dict[str, int] = {}
    if not text:
        return env
    names = {name: code for code, name in enumerate(TRUTH_NAMES)}
    for item in text.split(","):
        if "=" not in item:
            raise ParseError(f"bad --env entry {item!r}; use name=value")
        key, value = item.split("=", 1)
        key, value = key.strip(), value.strip()
        if value == "bot":
            env[key] = 0
        elif value in names:
            consts = {"T": model.tests.const_T, "F": model.tests.const_F,
                      "U": model.tests.const_U}
            idx = consts[value]
            if idx is None:
                raise ParseError(f"model has no {value} constant")
            env[key] = idx
        else:
            try:
                env[key] = int(value)
            except ValueError:
                raise ParseError(f"bad --env value {value!r}") from None
    return env


def _cmd_eval(args) -> int:
    model = _resolve_model(args)
    term = terms.parse(args.term)
    if not isinstance(term, terms.Term):
        raise ParseError("eval takes a single term, not an identity")
    env = _parse_env(args.env, model)
    tvars, evars = terms.free_vars(term)
    for name in tvars:
        if name in env and not 0 <= env[name] < model.tests.size:
            raise ParseError(f"test value for {name!r} out of range")
    for name in evars:
        if name in env and not 0 <= env[name] < model.points:
            raise ParseError(f"point value for {name!r} out of range")
    value = terms.evaluate(term, env, model)
    if term.sort == terms.TEST:
        label = element_name(model.tests, value)
    else:
        label = model.point_name(value)
    _emit(args, {"term": terms.render(term), "value": value, "label": label},
          f"{terms.render(term)} = {label} (index {value})")
    return 0


def _cmd_classify(args) -> int:
    with open(args.tables, "r", encoding="utf-8") as fh:
        tables = AlgebraTables.from_json(json.load(fh))
    target = {"bool": "boolean", "calg": "c_algebra", "ada": "ada"}[args.as_class]
    report = decision.classify_algebra(tables, target)
    lines = [f"classify as {target}: {'pass' if report.passed else 'fail'}"]
    for r in report.results:
        if not r.holds:
            lines.append(f"  {r.label}: {r.statement} fails at {r.witness}")
    _emit(args, report.to_json(), "\n".join(lines))
    return 0 if report.passed else 1


def _cmd_star_search(args) -> int:
    found = decision.unique_star_search(args.size, force=args.force, jobs=args.jobs)
    expected = decision.expected_basic_star(args.size)
    matches = len(found) == 1 and np.array_equal(found[0], expected)
    payload = {
        "size": args.size,
        "candidates": 3 ** (args.size * args.size),
        "found": len(found),
        "tables": [t.tolist() for t in found],
        "matches_selection_equality": matches,
    }
    lines = [f"searched {payload['candidates']} tables, {len(found)} satisfy the axioms"]
    for t in found:
        for i in range(args.size):
            lines.append("  " + " ".join(TRUTH_NAMES[v] for v in t[i]))
        lines.append("")
    lines.append(f"matches the selection-model equality test: {matches}")
    _emit(args, payload, "\n".join(lines))
    return 0 if matches else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itealg",
        description="Workbench for if-then-else over three-valued sequential tests",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--seed", type=int, default=None, help="seed for randomized runs")
    parser.add_argument("--jobs", type=int, default=1, help="worker threads for enumeration")
    sub = parser.add_subparsers(dest="command", required=True)

    theories = tuple(decision.THEORIES)
    p = sub.add_parser("check", help="decide an identity over a theory")
    p.add_argument("statement", nargs="?")
    p.add_argument("--file", help="corpus file, one statement per line")
    p.add_argument("--theory", choices=theories, required=True)

    p = sub.add_parser("check-quasi", help="decide a quasi-identity over a theory")
    p.add_argument("statement", nargs="?")
    p.add_argument("--file", help="corpus file, one statement per line")
    p.add_argument("--theory", choices=theories, required=True)

    p = sub.add_parser("verify", help="run an axiom suite on a finite model")
    _add_model_source(p)
    p.add_argument("--suite", choices=decision.SUITE_NAMES, required=True)

    p = sub.add_parser("decompose", help="subdirect decomposition into selection models")
    _add_model_source(p)
    p.add_argument("--agreeable", action="store_true",
                   help="also verify the equality test descends to the factors")

    p = sub.add_parser("eval", help="evaluate a term in a model")
    p.add_argument("term")
    p.add_argument("--model", help="path to a model JSON file")
    group = p.add_argument_group("model generators")
    group.add_argument("--basic", type=int, metavar="N")
    group.add_argument("--functional", type=int, metavar="N")
    group.add_argument("--self-ada", type=int, metavar="N", dest="self_ada")
    group.add_argument("--bset-functional", type=int, metavar="N", dest="bset_functional")
    p.add_argument("--env", help="comma-separated assignments, e.g. a=T,s=2")

    p = sub.add_parser("classify", help="classify operation tables")
    p.add_argument("tables", help="path to tables JSON")
    p.add_argument("--as", dest="as_class", choices=("bool", "calg", "ada"), required=True)

    p = sub.add_parser("star-search", help="brute-force all equality-test tables")
    p.add_argument("--size", type=int, required=True, help="points including bot")
    p.add_argument("--force", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.seed is not None:
        random.seed(args.seed)
        np.random.seed(args.seed % (2**32))
    try:
        if args.command == "check":
            return _cmd_check(args, quasi=False)
        if args.command == "check-quasi":
            return _cmd_check(args, quasi=True)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "decompose":
            return _cmd_decompose(args)
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "star-search":
            return _cmd_star_search(args)
        parser.error(f"unknown command {args.command}")
    except (ParseError, ModelError, LogicError, decision.TheoryError,
            decision.GuardError, terms.EvalError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
