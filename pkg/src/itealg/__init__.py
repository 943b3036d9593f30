"""Workbench for conditional program semantics where tests can diverge:
three-valued sequential logic, finite if-then-else models, decision
procedures for identities and quasi-identities, and subdirect
decompositions into selection models."""

from .logic import (
    AlgebraTables,
    AxiomResult,
    LogicError,
    SuiteReport,
    TestVector,
    boolean_skeleton,
    classify_algebra,
    pair_apply,
    power,
    three,
    tv_apply,
    two,
)
from .models import (
    FiniteBSet,
    FiniteCSet,
    ModelError,
    PartialFn,
    basic_action,
    basic_bset,
    basic_cset,
    basic_star,
    bset_view,
    fn_action,
    fn_star,
    functional_bset,
    functional_cset,
    load_model,
    model_from_json,
    self_ada_cset,
    self_action,
    self_cset,
    self_star,
    table_eval,
)
from .terms import (
    Identity,
    ParseError,
    QuasiIdentity,
    SortError,
    Term,
    evaluate,
    free_vars,
    parse,
    render,
)
from .decision import (
    GuardError,
    TheoryError,
    Verdict,
    check_identity,
    check_quasi_identity,
    check_statement,
    check_statement_on_model,
    unique_star_search,
    verify_axiom_suite,
)
from .congruence import (
    CongruencePair,
    Embedding,
    Partition,
    all_congruences,
    boolean_ada_roundtrip,
    bset_ultrafilter_decompose,
    e_theta,
    find_ada_isomorphism,
    find_boolean_isomorphism,
    maximal_congruences,
    principal_congruence,
    subdirect_embed,
)

__version__ = "0.1.0"
