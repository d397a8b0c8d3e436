"""Command-line front end.

Exit codes: 0 affirmative, 1 negative (countermodel found, proof rejected,
condition failed), 2 usage or input format error.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence

from .algebra import (
    CLASS_CONDITIONS,
    FiniteModalAlgebra,
    ModelClass,
    ModelFormatError,
    check_conditions,
    element_to_set,
    is_monotonic,
    paper_countermodel,
    parse_model,
    to_model_text,
)
from .kripke import find_s2_countermodel, to_kripke_text, valid_in_kripke
from .proofs import (
    IDENTITY_AXIOM_NAMES,
    ProofError,
    ProofFormatError,
    build_identity_axiom_proofs_S3,
    build_K_proof,
    build_principle_N_proof,
    check_derivation,
    deduction_transform,
    get_system,
    parse_proof_text,
    to_proof_text,
)
from .search import count_models, enumerate_models, find_countermodel
from .semantics import (
    AssignmentCapExceeded,
    Interpretation,
    consequence_in_model,
    describe_assignment,
    evaluate,
    format_assignment,
    valid_in_model,
)
from .syntax import Formula, ParseError, Var, parse, to_text

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _formula(text: str, what: str = "formula") -> Formula:
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(f"{what} {text!r}: {exc}") from None


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _model(args) -> FiniteModalAlgebra:
    if args.paper_countermodel:
        return paper_countermodel()
    if not args.model:
        raise UsageError("a model is required (--model FILE or --paper-countermodel)")
    try:
        return parse_model(_read(args.model))
    except ModelFormatError as exc:
        raise UsageError(f"{args.model}: {exc}") from None


_SET_RE = re.compile(r"\{\s*(\d+(?:\s*,\s*\d+)*)?\s*\}$")


def _element(text: str, M: FiniteModalAlgebra) -> int:
    m = _SET_RE.match(text.strip())
    if m:
        atoms = [int(a) for a in m.group(1).split(",")] if m.group(1) else []
        if any(not 1 <= a <= M.atoms for a in atoms):
            raise UsageError(f"atom out of range in {text!r}")
        value = sum(1 << (a - 1) for a in set(atoms))
    else:
        try:
            value = int(text)
        except ValueError:
            raise UsageError(f"bad element {text!r}; use an integer bitmask or a set like {{1,2}}") from None
    if not 0 <= value < M.size:
        raise UsageError(f"element {value} outside 0..{M.size - 1}")
    return value


def _assignment(items: Sequence[str], M: FiniteModalAlgebra) -> dict[int, int]:
    out = {}
    for item in items:
        m = re.match(r"\s*x(\d+)\s*=\s*(.+)$", item)
        if m is None:
            raise UsageError(f"bad assignment {item!r}; expected x<i>=<element>")
        out[int(m.group(1))] = _element(m.group(2), M)
    return out


def _witness_line(assignment: dict[int, int]) -> str:
    return f"{format_assignment(assignment)}  # {describe_assignment(assignment)}"


def _report_verdict(label: str, v) -> str:
    if v:
        return f"{label}: ok"
    w = v.witness
    if isinstance(w, tuple):
        shown = ", ".join(element_to_set(x) for x in w)
        return f"{label}: FAIL at ({shown})  # {w}"
    return f"{label}: FAIL at {element_to_set(w)}  # {w}"


# -- subcommands ---------------------------------------------------------------


def cmd_parse(args) -> int:
    print(to_text(_formula(args.formula), sugar=args.sugar))
    return OK


def cmd_eval(args) -> int:
    M = _model(args)
    phi = _formula(args.formula)
    value = evaluate(Interpretation(M, _assignment(args.assign or [], M)), phi)
    print(f"{value}  # {element_to_set(value)}{' TRUE' if M.is_true(value) else ''}")
    return OK


def cmd_check_model(args) -> int:
    M = _model(args)
    report = check_conditions(M)
    for v in report.results:
        print(_report_verdict(f"condition {v.condition}", v))
    ok = report.ok
    c = ModelClass(args.model_class)
    for cond in CLASS_CONDITIONS[c]:
        v = cond(M)
        print(_report_verdict(f"condition {v.condition or cond.__name__}", v))
        ok = ok and bool(v)
    if args.monotonic:
        v = is_monotonic(M)
        print(_report_verdict("monotonic", v))
    print(f"class {c.value}: {'ok' if ok else 'FAIL'}")
    return OK if ok else NEGATIVE


def cmd_valid(args) -> int:
    M = _model(args)
    v = valid_in_model(M, _formula(args.formula))
    if v:
        print("valid")
        return OK
    print("not valid; falsified by")
    print(_witness_line(v.witness))
    return NEGATIVE


def cmd_consequence(args) -> int:
    M = _model(args)
    hyps = [_formula(h, "hypothesis") for h in args.hyp or []]
    v = consequence_in_model(M, hyps, _formula(args.formula))
    if v:
        print("consequence holds")
        return OK
    print("consequence fails; counterexample")
    print(_witness_line(v.witness))
    return NEGATIVE


def cmd_find_countermodel(args) -> int:
    phi = _formula(args.formula)
    found = find_countermodel(phi, args.atoms, ModelClass(args.model_class))
    if found is None:
        print(f"no countermodel in class {args.model_class} with at most {args.atoms} atoms")
        return OK
    print(to_model_text(found.algebra), end="")
    print(f"# assignment: {_witness_line(found.assignment)}")
    return NEGATIVE


def cmd_enumerate(args) -> int:
    c = ModelClass(args.model_class)
    if args.count:
        print(count_models(args.atoms, c))
        return OK
    for k, M in enumerate(enumerate_models(args.atoms, c)):
        if k:
            print("---")
        print(to_model_text(M), end="")
    return OK


def _proof_file(path: str):
    try:
        return parse_proof_text(_read(path))
    except ProofFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _system(name: str | None, fallback: str | None):
    chosen = name or fallback
    if chosen is None:
        raise UsageError("no proof system given (--system or a 'system' header line)")
    try:
        return get_system(chosen)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_check_proof(args) -> int:
    pf = _proof_file(args.file)
    system = _system(args.system, pf.system)
    try:
        check_derivation(pf.derivation, system, pf.hypotheses)
    except ProofError as exc:
        print(f"rejected in {system.id}: step {exc.step}: {exc.kind}: {exc.reason}")
        return NEGATIVE
    d = pf.derivation
    print(f"accepted in {system.id}: {len(d)} steps, {len(pf.hypotheses)} hypotheses")
    print(f"conclusion: {to_text(d.conclusion, sugar=True)}")
    return OK


def cmd_deduce(args) -> int:
    pf = _proof_file(args.file)
    system = _system(args.system, pf.system)
    phi = _formula(args.discharge, "discharged hypothesis")
    rest = [h for h in pf.hypotheses if h != phi]
    try:
        out = deduction_transform(pf.derivation, system, rest, phi)
    except ProofError as exc:
        print(f"input rejected in {system.id}: step {exc.step}: {exc.kind}: {exc.reason}")
        return NEGATIVE
    print(to_proof_text(out, system.id), end="")
    return OK


_FIXTURE_ARITY = {"lemma2": 1, "lemma3": 2, "s3-identity": 4}
_FIXTURE_ALIASES = {"principle-n": "lemma2", "principle-k": "lemma3"}


def cmd_emit_fixture(args) -> int:
    args.fixture = _FIXTURE_ALIASES.get(args.fixture, args.fixture)
    arity = _FIXTURE_ARITY[args.fixture]
    given = [_formula(a, "argument") for a in args.args or []]
    if len(given) > arity:
        raise UsageError(f"{args.fixture} takes at most {arity} formulas")
    fs = given + [Var(i) for i in range(len(given), arity)]
    if args.fixture == "lemma2":
        print(to_proof_text(build_principle_N_proof(fs[0]), "S1_SP"), end="")
    elif args.fixture == "lemma3":
        print(to_proof_text(build_K_proof(fs[0], fs[1]), "S1_SP"), end="")
    else:
        proofs = build_identity_axiom_proofs_S3(*fs)
        names = [args.axiom] if args.axiom else list(IDENTITY_AXIOM_NAMES)
        for k, name in enumerate(names):
            if k:
                print()
            if len(names) > 1:
                print(f"# identity axiom ({name})")
            print(to_proof_text(proofs[name], "S3"), end="")
    return OK


def cmd_kripke_search(args) -> int:
    phi = _formula(args.formula)
    K = find_s2_countermodel(phi, args.max_worlds)
    if K is None:
        print(f"no refuting model with at most {args.max_worlds} worlds")
        return OK
    print(to_kripke_text(K), end="")
    world = valid_in_kripke(K, phi).witness
    print(f"# refuted at normal world {world}; transitive: {'yes' if K.is_transitive() else 'no'}")
    return NEGATIVE


# -- argument parsing ----------------------------------------------------------


def _add_model(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--model", metavar="FILE", help="model file (atoms/designated/box lines)")
    g.add_argument("--paper-countermodel", action="store_true", help="use the built-in two-atom countermodel")


def _add_class(p, required=False):
    p.add_argument(
        "--class",
        dest="model_class",
        choices=[c.value for c in ModelClass],
        default=ModelClass.BASE.value,
        required=required,
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="s1sp", description="Strict-identity modal logic toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and reprint a formula")
    p.add_argument("formula")
    p.add_argument("--sugar", action="store_true", help="print with abbreviations folded")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="evaluate a formula under an assignment")
    p.add_argument("formula")
    _add_model(p)
    p.add_argument("--assign", nargs="*", metavar="x<i>=<elem>")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check-model", help="check model conditions")
    _add_model(p)
    _add_class(p)
    p.add_argument("--monotonic", action="store_true", help="also report monotonicity of the box table")
    p.set_defaults(func=cmd_check_model)

    p = sub.add_parser("valid", help="validity in one model")
    p.add_argument("formula")
    _add_model(p)
    p.set_defaults(func=cmd_valid)

    p = sub.add_parser("consequence", help="semantic consequence in one model")
    p.add_argument("--hyp", action="append", metavar="FORMULA")
    p.add_argument("formula")
    _add_model(p)
    p.set_defaults(func=cmd_consequence)

    p = sub.add_parser("find-countermodel", help="search models of a class for a refutation")
    p.add_argument("formula")
    p.add_argument("--atoms", type=int, required=True)
    _add_class(p)
    p.set_defaults(func=cmd_find_countermodel)

    p = sub.add_parser("enumerate", help="list or count the models of a class")
    p.add_argument("--atoms", type=int, required=True)
    _add_class(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--count", action="store_true")
    mode.add_argument("--emit", action="store_true", help="print models separated by '---' (default)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check-proof", help="check a proof file")
    p.add_argument("file")
    p.add_argument("--system")
    p.set_defaults(func=cmd_check_proof)

    p = sub.add_parser("deduce", help="discharge a hypothesis from a proof file")
    p.add_argument("file")
    p.add_argument("--discharge", required=True, metavar="FORMULA")
    p.add_argument("--system")
    p.set_defaults(func=cmd_deduce)

    p = sub.add_parser("emit-fixture", help="print a generated derivation")
    p.add_argument("fixture", choices=sorted(_FIXTURE_ARITY) + sorted(_FIXTURE_ALIASES))
    p.add_argument("--args", nargs="*", metavar="FORMULA")
    p.add_argument("--axiom", choices=IDENTITY_AXIOM_NAMES, help="s3-identity only: emit one axiom")
    p.set_defaults(func=cmd_emit_fixture)

    p = sub.add_parser("kripke-search", help="search reflexive non-normal-world models")
    p.add_argument("formula")
    p.add_argument("--max-worlds", type=int, default=3)
    p.set_defaults(func=cmd_kripke_search)
    return ap


def run(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (AssignmentCapExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(run())
