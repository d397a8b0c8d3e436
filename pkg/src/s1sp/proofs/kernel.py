"""Hilbert-style derivations and the per-system proof checker."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence, Union

from ..syntax import (
    Box,
    Formula,
    Impl,
    SchemeId,
    equiv,
    instantiate,
    SCHEME_PATTERNS,
    is_tautological_form,
    match_scheme,
    split_equiv,
    substitute,
    to_text,
)


class SystemId(str, enum.Enum):
    S1 = "S1"
    S1_SP = "S1_SP"
    S1_BOXSP = "S1_BOXSP"
    S3 = "S3"
    S4 = "S4"
    S5 = "S5"


@dataclass(frozen=True)
class SystemConfig:
    id: str
    axiom_schemes: frozenset[SchemeId]
    an_eligible: frozenset[SchemeId]
    allow_spse: bool = True
    allow_sp_step: bool = False

    def __post_init__(self):
        if not self.an_eligible <= self.axiom_schemes:
            raise ValueError("AN-eligible schemes must be axioms of the system")


_S1_AX = frozenset({SchemeId.TAUT, SchemeId.II, SchemeId.III})
_SP_AX = frozenset({SchemeId.IV, SchemeId.V, SchemeId.VI})

S1 = SystemConfig(SystemId.S1.value, _S1_AX, _S1_AX, allow_spse=True, allow_sp_step=False)
S1_SP = SystemConfig(SystemId.S1_SP.value, _S1_AX | _SP_AX, _S1_AX, allow_spse=True, allow_sp_step=True)
S1_BOXSP = replace(S1_SP, id=SystemId.S1_BOXSP.value, an_eligible=_S1_AX | _SP_AX)
S3 = replace(
    S1_SP,
    id=SystemId.S3.value,
    axiom_schemes=S1_SP.axiom_schemes | {SchemeId.S3AX},
    an_eligible=_S1_AX | {SchemeId.S3AX},
)
S4 = replace(
    S3,
    id=SystemId.S4.value,
    axiom_schemes=S3.axiom_schemes | {SchemeId.S4AX},
    an_eligible=S3.an_eligible | {SchemeId.S4AX},
)


def make_s5(an_on_s5_axiom: bool = True) -> SystemConfig:
    """S4 plus scheme (5); whether AN may box (5) is configurable."""
    extra = {SchemeId.S5AX} if an_on_s5_axiom else set()
    return replace(
        S4,
        id=SystemId.S5.value,
        axiom_schemes=S4.axiom_schemes | {SchemeId.S5AX},
        an_eligible=S4.an_eligible | extra,
    )


S5 = make_s5()

SYSTEMS: dict[SystemId, SystemConfig] = {
    SystemId.S1: S1,
    SystemId.S1_SP: S1_SP,
    SystemId.S1_BOXSP: S1_BOXSP,
    SystemId.S3: S3,
    SystemId.S4: S4,
    SystemId.S5: S5,
}

_SYSTEM_ALIASES = {
    "s1": SystemId.S1,
    "s1+sp": SystemId.S1_SP,
    "s1sp": SystemId.S1_SP,
    "s1_sp": SystemId.S1_SP,
    "s1+boxsp": SystemId.S1_BOXSP,
    "s1+[]sp": SystemId.S1_BOXSP,
    "s1_boxsp": SystemId.S1_BOXSP,
    "s3": SystemId.S3,
    "s4": SystemId.S4,
    "s5": SystemId.S5,
}


def get_system(name: str | SystemId | SystemConfig) -> SystemConfig:
    if isinstance(name, SystemConfig):
        return name
    if isinstance(name, SystemId):
        return SYSTEMS[name]
    try:
        return SYSTEMS[_SYSTEM_ALIASES[name.strip().lower()]]
    except KeyError:
        raise ValueError(f"unknown system {name!r}") from None


# -- derivations -------------------------------------------------------------


@dataclass(frozen=True)
class Hyp:
    pass


@dataclass(frozen=True)
class TautAx:
    pass


@dataclass(frozen=True)
class Ax:
    scheme: SchemeId
    binding: Mapping[str, Formula] | None = None


@dataclass(frozen=True)
class AN:
    ref: int


@dataclass(frozen=True)
class SPInst:
    template: Formula
    var: int
    psi: Formula
    psi2: Formula


@dataclass(frozen=True)
class SPSE:
    template: Formula
    var: int
    ref: int


@dataclass(frozen=True)
class MP:
    minor: int  # proves phi
    major: int  # proves phi -> chi


Justification = Union[Hyp, TautAx, Ax, AN, SPInst, SPSE, MP]


@dataclass(frozen=True)
class Step:
    formula: Formula
    justification: Justification


@dataclass
class Derivation:
    steps: list[Step] = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __getitem__(self, i) -> Step:
        return self.steps[i]

    @property
    def conclusion(self) -> Formula:
        if not self.steps:
            raise ValueError("empty derivation")
        return self.steps[-1].formula

    @property
    def hypotheses_used(self) -> list[Formula]:
        return list(dict.fromkeys(s.formula for s in self.steps if isinstance(s.justification, Hyp)))


class ProofError(Exception):
    def __init__(self, step: int, kind: str, reason: str):
        self.step = step
        self.kind = kind
        self.reason = reason
        super().__init__(f"step {step}: {kind}: {reason}")


def sp_formula(template: Formula, x: int, psi: Formula, psi2: Formula) -> Formula:
    """(psi == psi') -> (template[x:=psi] == template[x:=psi'])"""
    return Impl(equiv(psi, psi2), equiv(substitute(template, x, psi), substitute(template, x, psi2)))


def _ref(k: int, r: int) -> None:
    if not isinstance(r, int) or not 0 <= r < k:
        raise ProofError(k, "bad-reference", f"reference {r!r} does not point to an earlier step")


def _axiom_scheme(step: Step) -> SchemeId | None:
    j = step.justification
    if isinstance(j, TautAx):
        return SchemeId.TAUT
    if isinstance(j, Ax):
        return SchemeId(j.scheme)
    return None


def check_derivation(
    d: Derivation,
    system: SystemConfig | str,
    hypotheses: Sequence[Formula] = (),
) -> list[frozenset[Formula]]:
    """Check every step. Returns each step's hypothesis dependencies; raises ProofError."""
    sys = get_system(system)
    hyps = set(hypotheses)
    deps: list[frozenset[Formula]] = []
    none: frozenset[Formula] = frozenset()
    if not d.steps:
        raise ProofError(0, "empty", "derivation has no steps")
    for k, step in enumerate(d.steps):
        phi, j = step.formula, step.justification
        if isinstance(j, Hyp):
            if phi not in hyps:
                raise ProofError(k, "not-hypothesis", f"{to_text(phi, True)} is not a hypothesis")
            deps.append(frozenset({phi}))
        elif isinstance(j, TautAx):
            if SchemeId.TAUT not in sys.axiom_schemes:
                raise ProofError(k, "scheme-not-in-system", "TAUT")
            if not is_tautological_form(phi):
                raise ProofError(k, "not-tautology", f"{to_text(phi, True)} is not a tautological form")
            deps.append(none)
        elif isinstance(j, Ax):
            scheme = SchemeId(j.scheme)
            if scheme not in sys.axiom_schemes:
                raise ProofError(k, "scheme-not-in-system", f"{scheme.value} is not an axiom of {sys.id}")
            if scheme is SchemeId.TAUT:
                if not is_tautological_form(phi):
                    raise ProofError(k, "not-tautology", to_text(phi, True))
            elif j.binding is None:
                if match_scheme(phi, scheme) is None:
                    raise ProofError(k, "scheme-mismatch", f"not an instance of {scheme.value}")
            else:
                try:
                    inst = instantiate(SCHEME_PATTERNS[scheme], j.binding)
                except KeyError as exc:
                    raise ProofError(k, "scheme-mismatch", str(exc)) from None
                if inst != phi:
                    raise ProofError(k, "scheme-mismatch", f"binding does not instantiate {scheme.value} to the step formula")
            deps.append(none)
        elif isinstance(j, AN):
            _ref(k, j.ref)
            target = d.steps[j.ref]
            scheme = _axiom_scheme(target)
            if scheme is None:
                raise ProofError(k, "an-not-axiom", f"step {j.ref} is not an axiom")
            if scheme not in sys.an_eligible:
                raise ProofError(k, "an-ineligible", f"AN does not apply to {scheme.value} in {sys.id}")
            if phi != Box(target.formula):
                raise ProofError(k, "formula-mismatch", "AN conclusion must box the referenced axiom")
            deps.append(none)
        elif isinstance(j, SPInst):
            if not sys.allow_sp_step:
                raise ProofError(k, "sp-disabled", f"SP steps are not available in {sys.id}")
            if phi != sp_formula(j.template, j.var, j.psi, j.psi2):
                raise ProofError(k, "formula-mismatch", "not the SP instance for this template")
            deps.append(none)
        elif isinstance(j, SPSE):
            if not sys.allow_spse:
                raise ProofError(k, "spse-disabled", f"SPSE is not available in {sys.id}")
            _ref(k, j.ref)
            if deps[j.ref]:
                raise ProofError(k, "spse-dependent", f"step {j.ref} depends on hypotheses")
            parts = split_equiv(d.steps[j.ref].formula)
            if parts is None:
                raise ProofError(k, "spse-shape", f"step {j.ref} is not a strict equivalence")
            psi, psi2 = parts
            expected = equiv(substitute(j.template, j.var, psi), substitute(j.template, j.var, psi2))
            if phi != expected:
                raise ProofError(k, "formula-mismatch", "not the SPSE conclusion for this template")
            deps.append(none)
        elif isinstance(j, MP):
            _ref(k, j.minor)
            _ref(k, j.major)
            major = d.steps[j.major].formula
            if not (isinstance(major, Impl) and major.left == d.steps[j.minor].formula and major.right == phi):
                raise ProofError(k, "mp-shape", f"step {j.major} is not step {j.minor} -> step formula")
            deps.append(deps[j.minor] | deps[j.major])
        else:
            raise ProofError(k, "unknown-justification", repr(j))
    return deps


def accepts(d: Derivation, system, hypotheses: Sequence[Formula] = ()) -> bool:
    try:
        check_derivation(d, system, hypotheses)
    except ProofError:
        return False
    return True
