"""Discharging hypotheses (deduction theorem) and replaying SPSE through SP."""

from __future__ import annotations

from dataclasses import replace
from typing import Sequence

from ..syntax import Formula, Impl, split_equiv
from .builder import DerivationBuilder
from .kernel import AN, MP, SPSE, Derivation, Hyp, SPInst, Step, SystemConfig, check_derivation, sp_formula


def _remap(j, new: dict[int, int]):
    if isinstance(j, AN):
        return AN(new[j.ref])
    if isinstance(j, SPSE):
        return replace(j, ref=new[j.ref])
    if isinstance(j, MP):
        return MP(new[j.minor], new[j.major])
    return j


def deduction_transform(
    d: Derivation,
    system: SystemConfig | str,
    hypotheses: Sequence[Formula],
    phi: Formula,
) -> Derivation:
    """Turn a derivation of psi from hypotheses + [phi] into one of phi -> psi from hypotheses.

    Steps that do not depend on phi are copied verbatim and weakened on demand;
    steps that do are rebuilt as phi -> chi.
    """
    deps = check_derivation(d, system, [*hypotheses, phi])
    b = DerivationBuilder()
    copy: dict[int, int] = {}
    cond: dict[int, int] = {}

    def conditional(k: int) -> int:
        # index of a step proving phi -> (formula of step k)
        if k not in cond:
            chi = d[k].formula
            cond[k] = b.mp(copy[k], b.taut(Impl(chi, Impl(phi, chi))))
        return cond[k]

    for k, step in enumerate(d):
        j = step.justification
        if phi not in deps[k]:
            copy[k] = b.append(Step(step.formula, _remap(j, copy)))
        elif isinstance(j, Hyp):
            cond[k] = b.taut(Impl(phi, phi))
        elif isinstance(j, MP):
            a = d[j.minor].formula
            chi = step.formula
            minor, major = conditional(j.minor), conditional(j.major)
            dist = b.taut(Impl(Impl(phi, Impl(a, chi)), Impl(Impl(phi, a), Impl(phi, chi))))
            cond[k] = b.mp(minor, b.mp(major, dist))
        else:  # pragma: no cover - the checker guarantees only HYP and MP carry dependencies
            raise AssertionError(f"step {k} depends on a hypothesis but is {j!r}")

    final = conditional(len(d) - 1)
    out = b.derivation()
    if final != len(out) - 1:
        # reuse put the conclusion earlier; restating it keeps every reference backward
        out.steps.append(out.steps[final])
    return out


def expand_spse(d: Derivation) -> Derivation:
    """Replace each SPSE step by an SP instance and MP on its (closed) premise."""
    out: list[Step] = []
    new: dict[int, int] = {}
    for k, step in enumerate(d):
        j = step.justification
        if isinstance(j, SPSE):
            psi, psi2 = split_equiv(d[j.ref].formula)
            sp = SPInst(j.template, j.var, psi, psi2)
            out.append(Step(sp_formula(j.template, j.var, psi, psi2), sp))
            out.append(Step(step.formula, MP(new[j.ref], len(out) - 1)))
        else:
            out.append(Step(step.formula, _remap(j, new)))
        new[k] = len(out) - 1
    return Derivation(out)
