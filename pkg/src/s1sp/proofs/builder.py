"""Incremental construction of derivations, plus derived-rule helpers."""

from __future__ import annotations

from typing import Sequence

from ..syntax import (
    Box,
    Formula,
    Impl,
    SchemeId,
    conj,
    conj_all,
    equiv,
    instantiate_scheme,
    is_tautological_form,
    split_equiv,
    substitute,
    to_text,
)
from .kernel import AN, MP, SPSE, Ax, Derivation, Hyp, SPInst, Step, TautAx, sp_formula


class DerivationBuilder:
    """Appends steps and returns their indices. Re-proving a known formula reuses its step."""

    def __init__(self):
        self.steps: list[Step] = []
        self._index: dict[Formula, int] = {}
        self._axioms: dict[Formula, int] = {}

    def _add(self, formula: Formula, justification) -> int:
        # axiom steps may be targets of AN, so only reuse another axiom step for them
        axiom = isinstance(justification, (TautAx, Ax))
        known = (self._axioms if axiom else self._index).get(formula)
        if known is not None:
            return known
        self.steps.append(Step(formula, justification))
        k = len(self.steps) - 1
        self._index.setdefault(formula, k)
        if axiom:
            self._axioms.setdefault(formula, k)
        return k

    def append(self, step: Step) -> int:
        """Append without reuse (keeps a copied derivation's shape)."""
        self.steps.append(step)
        k = len(self.steps) - 1
        self._index.setdefault(step.formula, k)
        if isinstance(step.justification, (TautAx, Ax)):
            self._axioms.setdefault(step.formula, k)
        return k

    def formula(self, i: int) -> Formula:
        return self.steps[i].formula

    def derivation(self, conclusion: int | None = None) -> Derivation:
        """Snapshot; if conclusion is given and was reused from earlier, restate it last."""
        steps = list(self.steps)
        if conclusion is not None and conclusion != len(steps) - 1:
            steps.append(steps[conclusion])
        return Derivation(steps)

    # primitive steps

    def hyp(self, phi: Formula) -> int:
        return self._add(phi, Hyp())

    def taut(self, phi: Formula) -> int:
        if not is_tautological_form(phi):
            raise ValueError(f"not a tautological form: {to_text(phi, True)}")
        return self._add(phi, TautAx())

    def ax(self, scheme: SchemeId, **binding) -> int:
        binding = {k.replace("_", "'"): v for k, v in binding.items()}
        return self._add(instantiate_scheme(scheme, **binding), Ax(scheme, binding))

    def an(self, ref: int) -> int:
        return self._add(Box(self.formula(ref)), AN(ref))

    def sp(self, template: Formula, x: int, psi: Formula, psi2: Formula) -> int:
        return self._add(sp_formula(template, x, psi, psi2), SPInst(template, x, psi, psi2))

    def spse(self, template: Formula, x: int, ref: int) -> int:
        psi, psi2 = split_equiv(self.formula(ref))
        return self._add(equiv(substitute(template, x, psi), substitute(template, x, psi2)), SPSE(template, x, ref))

    def mp(self, minor: int, major: int) -> int:
        imp = self.formula(major)
        if not (isinstance(imp, Impl) and imp.left == self.formula(minor)):
            raise ValueError(f"MP shape mismatch between steps {minor} and {major}")
        return self._add(imp.right, MP(minor, major))

    # derived rules

    def taut_mp(self, premises: Sequence[int], conclusion: Formula) -> int:
        """Conclude from premises via the tautology p1 -> (p2 -> ... -> conclusion)."""
        imp = conclusion
        for p in reversed(premises):
            imp = Impl(self.formula(p), imp)
        cur = self.taut(imp)
        for p in premises:
            cur = self.mp(p, cur)
        return cur

    def conj_intro(self, i: int, j: int) -> int:
        return self.taut_mp([i, j], conj(self.formula(i), self.formula(j)))

    def an_taut(self, phi: Formula) -> int:
        return self.an(self.taut(phi))

    # strict-implication toolkit (S1 axioms plus scheme (3); no SP)

    def k_s3(self, a: Formula, b: Formula) -> int:
        """[](a->b) -> ([]a -> []b), from scheme (3) and axiom (ii)."""
        s3 = self.ax(SchemeId.S3AX, a=a, b=b)
        t = self.ax(SchemeId.II, a=Impl(Box(a), Box(b)))
        return self.taut_mp([s3, t], Impl(Box(Impl(a, b)), Impl(Box(a), Box(b))))

    def box_mp(self, i_box_x: int, i_box_xy: int) -> int:
        """From []x and [](x -> y) infer []y."""
        xy = self.formula(i_box_xy).sub
        k = self.k_s3(xy.left, xy.right)
        return self.mp(i_box_x, self.mp(i_box_xy, k))

    def box_trans(self, i: int, j: int) -> int:
        """From [](a->b) and [](b->c) infer [](a->c) by axiom (iii)."""
        ab, bc = self.formula(i).sub, self.formula(j).sub
        ax = self.ax(SchemeId.III, a=ab.left, b=ab.right, c=bc.right)
        return self.mp(self.conj_intro(i, j), ax)

    def box_conj(self, i: int, j: int) -> int:
        """From []a and []b infer [](a & b)."""
        a, b = self.formula(i).sub, self.formula(j).sub
        t = self.an_taut(Impl(a, Impl(b, conj(a, b))))
        return self.box_mp(j, self.box_mp(i, t))

    def box_taut(self, boxed: Sequence[int], target: Formula) -> int:
        """From []a1 ... []ak infer []target when (a1 & ... & ak) -> target is a tautology."""
        acc = boxed[0]
        for nxt in boxed[1:]:
            acc = self.box_conj(acc, nxt)
        body = self.formula(acc).sub
        return self.box_mp(acc, self.an_taut(Impl(body, target)))

    def lift(self, i: int) -> int:
        """From [](a->b) infer []([]a -> []b) by scheme (3)."""
        ab = self.formula(i).sub
        return self.mp(i, self.ax(SchemeId.S3AX, a=ab.left, b=ab.right))

    def boxed_k(self, q: Formula, r: Formula) -> int:
        """[]( [](q->r) -> ([]q -> []r) )"""
        a1 = self.an(self.ax(SchemeId.S3AX, a=q, b=r))
        a2 = self.an(self.ax(SchemeId.II, a=Impl(Box(q), Box(r))))
        return self.box_trans(a1, a2)

    def boxed_box_conj(self, p: Formula, q: Formula) -> int:
        """[]( ([]p & []q) -> [](p & q) )"""
        r = conj(p, q)
        lifted = self.lift(self.an_taut(Impl(p, Impl(q, r))))
        chained = self.box_trans(lifted, self.boxed_k(q, r))
        return self.box_taut([chained], Impl(conj_all([Box(p), Box(q)]), Box(r)))
