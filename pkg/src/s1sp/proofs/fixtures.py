"""Generated derivations: principle N, principle K and the identity axioms in S3."""

from __future__ import annotations

from ..syntax import (
    TOP,
    Box,
    Formula,
    Impl,
    Neg,
    SchemeId,
    Var,
    conj,
    equiv,
    fresh_var,
    iff,
    split_equiv,
)
from .builder import DerivationBuilder
from .deduction import deduction_transform
from .kernel import S1_SP, Derivation


def principle_n(phi: Formula) -> Formula:
    return iff(Box(phi), equiv(phi, TOP))


def principle_k(phi: Formula, psi: Formula) -> Formula:
    return Impl(Box(Impl(phi, psi)), Impl(Box(phi), Box(psi)))


def _equiv_transitive(b: DerivationBuilder, i: int, j: int) -> int:
    """From a == c and c == e infer a == e, using axiom (iii) both ways."""
    a, c = _split(b, i)
    c2, e = _split(b, j)
    assert c == c2
    fwd = b.ax(SchemeId.III, a=a, b=c, c=e)
    bwd = b.ax(SchemeId.III, a=e, b=c, c=a)
    box_ac, box_ca = Box(Impl(a, c)), Box(Impl(c, a))
    box_ce, box_ec = Box(Impl(c, e)), Box(Impl(e, c))
    fwd_in = b.taut_mp([i, j], conj(box_ac, box_ce))
    bwd_in = b.taut_mp([i, j], conj(box_ec, box_ca))
    return b.conj_intro(b.mp(fwd_in, fwd), b.mp(bwd_in, bwd))


def _split(b: DerivationBuilder, i: int):
    parts = split_equiv(b.formula(i))
    if parts is None:
        raise ValueError(f"step {i} is not a strict equivalence")
    return parts


def _detach_equiv(b: DerivationBuilder, i_equiv: int, i_right: int) -> int:
    """From left == right and right, infer left (box elimination by axiom (ii))."""
    left, right = _split(b, i_equiv)
    box_rl = b.taut_mp([i_equiv], Box(Impl(right, left)))
    rl = b.mp(box_rl, b.ax(SchemeId.II, a=Impl(right, left)))
    return b.mp(i_right, rl)


def prove_principle_n(b: DerivationBuilder, phi: Formula) -> int:
    """Append a closed proof of []phi <-> (phi == T); returns the conclusion's index."""
    x = fresh_var(phi)
    phi_top, top_phi = Impl(phi, TOP), Impl(TOP, phi)
    # (a) (phi -> T) == T   and   (b) (T -> phi) == phi
    ia = b.conj_intro(b.an_taut(Impl(phi_top, TOP)), b.an_taut(Impl(TOP, phi_top)))
    ib = b.conj_intro(b.an_taut(Impl(top_phi, phi)), b.an_taut(Impl(phi, top_phi)))
    chi1 = iff(Box(phi), conj(Box(Var(x)), Box(top_phi)))
    ic = b.mp(ia, b.sp(chi1, x, phi_top, TOP))
    chi2 = iff(Box(phi), conj(Box(TOP), Box(Var(x))))
    id_ = b.mp(ib, b.sp(chi2, x, top_phi, phi))
    itrans = _equiv_transitive(b, ic, id_)
    # right-hand side []phi <-> ([]T & []phi) holds because []T is provable
    box_top = b.an(b.taut(TOP))
    rhs = iff(Box(phi), conj(Box(TOP), Box(phi)))
    irhs = b.taut_mp([box_top], rhs)
    return _detach_equiv(b, itrans, irhs)


def build_principle_N_proof(phi: Formula) -> Derivation:
    b = DerivationBuilder()
    return b.derivation(prove_principle_n(b, phi))


def build_K_hypothesis_proof(phi: Formula, psi: Formula) -> Derivation:
    """{[](phi->psi), []phi} |- []psi."""
    b = DerivationBuilder()
    h_imp = b.hyp(Box(Impl(phi, psi)))
    h_phi = b.hyp(Box(phi))
    n_phi = prove_principle_n(b, phi)
    phi_is_top = b.mp(h_phi, b.taut_mp([n_phi], Impl(Box(phi), equiv(phi, TOP))))
    x = fresh_var(phi, psi)
    sp = b.sp(Box(Impl(Var(x), psi)), x, phi, TOP)
    same = b.mp(phi_is_top, sp)  # [](phi->psi) == [](T->psi)
    box_fwd = b.taut_mp([same], Box(Impl(Box(Impl(phi, psi)), Box(Impl(TOP, psi)))))
    fwd = b.mp(box_fwd, b.ax(SchemeId.II, a=Impl(Box(Impl(phi, psi)), Box(Impl(TOP, psi)))))
    box_top_psi = b.mp(h_imp, fwd)
    box_psi_top = b.an_taut(Impl(psi, TOP))
    psi_is_top = b.conj_intro(box_psi_top, box_top_psi)
    n_psi = prove_principle_n(b, psi)
    back = b.taut_mp([n_psi], Impl(equiv(psi, TOP), Box(psi)))
    return b.derivation(b.mp(psi_is_top, back))


def build_K_proof(phi: Formula, psi: Formula) -> Derivation:
    d = build_K_hypothesis_proof(phi, psi)
    h_imp, h_phi = Box(Impl(phi, psi)), Box(phi)
    d = deduction_transform(d, S1_SP, [h_imp], h_phi)
    return deduction_transform(d, S1_SP, [], h_imp)


# -- identity axioms in S3 (only TAUT, (ii), (iii), (3), AN and MP are used) --

IDENTITY_AXIOM_NAMES = ("a", "b", "c", "d", "e", "box-c", "box-d", "box-e")


def identity_axiom_formulas(phi, psi, phi2, psi2) -> dict[str, Formula]:
    c = Impl(equiv(phi, psi), equiv(Neg(phi), Neg(psi)))
    d = Impl(conj(equiv(phi, psi), equiv(phi2, psi2)), equiv(Impl(phi, phi2), Impl(psi, psi2)))
    e = Impl(equiv(phi, psi), equiv(Box(phi), Box(psi)))
    return {
        "a": equiv(phi, phi),
        "b": Impl(equiv(phi, psi), Impl(phi, psi)),
        "c": c,
        "d": d,
        "e": e,
        "box-c": Box(c),
        "box-d": Box(d),
        "box-e": Box(e),
    }


def _prove_box_c(b, phi, psi) -> int:
    a, bb = Impl(phi, psi), Impl(psi, phi)
    c, d = Impl(Neg(phi), Neg(psi)), Impl(Neg(psi), Neg(phi))
    i1 = b.lift(b.an_taut(Impl(bb, c)))
    i2 = b.lift(b.an_taut(Impl(a, d)))
    target = Impl(conj(Box(a), Box(bb)), conj(Box(c), Box(d)))
    return b.box_taut([i1, i2], target)


def _prove_box_d(b, phi, psi, phi2, psi2) -> int:
    a, bb = Impl(phi, psi), Impl(psi, phi)
    a2, b2 = Impl(phi2, psi2), Impl(psi2, phi2)
    g = Impl(Impl(phi, phi2), Impl(psi, psi2))
    h = Impl(Impl(psi, psi2), Impl(phi, phi2))

    def half(p, q, goal):
        lifted = b.lift(b.an_taut(Impl(conj(p, q), goal)))
        return b.box_trans(b.boxed_box_conj(p, q), lifted)

    j1 = half(bb, a2, g)
    j2 = half(a, b2, h)
    ante = conj(conj(Box(a), Box(bb)), conj(Box(a2), Box(b2)))
    return b.box_taut([j1, j2], Impl(ante, conj(Box(g), Box(h))))


def _prove_box_e(b, phi, psi) -> int:
    a, bb = Impl(phi, psi), Impl(psi, phi)
    i1 = b.an(b.ax(SchemeId.S3AX, a=phi, b=psi))
    i2 = b.an(b.ax(SchemeId.S3AX, a=psi, b=phi))
    target = Impl(conj(Box(a), Box(bb)), conj(Box(Impl(Box(phi), Box(psi))), Box(Impl(Box(psi), Box(phi)))))
    return b.box_taut([i1, i2], target)


def _unbox(b, i) -> int:
    return b.mp(i, b.ax(SchemeId.II, a=b.formula(i).sub))


def build_identity_axiom_proofs_S3(
    phi: Formula = Var(0), psi: Formula = Var(1), phi2: Formula = Var(2), psi2: Formula = Var(3)
) -> dict[str, Derivation]:
    """Closed S3 derivations of identity axioms (a)-(e) and the boxed forms of (c)-(e)."""
    goals = identity_axiom_formulas(phi, psi, phi2, psi2)
    out: dict[str, Derivation] = {}

    def run(name, fn):
        b = DerivationBuilder()
        d = b.derivation(fn(b))
        assert d.conclusion == goals[name], name
        out[name] = d

    def prove_a(b):
        t = b.an_taut(Impl(phi, phi))
        return b.conj_intro(t, t)

    def prove_b(b):
        ii = b.ax(SchemeId.II, a=Impl(phi, psi))
        return b.taut_mp([ii], goals["b"])

    def prove_e(b):
        s1 = b.ax(SchemeId.S3AX, a=phi, b=psi)
        s2 = b.ax(SchemeId.S3AX, a=psi, b=phi)
        return b.taut_mp([s1, s2], goals["e"])

    run("a", prove_a)
    run("b", prove_b)
    run("c", lambda b: _unbox(b, _prove_box_c(b, phi, psi)))
    run("d", lambda b: _unbox(b, _prove_box_d(b, phi, psi, phi2, psi2)))
    run("e", prove_e)
    run("box-c", lambda b: _prove_box_c(b, phi, psi))
    run("box-d", lambda b: _prove_box_d(b, phi, psi, phi2, psi2))
    run("box-e", lambda b: _prove_box_e(b, phi, psi))
    return out
