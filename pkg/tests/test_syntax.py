import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from s1sp.syntax import (
    BOT,
    TOP,
    AtomCapExceeded,
    Box,
    Impl,
    Neg,
    ParseError,
    SchemeId,
    Var,
    conj,
    equiv,
    fresh_var,
    iff,
    instantiate,
    instantiate_scheme,
    is_tautological_form,
    match_scheme,
    parse,
    rename,
    split_equiv,
    substitute,
    to_text,
    variables,
)
from s1sp.syntax import SCHEME_PATTERNS
from strategies import formulas


def test_parse_box_implication():
    assert parse("[](x0 -> x1)") == Box(Impl(Var(0), Var(1)))


def test_parse_equivalence_desugars():
    expected = Neg(Impl(Box(Impl(Var(2), Var(3))), Neg(Box(Impl(Var(3), Var(2))))))
    assert parse("x2 == x3") == expected


def test_top_is_x0_implies_x0():
    assert parse("T") == Impl(Var(0), Var(0)) == TOP
    assert parse("F") == Neg(TOP) == BOT


def test_precedence_and_associativity():
    assert parse("x1 -> x2 -> x3") == Impl(Var(1), Impl(Var(2), Var(3)))
    assert parse("~x1 -> x2") == Impl(Neg(Var(1)), Var(2))
    assert parse("[]x1 & x2 -> x3") == Impl(conj(Box(Var(1)), Var(2)), Var(3))
    assert parse("x1 -> x2 <-> x3") == iff(Impl(Var(1), Var(2)), Var(3))


def test_unicode_aliases():
    assert parse("□(x1 → ¬x2) ≡ ⊤") == equiv(Box(Impl(Var(1), Neg(Var(2)))), TOP)


@pytest.mark.parametrize(
    "text, column",
    [("x1 -> (x2", 10), ("x1 x2", 4), ("", 1), ("x1 -> ?", 7), ("-> x1", 1)],
)
def test_parse_errors_carry_position(text, column):
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.pos + 1 == column
    assert f"column {column}" in str(exc.value)


def test_variable_index_overflow():
    with pytest.raises(ParseError):
        parse("x99999999999")


def test_printer_is_sugar_free_by_default():
    phi = parse("x1 == x2")
    assert "==" not in to_text(phi)
    assert to_text(phi, sugar=True) == "x1 == x2"
    assert to_text(TOP, sugar=True) == "T"


def test_substitute_examples():
    assert substitute(Impl(Var(0), Var(1)), 1, Box(Var(0))) == Impl(Var(0), Box(Var(0)))
    phi = parse("[]x1 -> x2")
    assert substitute(phi, 7, Var(3)) == phi
    top = Impl(Var(0), Var(0))
    assert substitute(TOP, 0, BOT) == Impl(Neg(top), Neg(top))


def test_fresh_var_is_above_everything():
    assert fresh_var(parse("x3 -> []x7")) == 8
    assert fresh_var(Var(0)) == 1
    assert fresh_var(Box(TOP)) == 1


def test_match_scheme_examples():
    assert match_scheme(Impl(Box(Var(5)), Var(5)), SchemeId.II) == {"a": Var(5)}
    a, b, c = Var(1), Var(2), Var(3)
    phi = Impl(conj(Box(Impl(a, b)), Box(Impl(b, c))), Box(Impl(a, c)))
    assert match_scheme(phi, SchemeId.III) == {"a": a, "b": b, "c": c}
    assert match_scheme(Impl(Box(Var(5)), Var(6)), SchemeId.II) is None


def test_match_scheme_taut_is_an_error():
    with pytest.raises(ValueError):
        match_scheme(TOP, SchemeId.TAUT)


def test_instantiate_scheme_prime_keywords():
    phi = instantiate_scheme(SchemeId.V, a=Var(1), b=Var(2), a_=Var(3), b_=Var(4))
    assert match_scheme(phi, SchemeId.V) == {"a": Var(1), "b": Var(2), "a'": Var(3), "b'": Var(4)}


def test_iv_shape():
    phi = instantiate_scheme(SchemeId.IV, a=Var(1), b=Var(2))
    assert phi == Impl(equiv(Var(1), Var(2)), equiv(Neg(Var(1)), Neg(Var(2))))


def test_split_equiv():
    assert split_equiv(equiv(Var(1), Box(Var(2)))) == (Var(1), Box(Var(2)))
    assert split_equiv(conj(Box(Impl(Var(1), Var(2))), Box(Impl(Var(3), Var(1))))) is None


@pytest.mark.parametrize(
    "phi, expected",
    [
        (Impl(Box(Var(0)), Box(Var(0))), True),
        (Impl(Box(Var(0)), Var(0)), False),
        (Neg(Neg(Impl(Var(3), Impl(Var(4), Var(3))))), True),
        (parse("[](x1 -> x2) -> ([]x1 -> []x2)"), False),
        (parse("[](x1 & x2) -> [](x1 & x2)"), True),
        (parse("[](x1 & x2) -> [](x2 & x1)"), False),
    ],
)
def test_tautological_form_examples(phi, expected):
    assert is_tautological_form(phi) is expected


def test_tautological_form_cap():
    phi = Var(0)
    for i in range(1, 25):
        phi = Impl(Var(i), phi)
    with pytest.raises(AtomCapExceeded):
        is_tautological_form(phi, atom_cap=20)


def test_objects_are_immutable_and_hashable():
    phi = parse("[]x1")
    with pytest.raises(AttributeError):
        phi.sub = Var(2)
    assert len({parse("[]x1"), phi}) == 1


# -- properties --------------------------------------------------------------


def _truth_table_oracle(phi):
    """Brute force over the maximal box subformulas and variables, by plain recursion."""
    atoms = []

    def collect(node):
        if isinstance(node, (Var, Box)):
            if node not in atoms:
                atoms.append(node)
        elif isinstance(node, Neg):
            collect(node.sub)
        else:
            collect(node.left)
            collect(node.right)

    collect(phi)

    def ev(node, row):
        if node in row:
            return row[node]
        if isinstance(node, Neg):
            return not ev(node.sub, row)
        return (not ev(node.left, row)) or ev(node.right, row)

    return all(ev(phi, dict(zip(atoms, bits))) for bits in itertools.product((False, True), repeat=len(atoms)))


@given(formulas(max_leaves=12))
def test_round_trip(phi):
    assert parse(to_text(phi)) == phi
    assert parse(to_text(phi, sugar=True)) == phi


@given(formulas(), st.integers(0, 3), st.integers(0, 3), formulas(), formulas())
def test_substitution_composition(phi, x, y, psi, chi):
    # x must also be absent from chi, or the chi introduced on the right gets rewritten
    assume(x != y and y not in variables(psi) and x not in variables(chi))
    lhs = substitute(substitute(phi, x, psi), y, chi)
    rhs = substitute(substitute(phi, y, chi), x, substitute(psi, y, chi))
    assert lhs == rhs


@given(formulas(max_leaves=10), st.sampled_from([s for s in SchemeId if s is not SchemeId.TAUT]))
def test_match_soundness(phi, scheme):
    b = match_scheme(phi, scheme)
    if b is not None:
        assert instantiate(SCHEME_PATTERNS[scheme], b) == phi


@given(st.sampled_from([s for s in SchemeId if s is not SchemeId.TAUT]), st.lists(formulas(), min_size=5, max_size=5))
def test_match_finds_every_instance(scheme, fs):
    kw = dict(zip(("a", "b", "c", "a_", "b_"), fs))
    phi = instantiate_scheme(scheme, **kw)
    b = match_scheme(phi, scheme)
    assert b is not None and instantiate(SCHEME_PATTERNS[scheme], b) == phi


@settings(max_examples=200)
@given(formulas(max_leaves=10))
def test_tautology_matches_oracle(phi):
    assert is_tautological_form(phi) == _truth_table_oracle(phi)


@given(formulas(max_leaves=10), st.permutations(range(4)), st.integers(0, 20))
def test_tautology_invariant_under_injective_renaming(phi, perm, shift):
    mapping = {i: perm[i] * 3 + shift for i in range(4)}
    assert is_tautological_form(rename(phi, mapping)) == is_tautological_form(phi)
