import itertools
import random

import pytest

from s1sp.algebra import (
    FiniteModalAlgebra,
    ModelClass,
    ModelFormatError,
    check_class,
    check_conditions,
    discrete_algebra,
    element_to_set,
    is_monotonic,
    modal_algebra_equations,
    paper_countermodel,
    parse_model,
    parse_models,
    to_model_text,
)
from s1sp.search import enumerate_models

# Set-level statement of the two-atom countermodel, independent of the bitmask encoding.
ONE, TWO = 1, 2
SETS = [frozenset(), frozenset({ONE}), frozenset({TWO}), frozenset({ONE, TWO})]
TWO_ATOM_BOX = {
    frozenset({ONE, TWO}): frozenset({ONE}),
    frozenset({TWO}): frozenset({TWO}),
    frozenset({ONE}): frozenset(),
    frozenset(): frozenset(),
}


def _mask(s):
    return sum(1 << (a - 1) for a in s)


def test_two_atom_countermodel_matches_set_table():
    M = paper_countermodel()
    for s, v in TWO_ATOM_BOX.items():
        assert M.box(_mask(s)) == _mask(v)
    assert {element_to_set(m) for m in M.true_set} == {"{1}", "{1,2}"}


def test_two_atom_countermodel_conditions_by_set_oracle():
    full = frozenset({ONE, TWO})
    true = {s for s in SETS if ONE in s}
    imp = lambda a, b: (full - a) | b  # noqa: E731
    box = TWO_ATOM_BOX.__getitem__
    assert all((box(s) in true) == (s == full) for s in SETS)
    assert all(box(s) <= s for s in SETS)
    for a, b, c in itertools.product(SETS, repeat=3):
        assert box(imp(a, b)) & box(imp(b, c)) <= box(imp(a, c))
    assert check_conditions(paper_countermodel()).ok


def test_condition_5_mutation():
    M = paper_countermodel().with_box(0b10, 0b11)
    report = check_conditions(M)
    assert not report["5"] and report["5"].witness == 0b10


def test_condition_4_mutation():
    M = paper_countermodel().with_box(0b11, 0)
    report = check_conditions(M)
    assert not report["4"] and report["4"].witness == 0b11


def test_two_atom_countermodel_classes():
    M = paper_countermodel()
    assert check_class(M, ModelClass.BASE)
    v = check_class(M, ModelClass.S3C)
    assert not v and v.condition == "3'" and v.witness == (0b10, 0b11)
    mono = is_monotonic(M)
    assert not mono and mono.witness == (0b10, 0b11)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_discrete_algebra_in_every_class(n):
    D = discrete_algebra(n)
    for c in ModelClass:
        assert check_class(D, c), c
    assert is_monotonic(D)


def test_unique_one_atom_algebra_is_monotone():
    (M,) = list(enumerate_models(1))
    assert M.box_table == (0, 1) and is_monotonic(M)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_ultrafilter_laws_for_every_designated_atom(n):
    for d in range(n):
        M = discrete_algebra(n, d)
        for name in ("1", "2", "3"):
            assert check_conditions(M)[name], (n, d, name)
        for m in M.elements:
            assert M.is_true(m) != M.is_true(M.neg(m))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_order_is_implication_to_top(n):
    M = discrete_algebra(n)
    for m, m1 in itertools.product(M.elements, repeat=2):
        assert M.leq(m, m1) == (M.impl(m, m1) == M.top)


def test_3prime_implies_monotone_on_n2():
    for M in enumerate_models(2, ModelClass.BASE):
        if check_class(M, ModelClass.S3C):
            assert is_monotonic(M)


def test_s4c_modal_algebra_equations():
    for n in (1, 2):
        for M in enumerate_models(n, ModelClass.S4C):
            assert modal_algebra_equations(M)
    rng = random.Random(3)
    models = list(enumerate_models(3, ModelClass.S4C))
    for M in rng.sample(models, 10):
        assert modal_algebra_equations(M)


def test_validation_errors():
    with pytest.raises(ValueError):
        FiniteModalAlgebra(2, (0, 0, 0))
    with pytest.raises(ValueError):
        FiniteModalAlgebra(2, (0, 0, 0, 4))
    with pytest.raises(ValueError):
        FiniteModalAlgebra(2, (0, 0, 0, 3), designated=2)
    with pytest.raises(ValueError):
        FiniteModalAlgebra(6, tuple(range(64)))
    assert FiniteModalAlgebra(6, (0,) * 63 + (63,), max_atoms=6).size == 64


def test_model_text_round_trip():
    models = list(enumerate_models(2))
    text = "\n---\n".join(to_model_text(M) for M in models)
    assert parse_models(text) == models
    assert parse_model(to_model_text(paper_countermodel())) == paper_countermodel()


def test_model_text_comments_and_errors():
    text = "# two atoms\natoms 2\ndesignated 0\nbox 0 0\nbox 1 0\nbox 2 2  # odd\nbox 3 1\n"
    assert parse_model(text) == paper_countermodel()
    with pytest.raises(ModelFormatError) as exc:
        parse_model("atoms 2\ndesignated 0\nbox 0 0\nbox 1 zero\n")
    assert exc.value.line == 4
    with pytest.raises(ModelFormatError):
        parse_model("atoms 2\ndesignated 0\nbox 0 0\n")
    with pytest.raises(ModelFormatError):
        parse_model("atoms 2\ndesignated 0\nbox 0 0\nbox 0 0\n")
