"""Enumeration of finite models by class and countermodel search."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator

from .algebra import (
    DEFAULT_MAX_ATOMS,
    FiniteModalAlgebra,
    ModelClass,
    check_class,
    check_conditions,
)
from .semantics import DEFAULT_ASSIGNMENT_CAP, valid_in_model
from .syntax import Formula


class SearchMode(str, enum.Enum):
    FIND_FIRST = "find-first"
    COUNT = "count"
    STREAM = "stream"


@dataclass(frozen=True)
class SearchSpec:
    max_atoms: int
    model_class: ModelClass
    target: Formula | None = None
    mode: SearchMode = SearchMode.FIND_FIRST


def _check_n(n: int, max_atoms: int) -> None:
    if not 1 <= n <= max_atoms:
        raise ValueError(f"atom count {n} outside 1..{max_atoms}")


def _submasks(m: int) -> list[int]:
    out, s = [], m
    while True:
        out.append(s)
        if s == 0:
            break
        s = (s - 1) & m
    return sorted(out)


def _triples_by_last(n: int) -> list[list[tuple[int, int, int]]]:
    """Condition (6) as triples (x, y, z) of implication values: box[x] & box[y] <= box[z].

    Grouped by max(x, y, z) so each triple is checked once its entries are filled.
    """
    top = (1 << n) - 1
    imp = lambda a, b: (top ^ a) | b  # noqa: E731
    seen = set()
    for m, m1, m2 in itertools.product(range(1 << n), repeat=3):
        seen.add((imp(m, m1), imp(m1, m2), imp(m, m2)))
    groups: list[list[tuple[int, int, int]]] = [[] for _ in range(1 << n)]
    for t in sorted(seen):
        groups[max(t)].append(t)
    return groups


def _base_tables(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """Box tables satisfying (4), (5), (6) for designated atom d, lexicographic order."""
    top = (1 << n) - 1
    dbit = 1 << d
    # (5): box[m] <= m; (4): box[m] in TRUE iff m is top
    choices = [
        [v for v in _submasks(m) if bool(v & dbit) == (m == top)]
        for m in range(1 << n)
    ]
    groups = _triples_by_last(n)
    table = [0] * (1 << n)

    def fill(m: int):
        if m == len(table):
            yield tuple(table)
            return
        for v in choices[m]:
            table[m] = v
            if all(table[x] & table[y] & ~table[z] == 0 for x, y, z in groups[m]):
                yield from fill(m + 1)

    yield from fill(0)


def enumerate_models(
    n: int, model_class: ModelClass = ModelClass.BASE, max_atoms: int = DEFAULT_MAX_ATOMS
) -> Iterator[FiniteModalAlgebra]:
    """Every algebra on n atoms in the class, designated atom then box table ascending."""
    _check_n(n, max_atoms)
    model_class = ModelClass(model_class)
    for d in range(n):
        for table in _base_tables(n, d):
            M = FiniteModalAlgebra(n, table, d, max_atoms)
            if model_class is ModelClass.BASE or check_class(M, model_class, verify_base=False):
                yield M


def count_models(n: int, model_class: ModelClass = ModelClass.BASE, max_atoms: int = DEFAULT_MAX_ATOMS) -> int:
    return sum(1 for _ in enumerate_models(n, model_class, max_atoms))


def enumerate_models_bruteforce(n: int, model_class: ModelClass = ModelClass.BASE) -> Iterator[FiniteModalAlgebra]:
    """Pruning-free oracle: every designated atom and every box table, checked in full."""
    if not 1 <= n <= 2:
        raise ValueError("brute-force oracle is limited to n <= 2")
    size = 1 << n
    for d in range(n):
        for table in itertools.product(range(size), repeat=size):
            M = FiniteModalAlgebra(n, table, d)
            if check_conditions(M) and check_class(M, model_class, verify_base=False):
                yield M


@dataclass(frozen=True)
class Countermodel:
    algebra: FiniteModalAlgebra
    assignment: dict[int, int]


def find_countermodel(
    phi: Formula,
    n_max: int,
    model_class: ModelClass = ModelClass.BASE,
    max_atoms: int = DEFAULT_MAX_ATOMS,
    cap: int = DEFAULT_ASSIGNMENT_CAP,
) -> Countermodel | None:
    """First refuting interpretation in n = 1..n_max, enumeration x assignment order."""
    _check_n(n_max, max_atoms)
    for n in range(1, n_max + 1):
        for M in enumerate_models(n, model_class, max_atoms):
            v = valid_in_model(M, phi, cap)
            if not v:
                return Countermodel(M, v.witness)
    return None


@dataclass(frozen=True)
class Classification:
    validating: tuple[FiniteModalAlgebra, ...]
    refuting: tuple[FiniteModalAlgebra, ...]

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.validating), len(self.refuting)


def classify_scheme(
    phi: Formula,
    n: int,
    model_class: ModelClass = ModelClass.BASE,
    max_atoms: int = DEFAULT_MAX_ATOMS,
    cap: int = DEFAULT_ASSIGNMENT_CAP,
) -> Classification:
    good, bad = [], []
    for M in enumerate_models(n, model_class, max_atoms):
        (good if valid_in_model(M, phi, cap) else bad).append(M)
    return Classification(tuple(good), tuple(bad))


def run_search(spec: SearchSpec):
    """Dispatch on mode: first countermodel, model count, or a model stream."""
    mode = SearchMode(spec.mode)
    if mode is SearchMode.FIND_FIRST:
        if spec.target is None:
            raise ValueError("find-first needs a target formula")
        return find_countermodel(spec.target, spec.max_atoms, spec.model_class)
    if mode is SearchMode.COUNT:
        if spec.target is None:
            return count_models(spec.max_atoms, spec.model_class)
        return classify_scheme(spec.target, spec.max_atoms, spec.model_class).counts
    return enumerate_models(spec.max_atoms, spec.model_class)
