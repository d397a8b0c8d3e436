"""Finite powerset Boolean algebras with a box operation and a designated atom.

Elements are bitmasks over ``n`` atoms. The set of true propositions is the
principal ultrafilter generated by the designated atom.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable

DEFAULT_MAX_ATOMS = 5


class ModelClass(str, enum.Enum):
    BASE = "base"
    S3C = "s3"
    S4C = "s4"
    S5C = "s5"


@dataclass(frozen=True)
class Verdict:
    """Boolean outcome with an optional witness of failure (truthy iff ok)."""

    ok: bool
    witness: Any = None
    condition: str | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class FiniteModalAlgebra:
    atoms: int
    box_table: tuple[int, ...]
    designated: int = 0
    max_atoms: int = field(default=DEFAULT_MAX_ATOMS, compare=False, repr=False)

    def __post_init__(self):
        n = self.atoms
        if not 1 <= n <= self.max_atoms:
            raise ValueError(f"atom count {n} outside 1..{self.max_atoms}")
        object.__setattr__(self, "box_table", tuple(self.box_table))
        if len(self.box_table) != 1 << n:
            raise ValueError(f"box table needs {1 << n} entries, got {len(self.box_table)}")
        if any(not 0 <= v < (1 << n) for v in self.box_table):
            raise ValueError("box table entry out of range")
        if not 0 <= self.designated < n:
            raise ValueError(f"designated atom {self.designated} outside 0..{n - 1}")

    # Boolean structure

    @property
    def size(self) -> int:
        return 1 << self.atoms

    @property
    def top(self) -> int:
        return (1 << self.atoms) - 1

    @property
    def bottom(self) -> int:
        return 0

    @property
    def elements(self) -> range:
        return range(1 << self.atoms)

    def neg(self, m: int) -> int:
        return self.top ^ m

    def impl(self, m: int, m2: int) -> int:
        return (self.top ^ m) | m2

    def meet(self, m: int, m2: int) -> int:
        return m & m2

    def join(self, m: int, m2: int) -> int:
        return m | m2

    def box(self, m: int) -> int:
        return self.box_table[m]

    @staticmethod
    def leq(m: int, m2: int) -> bool:
        return m & m2 == m

    def is_true(self, m: int) -> bool:
        return bool(m >> self.designated & 1)

    @property
    def true_set(self) -> frozenset[int]:
        return frozenset(m for m in self.elements if self.is_true(m))

    def with_box(self, m: int, value: int) -> "FiniteModalAlgebra":
        table = list(self.box_table)
        table[m] = value
        return FiniteModalAlgebra(self.atoms, tuple(table), self.designated, self.max_atoms)


def paper_countermodel() -> FiniteModalAlgebra:
    """Powerset of {1, 2}; atom 1 is bit 0 and designated, atom 2 is bit 1.

    box: {1,2} -> {1}, {2} -> {2}, {1} -> {}, {} -> {}.
    """
    return FiniteModalAlgebra(atoms=2, box_table=(0, 0, 2, 1), designated=0)


def discrete_algebra(n: int, designated: int = 0) -> FiniteModalAlgebra:
    top = (1 << n) - 1
    return FiniteModalAlgebra(n, tuple(top if m == top else 0 for m in range(1 << n)), designated)


def element_to_set(m: int) -> str:
    """Render a bitmask as a set of 1-based atom names, e.g. 3 -> '{1,2}'."""
    bits = [str(i + 1) for i in range(m.bit_length()) if m >> i & 1]
    return "{" + ",".join(bits) + "}"


# -- condition checks --------------------------------------------------------


def _first(items: Iterable, pred):
    for item in items:
        if not pred(item):
            return item
    return None


def _cond(name: str, witness) -> Verdict:
    return Verdict(witness is None, witness, name)


def condition_1(M: FiniteModalAlgebra) -> Verdict:
    if M.is_true(M.bottom):
        return _cond("1", M.bottom)
    if not M.is_true(M.top):
        return _cond("1", M.top)
    return _cond("1", None)


def condition_2(M):
    return _cond("2", _first(M.elements, lambda m: M.is_true(M.neg(m)) == (not M.is_true(m))))


def condition_3(M):
    pairs = itertools.product(M.elements, repeat=2)
    return _cond(
        "3",
        _first(
            pairs,
            lambda p: M.is_true(M.impl(*p)) == (not M.is_true(p[0]) or M.is_true(p[1])),
        ),
    )


def condition_4(M):
    return _cond("4", _first(M.elements, lambda m: M.is_true(M.box(m)) == (m == M.top)))


def condition_5(M):
    return _cond("5", _first(M.elements, lambda m: M.leq(M.box(m), m)))


def _cond6_holds(M, t) -> bool:
    m, m1, m2 = t
    lhs = M.box(M.impl(m, m1)) & M.box(M.impl(m1, m2))
    return M.leq(lhs, M.box(M.impl(m, m2)))


def condition_6(M):
    return _cond("6", _first(itertools.product(M.elements, repeat=3), lambda t: _cond6_holds(M, t)))


BASE_CONDITIONS = (condition_1, condition_2, condition_3, condition_4, condition_5, condition_6)


@dataclass(frozen=True)
class ConditionReport:
    results: tuple[Verdict, ...]

    @property
    def ok(self) -> bool:
        return all(self.results)

    def __bool__(self):
        return self.ok

    def __getitem__(self, name: str) -> Verdict:
        for r in self.results:
            if r.condition == name:
                return r
        raise KeyError(name)

    @property
    def failures(self) -> list[Verdict]:
        return [r for r in self.results if not r]


def check_conditions(M: FiniteModalAlgebra) -> ConditionReport:
    return ConditionReport(tuple(c(M) for c in BASE_CONDITIONS))


def _ordered_pairs(M):
    # comparable pairs first: a failure there is a failure of monotonicity
    pairs = list(itertools.product(M.elements, repeat=2))
    return [p for p in pairs if M.leq(*p)] + [p for p in pairs if not M.leq(*p)]


def condition_3prime(M) -> Verdict:
    def holds(p):
        m, m1 = p
        return M.leq(M.box(M.impl(m, m1)), M.box(M.impl(M.box(m), M.box(m1))))

    return _cond("3'", _first(_ordered_pairs(M), holds))


def condition_4prime(M) -> Verdict:
    return _cond("4'", _first(M.elements, lambda m: (M.box(m) == M.top) == (m == M.top)))


def condition_5prime(M) -> Verdict:
    return _cond(
        "5'",
        _first(M.elements, lambda m: (M.box(m) != M.top) == (M.neg(M.box(m)) == M.top)),
    )


CLASS_CONDITIONS = {
    ModelClass.BASE: (),
    ModelClass.S3C: (condition_3prime,),
    ModelClass.S4C: (condition_3prime, condition_4prime),
    ModelClass.S5C: (condition_3prime, condition_4prime, condition_5prime),
}


def check_class(M: FiniteModalAlgebra, c: ModelClass, verify_base: bool = True) -> Verdict:
    """Class membership. Failure carries the condition name and violating element(s)."""
    c = ModelClass(c)
    if verify_base:
        report = check_conditions(M)
        if not report:
            return report.failures[0]
    for cond in CLASS_CONDITIONS[c]:
        v = cond(M)
        if not v:
            return v
    return Verdict(True)


def is_monotonic(M: FiniteModalAlgebra) -> Verdict:
    for m, m1 in itertools.product(M.elements, repeat=2):
        if M.leq(m, m1) and not M.leq(M.box(m), M.box(m1)):
            return Verdict(False, (m, m1), "monotonic")
    return Verdict(True)


def modal_algebra_equations(M: FiniteModalAlgebra) -> Verdict:
    """box(top) = top and box distributes over meets."""
    if M.box(M.top) != M.top:
        return Verdict(False, M.top, "box-top")
    for m, m1 in itertools.product(M.elements, repeat=2):
        if M.box(m & m1) != M.box(m) & M.box(m1):
            return Verdict(False, (m, m1), "box-meet")
    return Verdict(True)


# -- text format -------------------------------------------------------------


class ModelFormatError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


def to_model_text(M: FiniteModalAlgebra) -> str:
    lines = [f"atoms {M.atoms}", f"designated {M.designated}"]
    lines += [f"box {m} {M.box(m)}" for m in M.elements]
    return "\n".join(lines) + "\n"


def _parse_block(lines: list[tuple[int, str]], max_atoms: int) -> FiniteModalAlgebra:
    atoms = designated = None
    table: dict[int, int] = {}
    for lineno, line in lines:
        parts = line.split()
        try:
            if parts[0] == "atoms" and len(parts) == 2:
                atoms = int(parts[1])
            elif parts[0] == "designated" and len(parts) == 2:
                designated = int(parts[1])
            elif parts[0] == "box" and len(parts) == 3:
                m, v = int(parts[1]), int(parts[2])
                if m in table:
                    raise ModelFormatError(f"duplicate box entry for {m}", lineno)
                table[m] = v
            else:
                raise ModelFormatError(f"unrecognised line {line!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, ModelFormatError):
                raise
            raise ModelFormatError(f"bad integer in {line!r}", lineno) from None
    first = lines[0][0] if lines else 0
    if atoms is None:
        raise ModelFormatError("missing 'atoms' line", first)
    if designated is None:
        raise ModelFormatError("missing 'designated' line", first)
    if sorted(table) != list(range(1 << atoms)):
        raise ModelFormatError(f"box entries must cover 0..{(1 << atoms) - 1} exactly", first)
    try:
        return FiniteModalAlgebra(atoms, tuple(table[m] for m in range(1 << atoms)), designated, max_atoms)
    except ValueError as exc:
        raise ModelFormatError(str(exc), first) from None


def parse_models(text: str, max_atoms: int = DEFAULT_MAX_ATOMS) -> list[FiniteModalAlgebra]:
    """Parse one or more models separated by '---' lines."""
    blocks: list[list[tuple[int, str]]] = [[]]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "---":
            blocks.append([])
            continue
        blocks[-1].append((lineno, line))
    return [_parse_block(b, max_atoms) for b in blocks if b]


def parse_model(text: str, max_atoms: int = DEFAULT_MAX_ATOMS) -> FiniteModalAlgebra:
    models = parse_models(text, max_atoms)
    if len(models) != 1:
        raise ModelFormatError(f"expected exactly one model, found {len(models)}", 1)
    return models[0]
