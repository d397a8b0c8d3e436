"""Assignments, evaluation, satisfaction and per-model validity / consequence."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .algebra import FiniteModalAlgebra, Verdict, element_to_set
from .syntax import Box, Formula, Impl, Neg, Var, equiv, variables

DEFAULT_ASSIGNMENT_CAP = 1 << 24
_CHUNK = 1 << 16


class AssignmentCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Interpretation:
    algebra: FiniteModalAlgebra
    assignment: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        for x, v in self.assignment.items():
            if not 0 <= v < self.algebra.size:
                raise ValueError(f"x{x} assigned {v}, outside algebra of size {self.algebra.size}")

    def value_of(self, x: int) -> int:
        return self.assignment.get(x, 0)

    def updated(self, x: int, value: int) -> "Interpretation":
        return Interpretation(self.algebra, {**self.assignment, x: value})


def evaluate(I: Interpretation, phi: Formula) -> int:
    M = I.algebra
    cache: dict[Formula, int] = {}

    def go(node):
        hit = cache.get(node)
        if hit is not None:
            return hit
        match node:
            case Var(i):
                out = I.value_of(i)
            case Neg(s):
                out = M.neg(go(s))
            case Impl(a, b):
                out = M.impl(go(a), go(b))
            case Box(s):
                out = M.box(go(s))
            case _:
                raise TypeError(f"cannot evaluate {node!r}")
        cache[node] = out
        return out

    return go(phi)


def satisfies(I: Interpretation, phi: Formula) -> bool:
    return I.algebra.is_true(evaluate(I, phi))


def identical(I: Interpretation, phi: Formula, psi: Formula) -> bool:
    """Whether phi == psi (strict equivalence) is satisfied."""
    return satisfies(I, equiv(phi, psi))


# -- vectorised evaluation over blocks of assignments ------------------------


def evaluate_array(M: FiniteModalAlgebra, phi: Formula, columns: Mapping[int, np.ndarray], cache=None):
    """Evaluate phi for many assignments at once; columns[x] holds the values of x."""
    table = np.asarray(M.box_table, dtype=np.uint8)
    top = np.uint8(M.top)
    shape = next(iter(columns.values())).shape if columns else (1,)
    cache = {} if cache is None else cache

    def go(node):
        hit = cache.get(node)
        if hit is not None:
            return hit
        match node:
            case Var(i):
                out = columns[i] if i in columns else np.zeros(shape, np.uint8)
            case Neg(s):
                out = go(s) ^ top
            case Impl(a, b):
                out = (go(a) ^ top) | go(b)
            case Box(s):
                out = table[go(s)]
            case _:
                raise TypeError(f"cannot evaluate {node!r}")
        cache[node] = out
        return out

    return go(phi)


def truth_array(M: FiniteModalAlgebra, phi, columns, cache=None) -> np.ndarray:
    return (evaluate_array(M, phi, columns, cache) >> M.designated) & 1 == 1


def _assignment_blocks(M: FiniteModalAlgebra, xs: Sequence[int], cap: int):
    base = M.size
    total = base ** len(xs)
    if total > cap:
        raise AssignmentCapExceeded(
            f"{total} assignments ({base}^{len(xs)}) exceeds cap {cap}"
        )
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        cols = {}
        # first variable is the most significant digit: blocks come out in lexicographic order
        for pos, x in enumerate(xs):
            weight = base ** (len(xs) - 1 - pos)
            cols[x] = ((idx // weight) % base).astype(np.uint8)
        yield cols


def _row(cols, xs, k) -> dict[int, int]:
    return {x: int(cols[x][k]) for x in xs}


def valid_in_model(M: FiniteModalAlgebra, phi: Formula, cap: int = DEFAULT_ASSIGNMENT_CAP) -> Verdict:
    """Satisfied under every assignment to phi's variables.

    On failure the witness is the lexicographically least falsifying assignment.
    """
    xs = sorted(variables(phi))
    for cols in _assignment_blocks(M, xs, cap):
        bad = ~truth_array(M, phi, cols)
        if bad.any():
            return Verdict(False, _row(cols, xs, int(np.argmax(bad))), "valid")
    return Verdict(True)


def consequence_in_model(
    M: FiniteModalAlgebra,
    hypotheses: Sequence[Formula],
    phi: Formula,
    cap: int = DEFAULT_ASSIGNMENT_CAP,
) -> Verdict:
    """Every assignment satisfying all hypotheses satisfies phi."""
    xs = sorted(variables(phi, *hypotheses))
    for cols in _assignment_blocks(M, xs, cap):
        cache: dict = {}
        bad = ~truth_array(M, phi, cols, cache)
        for h in hypotheses:
            bad &= truth_array(M, h, cols, cache)
        if bad.any():
            return Verdict(False, _row(cols, xs, int(np.argmax(bad))), "consequence")
    return Verdict(True)


def format_assignment(assignment: Mapping[int, int]) -> str:
    return " ".join(f"x{x}={v}" for x, v in sorted(assignment.items()))


def describe_assignment(assignment: Mapping[int, int]) -> str:
    return " ".join(f"x{x}={element_to_set(v)}" for x, v in sorted(assignment.items()))
