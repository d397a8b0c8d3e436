"""Kripke models with non-normal worlds, for refuting formulas in S2.

Box formulas are false at every non-normal world; at a normal world they
quantify over accessible worlds. Validity means truth at every normal world.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .algebra import Verdict
from .syntax import Box, Formula, Impl, Neg, Var, variables

MAX_WORLDS = 5
MAX_SEARCH_VARS = 4
_CELLS_PER_CHUNK = 1 << 22


@dataclass(frozen=True)
class KripkeModel:
    worlds: int
    normal: frozenset[int]
    edges: frozenset[tuple[int, int]]
    valuation: Mapping[int, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "normal", frozenset(self.normal))
        object.__setattr__(self, "edges", frozenset(tuple(e) for e in self.edges))
        object.__setattr__(
            self, "valuation", {int(x): frozenset(ws) for x, ws in dict(self.valuation).items()}
        )
        w = self.worlds
        if not 1 <= w <= MAX_WORLDS:
            raise ValueError(f"world count {w} outside 1..{MAX_WORLDS}")
        if not self.normal:
            raise ValueError("at least one world must be normal")
        every = set(range(w))
        if not self.normal <= every:
            raise ValueError("normal worlds out of range")
        for a, b in self.edges:
            if a not in every or b not in every:
                raise ValueError(f"edge ({a}, {b}) out of range")
        missing = [i for i in range(w) if (i, i) not in self.edges]
        if missing:
            raise ValueError(f"accessibility is not reflexive at worlds {missing}")
        for x, ws in self.valuation.items():
            if not ws <= every:
                raise ValueError(f"valuation of x{x} mentions unknown worlds")

    def successors(self, w: int) -> frozenset[int]:
        return frozenset(b for a, b in self.edges if a == w)

    def is_transitive(self) -> bool:
        return all(
            (a, c) in self.edges for a, b in self.edges for b2, c in self.edges if b == b2
        )

    def truth_set(self, phi: Formula) -> frozenset[int]:
        cache: dict[Formula, frozenset[int]] = {}
        every = frozenset(range(self.worlds))

        def go(node):
            hit = cache.get(node)
            if hit is not None:
                return hit
            match node:
                case Var(i):
                    out = self.valuation.get(i, frozenset())
                case Neg(s):
                    out = every - go(s)
                case Impl(a, b):
                    out = (every - go(a)) | go(b)
                case Box(s):
                    inner = go(s)
                    out = frozenset(w for w in self.normal if self.successors(w) <= inner)
                case _:
                    raise TypeError(f"cannot evaluate {node!r}")
            cache[node] = out
            return out

        return go(phi)


def eval_kripke(K: KripkeModel, w: int, phi: Formula) -> bool:
    if not 0 <= w < K.worlds:
        raise ValueError(f"world {w} outside 0..{K.worlds - 1}")
    return w in K.truth_set(phi)


def valid_in_kripke(K: KripkeModel, phi: Formula) -> Verdict:
    """True at every normal world; witness is the least normal world where it fails."""
    truth = K.truth_set(phi)
    for w in sorted(K.normal):
        if w not in truth:
            return Verdict(False, w, "kripke-valid")
    return Verdict(True)


# -- exhaustive search -------------------------------------------------------


def _off_diagonal(w: int) -> list[tuple[int, int]]:
    return [(a, b) for a, b in itertools.product(range(w), repeat=2) if a != b]


def _normal_sets(w: int):
    # canonical order: non-normal set as a bitmask ascending, so all-normal frames come first
    full = (1 << w) - 1
    for non_normal in range(1 << w):
        normal = full & ~non_normal
        if normal:
            yield normal


def _truth_arrays(phi, w, normal_mask, succ, columns):
    """World-bitmask truth values, shape (relations, valuations)."""
    full = np.uint8((1 << w) - 1)
    cache: dict[Formula, np.ndarray] = {}

    def go(node):
        hit = cache.get(node)
        if hit is not None:
            return hit
        match node:
            case Var(i):
                out = columns.get(i, np.zeros((1, 1), np.uint8))
            case Neg(s):
                out = go(s) ^ full
            case Impl(a, b):
                out = (go(a) ^ full) | go(b)
            case Box(s):
                inner_false = go(s) ^ full
                out = np.zeros(np.broadcast_shapes(inner_false.shape, (succ.shape[0], 1)), np.uint8)
                for i in range(w):
                    if normal_mask >> i & 1:
                        ok = (succ[:, i : i + 1] & inner_false) == 0
                        out |= ok.astype(np.uint8) << np.uint8(i)
            case _:
                raise TypeError(f"cannot evaluate {node!r}")
        cache[node] = out
        return out

    return go(phi)


def find_s2_countermodel(phi: Formula, max_worlds: int = 3) -> KripkeModel | None:
    """First reflexive model (canonical order) with a normal world falsifying phi.

    Order: world count, non-normal mask, non-loop edge mask, then valuation
    (each variable's world set, lowest variable most significant).
    """
    if not 1 <= max_worlds <= MAX_WORLDS:
        raise ValueError(f"max_worlds {max_worlds} outside 1..{MAX_WORLDS}")
    xs = sorted(variables(phi))
    if len(xs) > MAX_SEARCH_VARS:
        raise ValueError(f"{len(xs)} variables exceed the search cap of {MAX_SEARCH_VARS}")
    for w in range(1, max_worlds + 1):
        pairs = _off_diagonal(w)
        base = 1 << w
        n_val = base ** len(xs)
        idx = np.arange(n_val, dtype=np.int64)
        columns = {
            x: ((idx // base ** (len(xs) - 1 - pos)) % base).astype(np.uint8)[None, :]
            for pos, x in enumerate(xs)
        }
        n_rel = 1 << len(pairs)
        step = max(1, _CELLS_PER_CHUNK // n_val)
        for normal_mask in _normal_sets(w):
            for start in range(0, n_rel, step):
                rel = np.arange(start, min(start + step, n_rel), dtype=np.int64)
                succ = np.zeros((len(rel), w), np.uint8)
                for i in range(w):
                    succ[:, i] = 1 << i
                for bit, (a, b) in enumerate(pairs):
                    succ[:, a] |= (((rel >> bit) & 1) << b).astype(np.uint8)
                truth = _truth_arrays(phi, w, normal_mask, succ, columns)
                truth = np.broadcast_to(truth, (len(rel), n_val))
                bad = (~truth & np.uint8(normal_mask)) != 0
                if bad.any():
                    r, v = divmod(int(np.argmax(bad)), n_val)
                    rmask = int(rel[r])
                    edges = {(i, i) for i in range(w)} | {
                        pairs[bit] for bit in range(len(pairs)) if rmask >> bit & 1
                    }
                    val = {x: frozenset(i for i in range(w) if int(columns[x][0, v]) >> i & 1) for x in xs}
                    normal = frozenset(i for i in range(w) if normal_mask >> i & 1)
                    return KripkeModel(w, normal, frozenset(edges), val)
    return None


# -- text format -------------------------------------------------------------


class KripkeFormatError(ValueError):
    def __init__(self, message: str, line: int):
        self.line = line
        super().__init__(f"line {line}: {message}")


def to_kripke_text(K: KripkeModel) -> str:
    lines = [f"worlds {K.worlds}", "normal " + " ".join(str(i) for i in sorted(K.normal))]
    lines += [f"edge {a} {b}" for a, b in sorted(K.edges)]
    for x in sorted(K.valuation):
        ws = " ".join(str(i) for i in sorted(K.valuation[x]))
        lines.append(f"val x{x} {ws}".rstrip())
    return "\n".join(lines) + "\n"


def parse_kripke(text: str) -> KripkeModel:
    worlds = None
    normal: set[int] = set()
    edges: set[tuple[int, int]] = set()
    val: dict[int, set[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        try:
            head, args = parts[0], parts[1:]
            if head == "worlds" and len(args) == 1:
                worlds = int(args[0])
            elif head == "normal":
                normal.update(int(a) for a in args)
            elif head == "edge" and len(args) == 2:
                edges.add((int(args[0]), int(args[1])))
            elif head == "val" and args:
                x = int(args[0].lstrip("x"))
                val.setdefault(x, set()).update(int(a) for a in args[1:])
            else:
                raise KripkeFormatError(f"unrecognised line {raw.strip()!r}", lineno)
        except ValueError as exc:
            if isinstance(exc, KripkeFormatError):
                raise
            raise KripkeFormatError(f"bad integer in {raw.strip()!r}", lineno) from None
    if worlds is None:
        raise KripkeFormatError("missing 'worlds' line", 1)
    try:
        return KripkeModel(worlds, frozenset(normal), frozenset(edges), val)
    except ValueError as exc:
        raise KripkeFormatError(str(exc), 1) from None
