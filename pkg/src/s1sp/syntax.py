"""Formulas of the modal language over variables, negation, implication and box.

Only four node kinds exist. Truth constants, conjunction, material and strict
equivalence are abbreviations that expand into them at construction time.
"""

from __future__ import annotations

import enum
import re
from typing import Iterator, Mapping

MAX_VAR_INDEX = 1_000_000
DEFAULT_ATOM_CAP = 20


class Formula:
    """Base class for formula nodes. Nodes are immutable and hash-consed by value."""

    __slots__ = ("_hash",)

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._key() == other._key()

    def __hash__(self):
        return self._hash

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    def __str__(self):
        return to_text(self)

    def _key(self):
        raise NotImplementedError


class Var(Formula):
    __slots__ = ("index",)
    __match_args__ = ("index",)

    def __init__(self, index: int):
        if not isinstance(index, int) or index < 0:
            raise ValueError(f"variable index must be a natural number, got {index!r}")
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "_hash", hash(("V", index)))

    def _key(self):
        return self.index

    def __repr__(self):
        return f"Var({self.index})"


class Neg(Formula):
    __slots__ = ("sub",)
    __match_args__ = ("sub",)

    def __init__(self, sub):
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "_hash", hash(("N", sub)))

    def _key(self):
        return self.sub

    def __repr__(self):
        return f"Neg({self.sub!r})"


class Impl(Formula):
    __slots__ = ("left", "right")
    __match_args__ = ("left", "right")

    def __init__(self, left, right):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        object.__setattr__(self, "_hash", hash(("I", left, right)))

    def _key(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"Impl({self.left!r}, {self.right!r})"


class Box(Formula):
    __slots__ = ("sub",)
    __match_args__ = ("sub",)

    def __init__(self, sub):
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "_hash", hash(("B", sub)))

    def _key(self):
        return self.sub

    def __repr__(self):
        return f"Box({self.sub!r})"


class Meta(Formula):
    """Schematic letter. Appears only inside scheme patterns, never in parsed formulas."""

    __slots__ = ("name",)
    __match_args__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "_hash", hash(("M", name)))

    def _key(self):
        return self.name

    def __repr__(self):
        return f"Meta({self.name!r})"


# -- abbreviations -----------------------------------------------------------

TOP = Impl(Var(0), Var(0))
BOT = Neg(TOP)


def conj(a, b):
    return Neg(Impl(a, Neg(b)))


def iff(a, b):
    return conj(Impl(a, b), Impl(b, a))


def equiv(a, b):
    """Strict equivalence: box(a -> b) and box(b -> a)."""
    return conj(Box(Impl(a, b)), Box(Impl(b, a)))


def conj_all(items):
    items = list(items)
    if not items:
        return TOP
    acc = items[0]
    for item in items[1:]:
        acc = conj(acc, item)
    return acc


def split_conj(phi):
    """Return (a, b) if phi is an abbreviated conjunction a & b, else None."""
    match phi:
        case Neg(Impl(a, Neg(b))):
            return a, b
    return None


def split_equiv(phi):
    """Return (a, b) if phi has the shape a == b, else None."""
    parts = split_conj(phi)
    if parts is None:
        return None
    match parts:
        case (Box(Impl(a, b)), Box(Impl(b2, a2))) if a == a2 and b == b2:
            return a, b
    return None


def split_iff(phi):
    parts = split_conj(phi)
    if parts is None:
        return None
    match parts:
        case (Impl(a, b), Impl(b2, a2)) if a == a2 and b == b2:
            return a, b
    return None


# -- structural helpers ------------------------------------------------------


def subformulas(phi) -> Iterator[Formula]:
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        match node:
            case Neg(s) | Box(s):
                stack.append(s)
            case Impl(a, b):
                stack.append(b)
                stack.append(a)


def variables(*formulas) -> frozenset[int]:
    out = set()
    for phi in formulas:
        for node in subformulas(phi):
            if isinstance(node, Var):
                out.add(node.index)
    return frozenset(out)


def fresh_var(*formulas) -> int:
    """Smallest index above every variable in the formulas and above x0 (used by TOP)."""
    return max(variables(*formulas) | {0}) + 1


def size(phi) -> int:
    return sum(1 for _ in subformulas(phi))


def substitute(phi, x: int, psi):
    """phi[x := psi]; replaces every occurrence of Var(x)."""
    cache = {}

    def go(node):
        hit = cache.get(node)
        if hit is not None:
            return hit
        match node:
            case Var(i):
                out = psi if i == x else node
            case Neg(s):
                s2 = go(s)
                out = node if s2 is s else Neg(s2)
            case Impl(a, b):
                a2, b2 = go(a), go(b)
                out = node if (a2 is a and b2 is b) else Impl(a2, b2)
            case Box(s):
                s2 = go(s)
                out = node if s2 is s else Box(s2)
            case _:
                out = node
        cache[node] = out
        return out

    return go(phi)


def rename(phi, mapping: Mapping[int, int]):
    """Simultaneous variable renaming."""
    match phi:
        case Var(i):
            return Var(mapping.get(i, i))
        case Neg(s):
            return Neg(rename(s, mapping))
        case Impl(a, b):
            return Impl(rename(a, mapping), rename(b, mapping))
        case Box(s):
            return Box(rename(s, mapping))
    return phi


# -- schemes -----------------------------------------------------------------


class SchemeId(str, enum.Enum):
    TAUT = "TAUT"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    S3AX = "S3AX"
    S4AX = "S4AX"
    S5AX = "S5AX"


_A, _B, _C, _A2, _B2 = Meta("a"), Meta("b"), Meta("c"), Meta("a'"), Meta("b'")

SCHEME_PATTERNS: dict[SchemeId, Formula] = {
    SchemeId.II: Impl(Box(_A), _A),
    SchemeId.III: Impl(conj(Box(Impl(_A, _B)), Box(Impl(_B, _C))), Box(Impl(_A, _C))),
    SchemeId.IV: Impl(equiv(_A, _B), equiv(Neg(_A), Neg(_B))),
    SchemeId.V: Impl(
        conj(equiv(_A, _B), equiv(_A2, _B2)),
        equiv(Impl(_A, _A2), Impl(_B, _B2)),
    ),
    SchemeId.VI: Impl(equiv(_A, _B), equiv(Box(_A), Box(_B))),
    SchemeId.S3AX: Impl(Box(Impl(_A, _B)), Box(Impl(Box(_A), Box(_B)))),
    SchemeId.S4AX: Impl(Box(_A), Box(Box(_A))),
    SchemeId.S5AX: Impl(Neg(Box(_A)), Box(Neg(Box(_A)))),
}

METAVARS = ("a", "b", "c", "a'", "b'")


def scheme_metavars(s: SchemeId) -> list[str]:
    names = {n.name for n in subformulas(SCHEME_PATTERNS[s]) if isinstance(n, Meta)}
    return [m for m in METAVARS if m in names]


def instantiate(pattern, binding: Mapping[str, Formula]):
    match pattern:
        case Meta(name):
            try:
                return binding[name]
            except KeyError:
                raise KeyError(f"metavariable {name!r} is unbound") from None
        case Neg(s):
            return Neg(instantiate(s, binding))
        case Impl(a, b):
            return Impl(instantiate(a, binding), instantiate(b, binding))
        case Box(s):
            return Box(instantiate(s, binding))
    return pattern


def instantiate_scheme(s: SchemeId, **binding):
    return instantiate(SCHEME_PATTERNS[s], {k.replace("_", "'"): v for k, v in binding.items()})


def _match(pattern, phi, binding: dict) -> bool:
    match pattern:
        case Meta(name):
            bound = binding.get(name)
            if bound is None:
                binding[name] = phi
                return True
            return bound == phi
        case Neg(p):
            return isinstance(phi, Neg) and _match(p, phi.sub, binding)
        case Box(p):
            return isinstance(phi, Box) and _match(p, phi.sub, binding)
        case Impl(p, q):
            return (
                isinstance(phi, Impl)
                and _match(p, phi.left, binding)
                and _match(q, phi.right, binding)
            )
    return pattern == phi


def match_scheme(phi, s: SchemeId) -> dict[str, Formula] | None:
    """One-sided match of phi against a scheme pattern; None on failure."""
    if s is SchemeId.TAUT:
        raise ValueError("TAUT has no pattern; use is_tautological_form")
    binding: dict[str, Formula] = {}
    if _match(SCHEME_PATTERNS[s], phi, binding):
        return binding
    return None


# -- tautological form -------------------------------------------------------


class AtomCapExceeded(ValueError):
    pass


def _column(i: int, rows: int) -> int:
    # bit r of the result is bit i of r, for r < rows
    half = 1 << i
    block = ((1 << half) - 1) << half
    period = half << 1
    reps = ((1 << rows) - 1) // ((1 << period) - 1)
    return block * reps


def propositional_skeleton(phi):
    """Map each variable and maximal boxed subformula to an atom number.

    Returns the atom table (node -> atom index). Identical subtrees share an atom.
    """
    atoms: dict[Formula, int] = {}

    def go(node):
        match node:
            case Var(_) | Box(_) | Meta(_):
                if node not in atoms:
                    atoms[node] = len(atoms)
            case Neg(s):
                go(s)
            case Impl(a, b):
                go(a)
                go(b)

    go(phi)
    return atoms


def is_tautological_form(phi, atom_cap: int = DEFAULT_ATOM_CAP) -> bool:
    atoms = propositional_skeleton(phi)
    k = len(atoms)
    if k > atom_cap:
        raise AtomCapExceeded(f"{k} propositional atoms exceeds cap {atom_cap}")
    rows = 1 << k
    full = (1 << rows) - 1
    cols = {node: _column(i, rows) for node, i in atoms.items()}
    cache: dict[Formula, int] = {}

    def ev(node):
        hit = cache.get(node)
        if hit is not None:
            return hit
        if node in cols:
            out = cols[node]
        else:
            match node:
                case Neg(s):
                    out = full ^ ev(s)
                case Impl(a, b):
                    out = (full ^ ev(a)) | ev(b)
        cache[node] = out
        return out

    return ev(phi) == full


# -- text syntax -------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        self.message = message
        super().__init__(f"{message} at column {pos + 1}")


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<var>x(?P<idx>\d+))|(?P<op><->|->|==|\[\]|[~&()TF¬□→∧↔≡⊤⊥]))"
)
_ALIASES = {"¬": "~", "□": "[]", "→": "->", "∧": "&", "↔": "<->", "≡": "==", "⊤": "T", "⊥": "F"}


def _tokenize(text: str):
    pos = 0
    out = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start("var") if m.group("var") else m.start("op")
        if m.group("var"):
            idx = int(m.group("idx"))
            if idx > MAX_VAR_INDEX:
                raise ParseError(f"variable index {idx} overflows limit {MAX_VAR_INDEX}", text, start)
            out.append(("var", idx, start))
        else:
            op = m.group("op")
            out.append(("op", _ALIASES.get(op, op), start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", self.text, pos)

    def at(self, *ops):
        kind, val, _ = self.peek()
        return kind == "op" and val in ops

    def equivalence(self):
        left = self.implication()
        while self.at("<->", "=="):
            _, op, _ = self.take()
            right = self.implication()
            left = iff(left, right) if op == "<->" else equiv(left, right)
        return left

    def implication(self):
        left = self.conjunction()
        if self.at("->"):
            self.take()
            return Impl(left, self.implication())
        return left

    def conjunction(self):
        left = self.unary()
        while self.at("&"):
            self.take()
            left = conj(left, self.unary())
        return left

    def unary(self):
        if self.at("~"):
            self.take()
            return Neg(self.unary())
        if self.at("[]"):
            self.take()
            return Box(self.unary())
        return self.atom()

    def atom(self):
        kind, val, pos = self.take()
        if kind == "var":
            return Var(val)
        if kind == "op" and val == "T":
            return TOP
        if kind == "op" and val == "F":
            return BOT
        if kind == "op" and val == "(":
            inner = self.equivalence()
            self.expect(")")
            return inner
        what = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {what}", self.text, pos)


def parse(text: str) -> Formula:
    p = _Parser(text)
    phi = p.equivalence()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", text, pos)
    return phi


def to_text(phi, sugar: bool = False) -> str:
    """Print fully parenthesized. With sugar, re-folds T, F, &, <->, ==."""

    def go(node, top):
        if sugar:
            if node == TOP:
                return "T"
            if node == BOT:
                return "F"
            for split, op in ((split_equiv, "=="), (split_iff, "<->"), (split_conj, "&")):
                parts = split(node)
                if parts is not None:
                    s = f"{go(parts[0], False)} {op} {go(parts[1], False)}"
                    return s if top else f"({s})"
        match node:
            case Var(i):
                return f"x{i}"
            case Meta(name):
                return name
            case Neg(s):
                return "~" + go(s, False)
            case Box(s):
                return "[]" + go(s, False)
            case Impl(a, b):
                s = f"{go(a, False)} -> {go(b, False)}"
                return s if top else f"({s})"
        raise TypeError(f"not a formula: {node!r}")

    return go(phi, True)
