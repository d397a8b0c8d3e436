"""Line-based proof files.

    system S1_SP
    0 hyp []x0
    1 taut []x0 -> ([]x0 -> []x0)
    2 ax II a=x0 : []x0 -> x0
    3 an 2 : []([]x0 -> x0)
    4 sp <template> ; x5 ; <psi> ; <psi'> : <formula>
    5 spse <template> ; x5 ; <ref> : <formula>
    6 mp 0 2 : x0
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..syntax import Formula, ParseError, SchemeId, parse, to_text
from .kernel import AN, MP, SPSE, Ax, Derivation, Hyp, SPInst, Step, TautAx

_BINDING_RE = re.compile(r"(?:^|(?<=\s))([abc]'?)=(?!=)")
_VAR_RE = re.compile(r"\s*x(\d+)\s*$")
_RULES = ("hyp", "taut", "ax", "an", "mp", "sp", "spse")


class ProofFormatError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass
class ProofFile:
    derivation: Derivation
    system: str | None = None
    hypotheses: list[Formula] = field(default_factory=list)


def _fmt(phi: Formula) -> str:
    return to_text(phi, sugar=True)


def format_step(k: int, step: Step) -> str:
    j, phi = step.justification, _fmt(step.formula)
    if isinstance(j, Hyp):
        return f"{k} hyp {phi}"
    if isinstance(j, TautAx):
        return f"{k} taut {phi}"
    if isinstance(j, Ax):
        binds = " ".join(f"{name}={_fmt(v)}" for name, v in (j.binding or {}).items())
        return f"{k} ax {SchemeId(j.scheme).value} {binds} : {phi}".replace("  ", " ")
    if isinstance(j, AN):
        return f"{k} an {j.ref} : {phi}"
    if isinstance(j, SPInst):
        return f"{k} sp {_fmt(j.template)} ; x{j.var} ; {_fmt(j.psi)} ; {_fmt(j.psi2)} : {phi}"
    if isinstance(j, SPSE):
        return f"{k} spse {_fmt(j.template)} ; x{j.var} ; {j.ref} : {phi}"
    if isinstance(j, MP):
        return f"{k} mp {j.minor} {j.major} : {phi}"
    raise TypeError(f"unknown justification {j!r}")


def to_proof_text(d: Derivation, system: str | None = None) -> str:
    lines = [f"system {system}"] if system else []
    lines += [format_step(k, s) for k, s in enumerate(d)]
    return "\n".join(lines) + "\n"


class _Line:
    def __init__(self, text: str, lineno: int):
        self.text = text
        self.lineno = lineno

    def formula(self, fragment: str, start: int) -> Formula:
        try:
            return parse(fragment)
        except ParseError as exc:
            raise ProofFormatError(exc.message, self.lineno, start + exc.pos + 1) from None

    def fail(self, message: str, column: int = 1):
        raise ProofFormatError(message, self.lineno, column)


def _split_colon(line: _Line, body: str, offset: int) -> tuple[str, str, int]:
    if ":" not in body:
        line.fail("missing ': <formula>'", offset + len(body) + 1)
    head, _, tail = body.rpartition(":")
    return head, tail, offset + len(head) + 1


def _int(line: _Line, s: str, column: int) -> int:
    column += len(s) - len(s.lstrip())
    try:
        return int(s)
    except ValueError:
        line.fail(f"expected an integer, got {s.strip()!r}", column)


def _var(line: _Line, s: str, column: int) -> int:
    m = _VAR_RE.match(s)
    column += len(s) - len(s.lstrip())
    if m is None:
        line.fail(f"expected a variable like x3, got {s.strip()!r}", column)
    return int(m.group(1))


def _fields(body: str, offset: int, count: int, line: _Line) -> list[tuple[str, int]]:
    parts, pos = [], offset
    for piece in body.split(";"):
        parts.append((piece, pos))
        pos += len(piece) + 1
    if len(parts) != count:
        line.fail(f"expected {count} ';'-separated fields, got {len(parts)}", offset + 1)
    return parts


def parse_proof_text(text: str) -> ProofFile:
    steps: list[Step] = []
    system = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.split("#", 1)[0].rstrip()
        if not stripped.strip():
            continue
        line = _Line(raw, lineno)
        m = re.match(r"\s*system\s+(\S+)\s*$", stripped)
        if m:
            system = m.group(1)
            continue
        m = re.match(r"\s*(\d+)\s+(\w+)\s?", stripped)
        if m is None:
            line.fail("expected '<index> <rule> ...'")
        idx, rule, off = int(m.group(1)), m.group(2), m.end()
        if idx != len(steps):
            line.fail(f"step index {idx} out of sequence (expected {len(steps)})")
        if rule not in _RULES:
            line.fail(f"unknown rule {rule!r}", m.start(2) + 1)
        body = stripped[off:]
        if rule in ("hyp", "taut"):
            phi = line.formula(body, off)
            steps.append(Step(phi, Hyp() if rule == "hyp" else TautAx()))
            continue
        head, tail, toff = _split_colon(line, body, off)
        phi = line.formula(tail, toff)
        if rule == "ax":
            sm = re.match(r"\s*(\S+)", head)
            if sm is None:
                line.fail("missing scheme name", off + 1)
            try:
                scheme = SchemeId(sm.group(1).upper())
            except ValueError:
                line.fail(f"unknown scheme {sm.group(1)!r}", off + sm.start(1) + 1)
            rest, roff = head[sm.end():], off + sm.end()
            marks = list(_BINDING_RE.finditer(rest))
            if not marks and rest.strip():
                line.fail("expected bindings like a=<formula>", roff + 1)
            binding = {}
            for n, mk in enumerate(marks):
                end = marks[n + 1].start() if n + 1 < len(marks) else len(rest)
                binding[mk.group(1)] = line.formula(rest[mk.end():end], roff + mk.end())
            steps.append(Step(phi, Ax(scheme, binding or None)))
        elif rule == "an":
            steps.append(Step(phi, AN(_int(line, head, off + 1))))
        elif rule == "mp":
            nums = head.split()
            if len(nums) != 2:
                line.fail("mp needs two step references", off + 1)
            steps.append(Step(phi, MP(_int(line, nums[0], off + 1), _int(line, nums[1], off + 1))))
        elif rule == "sp":
            (t, to), (v, vo), (p, po), (q, qo) = _fields(head, off, 4, line)
            steps.append(
                Step(phi, SPInst(line.formula(t, to), _var(line, v, vo + 1), line.formula(p, po), line.formula(q, qo)))
            )
        else:  # spse
            (t, to), (v, vo), (r, ro) = _fields(head, off, 3, line)
            steps.append(Step(phi, SPSE(line.formula(t, to), _var(line, v, vo + 1), _int(line, r, ro + 1))))
    if not steps:
        raise ProofFormatError("no proof steps", 1)
    d = Derivation(steps)
    return ProofFile(d, system, d.hypotheses_used)
