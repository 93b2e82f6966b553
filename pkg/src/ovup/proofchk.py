"""Checker for equational derivations.

A proof script is a start term followed by steps; each step must equal the
previous term with the subterm at a cited position replaced via a cited law
instance.  Laws are equational library entries or local hypotheses, usable
in both directions; the substitution is part of the citation (the checker
never searches for matches).

Script file format (line oriented, # comments):

    hyp h1: x[y] = x
    start: y
    step: y[y | x] ; law=absorb dir=L2R pos= sub={x: y, y: x}
    step: y[x][y] ; law=leftdist dir=R2L pos= sub={x: y, y: x, z: y}

``pos`` is a dot-separated L/R path from the root (empty = root); omitted
``dir``/``pos``/``sub`` default to L2R, the root, and the identity
substitution.  Law variables absent from ``sub`` stand for themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from . import term
from .term import Identity, QuasiIdentity, Term


@dataclass(frozen=True)
class Justification:
    law: str
    direction: str  # "L2R" | "R2L"
    pos: tuple[str, ...]
    sub: Mapping[str, Term]


@dataclass(frozen=True)
class ProofScript:
    hypotheses: tuple[tuple[str, Identity], ...]
    steps: tuple[tuple[Term, Justification | None], ...]

    def first(self) -> Term:
        return self.steps[0][0]

    def last(self) -> Term:
        return self.steps[-1][0]

    def conclusion(self) -> Identity:
        """The identity the script establishes (under its hypotheses)."""
        return Identity(self.first(), self.last())


@dataclass(frozen=True)
class ProofFailure:
    step: int
    reason: str

    def __str__(self) -> str:
        return f"step {self.step}: {self.reason}"


class ScriptError(Exception):
    """Malformed proof-script file."""


def check_proof(
    script: ProofScript, library: Mapping[str, Union[Identity, QuasiIdentity]]
) -> ProofFailure | None:
    """None iff every step is a correct single rewrite; otherwise the first
    failure with an explanation (expected vs found subterm)."""
    if not script.steps:
        return ProofFailure(0, "empty script")
    if script.steps[0][1] is not None:
        return ProofFailure(0, "first step must be unjustified")
    laws: dict[str, Identity] = {}
    for op_id, law in library.items():
        if isinstance(law, Identity):
            laws[op_id] = law
    hyp_ids = set()
    for hyp_id, ident in script.hypotheses:
        laws[hyp_id] = ident  # hypotheses shadow library entries
        hyp_ids.add(hyp_id)
    prev = script.steps[0][0]
    for k, (goal, just) in enumerate(script.steps[1:], start=1):
        if just is None:
            return ProofFailure(k, "missing justification")
        law = laws.get(just.law)
        if law is None:
            if just.law in library and not (just.law in hyp_ids):
                return ProofFailure(k, f"law {just.law!r} is not equational")
            return ProofFailure(k, f"unknown law {just.law!r}")
        if just.direction == "L2R":
            src, dst = law.lhs, law.rhs
        elif just.direction == "R2L":
            src, dst = law.rhs, law.lhs
        else:
            return ProofFailure(k, f"bad direction {just.direction!r}")
        try:
            found = term.subterm_at(prev, just.pos)
        except ValueError as exc:
            return ProofFailure(k, f"invalid position {'.'.join(just.pos) or '(root)'}: {exc}")
        expected = term.substitute(src, just.sub)
        if found != expected:
            return ProofFailure(
                k,
                f"subterm mismatch at {'.'.join(just.pos) or '(root)'}: "
                f"law instance is {term.render(expected)}, term has {term.render(found)}",
            )
        rewritten = term.replace_at(prev, just.pos, term.substitute(dst, just.sub))
        if rewritten != goal:
            return ProofFailure(
                k,
                f"step term differs from rewrite result {term.render(rewritten)}",
            )
        prev = goal
    return None


# ---------------------------------------------------------------------------
# script files


def _split_top(text: str, sep: str) -> list[str]:
    """Split on sep at bracket depth zero."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def _parse_sub(text: str, lineno: int) -> dict[str, Term]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ScriptError(f"line {lineno}: sub must be braced, got {text!r}")
    body = text[1:-1].strip()
    if not body:
        return {}
    out: dict[str, Term] = {}
    for item in _split_top(body, ","):
        if ":" not in item:
            raise ScriptError(f"line {lineno}: bad sub entry {item!r}")
        name, rhs = item.split(":", 1)
        name = name.strip()
        if name in out:
            raise ScriptError(f"line {lineno}: duplicate sub entry for {name!r}")
        try:
            out[name] = term.parse_term(rhs)
        except term.ParseError as exc:
            raise ScriptError(f"line {lineno}: in sub for {name!r}: {exc}") from None
    return out


def _parse_justification(meta: str, lineno: int) -> Justification:
    law = None
    direction = "L2R"
    pos: tuple[str, ...] = ()
    sub: dict[str, Term] = {}
    rest = meta.strip()
    if "sub=" in rest:
        rest, sub_text = rest.split("sub=", 1)
        sub = _parse_sub(sub_text, lineno)
    for field in rest.split():
        if "=" not in field:
            raise ScriptError(f"line {lineno}: bad field {field!r}")
        key, value = field.split("=", 1)
        if key == "law":
            law = value
        elif key == "dir":
            if value not in ("L2R", "R2L"):
                raise ScriptError(f"line {lineno}: dir must be L2R or R2L")
            direction = value
        elif key == "pos":
            if value:
                steps = tuple(value.split("."))
                if any(s not in ("L", "R") for s in steps):
                    raise ScriptError(f"line {lineno}: bad pos {value!r}")
                pos = steps
        else:
            raise ScriptError(f"line {lineno}: unknown field {key!r}")
    if law is None:
        raise ScriptError(f"line {lineno}: step needs law=<id>")
    return Justification(law, direction, pos, sub)


def parse_script(text: str) -> ProofScript:
    hyps: list[tuple[str, Identity]] = []
    steps: list[tuple[Term, Justification | None]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("hyp "):
            body = line[4:]
            if ":" not in body:
                raise ScriptError(f"line {lineno}: expected 'hyp id: identity'")
            hyp_id, eq = body.split(":", 1)
            try:
                ident = term.parse_identity(eq)
            except term.ParseError as exc:
                raise ScriptError(f"line {lineno}: {exc}") from None
            if steps:
                raise ScriptError(f"line {lineno}: hypotheses must precede steps")
            hyps.append((hyp_id.strip(), ident))
        elif line.startswith("start:"):
            if steps:
                raise ScriptError(f"line {lineno}: duplicate start")
            try:
                steps.append((term.parse_term(line[len("start:"):]), None))
            except term.ParseError as exc:
                raise ScriptError(f"line {lineno}: {exc}") from None
        elif line.startswith("step:"):
            if not steps:
                raise ScriptError(f"line {lineno}: step before start")
            body = line[len("step:"):]
            parts = _split_top(body, ";")
            if len(parts) != 2:
                raise ScriptError(f"line {lineno}: expected '<term> ; law=...'")
            try:
                goal = term.parse_term(parts[0])
            except term.ParseError as exc:
                raise ScriptError(f"line {lineno}: {exc}") from None
            steps.append((goal, _parse_justification(parts[1], lineno)))
        else:
            raise ScriptError(f"line {lineno}: expected hyp/start/step, got {raw!r}")
    if not steps:
        raise ScriptError("script has no start term")
    return ProofScript(tuple(hyps), tuple(steps))


def load_script(path: str) -> ProofScript:
    with open(path, encoding="utf-8") as fh:
        return parse_script(fh.read())
