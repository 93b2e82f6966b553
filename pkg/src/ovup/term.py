"""Terms, identities and quasi-identities over {ov, upd, at, mns}.

Concrete syntax (one statement per line in law files, `#` starts a comment):

    quasi   := eqlist "->" eq | eq
    eqlist  := eq { "&" eq }
    eq      := term "=" term
    term    := mid { "|" mid }
    mid     := post { ("@" | "-") post }
    post    := atom { "[" term "]" }
    atom    := ident | "(" term ")"

Postfix `[ ]` (update) binds tightest, then `@` and `-` (left-associative,
not mixable without parentheses), then `|` (override, left-associative).
Rendering is minimal-parenthesis and round-trips: parse(render(t)) == t.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Mapping, Union

OP_SYMBOLS = {"ov": "|", "at": "@", "mns": "-"}  # upd is postfix
OPS = ("ov", "upd", "at", "mns")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    op: str
    left: "Term"
    right: "Term"


Term = Union[Var, App]


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class QuasiIdentity:
    premises: tuple[Identity, ...]
    conclusion: Identity

    def __str__(self) -> str:
        return render(self)


Statement = Union[Term, Identity, QuasiIdentity]


def ov(l: Term, r: Term) -> App:
    return App("ov", l, r)


def upd(l: Term, r: Term) -> App:
    return App("upd", l, r)


def at(l: Term, r: Term) -> App:
    return App("at", l, r)


def mns(l: Term, r: Term) -> App:
    return App("mns", l, r)


def variables(t: Statement) -> set[str]:
    """All variable names occurring in a term, identity or quasi-identity."""
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, App):
        return variables(t.left) | variables(t.right)
    if isinstance(t, Identity):
        return variables(t.lhs) | variables(t.rhs)
    out = variables(t.conclusion)
    for p in t.premises:
        out |= variables(p)
    return out


_VAR_SPLIT = re.compile(r"^([a-z][a-z_]*?)(\d*)$")


def var_sort_key(name: str):
    """Natural ordering: alphabetic stem, then numeric suffix (z2 < z10)."""
    m = _VAR_SPLIT.match(name)
    if not m:
        return (name, 0, name)
    stem, digits = m.groups()
    return (stem, int(digits) if digits else -1, name)


def sorted_variables(t: Statement) -> list[str]:
    return sorted(variables(t), key=var_sort_key)


def ops_used(t: Statement) -> set[str]:
    """Operation symbols occurring in a statement (for signature checks)."""
    if isinstance(t, Var):
        return set()
    if isinstance(t, App):
        return {t.op} | ops_used(t.left) | ops_used(t.right)
    if isinstance(t, Identity):
        return ops_used(t.lhs) | ops_used(t.rhs)
    out = ops_used(t.conclusion)
    for p in t.premises:
        out |= ops_used(p)
    return out


def substitute(t: Term, sigma: Mapping[str, Term]) -> Term:
    """Simultaneous substitution; unbound variables stay themselves."""
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    return App(t.op, substitute(t.left, sigma), substitute(t.right, sigma))


def subterm_at(t: Term, path: tuple[str, ...]) -> Term:
    for step in path:
        if not isinstance(t, App):
            raise ValueError(f"path step {step!r} descends into a variable")
        if step == "L":
            t = t.left
        elif step == "R":
            t = t.right
        else:
            raise ValueError(f"bad path step {step!r} (want L or R)")
    return t


def replace_at(t: Term, path: tuple[str, ...], s: Term) -> Term:
    if not path:
        return s
    if not isinstance(t, App):
        raise ValueError(f"path step {path[0]!r} descends into a variable")
    if path[0] == "L":
        return App(t.op, replace_at(t.left, path[1:], s), t.right)
    if path[0] == "R":
        return App(t.op, t.left, replace_at(t.right, path[1:], s))
    raise ValueError(f"bad path step {path[0]!r} (want L or R)")


class EvalError(Exception):
    """Unbound variable or operation unsupported by the model."""


def evaluate(t: Term, operations: Mapping[str, Callable], env: Mapping[str, object]):
    """Bottom-up evaluation of a term.

    `operations` maps op symbols to binary callables over the model's
    elements (e.g. pfun.OPS, FiniteAlgebra.operations(), choice.OPS);
    `env` binds every variable of the term to an element.
    """
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvalError(f"unbound variable {t.name!r}") from None
    fn = operations.get(t.op)
    if fn is None:
        raise EvalError(f"operation {t.op!r} not supported by this model")
    return fn(evaluate(t.left, operations, env), evaluate(t.right, operations, env))


def identity_holds(ident: Identity, operations, env) -> bool:
    return evaluate(ident.lhs, operations, env) == evaluate(ident.rhs, operations, env)


# ---------------------------------------------------------------------------
# parsing


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        self.line = line
        self.col = col
        self.expected = expected
        loc = f"line {line}, col {col}"
        if expected:
            message = f"{message} (expected {' or '.join(expected)})"
        super().__init__(f"{loc}: {message}")


_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<comment>#[^\n]*)"
    r"|(?P<arrow>->)"
    r"|(?P<ident>[a-z][a-z0-9_]*)"
    r"|(?P<sym>[|@\-\[\]()=&])"
)


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    toks = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind not in ("ws", "comment"):
            toks.append((kind, lexeme, line, col))
        nl = lexeme.count("\n")
        if nl:
            line += nl
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        i = m.end()
    toks.append(("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def next(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, expected: tuple[str, ...]):
        kind, lex, line, col = self.peek()
        found = "end of input" if kind == "eof" else repr(lex)
        raise ParseError(f"unexpected {found}", line, col, expected)

    def expect(self, lexeme: str):
        kind, lex, line, col = self.peek()
        if lex != lexeme or kind == "eof":
            self.fail((repr(lexeme),))
        return self.next()

    def at(self, lexeme: str) -> bool:
        kind, lex, _, _ = self.peek()
        return kind != "eof" and lex == lexeme

    # grammar productions -------------------------------------------------

    def atom(self) -> Term:
        kind, lex, line, col = self.peek()
        if kind == "ident":
            self.next()
            return Var(lex)
        if lex == "(":
            self.next()
            t = self.term()
            self.expect(")")
            return t
        self.fail(("identifier", "'('"))

    def post(self) -> Term:
        t = self.atom()
        while self.at("["):
            self.next()
            arg = self.term()
            self.expect("]")
            t = App("upd", t, arg)
        return t

    def mid(self) -> Term:
        t = self.post()
        seen: str | None = None
        while self.at("@") or self.at("-"):
            kind, lex, line, col = self.next()
            op = "at" if lex == "@" else "mns"
            if seen is not None and op != seen:
                raise ParseError(
                    "'@' and '-' cannot be mixed without parentheses", line, col
                )
            seen = op
            t = App(op, t, self.post())
        return t

    def term(self) -> Term:
        t = self.mid()
        while self.at("|"):
            self.next()
            t = App("ov", t, self.mid())
        return t

    def eq(self) -> Identity:
        lhs = self.term()
        self.expect("=")
        return Identity(lhs, self.term())

    def statement(self) -> Statement:
        first = self.term()
        if self.at("="):
            self.next()
            eqs = [Identity(first, self.term())]
            while self.at("&"):
                self.next()
                eqs.append(self.eq())
            if self.at("->"):
                self.next()
                return QuasiIdentity(tuple(eqs), self.eq())
            if len(eqs) > 1:
                self.fail(("'->'",))
            return eqs[0]
        return first

    def done(self):
        if self.peek()[0] != "eof":
            self.fail(("end of input",))


def parse(text: str) -> Statement:
    """Parse a term, identity, or quasi-identity."""
    p = _Parser(text)
    s = p.statement()
    p.done()
    return s


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.done()
    return t


def parse_identity(text: str) -> Identity:
    s = parse(text)
    if not isinstance(s, Identity):
        raise ParseError("not an identity", 1, 1)
    return s


def parse_quasi(text: str) -> QuasiIdentity:
    """Parse a quasi-identity; a bare identity is wrapped with no premises."""
    s = parse(text)
    if isinstance(s, Identity):
        return QuasiIdentity((), s)
    if not isinstance(s, QuasiIdentity):
        raise ParseError("not an identity or quasi-identity", 1, 1)
    return s


# ---------------------------------------------------------------------------
# rendering

_PREC = {"ov": 1, "at": 2, "mns": 2, "upd": 3}


def _render(t: Term, parent_prec: int) -> str:
    if isinstance(t, Var):
        return t.name
    prec = _PREC[t.op]
    if t.op == "upd":
        s = f"{_render(t.left, 3)}[{_render(t.right, 0)}]"
    else:
        left = _render(t.left, prec)
        if isinstance(t.left, App) and _PREC[t.left.op] == prec and t.left.op != t.op:
            left = f"({left})"  # same level, different op: (a - b) @ c
        s = f"{left} {OP_SYMBOLS[t.op]} {_render(t.right, prec + 1)}"
    if prec < parent_prec:
        s = f"({s})"
    return s


def render(x: Statement) -> str:
    """Minimal-parenthesis canonical text; inverse of parse."""
    if isinstance(x, (Var, App)):
        return _render(x, 0)
    if isinstance(x, Identity):
        return f"{render(x.lhs)} = {render(x.rhs)}"
    prem = " & ".join(render(p) for p in x.premises)
    return f"{prem} -> {render(x.conclusion)}" if prem else render(x.conclusion)
