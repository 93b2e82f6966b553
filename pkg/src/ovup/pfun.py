"""Finite partial functions and the four combination operations.

A partial function is a finite map from domain points to values; both points
and values are opaque comparable tokens (small ints or identifier strings).
Equality is extensional.  The operations:

    override(f, g)   domain dom(f) |_| dom(g), f wins on overlap
    update(f, g)     domain dom(f), g's values where both are defined
    rmult(f, g)      f restricted to where g is defined          (written @)
    minus(f, g)      f restricted to where g is undefined
    intersect(f, g)  graph intersection

`minus` here is restriction of the left argument away from the right
argument's domain; this is the reading under which rmult(f, g) equals
minus(f, f - g) and update(f, g) equals rmult(override(g, f), f), and it is
the one used everywhere in this package.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping

Token = int | str


def _token_key(t: Token):
    # ints sort before strings; mixed-type domains stay orderable
    return (0, t, "") if isinstance(t, int) else (1, 0, t)


class PartialFunction:
    """Immutable finite partial map with extensional equality."""

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Mapping[Token, Token] | Iterable[tuple[Token, Token]] = ()):
        d = dict(entries)
        self._entries = d
        self._hash = hash(frozenset(d.items()))

    @property
    def domain(self) -> frozenset:
        return frozenset(self._entries)

    def items(self) -> Iterator[tuple[Token, Token]]:
        return iter(sorted(self._entries.items(), key=lambda kv: _token_key(kv[0])))

    def as_dict(self) -> dict:
        return dict(self._entries)

    def __getitem__(self, x: Token) -> Token:
        return self._entries[x]

    def get(self, x: Token, default=None):
        return self._entries.get(x, default)

    def __contains__(self, x: Token) -> bool:
        return x in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialFunction):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"PartialFunction({literal(self)!r})"


EMPTY = PartialFunction()


def override(f: PartialFunction, g: PartialFunction) -> PartialFunction:
    """f on dom(f), g elsewhere on dom(g)."""
    d = g.as_dict()
    d.update(f.as_dict())
    return PartialFunction(d)


def update(f: PartialFunction, g: PartialFunction) -> PartialFunction:
    """g's values on dom(f) & dom(g), f's values on the rest of dom(f)."""
    return PartialFunction({x: g.get(x, y) for x, y in f.items()})


def rmult(f: PartialFunction, g: PartialFunction) -> PartialFunction:
    """f restricted to dom(g)."""
    return PartialFunction({x: y for x, y in f.items() if x in g})


def minus(f: PartialFunction, g: PartialFunction) -> PartialFunction:
    """f restricted away from dom(g)."""
    return PartialFunction({x: y for x, y in f.items() if x not in g})


def intersect(f: PartialFunction, g: PartialFunction) -> PartialFunction:
    """Graph intersection: points where f and g agree."""
    return PartialFunction({x: y for x, y in f.items() if g.get(x) == y})


#: operation-symbol table usable by term.evaluate
OPS = {"ov": override, "upd": update, "at": rmult, "mns": minus}


def quotient_range(f: PartialFunction, classes: Iterable[Iterable[Token]]) -> PartialFunction:
    """Collapse f's values along a partition of value tokens.

    Every value of f must occur in exactly one class; each value is replaced
    by its class representative (the least member).  The domain is unchanged,
    and the induced map is a homomorphism for all four operations.
    """
    rep: dict[Token, Token] = {}
    for cls in classes:
        members = sorted(cls, key=_token_key)
        if not members:
            raise ValueError("empty class in partition")
        for m in members:
            if m in rep:
                raise ValueError(f"token {m!r} occurs in two classes")
            rep[m] = members[0]
    missing = {y for _, y in f.items() if y not in rep}
    if missing:
        raise ValueError(f"values not covered by partition: {sorted(missing, key=_token_key)!r}")
    return PartialFunction({x: rep[y] for x, y in f.items()})


def restrict_domain(f: PartialFunction, points: Iterable[Token]) -> PartialFunction:
    """Restrict f to the given set of domain points (a homomorphism)."""
    keep = set(points)
    return PartialFunction({x: y for x, y in f.items() if x in keep})


def phi1_holds(h: PartialFunction, f: PartialFunction, g: PartialFunction) -> bool:
    """The override-only characterisation of update.

    True iff h has the same domain as f, agrees with g wherever both h and g
    are defined, and agrees with f where g is not -- all three conditions
    expressed with override alone:

        h | f = h   and   f | h = f
        h | g = g | h
        g | f = g | h

    For functions this holds exactly when h = update(f, g).
    """
    return (
        override(h, f) == h
        and override(f, h) == f
        and override(h, g) == override(g, h)
        and override(g, f) == override(g, h)
    )


_LITERAL_ITEM = re.compile(r"^\s*([a-zA-Z_][a-zA-Z0-9_]*|\d+)\s*:\s*([a-zA-Z_][a-zA-Z0-9_]*|\d+)\s*$")


def _parse_token(s: str) -> Token:
    return int(s) if s.isdigit() else s


def parse_literal(text: str) -> PartialFunction:
    """Parse the fixture syntax `{a:1, b:2}`; `{}` is the empty function."""
    s = text.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ValueError(f"partial-function literal must be braced: {text!r}")
    body = s[1:-1].strip()
    if not body:
        return EMPTY
    entries = {}
    for part in body.split(","):
        m = _LITERAL_ITEM.match(part)
        if not m:
            raise ValueError(f"bad entry {part!r} in {text!r}")
        k = _parse_token(m.group(1))
        if k in entries:
            raise ValueError(f"duplicate key {k!r} in {text!r}")
        entries[k] = _parse_token(m.group(2))
    return PartialFunction(entries)


def literal(f: PartialFunction) -> str:
    """Render f in the `{a:1, b:2}` fixture syntax."""
    return "{" + ", ".join(f"{x}:{y}" for x, y in f.items()) + "}"


def random_pfun(rng, points: Iterable[Token], values: Iterable[Token]) -> PartialFunction:
    """Uniformly random partial function from `points` into `values`.

    Each point is independently undefined or mapped to one of the values,
    all |values|+1 cases equally likely, so every partial function on the
    given sets is equally probable.
    """
    vals = list(values)
    entries = {}
    for x in points:
        i = rng.randrange(len(vals) + 1)
        if i:
            entries[x] = vals[i - 1]
    return PartialFunction(entries)
