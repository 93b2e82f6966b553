"""The named law library and the parametric schema generators.

The library itself is data: it is loaded from ``data/laws.txt`` (one law per
line, ``id: statement``).  This module adds the three infinite schema
families over override and update:

  * ``lambda_n`` -- the quasi-identity family axiomatising the override
    quasivariety on top of the band equations.  The published display bounds
    the "fence" premises  z_i | x = z_i | y  by 2n-1, but that bound is
    refutable in the three-element override algebra (see the tests), while
    the accompanying soundness argument needs the premise for every i up to
    2n+1.  Both readings are generated; ``corrected`` (2n+1) is the default.
  * ``eta_n`` / ``eta_prime_n`` -- nested-update implication schemas.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Callable, Mapping, Union

from . import term
from .term import Identity, QuasiIdentity, Var, ov, upd

Law = Union[Identity, QuasiIdentity]

LITERAL = "literal"  # fence premises for 1 <= i <= 2n-1, as displayed
CORRECTED = "corrected"  # fence premises for 1 <= i <= 2n+1

#: ids of the purely equational laws (everything else is a quasi-identity)
EQUATIONAL_IDS = (
    "absorb", "absorb2", "leftdist", "rightdist", "special", "special2",
    "idem", "assoc", "lrb",
    "domaineq1", "domaineq2", "agreement1", "agreement2", "updateright",
)

BAND_IDS = ("idem", "assoc", "lrb")


def parse_law_file(text: str) -> dict[str, Law]:
    """Parse `id: law` lines; blank lines and # comments are skipped."""
    out: dict[str, Law] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ValueError(f"line {lineno}: expected 'id: law', got {raw!r}")
        law_id, body = line.split(":", 1)
        law_id = law_id.strip()
        if law_id in out:
            raise ValueError(f"line {lineno}: duplicate law id {law_id!r}")
        stmt = term.parse(body)
        if not isinstance(stmt, (Identity, QuasiIdentity)):
            raise ValueError(f"line {lineno}: {law_id!r} is a bare term, not a law")
        out[law_id] = stmt
    return out


def load_library() -> dict[str, Law]:
    """The shipped law library, freshly parsed from its data file."""
    text = resources.files("ovup").joinpath("data/laws.txt").read_text("utf-8")
    return parse_law_file(text)


def load_law_file(path: str) -> dict[str, Law]:
    with open(path, encoding="utf-8") as fh:
        return parse_law_file(fh.read())


def lambda_n(n: int, fence_bound: str = CORRECTED) -> QuasiIdentity:
    """The 2n+3-variable override quasi-identity (variables x, y, z1..z_{2n+1}).

    Premises, in order: x|y=x, y|x=y, z1|x=x, z_{2n+1}|y=y, the fence
    premises z_i|x = z_i|y for i in the selected range, and the ladder pairs
    z_{2i-1}|z_{2i} = z_{2i} and z_{2i+1}|z_{2i} = z_{2i} for 1 <= i <= n.
    Conclusion x = y.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if fence_bound not in (LITERAL, CORRECTED):
        raise ValueError(f"fence_bound must be {LITERAL!r} or {CORRECTED!r}")
    x, y = Var("x"), Var("y")
    z = {i: Var(f"z{i}") for i in range(1, 2 * n + 2)}
    premises = [
        Identity(ov(x, y), x),
        Identity(ov(y, x), y),
        Identity(ov(z[1], x), x),
        Identity(ov(z[2 * n + 1], y), y),
    ]
    top = 2 * n - 1 if fence_bound == LITERAL else 2 * n + 1
    premises += [Identity(ov(z[i], x), ov(z[i], y)) for i in range(1, top + 1)]
    for i in range(1, n + 1):
        premises.append(Identity(ov(z[2 * i - 1], z[2 * i]), z[2 * i]))
        premises.append(Identity(ov(z[2 * i + 1], z[2 * i]), z[2 * i]))
    return QuasiIdentity(tuple(premises), Identity(x, y))


def _chain(xs: list[Var], core: term.Term) -> term.Term:
    out = core
    for v in reversed(xs):
        out = upd(v, out)
    return out


def eta_n(n: int) -> QuasiIdentity:
    """x_i[x_{i+1}]=x_i (i<n)  ->  x1[..[xn[u]]..] = x1[..[xn[x1[u]]]..]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    xs = [Var(f"x{i}") for i in range(1, n + 1)]
    u = Var("u")
    premises = tuple(
        Identity(upd(xs[i], xs[i + 1]), xs[i]) for i in range(n - 1)
    )
    lhs = _chain(xs, u)
    rhs = _chain(xs, upd(xs[0], u))
    return QuasiIdentity(premises, Identity(lhs, rhs))


def eta_prime_n(n: int) -> QuasiIdentity:
    """Same premises; on the right every x_i (i>1) is replaced by x_i[x1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    xs = [Var(f"x{i}") for i in range(1, n + 1)]
    u = Var("u")
    premises = tuple(
        Identity(upd(xs[i], xs[i + 1]), xs[i]) for i in range(n - 1)
    )
    lhs = _chain(xs, u)
    rhs = u
    for v in reversed(xs[1:]):
        rhs = upd(upd(v, xs[0]), rhs)
    rhs = upd(xs[0], rhs)
    return QuasiIdentity(premises, Identity(lhs, rhs))


@dataclass(frozen=True)
class SigmaL:
    """The band equations plus a handle generating the quasi-identity family."""

    equations: Mapping[str, Identity]
    lambda_n: Callable[[int], QuasiIdentity]


def sigma_L() -> SigmaL:
    lib = load_library()
    eqs = {law_id: lib[law_id] for law_id in BAND_IDS}
    return SigmaL(equations=eqs, lambda_n=lambda_n)
