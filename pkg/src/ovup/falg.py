"""Finite algebras as operation tables; decision procedures by exhaustive sweep.

Carrier is {0..n-1}; each operation is an n x n row-major table (row = left
argument).  The two builtins:

  * ``builtin_three`` -- the three-element algebra of partial functions on a
    one-point domain with two values (0 = empty, 1 = the '+' map, 2 = the '-'
    map).  Override and minus tables are definitional; the @ and update
    tables are derived from them via  f@g = f-(f-g)  and  f[g] = (g|f)@f.
  * ``builtin_L`` -- the three-element left-regular-band monoid {0,+,-}
    (identical to the override reduct of the three-element algebra under the
    encoding + = 1, - = 2).

``check_identity``/``check_quasi`` decide validity by sweeping every
assignment; validity in the three-element algebra decides validity in all
algebras of partial functions over the corresponding signature, and
``rep_check`` decides representability itself via separating homomorphisms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

from .term import Identity, QuasiIdentity, Term, Var, App, ops_used, sorted_variables

DEFAULT_SWEEP_BUDGET = 10**8
DEFAULT_POWER_LIMIT = 1024

Table = tuple[tuple[int, ...], ...]


class SweepBudgetError(Exception):
    """An exhaustive sweep or power construction would exceed its budget."""


@dataclass(frozen=True)
class FiniteAlgebra:
    size: int
    tables: Mapping[str, Table]
    name: str | None = None

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("carrier must be nonempty")
        if not self.tables:
            raise ValueError("at least one operation required")
        object.__setattr__(self, "tables", dict(self.tables))
        for op, tbl in self.tables.items():
            tbl = tuple(tuple(row) for row in tbl)
            self.tables[op] = tbl
            if len(tbl) != self.size or any(len(row) != self.size for row in tbl):
                raise ValueError(f"table for {op!r} is not {self.size}x{self.size}")
            if any(not (0 <= v < self.size) for row in tbl for v in row):
                raise ValueError(f"table for {op!r} has entries outside the carrier")

    @property
    def ops(self) -> frozenset[str]:
        return frozenset(self.tables)

    def apply(self, op: str, a: int, b: int) -> int:
        return self.tables[op][a][b]

    def operations(self) -> dict[str, Callable[[int, int], int]]:
        """Operation map in the shape term.evaluate expects."""
        return {op: (lambda a, b, t=tbl: t[a][b]) for op, tbl in self.tables.items()}

    def elements(self) -> range:
        return range(self.size)

    def __repr__(self) -> str:
        label = self.name or f"{self.size}-element"
        return f"FiniteAlgebra({label}, ops={sorted(self.tables)})"


# definitional tables of the three-element algebra
_OV3: Table = ((0, 1, 2), (1, 1, 1), (2, 2, 2))
_MNS3: Table = ((0, 0, 0), (1, 0, 0), (2, 0, 0))


def _derive_three_tables() -> dict[str, Table]:
    ov, mns = _OV3, _MNS3
    at = tuple(tuple(mns[a][mns[a][b]] for b in range(3)) for a in range(3))
    upd = tuple(tuple(at[ov[b][a]][a] for b in range(3)) for a in range(3))
    return {"ov": ov, "upd": upd, "at": at, "mns": mns}


def builtin_three(tau: Iterable[str] = ("ov", "upd", "at", "mns")) -> FiniteAlgebra:
    """The three-element algebra, restricted to the signature `tau`."""
    tau = frozenset(tau)
    all_tables = _derive_three_tables()
    bad = tau - set(all_tables)
    if bad:
        raise ValueError(f"unknown operations {sorted(bad)}")
    if not tau:
        raise ValueError("empty signature")
    name = "three" if tau == frozenset(all_tables) else "three:" + ",".join(sorted(tau))
    return FiniteAlgebra(3, {op: all_tables[op] for op in sorted(tau)}, name)


def builtin_L() -> FiniteAlgebra:
    """The three-element monoid on {0,+,-}: 0 is an identity, +,- are left zeros."""
    return FiniteAlgebra(3, {"ov": _OV3}, "L")


# ---------------------------------------------------------------------------
# exhaustive checks


def _compile(t: Term, index: Mapping[str, int], tables: Mapping[str, Table]):
    if isinstance(t, Var):
        i = index[t.name]
        return lambda env, i=i: env[i]
    f = _compile(t.left, index, tables)
    g = _compile(t.right, index, tables)
    tbl = tables[t.op]
    return lambda env, f=f, g=g, tbl=tbl: tbl[f(env)][g(env)]


def _require_ops(alg: FiniteAlgebra, stmt) -> None:
    missing = ops_used(stmt) - set(alg.tables)
    if missing:
        raise ValueError(f"operations {sorted(missing)} not supported by {alg!r}")


def _guard(alg: FiniteAlgebra, nvars: int, budget: int) -> None:
    if alg.size**nvars > budget:
        raise SweepBudgetError(
            f"{alg.size}^{nvars} assignments exceed the sweep budget {budget}"
        )


def check_identity(
    alg: FiniteAlgebra, ident: Identity, budget: int = DEFAULT_SWEEP_BUDGET
) -> dict[str, int] | None:
    """Exhaustively check an identity; None if valid, else the first
    counter-assignment in lexicographic order (variables in natural order)."""
    _require_ops(alg, ident)
    names = sorted_variables(ident)
    _guard(alg, len(names), budget)
    index = {v: i for i, v in enumerate(names)}
    lhs = _compile(ident.lhs, index, alg.tables)
    rhs = _compile(ident.rhs, index, alg.tables)
    for env in product(range(alg.size), repeat=len(names)):
        if lhs(env) != rhs(env):
            return dict(zip(names, env))
    return None


def check_quasi(
    alg: FiniteAlgebra, q: QuasiIdentity | Identity, budget: int = DEFAULT_SWEEP_BUDGET
) -> dict[str, int] | None:
    """Like check_identity; an assignment is a counterexample iff every
    premise holds and the conclusion fails."""
    if isinstance(q, Identity):
        q = QuasiIdentity((), q)
    _require_ops(alg, q)
    names = sorted_variables(q)
    _guard(alg, len(names), budget)
    index = {v: i for i, v in enumerate(names)}
    premises = [
        (_compile(p.lhs, index, alg.tables), _compile(p.rhs, index, alg.tables))
        for p in q.premises
    ]
    lhs = _compile(q.conclusion.lhs, index, alg.tables)
    rhs = _compile(q.conclusion.rhs, index, alg.tables)
    for env in product(range(alg.size), repeat=len(names)):
        if all(pl(env) == pr(env) for pl, pr in premises) and lhs(env) != rhs(env):
            return dict(zip(names, env))
    return None


# ---------------------------------------------------------------------------
# homomorphisms and representability


def _signature_match(a: FiniteAlgebra, b: FiniteAlgebra) -> None:
    if a.ops != b.ops:
        raise ValueError(f"signature mismatch: {sorted(a.ops)} vs {sorted(b.ops)}")


def homomorphisms(a: FiniteAlgebra, b: FiniteAlgebra) -> list[tuple[int, ...]]:
    """All operation-preserving maps carrier(a) -> carrier(b), as value
    tuples in lexicographic order, found by backtracking."""
    _signature_match(a, b)
    tables = [(a.tables[op], b.tables[op]) for op in sorted(a.ops)]
    n, m = a.size, b.size
    img = [0] * n
    out: list[tuple[int, ...]] = []

    def consistent(i: int) -> bool:
        # constraints j*k = p with j,k,p <= i are checked once, at level
        # max(j, k, p); earlier ones were verified at previous levels
        for ta, tb in tables:
            for j in range(i + 1):
                row = ta[j]
                for k in range(i + 1):
                    p = row[k]
                    if p > i or (j != i and k != i and p != i):
                        continue
                    if tb[img[j]][img[k]] != img[p]:
                        return False
        return True

    def extend(i: int) -> None:
        if i == n:
            out.append(tuple(img))
            return
        for v in range(m):
            img[i] = v
            if consistent(i):
                extend(i + 1)

    extend(0)
    return out


def rep_check(alg: FiniteAlgebra, target: FiniteAlgebra) -> tuple[int, int] | None:
    """Decide membership in the quasivariety of `target`.

    Returns None when every pair of distinct elements is separated by some
    homomorphism into `target` (then alg embeds into a direct power of it),
    else the first inseparable pair.  With the three-element builtin as
    target this decides representability as an algebra of partial functions;
    with L it decides the hyperplane-face-semigroup quasivariety.
    """
    _signature_match(alg, target)
    homs = homomorphisms(alg, target)
    for x in range(alg.size):
        for y in range(x + 1, alg.size):
            if all(h[x] == h[y] for h in homs):
                return (x, y)
    return None


def find_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra) -> tuple[int, ...] | None:
    """A bijective homomorphism a -> b, or None; backtracking search."""
    _signature_match(a, b)
    if a.size != b.size:
        return None
    tables = [(a.tables[op], b.tables[op]) for op in sorted(a.ops)]
    n = a.size
    img = [0] * n
    used = [False] * n

    def consistent(i: int) -> bool:
        for ta, tb in tables:
            for j in range(i + 1):
                row = ta[j]
                for k in range(i + 1):
                    p = row[k]
                    if p > i or (j != i and k != i and p != i):
                        continue
                    if tb[img[j]][img[k]] != img[p]:
                        return False
        return True

    def extend(i: int):
        if i == n:
            return tuple(img)
        for v in range(n):
            if used[v]:
                continue
            img[i] = v
            used[v] = True
            if consistent(i):
                found = extend(i + 1)
                if found:
                    return found
            used[v] = False
        return None

    return extend(0)


# ---------------------------------------------------------------------------
# powers and subalgebras


def direct_power(alg: FiniteAlgebra, k: int, limit: int = DEFAULT_POWER_LIMIT) -> FiniteAlgebra:
    """k-fold direct power with componentwise tables.

    Elements are 0..n^k-1, encoding tuples base-n with component 0 most
    significant (element e has components (e // n^(k-1-i)) % n).
    """
    if k < 1:
        raise ValueError("power must be >= 1")
    n = alg.size
    size = n**k
    if size > limit:
        raise SweepBudgetError(f"{n}^{k} = {size} elements exceed the power limit {limit}")
    weights = [n ** (k - 1 - i) for i in range(k)]

    def combine(tbl: Table, x: int, y: int) -> int:
        out = 0
        for w in weights:
            out += tbl[(x // w) % n][(y // w) % n] * w
        return out

    tables = {
        op: tuple(tuple(combine(tbl, x, y) for y in range(size)) for x in range(size))
        for op, tbl in alg.tables.items()
    }
    base = alg.name or f"{n}-element"
    return FiniteAlgebra(size, tables, f"{base}^{k}")


def power_element(alg: FiniteAlgebra, k: int, components: Sequence[int]) -> int:
    """Index of a component tuple inside direct_power(alg, k)."""
    n = alg.size
    out = 0
    for c in components:
        out = out * n + c
    return out


def subalgebra_closure(alg: FiniteAlgebra, generators: Iterable[int]) -> tuple[int, ...]:
    """Least subset containing the generators and closed under all
    operations, by fixpoint iteration; returned sorted."""
    els = set(generators)
    for g in els:
        if not (0 <= g < alg.size):
            raise ValueError(f"generator {g} outside carrier")
    frontier = list(els)
    tables = list(alg.tables.values())
    while frontier:
        fresh = []
        current = list(els)
        for tbl in tables:
            for x in current:
                for y in frontier:
                    for v in (tbl[x][y], tbl[y][x]):
                        if v not in els:
                            els.add(v)
                            fresh.append(v)
        frontier = fresh
    return tuple(sorted(els))


# ---------------------------------------------------------------------------
# file format


def to_json(alg: FiniteAlgebra) -> dict:
    doc = {"size": alg.size, "ops": {op: [list(r) for r in t] for op, t in alg.tables.items()}}
    if alg.name:
        doc["name"] = alg.name
    return doc


def from_json(doc: Mapping) -> FiniteAlgebra:
    try:
        size = int(doc["size"])
        ops = doc["ops"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad algebra document: {exc}") from None
    return FiniteAlgebra(size, {op: tuple(map(tuple, t)) for op, t in ops.items()},
                         doc.get("name"))


def load(path: str) -> FiniteAlgebra:
    with open(path, encoding="utf-8") as fh:
        return from_json(json.load(fh))


def dump(alg: FiniteAlgebra, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json(alg), fh, indent=2)
        fh.write("\n")
