"""Small-scale finite model finder over operation tables.

Searches for an algebra of a given size satisfying a list of equational
axioms while violating a goal (identity or quasi-identity): backtracking
over undefined table cells with unit propagation on ground axiom instances
(whenever one side of an instance evaluates and the other is blocked only at
its topmost application with known arguments, the missing cell is forced).
Symmetry is broken by the least-number heuristic: a decision value may not
exceed one plus the largest element referenced so far (as a cell coordinate
or an assigned value).  Any found table is re-verified from scratch with the
naive sweep checkers before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from . import falg
from .term import App, Identity, QuasiIdentity, Term, Var, ops_used, sorted_variables

MODEL = "model"
EXHAUSTED = "exhausted"
BUDGET = "budget"


@dataclass(frozen=True)
class FinderResult:
    status: str  # MODEL | EXHAUSTED | BUDGET
    algebra: falg.FiniteAlgebra | None
    witness: dict[str, int] | None
    nodes: int


class _Conflict(Exception):
    pass


class _Budget(Exception):
    pass


def _is_idem(axiom: Identity) -> str | None:
    lhs, rhs = axiom.lhs, axiom.rhs
    if (
        isinstance(lhs, App)
        and isinstance(lhs.left, Var)
        and lhs.left == lhs.right
        and rhs == lhs.left
    ):
        return lhs.op
    return None


def _eval(t: Term, env: dict[str, int], tables) -> int | None:
    if isinstance(t, Var):
        return env[t.name]
    a = _eval(t.left, env, tables)
    if a is None:
        return None
    b = _eval(t.right, env, tables)
    if b is None:
        return None
    return tables[t.op][a][b]


def find_model(
    axioms: Sequence[Identity],
    goal: Identity | QuasiIdentity,
    size: int,
    budget: int = 200_000,
) -> FinderResult:
    """First table (in decision order) satisfying the axioms and violating
    the goal, or Exhausted/BudgetExceeded.  `budget` bounds decision nodes."""
    if size < 1:
        raise ValueError("size must be >= 1")
    for ax in axioms:
        if not isinstance(ax, Identity):
            raise ValueError("axioms must be identities")
    sig = sorted(set().union(*(ops_used(a) for a in axioms), ops_used(goal)) or {"ov"})
    bad = [op for op in sig if op not in ("ov", "upd", "at", "mns")]
    if bad:
        raise ValueError(f"unknown operations {bad}")

    tables: dict[str, list[list[int | None]]] = {
        op: [[None] * size for _ in range(size)] for op in sig
    }
    idem_ops = {op for ax in axioms if (op := _is_idem(ax)) is not None}

    cells: list[tuple[str, int, int]] = []
    for op in sig:
        if op in idem_ops:
            cells.extend((op, i, i) for i in range(size))
        cells.extend(
            (op, r, c)
            for r in range(size)
            for c in range(size)
            if not (op in idem_ops and r == c)
        )

    ground = [
        (ax, [dict(zip(names, vals)) for vals in product(range(size), repeat=len(names))])
        for ax in axioms
        for names in [sorted_variables(ax)]
    ]

    trail: list[tuple[str, int, int]] = []

    def assign(op: str, r: int, c: int, v: int) -> None:
        tables[op][r][c] = v
        trail.append((op, r, c))

    def force(t: Term, env: dict[str, int], value: int) -> bool:
        """Set the topmost blocking cell of t when its arguments are known."""
        if isinstance(t, Var):
            return False
        a = _eval(t.left, env, tables)
        b = _eval(t.right, env, tables)
        if a is None or b is None:
            return False
        cur = tables[t.op][a][b]
        if cur is None:
            assign(t.op, a, b, value)
            return True
        if cur != value:
            raise _Conflict
        return False

    def propagate() -> None:
        changed = True
        while changed:
            changed = False
            for ax, envs in ground:
                for env in envs:
                    lv = _eval(ax.lhs, env, tables)
                    rv = _eval(ax.rhs, env, tables)
                    if lv is not None and rv is not None:
                        if lv != rv:
                            raise _Conflict
                    elif lv is not None:
                        changed |= force(ax.rhs, env, lv)
                    elif rv is not None:
                        changed |= force(ax.lhs, env, rv)

    def max_referenced() -> int:
        m = -1
        for op in sig:
            for r in range(size):
                for c in range(size):
                    v = tables[op][r][c]
                    if v is not None and v > m:
                        m = v
        return m

    nodes = 0

    def verify() -> FinderResult | None:
        alg = falg.FiniteAlgebra(
            size, {op: tuple(map(tuple, tables[op])) for op in sig}, f"model{size}"
        )
        if any(falg.check_identity(alg, ax) is not None for ax in axioms):
            return None
        witness = (
            falg.check_identity(alg, goal)
            if isinstance(goal, Identity)
            else falg.check_quasi(alg, goal)
        )
        if witness is None:
            return None
        return FinderResult(MODEL, alg, witness, nodes)

    def search(k: int) -> FinderResult | None:
        nonlocal nodes
        while k < len(cells) and tables[cells[k][0]][cells[k][1]][cells[k][2]] is not None:
            k += 1
        if k == len(cells):
            return verify()
        op, r, c = cells[k]
        limit = min(size - 1, max(r, c, max_referenced()) + 1)
        for v in range(limit + 1):
            nodes += 1
            if nodes > budget:
                raise _Budget
            mark = len(trail)
            assign(op, r, c, v)
            try:
                propagate()
                found = search(k + 1)
                if found:
                    return found
            except _Conflict:
                pass
            while len(trail) > mark:
                top, tr, tc = trail.pop()
                tables[top][tr][tc] = None
        return None

    try:
        propagate()
    except _Conflict:
        return FinderResult(EXHAUSTED, None, None, 0)
    try:
        found = search(0)
    except _Budget:
        return FinderResult(BUDGET, None, None, nodes)
    if found:
        return found
    return FinderResult(EXHAUSTED, None, None, nodes)


def brute_force_find(
    axioms: Sequence[Identity], goal: Identity | QuasiIdentity, size: int
) -> falg.FiniteAlgebra | None:
    """Oracle: enumerate every table combination outright (tiny sizes only)."""
    sig = sorted(set().union(*(ops_used(a) for a in axioms), ops_used(goal)) or {"ov"})
    n2 = size * size
    total = (size**n2) ** len(sig)
    if total > 2_000_000:
        raise ValueError(f"{total} candidate tables is beyond the oracle's reach")
    flats = product(range(size), repeat=n2 * len(sig))
    for flat in flats:
        tables = {}
        for i, op in enumerate(sig):
            chunk = flat[i * n2 : (i + 1) * n2]
            tables[op] = tuple(tuple(chunk[r * size : (r + 1) * size]) for r in range(size))
        alg = falg.FiniteAlgebra(size, tables)
        if any(falg.check_identity(alg, ax) is not None for ax in axioms):
            continue
        violated = (
            falg.check_identity(alg, goal)
            if isinstance(goal, Identity)
            else falg.check_quasi(alg, goal)
        )
        if violated is not None:
            return alg
    return None
