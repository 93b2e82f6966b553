"""Choice functions on families of subsets of {1..k}; free-algebra machinery.

A choice function assigns to each subset A in its domain family an element
of A.  Viewing each subset-family as a set of domain points, choice
functions are partial functions, so the four combination operations act on
them (and preserve being a choice function).  The i-th generator is the
constant choice function  gamma(A) = i  on the family D_i of all subsets
containing i; closing the k generators under a signature yields the
k-generated free algebra of that signature, concretely.

``synthesize_update_term`` builds, for any choice function gamma defined on
all of D_p, an update-only term t(x1..xk) with leftmost variable x_p whose
value at the generators is gamma restricted to D_p, by recursion down the
subset lattice: at the top set the term is  x_j[x_gamma(top)] , and for
smaller A each term updates first by x_gamma(A) and then by the terms of
the supersets A + {j} (j not in A, ascending), so later updates repair every
region above A while the x_gamma(A) update survives exactly at A itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb, prod
from typing import Iterable, Iterator, Mapping

from . import pfun, term
from .term import App, Term, Var, upd

Subset = tuple[int, ...]
Family = frozenset[Subset]


def _canon_subset(a: Iterable[int]) -> Subset:
    return tuple(sorted(set(a)))


@dataclass(frozen=True)
class ChoiceFunction:
    universe: int
    assignments: tuple[tuple[Subset, int], ...]

    def __init__(self, universe: int, assignments: Mapping[Iterable[int], int] | Iterable = ()):
        if universe < 1:
            raise ValueError("universe size must be >= 1")
        items = assignments.items() if isinstance(assignments, Mapping) else assignments
        canon: dict[Subset, int] = {}
        for a, v in items:
            a = _canon_subset(a)
            if not a:
                raise ValueError("empty subset in domain")
            if not all(1 <= i <= universe for i in a):
                raise ValueError(f"subset {a} not within 1..{universe}")
            if v not in a:
                raise ValueError(f"value {v} outside its subset {a}")
            if a in canon:
                raise ValueError(f"duplicate subset {a}")
            canon[a] = v
        object.__setattr__(self, "universe", universe)
        object.__setattr__(
            self, "assignments", tuple(sorted(canon.items(), key=lambda kv: (len(kv[0]), kv[0])))
        )

    @property
    def domain(self) -> Family:
        return frozenset(a for a, _ in self.assignments)

    def as_dict(self) -> dict[Subset, int]:
        return dict(self.assignments)

    def __call__(self, a: Iterable[int]) -> int:
        return dict(self.assignments)[_canon_subset(a)]

    def __len__(self) -> int:
        return len(self.assignments)

    def __repr__(self) -> str:
        body = ", ".join(f"{{{','.join(map(str, a))}}}:{v}" for a, v in self.assignments)
        return f"ChoiceFunction(k={self.universe}, {{{body}}})"


def _subset_token(a: Subset) -> str:
    return ",".join(map(str, a))


def as_partial_function(cf: ChoiceFunction) -> pfun.PartialFunction:
    """The underlying partial function; subsets become "1,3"-style tokens."""
    return pfun.PartialFunction({_subset_token(a): v for a, v in cf.assignments})


def from_partial_function(f: pfun.PartialFunction, universe: int) -> ChoiceFunction:
    entries = {tuple(int(s) for s in tok.split(",")): v for tok, v in f.items()}
    return ChoiceFunction(universe, entries)


def _lift(op):
    def combined(f: ChoiceFunction, g: ChoiceFunction) -> ChoiceFunction:
        if f.universe != g.universe:
            raise ValueError("choice functions over different universes")
        return from_partial_function(op(as_partial_function(f), as_partial_function(g)), f.universe)

    return combined


override = _lift(pfun.override)
update = _lift(pfun.update)
rmult = _lift(pfun.rmult)
minus = _lift(pfun.minus)

#: operation-symbol table usable by term.evaluate
OPS = {"ov": override, "upd": update, "at": rmult, "mns": minus}


def nonempty_subsets(k: int) -> list[Subset]:
    return [c for r in range(1, k + 1) for c in combinations(range(1, k + 1), r)]


def upset(a: Iterable[int], k: int) -> Family:
    a = set(a)
    return frozenset(b for b in nonempty_subsets(k) if a <= set(b))


def generator_cf(i: int, k: int) -> ChoiceFunction:
    """Constant choice function i on the family of all subsets containing i."""
    if not 1 <= i <= k:
        raise ValueError(f"generator index {i} outside 1..{k}")
    return ChoiceFunction(k, {a: i for a in upset({i}, k)})


def choice_functions_on(family: Iterable[Subset], k: int) -> Iterator[ChoiceFunction]:
    """All choice functions with exactly the given domain family."""
    subsets = sorted((_canon_subset(a) for a in family), key=lambda a: (len(a), a))
    for values in product(*subsets) if subsets else iter([()]):
        yield ChoiceFunction(k, dict(zip(subsets, values)))


def count_update_free(n: int) -> int:
    """Closed-form value n * prod_i i^C(n,i) for the update free algebra size.

    Beware: the enumerated closure (``free_closure``) realises
    n * prod_i i^C(n-1,i-1) elements, which agrees with this expression for
    n <= 2 only; see the package README.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * prod(i ** comb(n, i) for i in range(1, n + 1))


def free_closure(
    k: int, tau: Iterable[str], max_universe: int = 4, element_budget: int = 500_000
) -> tuple[ChoiceFunction, ...]:
    """Fixpoint closure of the k generators under the given operations.

    Deterministic canonical order (domain family, then values).  Guarded at
    k <= max_universe; the k=4 update closure is the practical ceiling.
    """
    tau = tuple(sorted(set(tau)))
    unknown = [op for op in tau if op not in OPS]
    if unknown:
        raise ValueError(f"unknown operations {unknown}")
    if not tau:
        raise ValueError("empty signature")
    if k > max_universe:
        raise ValueError(f"universe {k} exceeds the guard {max_universe}")
    return _free_closure(k, tau, element_budget)


@lru_cache(maxsize=64)
def _free_closure(
    k: int, tau: tuple[str, ...], element_budget: int
) -> tuple[ChoiceFunction, ...]:
    els: dict[tuple, ChoiceFunction] = {}

    def key(cf: ChoiceFunction) -> tuple:
        return cf.assignments

    frontier = []
    for i in range(1, k + 1):
        g = generator_cf(i, k)
        els[key(g)] = g
        frontier.append(g)
    fns = [OPS[op] for op in tau]
    while frontier:
        fresh: list[ChoiceFunction] = []
        current = list(els.values())
        for fn in fns:
            for f in current:
                for g in frontier:
                    for a, b in ((f, g), (g, f)):
                        h = fn(a, b)
                        if key(h) not in els:
                            els[key(h)] = h
                            fresh.append(h)
                            if len(els) > element_budget:
                                raise ValueError(
                                    f"closure exceeded element budget {element_budget}"
                                )
        frontier = fresh
    return tuple(sorted(els.values(), key=key))


# ---------------------------------------------------------------------------
# update-term synthesis


def _gen_env(k: int) -> dict[str, ChoiceFunction]:
    return {f"x{i}": generator_cf(i, k) for i in range(1, k + 1)}


def evaluate_on_generators(t: Term, k: int) -> ChoiceFunction:
    """Value of an update-only term at the free generators x1..xk."""
    return term.evaluate(t, OPS, _gen_env(k))


def synthesize_update_term(cf: ChoiceFunction, p: int) -> Term:
    """An update-only term with leftmost variable x_p realising cf on D_p.

    cf must be defined on every subset containing p; assignments outside D_p
    are ignored.  Superset children are visited in ascending numeric order,
    and subterms are memoised per (variable, subset).
    """
    k = cf.universe
    if not 1 <= p <= k:
        raise ValueError(f"pivot {p} outside 1..{k}")
    gamma = cf.as_dict()
    missing = [a for a in upset({p}, k) if a not in gamma]
    if missing:
        raise ValueError(f"choice function undefined on {missing[0]} (and {len(missing) - 1} more)")
    everything = frozenset(range(1, k + 1))
    memo: dict[tuple[int, Subset], Term] = {}

    def build(j: int, a: frozenset[int]) -> Term:
        ka = (j, tuple(sorted(a)))
        got = memo.get(ka)
        if got is None:
            got = upd(Var(f"x{j}"), Var(f"x{gamma[tuple(sorted(a))]}"))
            for jj in sorted(everything - a):
                got = upd(got, build(jj, a | {jj}))
            memo[ka] = got
        return got

    return build(p, frozenset({p}))


def term_size(t: Term) -> int:
    """Number of AST nodes."""
    if isinstance(t, Var):
        return 1
    return 1 + term_size(t.left) + term_size(t.right)


def _upd_paths(t: Term, prefix: tuple[str, ...] = ()) -> Iterator[tuple[str, ...]]:
    if isinstance(t, App):
        yield prefix
        yield from _upd_paths(t.left, prefix + ("L",))
        yield from _upd_paths(t.right, prefix + ("R",))


def simplify_update_term(t: Term, universe: int | None = None) -> Term:
    """Shrink an update-only term without changing its value at the generators.

    Candidate rewrites delete one update application (replacing a node by
    its update target); a candidate is kept only if evaluation over the free
    generators is unchanged, so the result provably denotes the same choice
    function.  This subsumes the x[x] -> x rule.  Greedy first-accepted
    candidate in preorder, iterated to a fixpoint; no minimality claim.
    """
    bad = term.ops_used(t) - {"upd"}
    if bad:
        raise ValueError(f"not an update-only term (uses {sorted(bad)})")
    if universe is None:
        idx = []
        for v in term.variables(t):
            if not (v.startswith("x") and v[1:].isdigit()):
                raise ValueError(f"cannot infer universe from variable {v!r}")
            idx.append(int(v[1:]))
        universe = max(idx)
    target = evaluate_on_generators(t, universe)
    changed = True
    while changed:
        changed = False
        for path in _upd_paths(t):
            node = term.subterm_at(t, path)
            candidate = term.replace_at(t, path, node.left)
            if evaluate_on_generators(candidate, universe) == target:
                t = candidate
                changed = True
                break
    return t


# ---------------------------------------------------------------------------
# which domain families arise, per signature


def domain_predicate(tau: Iterable[str]):
    """Predicate on domain families for the free algebra of signature tau.

    Supported signatures: {upd} (the generator families D_s), {at,upd}
    (principal upsets), {ov,upd} (unions of D_s), {ov,at,upd} (all nonempty
    upsets).
    """
    key = tuple(sorted(set(tau)))

    def is_D_s(family: Family, k: int) -> bool:
        return any(family == upset({s}, k) for s in range(1, k + 1))

    def is_principal(family: Family, k: int) -> bool:
        if not family:
            return False
        base = set(range(1, k + 1))
        for a in family:
            base &= set(a)
        return bool(base) and family == upset(base, k)

    def is_union_of_D(family: Family, k: int) -> bool:
        witnesses = {s for s in range(1, k + 1) if upset({s}, k) <= family}
        if not witnesses:
            return False
        return family == frozenset(
            a for a in nonempty_subsets(k) if set(a) & witnesses
        )

    def is_upset(family: Family, k: int) -> bool:
        return bool(family) and all(
            b in family for a in family for b in upset(a, k)
        )

    table = {
        ("upd",): is_D_s,
        ("at", "upd"): is_principal,
        ("ov", "upd"): is_union_of_D,
        ("at", "ov", "upd"): is_upset,
    }
    if key not in table:
        raise ValueError(f"no domain characterisation for signature {key}")
    return table[key]


@dataclass(frozen=True)
class DomainReport:
    """Cross-check of a free closure against its domain predicate."""

    signature: tuple[str, ...]
    universe: int
    closure_size: int
    domains: tuple[Family, ...]
    extra_domains: tuple[Family, ...]  # closure domains failing the predicate
    missing: tuple[ChoiceFunction, ...]  # predicted functions not reached

    @property
    def ok(self) -> bool:
        return not self.extra_domains and not self.missing


def characterize_domains(tau: Iterable[str], k: int):
    """Return (predicate, report): the domain predicate for tau plus an
    exhaustive cross-check that free_closure(k, tau) realises exactly the
    choice functions on predicate-satisfying families."""
    pred = domain_predicate(tau)
    closure = free_closure(k, tau)
    have = {cf.assignments for cf in closure}
    domains = sorted({cf.domain for cf in closure}, key=lambda d: sorted(d))
    extra = [d for d in domains if not pred(d, k)]
    missing = []
    subs = nonempty_subsets(k)
    for r in range(1, len(subs) + 1):
        for fam in combinations(subs, r):
            family = frozenset(fam)
            if not pred(family, k):
                continue
            for cf in choice_functions_on(family, k):
                if cf.assignments not in have:
                    missing.append(cf)
    report = DomainReport(
        signature=tuple(sorted(set(tau))),
        universe=k,
        closure_size=len(closure),
        domains=tuple(domains),
        extra_domains=tuple(extra),
        missing=tuple(missing),
    )
    return pred, report


# ---------------------------------------------------------------------------
# file format


def to_json(cf: ChoiceFunction) -> dict:
    return {
        "universe": cf.universe,
        "map": {_subset_token(a): v for a, v in cf.assignments},
    }


def from_json(doc: Mapping) -> ChoiceFunction:
    try:
        k = int(doc["universe"])
        entries = {
            tuple(int(s) for s in key.split(",")): int(v) for key, v in doc["map"].items()
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"bad choice-function document: {exc}") from None
    return ChoiceFunction(k, entries)


def load(path: str) -> ChoiceFunction:
    with open(path, encoding="utf-8") as fh:
        return from_json(json.load(fh))


def dump(cf: ChoiceFunction, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json(cf), fh, indent=2)
        fh.write("\n")
