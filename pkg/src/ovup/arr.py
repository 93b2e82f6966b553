"""Central hyperplane arrangements, faces as sign vectors, face semigroups.

A hyperplane is the kernel of a nonzero rational normal h; its positive side
is <h,x> > 0.  A sign vector assigns each hyperplane one of 0, +, - (encoded
0, 1, 2, matching the three-element algebra's elements: 1 is '+', 2 is '-').
A sign vector is a face of the arrangement iff the corresponding system

    <h_i, x>  = 0   where sign is 0
    <h_i, x>  > 0   where sign is +
    <h_i, x>  < 0   where sign is -

has a solution.  Realisability is decided exactly: Gaussian elimination over
the rationals produces a nullspace basis N for the equalities, the strict
rows are rewritten over the nullspace coordinates, and strict feasibility of
the remaining homogeneous system is decided by Fourier-Motzkin elimination
(a derived all-zero row means 0 > 0, i.e. infeasible).

The face product is the componentwise first-nonzero rule, which on the
partial characteristic functions chi is exactly override.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from . import falg, pfun

SignVector = tuple[int, ...]  # entries in {0, 1, 2} = {0, +, -}

MAX_HYPERPLANES = 8
MAX_DIM = 5

_SIGN_CHAR = {0: "0", 1: "+", 2: "-"}
_CHAR_SIGN = {v: k for k, v in _SIGN_CHAR.items()}


def sign_str(sv: SignVector) -> str:
    return "".join(_SIGN_CHAR[s] for s in sv)


def parse_signs(text: str) -> SignVector:
    try:
        return tuple(_CHAR_SIGN[c] for c in text.strip())
    except KeyError as exc:
        raise ValueError(f"bad sign character {exc.args[0]!r}") from None


@dataclass(frozen=True)
class Arrangement:
    dim: int
    normals: tuple[tuple[Fraction, ...], ...]

    def __init__(self, dim: int, normals: Iterable[Sequence]):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        rows = []
        for h in normals:
            row = tuple(Fraction(c) for c in h)
            if len(row) != dim:
                raise ValueError(f"normal {row} has length {len(row)}, expected {dim}")
            if not any(row):
                raise ValueError("zero normal")
            rows.append(row)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "normals", tuple(rows))

    def __len__(self) -> int:
        return len(self.normals)


def face_product(s: SignVector, t: SignVector) -> SignVector:
    """Componentwise first-nonzero composition."""
    if len(s) != len(t):
        raise ValueError(f"sign vectors of different length: {len(s)} vs {len(t)}")
    return tuple(a if a else b for a, b in zip(s, t))


def chi(sv: SignVector) -> pfun.PartialFunction:
    """Partial characteristic function: hyperplane index (1-based) -> '+'/'-',
    undefined where the face lies inside the hyperplane."""
    return pfun.PartialFunction(
        {i: _SIGN_CHAR[s] for i, s in enumerate(sv, start=1) if s}
    )


# ---------------------------------------------------------------------------
# exact linear algebra


def _nullspace(rows: list[tuple[Fraction, ...]], dim: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x : Rx = 0}, as column vectors of length dim."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(dim):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [v / inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * dim
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        basis.append(tuple(vec))
    return basis


def _normalize_row(row: tuple[Fraction, ...]) -> tuple[Fraction, ...] | None:
    lead = next((c for c in row if c != 0), None)
    if lead is None:
        return None  # all-zero row: stands for 0 > 0
    scale = abs(lead)
    return tuple(c / scale for c in row)


def _strictly_feasible(rows: list[tuple[Fraction, ...]], nvars: int) -> bool:
    """Does `rows * y > 0` (every row strictly positive) have a solution?
    Homogeneous Fourier-Motzkin with strictness preserved throughout."""
    current: set[tuple[Fraction, ...]] = set()
    for row in rows:
        norm = _normalize_row(row)
        if norm is None:
            return False
        current.add(norm)
    for j in range(nvars):
        pos, neg, rest = [], [], []
        for row in current:
            if row[j] > 0:
                pos.append(row)
            elif row[j] < 0:
                neg.append(row)
            else:
                rest.append(row)
        nxt: set[tuple[Fraction, ...]] = set()
        for row in rest:
            nxt.add(row)  # already normalized, coefficient j is 0
        for p in pos:
            for q in neg:
                combo = tuple(p[j] * qq - q[j] * pp for pp, qq in zip(p, q))
                norm = _normalize_row(combo)
                if norm is None:
                    return False
                nxt.add(norm)
        current = nxt
    # every surviving row was dropped or combined away; all-zero rows would
    # have returned False above
    return True


def is_face(arr: Arrangement, sv: SignVector) -> bool:
    """Is the sign vector realisable by some point of R^dim?"""
    if len(sv) != len(arr):
        raise ValueError("sign vector length differs from hyperplane count")
    eq_rows = [h for h, s in zip(arr.normals, sv) if s == 0]
    basis = _nullspace(eq_rows, arr.dim)
    strict = []
    for h, s in zip(arr.normals, sv):
        if s == 0:
            continue
        sign = 1 if s == 1 else -1
        strict.append(tuple(sign * sum(hc * bc for hc, bc in zip(h, b)) for b in basis))
    return _strictly_feasible(strict, len(basis))


def enumerate_faces(arr: Arrangement, threads: int = 1) -> tuple[SignVector, ...]:
    """All realisable sign vectors, sorted; guarded at m <= 8, dim <= 5.

    Per-vector feasibility tests are independent; with threads > 1 they are
    farmed out to a thread pool, and the result is identical either way.
    """
    m = len(arr)
    if m > MAX_HYPERPLANES or arr.dim > MAX_DIM:
        raise ValueError(
            f"arrangement too large ({m} hyperplanes, dim {arr.dim}); "
            f"guard is {MAX_HYPERPLANES} hyperplanes, dim {MAX_DIM}"
        )
    candidates = list(product((0, 1, 2), repeat=m))
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            keep = list(pool.map(lambda sv: is_face(arr, sv), candidates, chunksize=64))
        return tuple(sv for sv, ok in zip(candidates, keep) if ok)
    return tuple(sv for sv in candidates if is_face(arr, sv))


def face_semigroup(
    arr: Arrangement, threads: int = 1
) -> tuple[falg.FiniteAlgebra, tuple[SignVector, ...]]:
    """The enumerated faces under the face product, as a finite ov-algebra.

    Returns (algebra, faces); element i of the algebra is faces[i].  The
    product of two faces is checked to be a face again.
    """
    faces = enumerate_faces(arr, threads)
    index = {sv: i for i, sv in enumerate(faces)}
    table = []
    for s in faces:
        row = []
        for t in faces:
            p = face_product(s, t)
            if p not in index:
                raise ValueError(f"face set not closed: {sign_str(s)}*{sign_str(t)}")
            row.append(index[p])
        table.append(tuple(row))
    alg = falg.FiniteAlgebra(len(faces), {"ov": tuple(table)}, f"faces({len(faces)})")
    return alg, faces


# ---------------------------------------------------------------------------
# file format


def _fraction_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_json(arr: Arrangement) -> dict:
    return {
        "dim": arr.dim,
        "normals": [[_fraction_str(c) for c in h] for h in arr.normals],
    }


def from_json(doc: Mapping) -> Arrangement:
    try:
        return Arrangement(int(doc["dim"]), doc["normals"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"bad arrangement document: {exc}") from None


def load(path: str) -> Arrangement:
    with open(path, encoding="utf-8") as fh:
        return from_json(json.load(fh))


def dump(arr: Arrangement, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json(arr), fh, indent=2)
        fh.write("\n")
