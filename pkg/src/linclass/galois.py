"""Finite fields GF(q), q <= 9, and the points/hyperplanes of PG(k-1, q).

Field elements are indices ``0..q-1``.  For prime ``q`` the index is the
residue itself.  For ``q = p^e`` with ``e > 1`` the index is the base-``p``
integer formed by the polynomial coefficients (constant term least
significant), reduced modulo the fixed polynomial below:

    q = 4 : x^2 + x + 1
    q = 8 : x^3 + x + 1
    q = 9 : x^2 + 2x + 2

Archive files store these indices verbatim, so the polynomials must never
change.

Projective points are normalized vectors (first nonzero coordinate equal to
1) listed in lexicographic order of their coordinate tuples.  Hyperplanes
are indexed by their normalized normal vector in the same order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

__all__ = [
    "Field",
    "Hyperplane",
    "NotPrimePower",
    "DimensionMismatch",
    "ProjectivePoint",
    "enumerate_hyperplanes",
    "enumerate_points",
    "field_make",
    "incidence",
    "normalize",
    "point_count",
    "point_index",
    "point_coords",
]

# (p, e) -> coefficients of the monic reduction polynomial, constant term first.
_MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (2, 2, 1),
}

_PRIME_POWERS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2)}


class NotPrimePower(ValueError):
    """Requested field order is not a supported prime power."""


class DimensionMismatch(ValueError):
    """Vectors of different lengths or fields were combined."""


def _poly_tables(p: int, e: int) -> tuple[np.ndarray, np.ndarray]:
    q = p**e
    digits = [[(a // p**i) % p for i in range(e)] for a in range(q)]

    def to_index(coeffs: Sequence[int]) -> int:
        return sum(c * p**i for i, c in enumerate(coeffs))

    add = np.zeros((q, q), dtype=np.int64)
    mul = np.zeros((q, q), dtype=np.int64)
    modulus = _MODULI.get((p, e))
    for a in range(q):
        for b in range(q):
            add[a, b] = to_index([(x + y) % p for x, y in zip(digits[a], digits[b])])
            if e == 1:
                mul[a, b] = (a * b) % p
                continue
            prod = [0] * (2 * e - 1)
            for i, x in enumerate(digits[a]):
                for j, y in enumerate(digits[b]):
                    prod[i + j] = (prod[i + j] + x * y) % p
            for deg in range(2 * e - 2, e - 1, -1):
                c = prod[deg]
                if c:
                    for i, m in enumerate(modulus):
                        prod[deg - e + i] = (prod[deg - e + i] - c * m) % p
            mul[a, b] = to_index(prod[:e])
    return add, mul


@dataclass(frozen=True, eq=False)
class Field:
    """Table-driven GF(q).  Build instances with :func:`field_make`."""

    q: int
    p: int
    e: int
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)
    neg: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)
    sub: np.ndarray = field(repr=False)
    automorphisms: tuple[np.ndarray, ...] = field(repr=False)

    @property
    def is_prime(self) -> bool:
        return self.e == 1

    @property
    def nonzero(self) -> range:
        return range(1, self.q)

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        if len(u) != len(v):
            raise DimensionMismatch(f"lengths {len(u)} and {len(v)}")
        acc = 0
        for a, b in zip(u, v):
            acc = int(self.add[acc, self.mul[a, b]])
        return acc

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product over GF(q) of index arrays ``a`` (m x t) and ``b`` (t x n)."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.shape[-1] != b.shape[0]:
            raise DimensionMismatch(f"shapes {a.shape} and {b.shape}")
        if self.is_prime:
            return (a @ b) % self.q
        acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for j in range(a.shape[1]):
            acc = self.add[acc, self.mul[a[:, j, None], b[None, j, :]]]
        return acc

    def normalize_rows(self, vecs: np.ndarray) -> np.ndarray:
        """Scale each nonzero row so its first nonzero entry is 1."""
        vecs = np.asarray(vecs, dtype=np.int64)
        nz = vecs != 0
        first = np.argmax(nz, axis=1)
        lead = vecs[np.arange(vecs.shape[0]), first]
        scale = self.inv[lead]
        return self.mul[scale[:, None], vecs]

    def rank(self, rows: np.ndarray) -> int:
        return len(row_reduce(self, rows)[1])

    def __reduce__(self):
        return (field_make, (self.q,))


@lru_cache(maxsize=None)
def field_make(q: int) -> Field:
    """Return the (cached) field of order ``q`` for q in {2,3,4,5,7,8,9}."""
    if q not in _PRIME_POWERS:
        raise NotPrimePower(f"unsupported field order {q}")
    p, e = _PRIME_POWERS[q]
    add, mul = _poly_tables(p, e)
    neg = np.array([int(np.flatnonzero(add[a] == 0)[0]) for a in range(q)], dtype=np.int64)
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = int(np.flatnonzero(mul[a] == 1)[0])
    sub = add[:, neg]
    autos = []
    for i in range(e):
        power = p**i
        perm = np.zeros(q, dtype=np.int64)
        for a in range(q):
            x = 1
            for _ in range(power):
                x = int(mul[x, a])
            perm[a] = x if a else 0
        autos.append(perm)
    for arr in (add, mul, neg, inv, sub, *autos):
        arr.flags.writeable = False
    return Field(q, p, e, add, mul, neg, inv, sub, tuple(autos))


def row_reduce(fld: Field, rows: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``rows``; returns (rref, pivot columns)."""
    m = np.array(rows, dtype=np.int64, copy=True)
    if m.ndim != 2 or m.size == 0:
        return m, []
    pivots: list[int] = []
    r = 0
    nrows, ncols = m.shape
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = fld.mul[fld.inv[m[r, c]], m[r]]
        for i in range(nrows):
            if i != r and m[i, c]:
                factor = fld.neg[m[i, c]]
                m[i] = fld.add[m[i], fld.mul[factor, m[r]]]
        pivots.append(c)
        r += 1
    return m, pivots


# --- projective geometry -------------------------------------------------


def point_count(q: int, k: int) -> int:
    return (q**k - 1) // (q - 1)


def normalize(fld: Field, vec: Sequence[int]) -> tuple[int, ...]:
    """Normalized representative of the 1-space spanned by ``vec``."""
    for a in vec:
        if a:
            s = int(fld.inv[a])
            return tuple(int(fld.mul[s, b]) for b in vec)
    raise ValueError("zero vector has no projective point")


def point_index(q: int, vec: Sequence[int]) -> int:
    """Rank of a normalized vector in the lexicographic point order."""
    k = len(vec)
    value = 0
    pivot = -1
    for i, a in enumerate(vec):
        value = value * q + a
        if pivot < 0 and a:
            pivot = i
    if pivot < 0:
        raise ValueError("zero vector has no projective point")
    top = q ** (k - 1 - pivot)
    return value - top + (top - 1) // (q - 1)


def point_indices(q: int, vecs: np.ndarray) -> np.ndarray:
    """Vectorized :func:`point_index` for normalized rows of ``vecs``."""
    vecs = np.asarray(vecs, dtype=np.int64)
    k = vecs.shape[1]
    weights = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    value = vecs @ weights
    pivot = np.argmax(vecs != 0, axis=1)
    top = weights[pivot]
    return value - top + (top - 1) // (q - 1)


def point_coords(q: int, k: int, index: int) -> tuple[int, ...]:
    """Inverse of :func:`point_index`."""
    if not 0 <= index < point_count(q, k):
        raise IndexError(index)
    # pivots further right come first in the order
    offset = 0
    for pivot in range(k - 1, -1, -1):
        block = q ** (k - 1 - pivot)
        if index < offset + block:
            tail = index - offset
            coords = [0] * k
            coords[pivot] = 1
            for pos in range(k - 1, pivot, -1):
                coords[pos] = tail % q
                tail //= q
            return tuple(coords)
        offset += block
    raise AssertionError("unreachable")


@lru_cache(maxsize=64)
def points_array(q: int, k: int) -> np.ndarray:
    """All normalized points of PG(k-1, q) as rows, in index order (read-only)."""
    rows = []
    for pivot in range(k - 1, -1, -1):
        tail_len = k - 1 - pivot
        tails = np.indices((q,) * tail_len).reshape(tail_len, -1).T if tail_len else np.zeros((1, 0), dtype=np.int64)
        block = np.zeros((tails.shape[0], k), dtype=np.int64)
        block[:, pivot] = 1
        block[:, pivot + 1 :] = tails
        rows.append(block)
    arr = np.concatenate(rows, axis=0)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ProjectivePoint:
    coords: tuple[int, ...]
    index: int

    @property
    def k(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class Hyperplane:
    """Hyperplane ``{x : normal . x = 0}``; ``normal`` is a point of the dual space."""

    normal: ProjectivePoint

    @property
    def index(self) -> int:
        return self.normal.index


def enumerate_points(fld: Field, k: int) -> list[ProjectivePoint]:
    if k < 1:
        raise ValueError("dimension must be positive")
    return [ProjectivePoint(tuple(int(a) for a in row), i) for i, row in enumerate(points_array(fld.q, k))]


def enumerate_hyperplanes(fld: Field, k: int) -> list[Hyperplane]:
    return [Hyperplane(p) for p in enumerate_points(fld, k)]


def incidence(fld: Field, point: ProjectivePoint, hyperplane: Hyperplane) -> bool:
    if point.k != hyperplane.normal.k:
        raise DimensionMismatch(f"point in dimension {point.k}, hyperplane in {hyperplane.normal.k}")
    return fld.dot(point.coords, hyperplane.normal.coords) == 0


def incidence_matrix(fld: Field, normals: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """Boolean matrix ``[h, j]``: row ``vecs[j]`` lies on hyperplane ``normals[h]``."""
    return fld.matmul(normals, np.asarray(vecs, dtype=np.int64).T) == 0
