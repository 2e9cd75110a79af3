"""Linear codes as multisets of points of PG(k-1, q), and their invariants.

A code is stored by its column multiplicities: ``support`` holds the point
indices with nonzero multiplicity (ascending) and ``mults`` the matching
counts.  Every derived quantity (weights, residuals, minimal codewords) is
computed from that multiset; generator matrices are only an interchange
format.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

from .galois import (
    Field,
    ProjectivePoint,
    field_make,
    incidence_matrix,
    point_coords,
    point_count,
    point_index,
    point_indices,
    points_array,
    row_reduce,
)

MINIMAL_CODEWORDS_MAX_K = 24


class CodeError(ValueError):
    pass


class ZeroColumn(CodeError):
    pass


class RankDeficient(CodeError):
    pass


class RankCollapse(CodeError):
    pass


class DimensionTooLarge(CodeError):
    pass


class InconsistentInput(CodeError):
    pass


@dataclass(frozen=True)
class WeightEnumerator:
    """Codeword counts ``(A_0, ..., A_n)`` by Hamming weight."""

    coeffs: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def weights(self) -> list[int]:
        """Nonzero weights that occur."""
        return [i for i, a in enumerate(self.coeffs) if a and i > 0]

    def hyperplane_counts(self, q: int) -> tuple[int, ...]:
        """``a_i``: number of hyperplanes meeting the multiset in ``i`` points, ``i < n``."""
        n = self.n
        return tuple(self.coeffs[n - i] // (q - 1) for i in range(n))

    def __str__(self) -> str:
        terms = [f"{a}x^{i}" if i else str(a) for i, a in enumerate(self.coeffs) if a]
        return " + ".join(terms)


@dataclass(frozen=True)
class DualWeightDistribution:
    coeffs: tuple[Fraction, ...]

    def is_integral(self) -> bool:
        return all(b.denominator == 1 for b in self.coeffs)


@dataclass(frozen=True)
class LinearCode:
    """An ``[n, k]_q`` code given by the multiplicity of each projective point."""

    q: int
    k: int
    support: tuple[int, ...]
    mults: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.support) != len(self.mults):
            raise CodeError("support and mults differ in length")
        if any(m <= 0 for m in self.mults):
            raise CodeError("multiplicities on the support must be positive")
        if list(self.support) != sorted(set(self.support)):
            raise CodeError("support must be strictly increasing")

    @classmethod
    def from_mult(cls, q: int, k: int, mult: Mapping[int, int], check: bool = True) -> "LinearCode":
        items = sorted((int(p), int(m)) for p, m in mult.items() if m)
        code = cls(q, k, tuple(p for p, _ in items), tuple(m for _, m in items))
        if check:
            code.validate()
        return code

    def validate(self) -> None:
        total = point_count(self.q, self.k)
        if self.support and not (0 <= self.support[0] and self.support[-1] < total):
            raise CodeError("point index out of range")
        if self.k < 1 or self.field.rank(self.vectors) != self.k:
            raise RankDeficient(f"support does not span F_{self.q}^{self.k}")

    @property
    def field(self) -> Field:
        return field_make(self.q)

    @cached_property
    def n(self) -> int:
        return sum(self.mults)

    @property
    def min_col_mult(self) -> int:
        return min(self.mults)

    @property
    def max_col_mult(self) -> int:
        return max(self.mults)

    @property
    def mult(self) -> dict[int, int]:
        return dict(zip(self.support, self.mults))

    def multiplicity(self, point: int | Sequence[int] | ProjectivePoint) -> int:
        return self.mult.get(_as_index(self.q, point), 0)

    @cached_property
    def vectors(self) -> np.ndarray:
        """Coordinates of the support points, one row per point."""
        if self.k <= 12 or point_count(self.q, self.k) <= 1 << 16:
            return points_array(self.q, self.k)[list(self.support)]
        return np.array([point_coords(self.q, self.k, p) for p in self.support], dtype=np.int64)

    @cached_property
    def mult_array(self) -> np.ndarray:
        return np.array(self.mults, dtype=np.int64)

    @cached_property
    def hyperplane_incidence(self) -> np.ndarray:
        """Boolean ``[h, j]``: support point ``j`` lies on hyperplane ``h`` (all hyperplanes)."""
        return incidence_matrix(self.field, points_array(self.q, self.k), self.vectors)

    @cached_property
    def hyperplane_sums(self) -> np.ndarray:
        """``s(H)``: number of columns (with multiplicity) inside each hyperplane."""
        return self.hyperplane_incidence.astype(np.int64) @ self.mult_array

    def __repr__(self) -> str:
        body = ", ".join(f"{p}:{m}" for p, m in zip(self.support, self.mults))
        return f"LinearCode(q={self.q}, k={self.k}, n={self.n}, {{{body}}})"


def _as_index(q: int, point) -> int:
    if isinstance(point, ProjectivePoint):
        return point.index
    if isinstance(point, (int, np.integer)):
        return int(point)
    fld = field_make(q)
    vec = [int(a) for a in point]
    for a in vec:
        if a:
            s = int(fld.inv[a])
            return point_index(q, [int(fld.mul[s, b]) for b in vec])
    raise ValueError("zero vector")


def multiset_from_vectors(fld: Field, vecs: np.ndarray, mults: Iterable[int]) -> dict[int, int]:
    """Normalize nonzero rows and accumulate multiplicities per point index."""
    vecs = np.asarray(vecs, dtype=np.int64)
    if vecs.size == 0:
        return {}
    idx = point_indices(fld.q, fld.normalize_rows(vecs))
    out: dict[int, int] = {}
    for i, m in zip(idx.tolist(), mults):
        out[i] = out.get(i, 0) + int(m)
    return out


def from_generator_matrix(matrix, q: int) -> LinearCode:
    """Code generated by the rows of ``matrix`` (field-element indices)."""
    fld = field_make(q)
    g = np.atleast_2d(np.asarray(matrix, dtype=np.int64))
    if g.size == 0:
        raise RankDeficient("empty generator matrix")
    if g.min() < 0 or g.max() >= q:
        raise CodeError(f"entries must lie in 0..{q - 1}")
    k, n = g.shape
    cols = g.T
    if not cols.any(axis=1).all():
        raise ZeroColumn("generator matrix has a zero column")
    if fld.rank(g) != k:
        raise RankDeficient(f"rows have rank below {k}")
    return LinearCode.from_mult(q, k, multiset_from_vectors(fld, cols, [1] * n), check=False)


def transform(code: LinearCode, matrix: np.ndarray, automorphism: int = 0) -> LinearCode:
    """Image of the multiset under ``v -> sigma(matrix @ v)`` with ``sigma`` a Frobenius power."""
    fld = code.field
    img = fld.matmul(np.asarray(matrix, dtype=np.int64), code.vectors.T).T
    if automorphism:
        img = fld.automorphisms[automorphism][img]
    if not img.any(axis=1).all():
        raise RankDeficient("transformation matrix is singular")
    return LinearCode.from_mult(code.q, code.k, multiset_from_vectors(fld, img, code.mults), check=False)


def invert_matrix(fld: Field, matrix: np.ndarray) -> np.ndarray:
    m = np.asarray(matrix, dtype=np.int64)
    k = m.shape[0]
    red, pivots = row_reduce(fld, np.concatenate([m, np.eye(k, dtype=np.int64)], axis=1))
    if pivots[:k] != list(range(k)):
        raise RankDeficient("matrix is singular")
    return red[:, k:]


def unit_indices(q: int, k: int) -> list[int]:
    return [point_index(q, tuple(int(i == j) for j in range(k))) for i in range(k)]


def is_systematic(code: LinearCode) -> bool:
    """True when every unit vector is a support point."""
    mult = code.mult
    return all(u in mult for u in unit_indices(code.q, code.k))


def systematic_form(code: LinearCode) -> LinearCode:
    """An isometric copy of ``code`` whose support contains all unit vectors.

    Returns ``code`` itself when it already qualifies; otherwise the first
    ``k`` independent support points (index order) are mapped to the unit
    vectors.
    """
    if is_systematic(code):
        return code
    fld = code.field
    chosen: list[int] = []
    basis = np.zeros((0, code.k), dtype=np.int64)
    for j, vec in enumerate(code.vectors):
        trial = np.vstack([basis, vec])
        if fld.rank(trial) == len(trial):
            basis = trial
            chosen.append(j)
            if len(chosen) == code.k:
                break
    return transform(code, invert_matrix(fld, basis.T))


def to_systematic_generator_matrix(code: LinearCode) -> np.ndarray:
    """Generator matrix ``(I_k | R)`` of an isometric code.

    Columns after the unit block are the remaining support points in point
    order, each repeated as often as its leftover multiplicity.
    """
    code = systematic_form(code)
    units = unit_indices(code.q, code.k)
    left = code.mult
    cols = [np.eye(code.k, dtype=np.int64)]
    for u in units:
        left[u] -= 1
    for p in code.support:
        if left[p]:
            vec = np.array(point_coords(code.q, code.k, p), dtype=np.int64)
            cols.append(np.repeat(vec[:, None], left[p], axis=1))
    return np.concatenate(cols, axis=1)


def codewords(code: LinearCode) -> np.ndarray:
    """All ``q^k`` codewords as rows (message order: base-q counting, first row slowest)."""
    g = to_systematic_generator_matrix(code)
    msgs = np.indices((code.q,) * code.k).reshape(code.k, -1).T
    return code.field.matmul(msgs, g)


def weight_enumerator(code: LinearCode) -> WeightEnumerator:
    """Weight distribution from hyperplane sections: a hyperplane meeting
    the multiset in ``s`` columns accounts for ``q - 1`` codewords of weight
    ``n - s``."""
    n = code.n
    hist = np.bincount(n - code.hyperplane_sums, minlength=n + 1) * (code.q - 1)
    hist[0] += 1
    return WeightEnumerator(tuple(int(a) for a in hist))


def residual_enumerators(code: LinearCode, positions: Iterable[int]) -> list[WeightEnumerator]:
    """Weight enumerators of the residual codes at the given support positions.

    The hyperplanes of the residual at ``P`` are the hyperplanes through
    ``P``; their weights carry over unchanged, so no projection is needed.
    """
    n = code.n
    weights = n - code.hyperplane_sums
    inc = code.hyperplane_incidence
    out = []
    for j in positions:
        hist = np.bincount(weights[inc[:, j]], minlength=n - code.mults[j] + 1) * (code.q - 1)
        hist[0] += 1
        out.append(WeightEnumerator(tuple(int(a) for a in hist[: n - code.mults[j] + 1])))
    return out


def residual_subcode(code: LinearCode, point) -> LinearCode:
    """Project the multiset from ``point`` into PG(k-2, q).

    Columns at ``point`` vanish; all other columns keep their multiplicity
    and merge when they lie on a common line through ``point``.
    """
    if code.k < 2:
        raise RankCollapse("residual of a one-dimensional code is trivial")
    fld = code.field
    idx = _as_index(code.q, point)
    centre = np.array(point_coords(code.q, code.k, idx), dtype=np.int64)
    pivot = int(np.flatnonzero(centre)[0])
    keep = [j for j, p in enumerate(code.support) if p != idx]
    vecs = code.vectors[keep]
    # v -> v - v[pivot] * centre kills the centre; then drop the pivot coordinate
    shifted = fld.sub[vecs, fld.mul[vecs[:, pivot, None], centre[None, :]]]
    proj = np.delete(shifted, pivot, axis=1)
    mults = [code.mults[j] for j in keep]
    if not proj.size or not proj.any(axis=1).all() or fld.rank(proj) != code.k - 1:
        raise RankCollapse("projection does not span the quotient space")
    return LinearCode.from_mult(code.q, code.k - 1, multiset_from_vectors(fld, proj, mults), check=False)


def is_divisible(code: LinearCode, delta: int) -> bool:
    if delta < 1:
        raise ValueError("delta must be positive")
    return all(w % delta == 0 for w in weight_enumerator(code).weights())


def is_projective(code: LinearCode) -> bool:
    return code.max_col_mult == 1


def minimal_codewords_count(code: LinearCode, max_k: int = MINIMAL_CODEWORDS_MAX_K) -> int:
    """Number of nonzero codewords whose support contains no strictly smaller
    codeword support.

    For ``q > 2`` scalar multiples are counted separately (each of the
    ``q - 1`` multiples of a minimal codeword is minimal).
    """
    if code.k > max_k:
        raise DimensionTooLarge(f"k={code.k} exceeds cap {max_k}")
    words = codewords(code)[1:] != 0
    n = code.n
    if n <= 63:
        bits = (words.astype(np.uint64) << np.arange(n, dtype=np.uint64)).sum(axis=1, dtype=np.uint64)
        supports, counts = np.unique(bits, return_counts=True)
        sw = np.array([bin(int(s)).count("1") for s in supports])
    else:
        keys: dict[int, int] = {}
        for row in words:
            s = int("".join("1" if b else "0" for b in row[::-1]), 2)
            keys[s] = keys.get(s, 0) + 1
        supports = np.array(list(keys), dtype=object)
        counts = np.array(list(keys.values()))
        sw = np.array([bin(int(s)).count("1") for s in supports])
    order = np.argsort(sw, kind="stable")
    supports, counts, sw = supports[order], counts[order], sw[order]
    total = 0
    lighter_end = 0
    for i in range(len(supports)):
        while sw[lighter_end] < sw[i]:
            lighter_end += 1
        s = supports[i]
        lighter = supports[:lighter_end]
        if lighter_end == 0 or not np.any((lighter & s) == lighter):
            total += int(counts[i])
    return total


def _krawtchouk(n: int, q: int, j: int, i: int) -> int:
    return sum((-1) ** s * (q - 1) ** (j - s) * comb(i, s) * comb(n - i, j - s) for s in range(j + 1))


def macwilliams_transform(we, q: int, k: int, n: int | None = None) -> DualWeightDistribution:
    """Exact dual weight distribution ``B_j = q^{-k} sum_i A_i K_j(i)``."""
    coeffs = list(we.coeffs if hasattr(we, "coeffs") else we)
    if n is None:
        n = len(coeffs) - 1
    if len(coeffs) > n + 1:
        if any(coeffs[n + 1 :]):
            raise InconsistentInput("weights exceed the length")
        coeffs = coeffs[: n + 1]
    coeffs = [Fraction(a) for a in coeffs] + [Fraction(0)] * (n + 1 - len(coeffs))
    if sum(coeffs) != Fraction(q) ** k:
        raise InconsistentInput(f"sum of A_i is {sum(coeffs)}, expected {q}^{k}")
    size = Fraction(q) ** k
    out = []
    for j in range(n + 1):
        out.append(sum((a * _krawtchouk(n, q, j, i) for i, a in enumerate(coeffs) if a), Fraction(0)) / size)
    return DualWeightDistribution(tuple(out))


def power_moments(a_coeffs: Sequence, b_coeffs: Sequence, q: int, k: int, n: int, count: int = 4):
    """Both sides of the first ``count`` binomial-moment identities

        sum_i C(n-i, v) A_i = q^(k-v) sum_{j<=v} C(n-j, v-j) B_j,   v = 0, 1, ...

    returned as a list of ``(lhs, rhs)`` Fractions.
    """
    out = []
    for v in range(count):
        lhs = sum((Fraction(a) * comb(n - i, v) for i, a in enumerate(a_coeffs)), Fraction(0))
        rhs = Fraction(q) ** (k - v) * sum(
            (Fraction(b_coeffs[j]) * comb(n - j, v - j) for j in range(min(v, len(b_coeffs) - 1) + 1)), Fraction(0)
        )
        out.append((lhs, rhs))
    return out
