"""Slow, obviously-correct reference implementations used by the tests."""

from __future__ import annotations

import itertools
from collections import Counter

import numpy as np

from linclass.code import LinearCode, from_generator_matrix, to_systematic_generator_matrix
from linclass.galois import field_make


def all_codewords(G: np.ndarray, q: int) -> np.ndarray:
    """Every message times ``G`` by plain loops over GF(q)."""
    fld = field_make(q)
    k, n = G.shape
    out = []
    for msg in itertools.product(range(q), repeat=k):
        word = []
        for j in range(n):
            acc = 0
            for i in range(k):
                acc = int(fld.add[acc, fld.mul[msg[i], G[i, j]]])
            word.append(acc)
        out.append(word)
    return np.array(out, dtype=np.int64)


def brute_weight_enumerator(G: np.ndarray, q: int) -> tuple[int, ...]:
    words = all_codewords(G, q)
    w = (words != 0).sum(axis=1)
    return tuple(np.bincount(w, minlength=G.shape[1] + 1).tolist())


def brute_minimal_codewords(G: np.ndarray, q: int) -> int:
    words = [tuple(np.flatnonzero(w)) for w in all_codewords(G, q) if w.any()]
    supports = [frozenset(s) for s in words]
    total = 0
    for s in supports:
        if not any(t < s for t in supports):
            total += 1
    return total


def codeword_set(G: np.ndarray, q: int) -> frozenset:
    return frozenset(map(tuple, all_codewords(G, q).tolist()))


def binary_equivalent(a: LinearCode, b: LinearCode) -> bool:
    """Try all column permutations (binary codes only)."""
    assert a.q == b.q == 2
    if (a.n, a.k) != (b.n, b.k):
        return False
    ga, gb = to_systematic_generator_matrix(a), to_systematic_generator_matrix(b)
    target = codeword_set(gb, 2)
    wa = all_codewords(ga, 2)
    for perm in itertools.permutations(range(a.n)):
        if frozenset(map(tuple, wa[:, perm].tolist())) == target:
            return True
    return False


def gl_matrices(q: int, k: int):
    fld = field_make(q)
    for ent in itertools.product(range(q), repeat=k * k):
        m = np.array(ent, dtype=np.int64).reshape(k, k)
        if fld.rank(m) == k:
            yield m


def brute_automorphisms(code: LinearCode) -> int:
    """Collineations fixing the multiset, counted modulo scalars."""
    from linclass.code import transform

    fld = code.field
    count = 0
    for m in gl_matrices(code.q, code.k):
        flat = m.reshape(-1)
        if flat[np.flatnonzero(flat)[0]] != 1:
            continue
        for s in range(fld.e):
            if transform(code, m, s) == code:
                count += 1
    return count


def brute_binary_classes(n: int, k: int, d: int) -> int:
    """Number of inequivalent binary [n, k, >=d] codes without zero columns.

    Enumerates every multiset of n nonzero columns in F_2^k of rank k (this
    is every generator matrix up to column order), keeps those of minimum
    distance at least d, and merges multisets related by GL(k, 2).  Over
    F_2 this is the same as comparing generator matrices up to column
    permutation.
    """
    from linclass.galois import points_array

    pts = points_array(2, k)
    fld = field_make(2)
    reps = []
    seen: set[tuple] = set()
    mats = list(gl_matrices(2, k))
    for combo in itertools.combinations_with_replacement(range(len(pts)), n):
        cols = pts[list(combo)]
        if fld.rank(cols) != k:
            continue
        G = cols.T
        we = brute_weight_enumerator(G, 2)
        if any(we[1:d]):
            continue
        key = tuple(sorted(Counter(combo).items()))
        if key in seen:
            continue
        orbit = set()
        for m in mats:
            img = fld.matmul(m, G).T
            idx = [int(np.flatnonzero((pts == row).all(axis=1))[0]) for row in img]
            orbit.add(tuple(sorted(Counter(idx).items())))
        seen |= orbit
        reps.append(key)
    return len(reps)


def row_append_children(parent: LinearCode, r: int, weights: set[int]) -> list[LinearCode]:
    """Append every possible new row ``(0..0 | 1..1 | *)`` to ``(I | R)``."""
    q = parent.q
    G = to_systematic_generator_matrix(parent)
    k, n = G.shape
    top = np.concatenate([G, np.zeros((k, r), dtype=np.int64)], axis=1)
    out = []
    for tail in itertools.product(range(q), repeat=n - k):
        row = np.array([0] * k + list(tail) + [1] * r, dtype=np.int64)
        M = np.vstack([top, row])
        we = brute_weight_enumerator(M, q)
        if any(a and i and i not in weights for i, a in enumerate(we)):
            continue
        out.append(from_generator_matrix(M, q))
    return out
