"""Isometry classes of codes: invariant keys, canonical forms, automorphism orders.

Two codes are isometric iff their multisets of points are mapped onto each
other by a collineation ``x -> A sigma(x)`` of PG(k-1, q).  The canonical
form is the least image of the multiset over all such maps that send an
ordered basis of support points to the unit points.  The bases are
searched with individualization and refinement: support points are colored
by multiplicity and by how the hyperplanes through them meet each color
class; a basis is built one point at a time from the smallest color class
outside the span of the points chosen so far.  Automorphisms found on the
way prune equivalent branches, and their orbits give the group order.
"""

from __future__ import annotations

import hashlib
import itertools
import zlib
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .code import LinearCode, invert_matrix, residual_enumerators, weight_enumerator
from .galois import point_count, point_indices

MAX_HYPERPLANES = 1 << 20
MAX_VARIANTS = 1 << 16
MAX_NODES = 2_000_000


class ScaleExceeded(RuntimeError):
    """The code is too large for the exact canonical search."""


@dataclass(frozen=True, order=True)
class InvariantKey:
    q: int
    k: int
    n: int
    weight_enumerator: tuple[int, ...]
    multiplicities: tuple[int, ...]
    residuals: tuple[tuple[int, ...], ...]


def invariant_key(code: LinearCode) -> InvariantKey:
    """Cheap isometry invariants used to bucket codes before canonization."""
    we = weight_enumerator(code)
    low = code.min_col_mult
    positions = [j for j, m in enumerate(code.mults) if m == low]
    res = sorted(r.coeffs for r in residual_enumerators(code, positions)) if code.k > 1 else []
    return InvariantKey(code.q, code.k, code.n, we.coeffs, tuple(sorted(code.mults)), tuple(res))


@dataclass(frozen=True, order=True)
class CanonicalSignature:
    """``(q, k, n)`` and the least image as sorted ``(point, multiplicity)`` pairs."""

    q: int
    k: int
    n: int
    image: tuple[tuple[int, int], ...]

    def digest(self) -> bytes:
        h = hashlib.sha256(f"{self.q} {self.k} {self.n}".encode())
        h.update(np.array(self.image, dtype=">i8").tobytes())
        return h.digest()

    def code(self) -> LinearCode:
        return LinearCode.from_mult(self.q, self.k, dict(self.image), check=False)


@dataclass
class _Leaf:
    prefix: tuple[int, ...]
    path: tuple
    image: bytes
    images: np.ndarray  # image point of every support position
    stabilizer: int


def _relabel(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Distinct rows in lexicographic order and each row's rank among them."""
    if rows.shape[1] == 1:
        uniq, inv = np.unique(rows[:, 0], return_inverse=True)
        return uniq[:, None], inv
    order = np.lexsort(rows.T[::-1])
    srt = rows[order]
    step = np.empty(len(srt), dtype=bool)
    step[0] = True
    step[1:] = (srt[1:] != srt[:-1]).any(axis=1)
    inv = np.empty(len(srt), dtype=np.int64)
    inv[order] = np.cumsum(step) - 1
    return srt[step], inv


class _Search:
    def __init__(self, code: LinearCode, max_nodes: int = MAX_NODES):
        q, k = code.q, code.k
        if point_count(q, k) > MAX_HYPERPLANES:
            raise ScaleExceeded(f"PG({k - 1},{q}) has too many hyperplanes")
        fld = code.field
        self.variants = (q - 1) ** (k - 1) * fld.e
        if self.variants > MAX_VARIANTS:
            raise ScaleExceeded(f"{self.variants} scalings per basis")
        self.code, self.fld, self.q, self.k = code, fld, q, k
        self.vecs = code.vectors
        self.mults = code.mult_array
        self.size = len(code.support)
        inc, counts = np.unique(code.hyperplane_incidence, axis=0, return_counts=True)
        self.inc = inc
        self.hcounts = counts.astype(np.int64)
        self.pairs = np.nonzero(self.inc)
        self.scale = int(code.n) + 1
        diag = np.array(list(itertools.product(range(1, q), repeat=k - 1)), dtype=np.int64).reshape(-1, k - 1)
        self.diag = np.concatenate([np.ones((diag.shape[0], 1), dtype=np.int64), diag], axis=1)
        self.max_nodes = max_nodes
        self.nodes = 0
        self.zeta: _Leaf | None = None
        self.best: _Leaf | None = None
        self.gens: list[np.ndarray] = []

    # -- refinement --------------------------------------------------------

    def refine(self, colors: np.ndarray) -> tuple[np.ndarray, tuple]:
        crc = 0
        hs, js = self.pairs
        nh = self.inc.shape[0]
        while True:
            ncol = int(colors.max()) + 1
            hsig = np.bincount(hs * ncol + colors[js], minlength=nh * ncol).reshape(nh, ncol)
            huniq, hlab = _relabel(hsig)
            nhc = huniq.shape[0]
            counts = np.bincount(js * nhc + hlab[hs], weights=self.hcounts[hs], minlength=self.size * nhc)
            psig = np.concatenate([colors[:, None], counts.astype(np.int64).reshape(self.size, nhc)], axis=1)
            puniq, new = _relabel(psig)
            hsizes = np.bincount(hlab, weights=self.hcounts).astype(np.int64)
            crc = zlib.crc32(np.ascontiguousarray(huniq, dtype="<i8").tobytes(), crc)
            crc = zlib.crc32(hsizes.astype("<i8").tobytes(), crc)
            crc = zlib.crc32(np.ascontiguousarray(puniq, dtype="<i8").tobytes(), crc)
            if int(new.max()) + 1 == ncol:
                return new, (tuple(np.bincount(new).tolist()), crc)
            colors = new

    def outside_span(self, prefix: Sequence[int]) -> np.ndarray:
        if not prefix:
            return np.ones(self.size, dtype=bool)
        fld = self.fld
        from .galois import row_reduce

        rref, pivots = row_reduce(fld, self.vecs[list(prefix)])
        v = self.vecs.copy()
        for row, c in zip(rref, pivots):
            v = fld.sub[v, fld.mul[v[:, c, None], row[None, :]]]
        return v.any(axis=1)

    def child_colors(self, colors: np.ndarray, point: int, prefix: Sequence[int]) -> tuple[np.ndarray, tuple, np.ndarray]:
        free = self.outside_span(tuple(prefix) + (point,))
        flag = np.zeros(self.size, dtype=np.int64)
        flag[point] = 1
        _, start = _relabel(np.stack([colors, flag, free.astype(np.int64)], axis=1))
        new, inv = self.refine(start)
        return new, inv, free

    # -- leaves ------------------------------------------------------------

    def leaf(self, prefix: tuple[int, ...], path: tuple) -> _Leaf:
        fld, k = self.fld, self.k
        binv = invert_matrix(fld, self.vecs[list(prefix)].T)
        y = fld.matmul(binv, self.vecs.T)  # k x N
        best_img, best_enc, stab = None, None, 0
        for aut in fld.automorphisms:
            ys = aut[y]
            imgs = fld.mul[self.diag[:, :, None], ys[None, :, :]]  # variants x k x N
            flat = np.transpose(imgs, (0, 2, 1)).reshape(-1, k)
            pts = point_indices(self.q, fld.normalize_rows(flat)).reshape(imgs.shape[0], self.size)
            enc = np.sort(pts * self.scale + self.mults[None, :], axis=1)
            order = np.lexsort(enc.T[::-1])
            top = enc[order[0]]
            ties = int((enc == top).all(axis=1).sum())
            if best_enc is None or tuple(top) < tuple(best_enc):
                best_enc, best_img, stab = top, pts[order[0]], ties
            elif tuple(top) == tuple(best_enc):
                stab += ties
        return _Leaf(prefix, path, best_enc.astype(">i8").tobytes(), best_img, stab)

    def automorphism(self, a: _Leaf, b: _Leaf) -> np.ndarray:
        """Position permutation taking ``a``'s labeling to ``b``'s."""
        where = {int(p): j for j, p in enumerate(b.images)}
        return np.array([where[int(p)] for p in a.images], dtype=np.int64)

    # -- tree --------------------------------------------------------------

    def orbits(self, fixed: Sequence[int]) -> np.ndarray:
        parent = np.arange(self.size)

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in self.gens:
            if all(g[f] == f for f in fixed):
                for x, y in enumerate(g.tolist()):
                    rx, ry = find(x), find(y)
                    if rx != ry:
                        parent[max(rx, ry)] = min(rx, ry)
        return np.array([find(x) for x in range(self.size)])

    def pruned(self, path: tuple) -> bool:
        depth = len(path)
        if self.zeta is None or self.zeta.path[:depth] == path:
            return False
        return path > self.best.path[:depth]

    def visit(self, prefix: tuple[int, ...], colors: np.ndarray, free: np.ndarray, path: tuple) -> int | None:
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise ScaleExceeded(f"canonical search exceeded {self.max_nodes} nodes")
        depth = len(prefix)
        if depth == self.k:
            return self.at_leaf(self.leaf(prefix, path))
        cand = np.flatnonzero(free)
        sizes = np.bincount(colors[cand])
        sizes = np.where(sizes == 0, self.size + 1, sizes)
        target = int(np.argmin(sizes))
        cell = cand[colors[cand] == target].tolist()
        done: list[int] = []
        for c in cell:
            first = self.zeta is not None and self.zeta.prefix[:depth] == prefix
            if first and done:
                orb = self.orbits(prefix)
                if orb[c] in {orb[d] for d in done}:
                    continue
            child = prefix + (c,)
            new, inv, new_free = self.child_colors(colors, c, prefix)
            cpath = path + (inv,)
            if self.pruned(cpath):
                continue
            done.append(c)
            back = self.visit(child, new, new_free, cpath)
            if back is not None and back < depth:
                return back
        return None

    def at_leaf(self, leaf: _Leaf) -> int | None:
        if self.zeta is None:
            self.zeta = self.best = leaf
            return None
        for ref in (self.zeta, self.best):
            if leaf.path == ref.path and leaf.image == ref.image:
                self.gens.append(self.automorphism(ref, leaf))
                common = 0
                while leaf.prefix[common] == ref.prefix[common]:
                    common += 1
                return common
        if (leaf.path, leaf.image) < (self.best.path, self.best.image):
            self.best = leaf
        return None

    def run(self) -> None:
        colors, inv = self.refine(_relabel(self.mults[:, None])[1])
        self.visit((), colors, np.ones(self.size, dtype=bool), (inv,))

    def group_order(self) -> int:
        order = self.zeta.stabilizer
        for depth in range(self.k):
            orb = self.orbits(self.zeta.prefix[:depth])
            order *= int((orb == orb[self.zeta.prefix[depth]]).sum())
        return order


@lru_cache(maxsize=4096)
def _canonical(code: LinearCode) -> tuple[CanonicalSignature, int]:
    search = _Search(code)
    search.run()
    pts = np.frombuffer(search.best.image, dtype=">i8").astype(np.int64)
    image = tuple((int(e // search.scale), int(e % search.scale)) for e in pts)
    return CanonicalSignature(code.q, code.k, code.n, image), search.group_order()


def canonical_form(code: LinearCode) -> CanonicalSignature:
    """Signature shared exactly by the codes isometric to ``code``."""
    return _canonical(code)[0]


def canonical_code(code: LinearCode) -> LinearCode:
    return canonical_form(code).code()


def automorphism_order(code: LinearCode) -> int:
    """Order of the collineation group PGammaL(k, q) stabilizer of the multiset.

    For projective codes this equals the order of the monomial-and-field
    automorphism group of the code modulo scalar matrices.
    """
    return _canonical(code)[1]


def are_isometric(a: LinearCode, b: LinearCode) -> bool:
    if (a.q, a.k, a.n) != (b.q, b.k, b.n) or sorted(a.mults) != sorted(b.mults):
        return False
    return canonical_form(a) == canonical_form(b)


def dedupe(codes: Iterable[LinearCode]) -> list[LinearCode]:
    """One representative per isometry class, independent of input order.

    Codes are bucketed by :func:`invariant_key`; a canonical form is only
    computed inside buckets holding more than one code.  The representative
    of a class is its member with the least ``(support, mults)``.
    """
    buckets: dict[InvariantKey, dict[tuple, LinearCode]] = {}
    for c in codes:
        buckets.setdefault(invariant_key(c), {})[(c.support, c.mults)] = c
    out = []
    for key in sorted(buckets):
        members = buckets[key]
        if len(members) == 1:
            out.extend(members.values())
            continue
        classes: dict[CanonicalSignature, tuple] = {}
        for ident, c in members.items():
            sig = canonical_form(c)
            if sig not in classes or ident < classes[sig]:
                classes[sig] = ident
        for sig in sorted(classes):
            out.append(members[classes[sig]])
    return out
