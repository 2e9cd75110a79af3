"""One lengthening step ``[n, k]_q -> [n + r, k + 1]_q``.

The parent generator matrix ``(I_k | R)`` gets a new last row whose first
``k`` entries are 0, followed by ``r`` ones in new columns and free entries
elsewhere.  Geometrically every parent point ``u`` of multiplicity ``c(u)``
splits into the points ``<(u | lam)>``, lam in GF(q), whose multiplicities
sum to ``c(u)``, and the new point ``<e_{k+1}>`` receives ``r`` columns.
The admissible splittings are the integer points of a small polyhedron:
for every hyperplane ``H`` of PG(k, q) the number of columns on ``H`` must
equal ``(n + r) - w`` for an envelope weight ``w``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .code import (
    LinearCode,
    WeightEnumerator,
    residual_enumerators,
    systematic_form,
    unit_indices,
    weight_enumerator,
)
from .galois import incidence_matrix, point_indices, points_array
from .weights import WeightSet

DEFAULT_BUDGET_NODES = 10_000_000


def default_budget() -> int:
    env = os.environ.get("LINCODE_BUDGET_NODES")
    return int(env) if env else DEFAULT_BUDGET_NODES


class EnvelopeViolation(ValueError):
    """A parent weight lies outside the weight envelope."""


@dataclass(frozen=True)
class ExtensionProblem:
    parent: LinearCode
    r: int
    weights: WeightSet
    canonical: bool = True
    lexicographic: bool = True
    max_mult: int | None = None

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError("extension multiplicity r must be at least 1")


@dataclass(frozen=True)
class ExtensionSolution:
    x: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.x)


@dataclass(eq=False)
class ConstraintSystem:
    """Integer system for the multiplicities ``x_P`` of the child points.

    ``points[v]`` is the PG(k, q) index of variable ``v``.  Each fiber
    ``(vars, total)`` fixes the sum of its variables.  ``lower``/``upper``
    bound each variable; with ``gap > 0`` a variable is either 0 or at
    least ``gap``.  Every hyperplane ``(normal index, vars on it)`` must
    carry a column count in ``targets``.

    Adding a multiple of the parent's rows to the new row shifts the last
    coordinate of every lift of a unit point independently, so for the
    fibers in ``shift_fibers`` only one assignment per additive shift is
    needed.
    """

    q: int
    k: int
    n: int
    r: int
    points: tuple[int, ...]
    fibers: tuple[tuple[tuple[int, ...], int], ...]
    lower: tuple[int, ...]
    upper: tuple[int | None, ...]
    gap: int
    hyperplanes: tuple[tuple[int, tuple[int, ...]], ...]
    targets: tuple[int, ...]
    delta: int = 1
    shift_fibers: tuple[int, ...] = ()
    parent: LinearCode | None = None
    incidence: np.ndarray | None = field(default=None, repr=False)

    @property
    def child_dimension(self) -> int:
        return self.k + 1

    def hyperplane_matrix(self) -> np.ndarray:
        """Boolean ``[variable, hyperplane]`` incidence."""
        if self.incidence is not None:
            return self.incidence
        inc = np.zeros((len(self.points), len(self.hyperplanes)), dtype=bool)
        for h, (_, members) in enumerate(self.hyperplanes):
            inc[list(members), h] = True
        return inc

    def y_value(self, h: int, x: Sequence[int], a: int, delta: int) -> int:
        """Slack variable of hyperplane ``h``: ``((n+r-a*delta) - sum) / delta``."""
        s = sum(x[v] for v in self.hyperplanes[h][1])
        return ((self.n + self.r - a * delta) - s) // delta

    def is_solution(self, x: Sequence[int]) -> bool:
        if len(x) != len(self.points):
            return False
        for v, val in enumerate(x):
            if val < self.lower[v] or (self.upper[v] is not None and val > self.upper[v]):
                return False
            if 0 < val < self.gap:
                return False
        if any(sum(x[v] for v in vs) != t for vs, t in self.fibers):
            return False
        allowed = set(self.targets)
        return all(sum(x[v] for v in vs) in allowed for _, vs in self.hyperplanes)


def _unit_vectors(k: int) -> list[tuple[int, ...]]:
    return [tuple(int(i == j) for j in range(k)) for i in range(k)]


def build_constraints(problem: ExtensionProblem) -> ConstraintSystem:
    """Set up the system for all children of ``problem.parent`` with ``r`` new columns."""
    parent = systematic_form(problem.parent)
    q, k, n, r = parent.q, parent.k, parent.n, problem.r
    ws = problem.weights
    wts = weight_enumerator(parent).weights()
    bad = [w for w in wts if w % ws.delta or not ws.a <= w // ws.delta <= ws.b]
    if bad:
        raise EnvelopeViolation(f"parent weights {bad} outside {ws.describe()}")

    kk = k + 1
    units = set(unit_indices(q, k))
    bound = r if problem.canonical else 1
    vecs = []
    points: list[int] = []
    fibers = []
    lower: list[int] = []
    # the new point <e_{k+1}> carries exactly r columns
    vecs.append((0,) * k + (1,))
    fibers.append(((0,), r))
    lower.append(r)
    shift_fibers = []
    for p, c, u in zip(parent.support, parent.mults, parent.vectors.tolist()):
        members = []
        for lam in range(q):
            members.append(len(vecs))
            vecs.append(tuple(u) + (lam,))
            lower.append(bound if (lam == 0 and p in units) else 0)
        if p in units:
            shift_fibers.append(len(fibers))
        fibers.append((tuple(members), c))
    arr = np.array(vecs, dtype=np.int64)
    points = point_indices(q, arr).tolist()
    upper = [problem.max_mult] * len(points)
    normals = points_array(q, kk)
    inc = incidence_matrix(parent.field, normals, arr).T  # variables x hyperplanes
    hyperplanes = tuple((h, tuple(np.flatnonzero(inc[:, h]).tolist())) for h in range(normals.shape[0]))
    targets = tuple(sorted(n + r - w for w in ws.envelope if n + r - w >= 0))
    return ConstraintSystem(
        q=q,
        k=k,
        n=n,
        r=r,
        points=tuple(points),
        fibers=tuple(fibers),
        lower=tuple(lower),
        upper=tuple(upper),
        gap=r if problem.canonical else 0,
        hyperplanes=hyperplanes,
        targets=targets,
        delta=ws.delta,
        shift_fibers=tuple(shift_fibers),
        parent=parent,
        incidence=inc,
    )


def _compositions(total: int, lows: Sequence[int], highs: Sequence[int], gap: int) -> list[tuple[int, ...]]:
    """All vectors with the given sum, bounds and 0-or-at-least-``gap`` entries."""
    size = len(lows)
    out: list[tuple[int, ...]] = []
    if total < 0:
        return out

    def allowed(i: int, left: int) -> list[int]:
        hi = min(highs[i], left)
        vals = [v for v in range(lows[i], hi + 1) if not 0 < v < gap]
        return vals

    def rec(i: int, left: int, acc: list[int]) -> None:
        if i == size - 1:
            if left in allowed(i, left):
                out.append(tuple(acc + [left]))
            return
        for v in allowed(i, left):
            acc.append(v)
            rec(i + 1, left - v, acc)
            acc.pop()

    if size:
        rec(0, total, [])
    elif total == 0:
        out.append(())
    return out


class _BudgetExhausted(Exception):
    pass


class _TooLarge(Exception):
    pass


@dataclass
class _SearchPlan:
    order: list[int]  # free fibers in assignment order
    comps: list[np.ndarray]  # choices per fiber (all fibers)
    contrib: list[np.ndarray]  # varying hyperplane counts per choice, free fibers only
    base: np.ndarray
    rem_min: list[np.ndarray]
    rem_max: list[np.ndarray]
    feasible: bool


def _shift_representatives(cs: np.ndarray, add: np.ndarray) -> np.ndarray:
    """Rows of ``cs`` that are lexicographically largest among their
    images under ``c[lam] -> c[lam + s]``."""
    keep = np.ones(cs.shape[0], dtype=bool)
    for s in range(1, add.shape[0]):
        img = cs[:, add[:, s]]
        diff = img != cs
        first = diff.argmax(axis=1)
        rows = np.arange(cs.shape[0])
        bigger = diff.any(axis=1) & (img[rows, first] > cs[rows, first])
        keep &= ~bigger
    return cs[keep]


def _plan(system: ConstraintSystem) -> _SearchPlan:
    inc = system.hyperplane_matrix().astype(np.int64)
    nh = inc.shape[1]
    add = system.parent.field.add if system.parent is not None else None
    comps, contrib = [], []
    for f, (members, total) in enumerate(system.fibers):
        lows = [system.lower[v] for v in members]
        highs = [system.upper[v] if system.upper[v] is not None else total for v in members]
        cs = np.array(_compositions(total, lows, highs, system.gap), dtype=np.int64).reshape(-1, len(members))
        if f in system.shift_fibers and add is not None:
            cs = _shift_representatives(cs, np.asarray(add))
        comps.append(cs)
        contrib.append(cs @ inc[list(members)] if len(members) else np.zeros((cs.shape[0], nh), dtype=np.int64))
    if any(c.shape[0] == 0 for c in comps):
        return _SearchPlan([], comps, [], np.zeros(0, np.int64), [], [], False)
    # hyperplanes whose count is the same for every choice are checked once
    varying = np.zeros(nh, dtype=bool)
    for c in contrib:
        varying |= (c != c[0]).any(axis=0)
    fixed_total = sum(c[0] for c in contrib)
    targets = np.array(system.targets, dtype=np.int64)
    if not np.isin(fixed_total[~varying], targets).all():
        return _SearchPlan([], comps, [], np.zeros(0, np.int64), [], [], False)
    forced = [i for i, c in enumerate(comps) if c.shape[0] == 1]
    free = [i for i, c in enumerate(comps) if c.shape[0] > 1]
    # larger fibers first: they move the hyperplane counts the most
    free.sort(key=lambda i: (-system.fibers[i][1], comps[i].shape[0], i))
    base = np.zeros(int(varying.sum()), dtype=np.int64)
    for i in forced:
        base += contrib[i][0][varying]
    sub = [contrib[i][:, varying] for i in free]
    rem_min = [np.zeros_like(base) for _ in range(len(free) + 1)]
    rem_max = [np.zeros_like(base) for _ in range(len(free) + 1)]
    for d in range(len(free) - 1, -1, -1):
        rem_min[d] = rem_min[d + 1] + sub[d].min(axis=0)
        rem_max[d] = rem_max[d + 1] + sub[d].max(axis=0)
    return _SearchPlan(free, comps, sub, base, rem_min, rem_max, True)


# largest number of partial assignments kept for the second half of a
# meet-in-the-middle search
JOIN_TABLE_ROWS = 1 << 18
JOIN_CELLS = 1 << 24
# caps on each list of the three-way split join: rows, and bytes of counts
SPLIT_LIST_ROWS = 1 << 21
SPLIT_BYTES = 1 << 29
# int64 scratch entries per vectorised step
WORK_CELLS = 1 << 22
KEY_COLUMNS = 96


class _Enumerator:
    def __init__(self, system: ConstraintSystem, plan: _SearchPlan, budget: int):
        self.system, self.plan, self.budget = system, plan, budget
        self.targets = np.array(system.targets, dtype=np.int64)
        # next_at[v]: least target >= v, for v up to one past the largest
        top = int(self.targets[-1]) + 1 if self.targets.size else 0
        self.next_at = np.full(top + 1, np.iinfo(np.int64).max, dtype=np.int64)
        for t in reversed(self.targets.tolist()):
            self.next_at[: t + 1] = t
        self.nodes = 0
        self.found: list[tuple[int, ...]] = []

    def tick(self, amount: int = 1) -> None:
        self.nodes += amount
        if self.nodes > self.budget:
            raise _BudgetExhausted

    def ok_rows(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """Rows whose every hyperplane interval ``[lo, hi]`` holds a target."""
        nxt = self.next_at[np.clip(lo, 0, self.next_at.size - 1)]
        return (nxt <= hi).all(axis=-1)

    def depth_first(self, stop: int, on_leaf) -> None:
        """Assign fibers ``0..stop-1`` of the plan; ``on_leaf(choices, sums)``
        receives the surviving choices for the last of them."""
        plan = self.plan
        choice = [0] * stop

        def rec(d: int, partial: np.ndarray) -> None:
            self.tick()
            new = partial + plan.contrib[d]
            good = np.flatnonzero(self.ok_rows(new + plan.rem_min[d + 1], new + plan.rem_max[d + 1]))
            if d + 1 == stop:
                on_leaf(choice, good, new[good])
                return
            for i in good.tolist():
                choice[d] = i
                rec(d + 1, new[i])

        rec(0, plan.base)

    def run_dfs(self) -> None:
        depth = len(self.plan.order)
        if depth == 0:
            if self.ok_rows(self.plan.base[None, :], self.plan.base[None, :])[0]:
                self.found.append(())
            return

        def leaf(choice, good, _sums):
            for i in good.tolist():
                self.found.append(tuple(choice[:-1]) + (i,))

        self.depth_first(depth, leaf)

    def split_point(self) -> int:
        rows = 1
        split = len(self.plan.order)
        width = max(1, self.plan.base.size)
        while split > 0:
            more = rows * self.plan.contrib[split - 1].shape[0]
            if more > JOIN_TABLE_ROWS or more * width > JOIN_CELLS:
                break
            split -= 1
            rows = more
        return split

    def run_join(self, delta: int) -> None:
        """Meet in the middle on hyperplane counts modulo ``delta``.

        Every target is congruent to the same residue, so a full assignment
        is admissible only if the counts of the two halves add up to that
        residue on every hyperplane.  The tail half is tabulated by its
        residues; each head assignment looks up its complement.
        """
        plan = self.plan
        depth = len(plan.order)
        split = self.split_point()
        head_min = plan.rem_min[0] - plan.rem_min[split]
        head_max = plan.rem_max[0] - plan.rem_max[split]
        # tabulate the tail, pruned against the widest possible head
        sums = np.zeros((1, plan.base.size), dtype=np.int64)
        picks = np.zeros((1, 0), dtype=np.int64)
        for d in range(split, depth):
            c = plan.contrib[d]
            sums = (sums[:, None, :] + c[None, :, :]).reshape(-1, sums.shape[1])
            picks = np.concatenate(
                [np.repeat(picks, c.shape[0], axis=0), np.tile(np.arange(c.shape[0]), picks.shape[0])[:, None]], axis=1
            )
            lo = plan.base + head_min + sums + plan.rem_min[d + 1]
            hi = plan.base + head_max + sums + plan.rem_max[d + 1]
            keep = self.ok_rows(lo, hi)
            sums, picks = sums[keep], picks[keep]
            self.tick(max(1, sums.shape[0] // 64))
        if sums.shape[0] == 0:
            return
        residue = int(self.targets[0]) % delta
        table: dict[bytes, list[int]] = {}
        keys = np.ascontiguousarray(sums % delta, dtype=np.int8)
        for j, key in enumerate(keys):
            table.setdefault(key.tobytes(), []).append(j)
        lo_t, hi_t = int(self.targets[0]), int(self.targets[-1])

        def match(head_choice, head_sums) -> None:
            need = np.ascontiguousarray((residue - head_sums) % delta, dtype=np.int8)
            for row, key in zip(head_sums, need):
                rows = table.get(key.tobytes())
                if not rows:
                    continue
                tot = row + sums[rows]
                ok = ((tot >= lo_t) & (tot <= hi_t)).all(axis=1)
                for j in np.flatnonzero(ok).tolist():
                    self.found.append(tuple(head_choice) + tuple(picks[rows[j]].tolist()))

        if split == 0:
            match((), plan.base[None, :])
            return

        def leaf(choice, good, good_sums):
            for i, row in zip(good.tolist(), good_sums):
                match(tuple(choice[:-1]) + (i,), row[None, :])

        self.depth_first(split, leaf)

    def expand(self, fibers: Sequence[int], start: np.ndarray, other_min: np.ndarray, other_max: np.ndarray, at: np.ndarray):
        """Every assignment of ``fibers`` added to ``start``, pruned against
        the least and greatest counts ``other_*`` of all remaining fibers.
        Only the hyperplane columns ``at`` are kept and checked."""
        full = [self.full[f][:, at] for f in fibers]
        start, other_min, other_max = start[at], other_min[at], other_max[at]
        lo_rest, hi_rest = [other_min], [other_max]
        for c in reversed(full[1:]):
            lo_rest.append(lo_rest[-1] + c.min(axis=0))
            hi_rest.append(hi_rest[-1] + c.max(axis=0))
        lo_rest.reverse()
        hi_rest.reverse()
        width = start.size
        dtype = np.int8 if self.system.n + self.system.r < 128 else np.int16
        sums = start[None, :].astype(dtype)
        picks = np.zeros((1, 0), dtype=np.int16)
        # range pruning is dropped for the rest of the list once it stops paying
        pruning = True
        for d, c in enumerate(full):
            c = c.astype(dtype)
            step = max(1, WORK_CELLS // (width * c.shape[0]))
            parts_s, parts_p = [], []
            rows = seen = 0
            for at in range(0, sums.shape[0], step):
                new = (sums[at : at + step, None, :] + c[None, :, :]).reshape(-1, width)
                if pruning:
                    keep = np.flatnonzero(self.ok_rows(new + lo_rest[d], new + hi_rest[d]))
                else:
                    keep = np.arange(new.shape[0])
                seen += new.shape[0]
                rows += keep.size
                if rows > SPLIT_LIST_ROWS or rows * width * sums.itemsize > SPLIT_BYTES:
                    raise _TooLarge
                parts_s.append(new[keep].astype(dtype))
                parts_p.append(np.concatenate([picks[at + keep // c.shape[0]], (keep % c.shape[0]).astype(np.int16)[:, None]], axis=1))
            sums, picks = np.concatenate(parts_s), np.concatenate(parts_p)
            pruning = pruning and 8 * rows < 7 * seen
            self.tick(max(1, sums.shape[0] // 64))
        return sums, picks

    def run_split(self, delta: int) -> None:
        """Three-way join along a hyperplane ``V`` of the parent space.

        A fiber over a point of ``V`` adds the same count to the hyperplanes
        with normals ``(h | 1)`` and ``(h + s*a | 1)``, where ``a`` is the
        normal of ``V``.  So the fibers off ``V`` alone must give equal
        residues modulo ``delta`` along each coset ``h + <a>``.  They are
        split in two halves joined on these differences, and the result is
        joined with the fibers on ``V`` on one residue per coset.
        """
        system, plan = self.system, self.plan
        fld = system.parent.field
        q, k = system.q, system.k
        normals = points_array(q, k + 1)[[h for h, _ in system.hyperplanes]]
        cols = np.flatnonzero(normals[:, k] != 0)
        hv = fld.mul[fld.inv[normals[cols, k]][:, None], normals[cols, :k]]
        place = q ** np.arange(k)[::-1]
        pos = np.full(q**k, -1, dtype=np.int64)
        pos[hv @ place] = np.arange(cols.size)
        inc = system.hyperplane_matrix()[:, cols].astype(np.int64)
        self.full = {}
        base = np.zeros(cols.size, dtype=np.int64)
        for f, (members, _) in enumerate(system.fibers):
            c = plan.comps[f] @ inc[list(members)]
            if f in plan.order:
                self.full[f] = c
            else:
                base += c[0]
        size = {f: float(np.log2(plan.comps[f].shape[0])) for f in plan.order}
        normals_v = points_array(q, k)
        vecs = system.parent.vectors[[f - 1 for f in plan.order]]
        logs = np.array([size[f] for f in plan.order])
        inside = fld.matmul(normals_v, vecs.T) == 0
        cost = np.maximum(inside @ logs, (~inside) @ logs / 2)
        best = int(np.argmin(cost))
        a = normals_v[best]
        on = [f for f, x in zip(plan.order, inside[best]) if x]
        off = [f for f, x in zip(plan.order, inside[best]) if not x]
        halves: tuple[list[int], list[int]] = ([], [])
        for f in sorted(off, key=lambda f: -size[f]):
            min(halves, key=lambda h: sum(size[g] for g in h)).append(f)
        orbit = np.stack([pos[fld.add[hv, fld.mul[s, a][None, :]] @ place] for s in range(q)], axis=1)
        rep = orbit.min(axis=1)
        reps = np.flatnonzero(rep == np.arange(cols.size))
        others = np.flatnonzero(rep != np.arange(cols.size))

        lo = {f: c.min(axis=0) for f, c in self.full.items()}
        hi = {f: c.max(axis=0) for f, c in self.full.items()}

        def bounds(group):
            zero = np.zeros(cols.size, dtype=np.int64)
            return sum((lo[f] for f in group), zero), sum((hi[f] for f in group), zero)

        # the lists keep only the columns read by the digests; counts on the
        # other hyperplanes are rebuilt for candidate matches
        rng = np.random.default_rng(0x5EED)
        key_d = np.sort(rng.permutation(others)[:KEY_COLUMNS])
        key_r = np.sort(rng.permutation(reps)[:KEY_COLUMNS])
        mix_d = rng.integers(1, 2**63, size=key_d.size, dtype=np.uint64)
        mix_r = rng.integers(1, 2**63, size=key_r.size, dtype=np.uint64)
        at_a = np.unique(np.concatenate([key_d, rep[key_d], key_r]))
        d_now, d_rep, r_in_a = (np.searchsorted(at_a, x) for x in (key_d, rep[key_d], key_r))

        lo1, hi1 = bounds(halves[0])
        lo2, hi2 = bounds(halves[1])
        lob, hib = bounds(on)
        zero = np.zeros_like(base)
        s1, p1 = self.expand(halves[0], base, lo2 + lob, hi2 + hib, at_a)
        s2, p2 = self.expand(halves[1], zero, base + lo1 + lob, base + hi1 + hib, at_a)
        sb, pb = self.expand(on, zero, base + lo1 + lo2, base + hi1 + hi2, key_r)
        if min(s1.shape[0], s2.shape[0], sb.shape[0]) == 0:
            return

        def digest(res: np.ndarray, mix: np.ndarray) -> np.ndarray:
            return (res.astype(np.uint64) * mix).sum(axis=1, dtype=np.uint64)

        def pairs(keys: np.ndarray, table: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
            left = np.searchsorted(table, keys, side="left")
            count = np.searchsorted(table, keys, side="right") - left
            i = np.repeat(np.arange(keys.size), count)
            start = np.repeat(left - np.cumsum(count) + count, count)
            return i, start + np.arange(i.size)

        def assemble(group: Sequence[int], picks: np.ndarray) -> np.ndarray:
            out = np.zeros((picks.shape[0], cols.size), dtype=np.int64)
            for t, f in enumerate(group):
                out += self.full[f][picks[:, t]]
            return out

        d1 = s1[:, d_now].astype(np.int64) - s1[:, d_rep]
        d2 = s2[:, d_now].astype(np.int64) - s2[:, d_rep]
        h1 = digest(d1 % delta, mix_d)
        h2 = digest(-d2 % delta, mix_d)
        order2 = np.argsort(h2, kind="stable")
        h2 = h2[order2]
        hb = digest(sb.astype(np.int64) % delta, mix_r)
        orderb = np.argsort(hb, kind="stable")
        hb = hb[orderb]
        residue = int(self.targets[0]) % delta
        depth = {f: d for d, f in enumerate(plan.order)}
        cols1 = [depth[f] for f in halves[0]]
        cols2 = [depth[f] for f in halves[1]]
        colsb = [depth[f] for f in on]

        i_all, j_all = pairs(h1, h2)
        if i_all.size > SPLIT_LIST_ROWS * 32:
            raise _TooLarge
        chunk = max(1, WORK_CELLS // cols.size)
        for at in range(0, i_all.size, chunk):
            i, j = i_all[at : at + chunk], order2[j_all[at : at + chunk]]
            self.tick(max(1, i.size // 64))
            fa = base + assemble(halves[0], p1[i]) + assemble(halves[1], p2[j])
            diff = fa[:, others] - fa[:, rep[others]]
            keep = (diff % delta == 0).all(axis=1) & self.ok_rows(fa + lob, fa + hib)
            i, j, fa = i[keep], j[keep], fa[keep]
            if i.size == 0:
                continue
            u, m = pairs(digest((residue - fa[:, key_r]) % delta, mix_r), hb)
            m = orderb[m]
            for part in range(0, u.size, chunk):
                uu, mm = u[part : part + chunk], m[part : part + chunk]
                tot = fa[uu] + assemble(on, pb[mm])
                good = np.isin(tot, self.targets).all(axis=1)
                for a_row, b_row in zip(uu[good].tolist(), mm[good].tolist()):
                    ch = [0] * len(plan.order)
                    for d, v in zip(cols1, p1[i[a_row]].tolist()):
                        ch[d] = v
                    for d, v in zip(cols2, p2[j[a_row]].tolist()):
                        ch[d] = v
                    for d, v in zip(colsb, pb[b_row].tolist()):
                        ch[d] = v
                    self.found.append(tuple(ch))

    def solutions(self) -> list[ExtensionSolution]:
        system, plan = self.system, self.plan
        base_x = [0] * len(system.points)
        for f, (members, _) in enumerate(system.fibers):
            if f not in plan.order:
                for v, val in zip(members, plan.comps[f][0].tolist()):
                    base_x[v] = val
        out = []
        for ch in self.found:
            x = list(base_x)
            for d, i in enumerate(ch):
                f = plan.order[d]
                for v, val in zip(system.fibers[f][0], plan.comps[f][i].tolist()):
                    x[v] = val
            out.append(ExtensionSolution(tuple(x)))
        return out


def enumerate_solutions(system: ConstraintSystem, budget_nodes: int | None = None) -> tuple[list[ExtensionSolution], bool]:
    """All integer points of ``system``; the flag is False only when the node budget ran out.

    Fibers are assigned depth first.  Before descending, every choice for
    the next fiber is tested against all hyperplanes at once: the count so
    far plus the least and greatest contribution of the unassigned fibers
    must bracket some admissible target.  When the targets are spaced
    ``delta > 1`` apart the last fibers are instead tabulated and joined on
    residues modulo ``delta``.
    """
    budget = default_budget() if budget_nodes is None else budget_nodes
    plan = _plan(system)
    if not plan.feasible:
        return [], True
    search = _Enumerator(system, plan, budget)
    delta = system.delta if len(system.targets) > 0 else 1
    complete = True
    try:
        if delta > 1 and len(plan.order) > 1:
            try:
                if system.parent is None:
                    raise _TooLarge
                search.run_split(delta)
            except _TooLarge:
                search.found.clear()
                search.run_join(delta)
        else:
            search.run_dfs()
    except _BudgetExhausted:
        complete = False
    return search.solutions(), complete


def solutions_to_codes(system: ConstraintSystem, solutions: Sequence[ExtensionSolution], weights: WeightSet | None = None) -> list[LinearCode]:
    """Child codes of the solutions, dropping those with a weight outside ``weights``."""
    out = []
    kk = system.k + 1
    for sol in solutions:
        mult: dict[int, int] = {}
        for p, val in zip(system.points, sol.x):
            if val:
                mult[p] = mult.get(p, 0) + val
        child = LinearCode.from_mult(system.q, kk, mult, check=False)
        if weights is not None and not weights.is_envelope:
            if not set(weight_enumerator(child).weights()) <= weights.weights:
                continue
        out.append(child)
    return out


def canonical_filter(parent: LinearCode, r: int, child: LinearCode) -> bool:
    """Keep only children whose smallest column multiplicity is exactly ``r``."""
    return child.min_col_mult == r


def lexicographic_filter(parent: LinearCode, r: int, child: LinearCode, parent_we: WeightEnumerator | None = None) -> bool:
    """Keep the child only if the parent's enumerator is the lexicographically
    least among the residual enumerators at the points of multiplicity ``r``."""
    positions = [j for j, m in enumerate(child.mults) if m == r]
    if not positions:
        return False
    if parent_we is None:
        parent_we = weight_enumerator(parent)
    best = min(we.coeffs for we in residual_enumerators(child, positions))
    return parent_we.coeffs == best


def extend(problem: ExtensionProblem, budget_nodes: int | None = None) -> tuple[list[LinearCode], bool]:
    """Build, enumerate, convert and filter; children sorted by multiplicity vector."""
    parent = problem.parent
    if problem.canonical and parent.min_col_mult < problem.r:
        return [], True
    if problem.max_mult is not None and problem.r > problem.max_mult:
        return [], True
    system = build_constraints(problem)
    solutions, complete = enumerate_solutions(system, budget_nodes)
    children = solutions_to_codes(system, solutions, problem.weights)
    parent_we = weight_enumerator(system.parent)
    kept = []
    for child in children:
        if problem.canonical and not canonical_filter(system.parent, problem.r, child):
            continue
        if problem.lexicographic and not lexicographic_filter(system.parent, problem.r, child, parent_we):
            continue
        kept.append(child)
    kept.sort(key=lambda c: (c.support, c.mults))
    return kept, complete
