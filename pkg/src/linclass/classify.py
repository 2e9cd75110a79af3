"""Dimension-by-dimension classification driver.

All ``[n, k, W]_q`` codes arise by extending ``[n - r, k - 1, W]_q`` codes
with ``r`` new columns.  Each dimension is produced from the previous one,
deduplicated per cell ``(n, k)`` and, with the filters on, per
``(parent weight enumerator, r)``: children in different such buckets are
never isometric because the filters pin down both values.
"""

from __future__ import annotations

import hashlib
import logging
import math
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .canon import dedupe
from .code import LinearCode, minimal_codewords_count, weight_enumerator
from .extender import ExtensionProblem, extend
from .weights import WeightSet

log = logging.getLogger(__name__)

Cell = tuple[int, int]


@dataclass(frozen=True)
class ClassificationTask:
    """What to classify.

    ``max_mult`` caps the column multiplicity of the reported codes (1 for
    projective codes) and ``max_redundancy`` caps ``n - k``.  Intermediate
    dimensions keep every code that can still lead to a reported one.
    ``k_max=None`` keeps going until a dimension comes out empty.
    """

    q: int
    weights: WeightSet
    n_max: int
    k_max: int | None
    max_mult: int | None = None
    max_redundancy: int | None = None
    shards: int = 1
    workers: int | None = None
    budget_nodes: int | None = None
    canonical: bool = True
    lexicographic: bool = True

    def __post_init__(self) -> None:
        if self.n_max < 1 or (self.k_max is not None and not 1 <= self.k_max <= self.n_max):
            raise ValueError(f"need n_max >= k_max >= 1, got n_max={self.n_max} k_max={self.k_max}")
        if self.max_mult is not None and self.max_mult < 1:
            raise ValueError("max_mult must be positive")
        if self.shards < 1:
            raise ValueError("shards must be positive")

    @classmethod
    def min_distance(cls, q: int, d: int, n_max: int, k_max: int | None, delta: int = 1, **kw) -> "ClassificationTask":
        return cls(q, WeightSet.min_distance(d, n_max, delta), n_max, k_max, **kw)

    @property
    def projective(self) -> bool:
        return self.max_mult == 1

    @property
    def dimension_limit(self) -> int:
        return self.k_max if self.k_max is not None else self.n_max

    def fingerprint(self) -> str:
        ws = self.weights
        text = (
            f"q={self.q} W={sorted(ws.weights)} delta={ws.delta} a={ws.a} b={ws.b} n_max={self.n_max} "
            f"k_max={self.k_max} max_mult={self.max_mult} max_red={self.max_redundancy} "
            f"canonical={self.canonical} lex={self.lexicographic}"
        )
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def mult_cap(self, n: int, k: int) -> int | None:
        """Largest column multiplicity a code in cell ``(n, k)`` may have and
        still have a reported descendant: each residual step merges at most
        ``q`` points into one."""
        if self.max_mult is None:
            return None
        steps = min(self.dimension_limit - k, self.n_max - n)
        return self.max_mult * self.q ** max(steps, 0)

    def keeps(self, code: LinearCode) -> bool:
        """Whether ``code`` belongs to the working population."""
        if self.max_redundancy is not None and code.n - code.k > self.max_redundancy:
            return False
        cap = self.mult_cap(code.n, code.k)
        return cap is None or code.max_col_mult <= cap

    def reports(self, code: LinearCode) -> bool:
        if self.max_redundancy is not None and code.n - code.k > self.max_redundancy:
            return False
        return self.max_mult is None or code.max_col_mult <= self.max_mult


@dataclass
class ClassificationResult:
    task: ClassificationTask
    counts: dict[Cell, int] = field(default_factory=dict)
    codes: dict[Cell, list[LinearCode]] = field(default_factory=dict)
    complete: dict[Cell, bool] = field(default_factory=dict)
    dimensions: int = 0

    def count(self, n: int, k: int) -> int:
        return self.counts.get((n, k), 0)

    def is_complete(self) -> bool:
        return all(self.complete.values())

    def row(self, n: int, cumulative: bool = False) -> list[int]:
        ks = range(1, self.dimensions + 1)
        if cumulative:
            return [sum(self.count(m, k) for m in range(1, n + 1)) for k in ks]
        return [self.count(n, k) for k in ks]

    def cells(self) -> list[tuple[int, int, int, bool]]:
        """``(n, k, count, complete)`` for every examined cell."""
        out = []
        for n in range(1, self.task.n_max + 1):
            for k in range(1, min(n, self.dimensions) + 1):
                out.append((n, k, self.count(n, k), self.complete.get((n, k), True)))
        return out


def seed_dimension_one(task: ClassificationTask) -> list[LinearCode]:
    """The ``[w, 1]_q`` codes, one per admissible weight ``w``."""
    out = []
    for w in sorted(task.weights.weights):
        if w > task.n_max:
            continue
        code = LinearCode.from_mult(task.q, 1, {0: w})
        if task.keeps(code):
            out.append(code)
    return out


def shard_parents(parents: Sequence[LinearCode], shards: int = 1) -> list[list[LinearCode]]:
    """Split parents into ``shards`` groups, never separating two parents
    with the same weight enumerator."""
    groups: dict[tuple[int, ...], list[LinearCode]] = defaultdict(list)
    for p in parents:
        groups[weight_enumerator(p).coeffs].append(p)
    keys = sorted(groups, key=lambda c: (len(c), c))
    out: list[list[LinearCode]] = [[] for _ in range(max(1, shards))]
    for i, key in enumerate(keys):
        out[i % len(out)].extend(groups[key])
    return out


def _bucket(task: ClassificationTask, parent: LinearCode, r: int) -> tuple:
    if not task.canonical:
        return ()
    if not task.lexicographic:
        return (r,)
    return (r, weight_enumerator(parent).coeffs)


def _extend_shard(task: ClassificationTask, parents: Sequence[LinearCode]) -> tuple[dict[Cell, list[LinearCode]], set[Cell]]:
    """Children of one shard, deduplicated per bucket."""
    buckets: dict[tuple, list[LinearCode]] = defaultdict(list)
    partial: set[Cell] = set()
    for parent in parents:
        n, k = parent.n, parent.k
        top = task.n_max - n
        if task.canonical:
            top = min(top, parent.min_col_mult)
        for r in range(1, top + 1):
            child_cell = (n + r, k + 1)
            if task.max_redundancy is not None and n + r - k - 1 > task.max_redundancy:
                break
            problem = ExtensionProblem(
                parent,
                r,
                task.weights,
                canonical=task.canonical,
                lexicographic=task.lexicographic,
                max_mult=task.mult_cap(*child_cell),
            )
            children, complete = extend(problem, task.budget_nodes)
            if not complete:
                partial.add(child_cell)
            key = (child_cell, _bucket(task, parent, r))
            buckets[key].extend(c for c in children if task.keeps(c))
    out: dict[Cell, list[LinearCode]] = defaultdict(list)
    for (cell, _), kids in sorted(buckets.items(), key=lambda kv: kv[0]):
        out[cell].extend(dedupe(kids))
    return dict(out), partial


def _next_dimension(task: ClassificationTask, parents: list[LinearCode]) -> tuple[dict[Cell, list[LinearCode]], set[Cell]]:
    shards = [s for s in shard_parents(parents, task.shards) if s]
    workers = task.workers if task.workers is not None else min(task.shards, os.cpu_count() or 1)
    merged: dict[Cell, list[LinearCode]] = defaultdict(list)
    partial: set[Cell] = set()
    if workers > 1 and len(shards) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_extend_shard, [task] * len(shards), shards))
    else:
        results = [_extend_shard(task, s) for s in shards]
    for cells, bad in results:
        for cell, kids in cells.items():
            merged[cell].extend(kids)
        partial |= bad
    for cell in merged:
        merged[cell].sort(key=lambda c: (c.support, c.mults))
    return dict(merged), partial


def classify(
    task: ClassificationTask,
    out_dir: str | Path | None = None,
    count_only: bool = False,
    on_cell: Callable[[int, int, list[LinearCode]], None] | None = None,
) -> ClassificationResult:
    """Classify all codes of ``task``, dimension by dimension.

    With ``out_dir`` every finished dimension is written as one archive per
    cell and later runs of the same task resume from them.  ``on_cell``
    receives the reported codes of each cell as soon as it is known.
    """
    from .archive import load_dimension, save_dimension

    result = ClassificationResult(task)
    limit = task.dimension_limit
    pool: dict[Cell, list[LinearCode]] = {}
    partial_cells: set[Cell] = set()
    for k in range(1, limit + 1):
        loaded = load_dimension(out_dir, task, k) if out_dir is not None else None
        if loaded is not None:
            pool, partial_cells = loaded
        elif k == 1:
            pool = defaultdict(list)
            for c in seed_dimension_one(task):
                pool[(c.n, 1)].append(c)
            pool, partial_cells = dict(pool), set()
        else:
            parents = [c for cell in sorted(pool) for c in pool[cell]]
            prev_partial = partial_cells
            pool, partial_cells = _next_dimension(task, parents)
            # a partial parent cell taints every longer child cell
            for n0, _ in prev_partial:
                partial_cells |= {(n, k) for n in range(n0 + 1, task.n_max + 1)}
            if out_dir is not None:
                save_dimension(out_dir, task, k, pool, partial_cells)
        if k == 1 and out_dir is not None and loaded is None:
            save_dimension(out_dir, task, 1, pool, partial_cells)
        if not any(pool.values()) and task.k_max is None:
            break
        result.dimensions = k
        for n in range(k, task.n_max + 1):
            reported = [c for c in pool.get((n, k), []) if task.reports(c)]
            result.counts[(n, k)] = len(reported)
            result.complete[(n, k)] = (n, k) not in partial_cells
            if not count_only:
                result.codes[(n, k)] = reported
            if on_cell is not None:
                on_cell(n, k, reported)
        log.info("dimension %d: %s", k, {c: len(v) for c, v in sorted(pool.items())})
    return result


def k2_formula(n: int) -> int:
    """Closed count of binary ``[n, 2, >=3]`` codes of length exactly ``n``."""
    if n < 5:
        return 0
    value = (n - 4) * (n - 3) * (2 * n - 7)
    assert value % 6 == 0
    value //= 6
    root = math.isqrt(value)
    return root if root * root == value else root + 1


def verify_k2_formula(n_range: Iterable[int], result: ClassificationResult | None = None) -> list[tuple[int, int, int]]:
    """``(n, classified, formula)`` for each ``n``; classifies on demand."""
    ns = list(n_range)
    if result is None:
        result = classify(ClassificationTask.min_distance(2, 3, max(ns), 2), count_only=True)
    return [(n, result.count(n, 2), k2_formula(n)) for n in ns]


def min_minimal_codewords_table(n_max: int, q: int = 2, k_max: int | None = None) -> dict[Cell, int]:
    """Least number of minimal codewords over projective ``[n, k]_q`` codes, ``2 <= k <= n <= n_max``."""
    task = ClassificationTask(q, WeightSet.min_distance(1, n_max), n_max, k_max if k_max is not None else n_max, max_mult=1)
    table: dict[Cell, int] = {}

    def record(n: int, k: int, codes: list[LinearCode]) -> None:
        if k >= 2 and codes:
            table[(n, k)] = min(minimal_codewords_count(c) for c in codes)

    classify(task, count_only=True, on_cell=record)
    return table
