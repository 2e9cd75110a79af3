"""Text archives of generator matrices and count tables.

Archive layout (ASCII, LF line endings)::

    q n k count
    #task <fingerprint>        (optional)
    <k rows of n symbols>      one block per code, each followed by a blank line
    #complete | #partial

Symbols are field element indices, one character each.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .code import LinearCode, from_generator_matrix, to_systematic_generator_matrix


class ArchiveError(ValueError):
    pass


@dataclass
class CodeArchive:
    q: int
    n: int
    k: int
    matrices: list[np.ndarray]
    complete: bool = True
    task: str | None = None
    _codes: list[LinearCode] | None = field(default=None, repr=False)

    @classmethod
    def from_codes(cls, q: int, n: int, k: int, codes: Iterable[LinearCode], complete: bool = True, task: str | None = None) -> "CodeArchive":
        codes = list(codes)
        for c in codes:
            if (c.q, c.n, c.k) != (q, n, k):
                raise ArchiveError(f"code with q={c.q} n={c.n} k={c.k} in a [{n},{k}]_{q} archive")
        arc = cls(q, n, k, [to_systematic_generator_matrix(c) for c in codes], complete, task)
        arc._codes = codes
        return arc

    @property
    def codes(self) -> list[LinearCode]:
        if self._codes is None:
            self._codes = [from_generator_matrix(m, self.q) for m in self.matrices]
        return self._codes

    def dumps(self) -> str:
        lines = [f"{self.q} {self.n} {self.k} {len(self.matrices)}"]
        if self.task:
            lines.append(f"#task {self.task}")
        for m in self.matrices:
            lines.extend("".join(str(int(a)) for a in row) for row in m)
            lines.append("")
        lines.append("#complete" if self.complete else "#partial")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "CodeArchive":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines:
            raise ArchiveError("empty archive")
        try:
            q, n, k, count = (int(x) for x in lines[0].split())
        except ValueError as exc:
            raise ArchiveError(f"bad header {lines[0]!r}") from exc
        pos = 1
        task = None
        if pos < len(lines) and lines[pos].startswith("#task "):
            task = lines[pos][6:].strip()
            pos += 1
        if lines[-1] not in ("#complete", "#partial"):
            raise ArchiveError("missing #complete/#partial footer")
        complete = lines[-1] == "#complete"
        body = lines[pos:-1]
        matrices = []
        i = 0
        while i < len(body):
            block = body[i : i + k]
            if len(block) != k or any(len(row) != n for row in block):
                raise ArchiveError(f"malformed matrix at body line {i + 1}")
            m = np.array([[int(ch) for ch in row] for row in block], dtype=np.int64)
            if m.max(initial=0) >= q:
                raise ArchiveError(f"symbol out of range for q={q}")
            matrices.append(m)
            i += k
            if i < len(body):
                if body[i] != "":
                    raise ArchiveError(f"expected blank line at body line {i + 1}")
                i += 1
            else:
                raise ArchiveError("missing blank line after last matrix")
        if len(matrices) != count:
            raise ArchiveError(f"header announces {count} codes, found {len(matrices)}")
        return cls(q, n, k, matrices, complete, task)

    def save(self, path: str | Path) -> None:
        """Write atomically: a partially written file is never visible."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        with os.fdopen(fd, "w", newline="\n", encoding="ascii") as fh:
            fh.write(self.dumps())
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: str | Path) -> "CodeArchive":
        return cls.loads(Path(path).read_text(encoding="ascii"))


def cell_path(out_dir: str | Path, n: int, k: int, pool: bool = False) -> Path:
    suffix = ".pool.txt" if pool else ".txt"
    return Path(out_dir) / f"n{n:03d}_k{k:02d}{suffix}"


def save_dimension(out_dir, task, k: int, pool: dict, partial: set) -> None:
    """Write every cell of dimension ``k``: reported codes, and the full
    working population when it holds more than that."""
    fp = task.fingerprint()
    for n in range(k, task.n_max + 1):
        codes = pool.get((n, k), [])
        done = (n, k) not in partial
        reported = [c for c in codes if task.reports(c)]
        CodeArchive.from_codes(task.q, n, k, reported, done, fp).save(cell_path(out_dir, n, k))
        extra = cell_path(out_dir, n, k, pool=True)
        if len(reported) != len(codes):
            CodeArchive.from_codes(task.q, n, k, codes, done, fp).save(extra)
        elif extra.exists():
            extra.unlink()
    marker = Path(out_dir) / f"dimension_{k:02d}.done"
    marker.write_text(fp + "\n", encoding="ascii")


def load_dimension(out_dir, task, k: int):
    """Population of dimension ``k`` from a previous run of the same task, or None."""
    fp = task.fingerprint()
    marker = Path(out_dir) / f"dimension_{k:02d}.done"
    if not marker.exists() or marker.read_text(encoding="ascii").strip() != fp:
        return None
    pool, partial = {}, set()
    for n in range(k, task.n_max + 1):
        path = cell_path(out_dir, n, k, pool=True)
        if not path.exists():
            path = cell_path(out_dir, n, k)
        if not path.exists():
            return None
        arc = CodeArchive.load(path)
        if arc.task != fp:
            return None
        if arc.matrices:
            pool[(n, k)] = arc.codes
        if not arc.complete:
            partial.add((n, k))
    return pool, partial


def format_count_rows(cells: Sequence[tuple[int, int, int, bool]]) -> str:
    """Machine-readable ``n<TAB>k<TAB>count<TAB>complete`` rows."""
    lines = ["n\tk\tcount\tcomplete"]
    lines += [f"{n}\t{k}\t{c}\t{'yes' if ok else 'no'}" for n, k, c, ok in cells]
    return "\n".join(lines) + "\n"


def format_table(rows: dict[int, list[int]]) -> str:
    """Aligned rows ``n: N(n,1) N(n,2) ...``."""
    if not rows:
        return ""
    width = len(str(max(rows)))
    return "".join(f"{n:>{width}}: {' '.join(str(c) for c in counts)}\n" for n, counts in sorted(rows.items()))
