"""MacKay alist files and a small JSON sparse-row format for parity-check matrices.

alist layout (1-based indices, zero padding optional on input)::

    n m
    max_col_weight max_row_weight
    col weights (n numbers)
    row weights (m numbers)
    n lines: rows of each column
    m lines: columns of each row
"""

from __future__ import annotations

import json
from pathlib import Path

from .gf2 import SparseBinaryMatrix


class AlistError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def to_alist(H: SparseBinaryMatrix) -> str:
    cols = H.transpose()
    col_w = cols.row_weights()
    row_w = H.row_weights()
    max_c = int(col_w.max(initial=0))
    max_r = int(row_w.max(initial=0))

    def padded(idx, width):
        # an empty list still needs a visible 0, blank lines are skipped on input
        vals = [str(int(i) + 1) for i in idx] + ["0"] * (max(width, 1) - len(idx))
        return " ".join(vals)

    lines = [
        f"{H.n_cols} {H.n_rows}",
        f"{max_c} {max_r}",
        " ".join(map(str, col_w.tolist())),
        " ".join(map(str, row_w.tolist())),
    ]
    lines += [padded(cols.row(c), max_c) for c in range(H.n_cols)]
    lines += [padded(H.row(r), max_r) for r in range(H.n_rows)]
    return "\n".join(lines) + "\n"


def _ints(text: str, lineno: int) -> list[int]:
    try:
        return [int(t) for t in text.split()]
    except ValueError as exc:
        raise AlistError(f"expected integers, got {text.strip()!r}", lineno) from exc


def from_alist(text: str) -> SparseBinaryMatrix:
    # keep original line numbers while skipping blank lines
    lines = [(i + 1, ln) for i, ln in enumerate(text.splitlines()) if ln.strip()]
    it = iter(lines)

    def take(expected: int | None = None):
        try:
            lineno, ln = next(it)
        except StopIteration:
            raise AlistError("unexpected end of file", len(text.splitlines()) + 1) from None
        vals = _ints(ln, lineno)
        if expected is not None and len(vals) != expected:
            raise AlistError(f"expected {expected} values, found {len(vals)}", lineno)
        return lineno, vals

    ln0, (n, m) = take(2)
    if n <= 0 or m <= 0:
        raise AlistError("dimensions must be positive", ln0)
    _, (max_c, max_r) = take(2)
    ln_c, col_w = take(n)
    ln_r, row_w = take(m)
    if max(col_w) > max_c:
        raise AlistError("column weight above the declared maximum", ln_c)
    if max(row_w) > max_r:
        raise AlistError("row weight above the declared maximum", ln_r)

    def entries(count: int, weights: list[int], bound: int) -> list[list[int]]:
        out = []
        for j in range(count):
            lineno, vals = take()
            nz = [v for v in vals if v != 0]
            if len(nz) != weights[j]:
                raise AlistError(f"expected {weights[j]} nonzero entries, found {len(nz)}", lineno)
            bad = [v for v in nz if not 1 <= v <= bound]
            if bad:
                raise AlistError(f"index {bad[0]} outside 1..{bound}", lineno)
            if len(set(nz)) != len(nz):
                raise AlistError("repeated index", lineno)
            out.append([v - 1 for v in nz])
        return out

    col_lists = entries(n, col_w, m)
    row_lists = entries(m, row_w, n)
    H = SparseBinaryMatrix.from_rows(row_lists, n)
    from_cols = SparseBinaryMatrix.from_rows(col_lists, m)
    if not (H.transpose() == from_cols):
        raise AlistError("column lists and row lists describe different matrices")
    return H


def to_json_rows(H: SparseBinaryMatrix) -> str:
    return json.dumps(
        {"n_rows": H.n_rows, "n_cols": H.n_cols, "rows": [H.row(r).tolist() for r in range(H.n_rows)]}
    )


def from_json_rows(text: str) -> SparseBinaryMatrix:
    data = json.loads(text)
    return SparseBinaryMatrix.from_rows(data["rows"], int(data["n_cols"]))


def write_matrix(H: SparseBinaryMatrix, path, fmt: str = "alist") -> str:
    text = to_alist(H) if fmt == "alist" else to_json_rows(H)
    Path(path).write_text(text)
    return text


def read_matrix(path) -> SparseBinaryMatrix:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        return from_json_rows(text)
    return from_alist(text)
