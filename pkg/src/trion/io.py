"""Plain-text matrix exchange and small CSV helpers.

Matrix files start with a header line ``N rows symmetric`` followed by the
upper triangle in row-major order, one number per line, 17 significant
digits.  The format is loss-free for doubles, so matrices computed
elsewhere (for instance in quadruple precision and rounded) can be injected.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np


class MatrixFormatError(ValueError):
    pass


def format_matrix(M: np.ndarray) -> str:
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if M.shape != (n, n):
        raise MatrixFormatError(f"expected a square matrix, got shape {M.shape}")
    iu = np.triu_indices(n)
    lines = [f"{n} rows symmetric"]
    lines += [f"{x:.17g}" for x in M[iu]]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty matrix file")
    head = lines[0].split()
    if len(head) != 3 or head[1:] != ["rows", "symmetric"]:
        raise MatrixFormatError(f"bad header {lines[0]!r}; expected 'N rows symmetric'")
    n = int(head[0])
    vals = [float(x) for ln in lines[1:] for x in ln.split()]
    if len(vals) != n * (n + 1) // 2:
        raise MatrixFormatError(f"expected {n * (n + 1) // 2} entries for N={n}, found {len(vals)}")
    M = np.zeros((n, n))
    M[np.triu_indices(n)] = vals
    return M + np.triu(M, 1).T


def write_matrix(path, M: np.ndarray) -> None:
    Path(path).write_text(format_matrix(M))


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def spectrum_csv(eigenvalues) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "eigenvalue"])
    for i, e in enumerate(eigenvalues):
        w.writerow([i, f"{e:.17g}"])
    return buf.getvalue()


def rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def dump_json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"
