"""Binary encoding of orthonormal-basis operators onto qubits.

Basis index ``i`` is stored in ``n = log2 N`` qubits with qubit 1 as the
least significant bit, so index 1 is the string ``10...0``.  Pauli strings
are written qubit 1 first: ``"ZYI"`` means Z on qubit 1, Y on qubit 2 and
the identity on qubit 3.  Their dense matrices are therefore
``kron(op_n, ..., op_1)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# a*b = phase * c for single-qubit Paulis
_PRODUCT = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
    ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
    ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
}

_PHASES = (1, 1j, -1, -1j)


class PauliLengthError(ValueError):
    pass


@dataclass(frozen=True)
class PauliString:
    ops: str
    phase: complex = 1

    def __post_init__(self):
        if any(c not in "IXYZ" for c in self.ops):
            raise ValueError(f"invalid Pauli string {self.ops!r}")
        ph = complex(self.phase)
        if not any(ph == p for p in _PHASES):
            raise ValueError(f"phase must be one of +1, +i, -1, -i, got {self.phase!r}")
        object.__setattr__(self, "phase", ph)

    @property
    def n(self) -> int:
        return len(self.ops)

    @property
    def weight(self) -> int:
        return sum(c != "I" for c in self.ops)

    @property
    def y_count(self) -> int:
        return self.ops.count("Y")

    @property
    def x_mask(self) -> int:
        return sum(1 << q for q, c in enumerate(self.ops) if c in "XY")

    @property
    def z_mask(self) -> int:
        return sum(1 << q for q, c in enumerate(self.ops) if c in "ZY")

    def to_matrix(self) -> np.ndarray:
        mats = [_SINGLE[c] for c in reversed(self.ops)]
        return self.phase * reduce(np.kron, mats, np.eye(1, dtype=complex))

    def label(self) -> str:
        prefix = {1: "", 1j: "i", -1: "-", -1j: "-i"}[self.phase]
        return prefix + self.ops

    def __str__(self) -> str:
        return self.label()

    @classmethod
    def single(cls, n: int, qubit: int, op: str) -> "PauliString":
        """``op`` on ``qubit`` (1-based), identity elsewhere."""
        s = ["I"] * n
        s[qubit - 1] = op
        return cls("".join(s))


def multiply(p: PauliString, q: PauliString) -> PauliString:
    if p.n != q.n:
        raise PauliLengthError(f"length mismatch: {p.n} vs {q.n}")
    phase = p.phase * q.phase
    out = []
    for a, b in zip(p.ops, q.ops):
        f, c = _PRODUCT[a, b]
        phase *= f
        out.append(c)
    return PauliString("".join(out), phase)


def anticommute(p: PauliString, q: PauliString) -> bool:
    if p.n != q.n:
        raise PauliLengthError(f"length mismatch: {p.n} vs {q.n}")
    clashes = sum(a != "I" and b != "I" and a != b for a, b in zip(p.ops, q.ops))
    return clashes % 2 == 1


def commutator(p: PauliString, q: PauliString) -> PauliString | None:
    """Return ``pq`` when p and q anticommute (then [p, q] = 2 pq), else None."""
    if not anticommute(p, q):
        return None
    return multiply(p, q)


def encode_index(i: int, n: int) -> str:
    """Bit string of basis index ``i``, qubit 1 (least significant) first."""
    if not 0 <= i < 2**n:
        raise IndexError(f"basis index {i} out of range for {n} qubits")
    return "".join(str((i >> q) & 1) for q in range(n))


def decode_index(bits: str) -> int:
    return sum(int(b) << q for q, b in enumerate(bits))


def projector_to_paulis(ket: int, bra: int) -> list[tuple[complex, str]]:
    """Expansion of ``|ket><bra|`` in single-qubit Paulis."""
    table = {
        (0, 0): [(0.5, "I"), (0.5, "Z")],
        (0, 1): [(0.5, "X"), (0.5j, "Y")],
        (1, 0): [(0.5, "X"), (-0.5j, "Y")],
        (1, 1): [(0.5, "I"), (-0.5, "Z")],
    }
    return table[int(ket), int(bra)]


PRUNE = 1e-14


@dataclass
class EncodedOperator:
    matrix: np.ndarray
    pauli_terms: dict[str, float] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.matrix.shape[0]).bit_length() - 1

    def reconstruct(self) -> np.ndarray:
        out = np.zeros(self.matrix.shape, dtype=complex)
        for s, c in self.pauli_terms.items():
            out += c * PauliString(s).to_matrix()
        return out.real

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["string", "coefficient"])
        for s, c in self.pauli_terms.items():
            w.writerow([s, f"{c:.17e}"])
        return buf.getvalue()


def _check_dim(matrix: np.ndarray) -> int:
    N = matrix.shape[0]
    if matrix.ndim != 2 or matrix.shape[1] != N or N < 2 or N & (N - 1):
        raise ValueError(f"matrix dimension {matrix.shape} is not a power of two")
    return N.bit_length() - 1


def _fwht(a: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard transform along the last axis (unnormalised)."""
    a = a.copy()
    n = a.shape[-1]
    h = 1
    while h < n:
        a = a.reshape(*a.shape[:-1], n // (2 * h), 2, h)
        x, y = a[..., 0, :].copy(), a[..., 1, :].copy()
        a[..., 0, :], a[..., 1, :] = x + y, x - y
        a = a.reshape(*a.shape[:-3], n)
        h *= 2
    return a


def _string_from_masks(x: int, z: int, n: int) -> str:
    table = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
    return "".join(table[(x >> q) & 1, (z >> q) & 1] for q in range(n))


def pauli_coefficients(matrix: np.ndarray) -> np.ndarray:
    """Dense array ``c[x_mask, z_mask] = Tr(P M) / 2^n`` (complex)."""
    n = _check_dim(matrix)
    N = 2**n
    j = np.arange(N)
    x = np.arange(N)[:, None]
    v = matrix[j[None, :], j[None, :] ^ x]  # v[x, j] = M[j, j^x]
    w = _fwht(v.astype(complex))  # sum_j (-1)^{|j & z|} v[x, j]
    ny = np.array([[bin(a & b).count("1") for b in range(N)] for a in range(N)])
    return (1j**ny) * w / N


def pauli_decompose(matrix: np.ndarray, prune: float = PRUNE) -> EncodedOperator:
    """Pauli expansion of a real symmetric 2^n x 2^n matrix."""
    matrix = np.asarray(matrix, dtype=float)
    n = _check_dim(matrix)
    c = pauli_coefficients(matrix)
    terms = {}
    for x, z in zip(*np.nonzero(np.abs(c) >= prune)):
        val = c[x, z]
        terms[_string_from_masks(int(x), int(z), n)] = float(val.real)
    return EncodedOperator(matrix, terms)


def pauli_decompose_projectors(matrix: np.ndarray, prune: float = PRUNE) -> dict[str, float]:
    """Slow route: expand every |i><j| into Pauli strings and accumulate.

    Cost grows as 8^n; intended for cross-checking at small n.
    """
    matrix = np.asarray(matrix, dtype=float)
    n = _check_dim(matrix)
    acc: dict[str, complex] = {}
    N = 2**n
    for i in range(N):
        for j in range(N):
            mij = matrix[i, j]
            if mij == 0.0:
                continue
            partial = [(complex(mij), "")]
            for q in range(n):
                exp = projector_to_paulis((i >> q) & 1, (j >> q) & 1)
                partial = [(c * e, s + op) for c, s in partial for e, op in exp]
            for c, s in partial:
                acc[s] = acc.get(s, 0) + c
    return {s: float(c.real) for s, c in acc.items() if abs(c) >= prune}
