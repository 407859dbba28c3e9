"""Orthogonalisation of the overlap metric and exact diagonalisation.

``canonical_orthogonalize`` turns the generalised problem ``H c = E O c``
into an ordinary symmetric one, ``Hp x = E x`` with ``Hp = U^T H U`` and
``U^T O U = I``.  With ``mode="canonical"`` the columns of ``U`` are the
overlap eigenvectors scaled by ``lambda^-1/2`` (largest eigenvalue first);
``mode="symmetric"`` uses ``O^-1/2`` instead.

Exponential bases are very nearly linearly dependent: overlap eigenvalue
ratios of 1e-18 and below are normal.  Double precision cannot resolve
them, so the extended path (double-double matrices, 128-bit eigensolve)
is what production runs should use.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath
import numpy as np

from ._dd import DD, dd_matmul, from_mp_matrix, to_mp_matrix

DOUBLE_FLOOR = 1e-12
EXTENDED_FLOOR = 1e-28
_MP_PREC = 128


class NearSingularOverlapError(ArithmeticError):
    def __init__(self, count: int, ratio: float, floor: float):
        self.count = count
        self.ratio = ratio
        super().__init__(
            f"{count} overlap eigenvalue(s) at or below {floor:.1e} * lambda_max "
            f"(smallest ratio {ratio:.3e}); draw a new basis with another seed "
            "or use the extended precision path"
        )


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of every column positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


@dataclass
class OrthoResult:
    U: np.ndarray
    lam: np.ndarray
    Hp: np.ndarray
    condition: float
    residual: float
    mode: str = "canonical"
    precision: str = "double"
    _U_ext: DD | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.Hp.shape[0]

    def transform(self, M) -> np.ndarray:
        """``U^T M U`` rounded to double; uses the extended U when available."""
        if self._U_ext is not None:
            Mx = M if isinstance(M, DD) else DD(np.asarray(M, dtype=float))
            out = dd_matmul(dd_matmul(self._U_ext.T, Mx), self._U_ext).to_float()
        else:
            Mf = M.to_float() if isinstance(M, DD) else np.asarray(M, dtype=float)
            out = self.U.T @ Mf @ self.U
        return (out + out.T) / 2


def canonical_orthogonalize(H, O, mode: str = "canonical", floor: float | None = None) -> OrthoResult:
    """Orthogonalise the overlap metric.

    ``H`` and ``O`` may be float arrays (double path) or ``DD`` arrays
    (extended path).  Raises :class:`NearSingularOverlapError` when any
    overlap eigenvalue falls at or below ``floor * lambda_max``.
    """
    if mode not in ("canonical", "symmetric"):
        raise ValueError("mode must be 'canonical' or 'symmetric'")
    extended = isinstance(O, DD)
    if floor is None:
        floor = EXTENDED_FLOOR if extended else DOUBLE_FLOOR
    n = O.shape[0]
    if n < 1 or O.shape != (n, n) or H.shape != (n, n):
        raise ValueError("H and O must be square matrices of equal size")

    if extended:
        with mpmath.workprec(_MP_PREC):
            Om = to_mp_matrix(O)
            E, Q = mpmath.eigsy(Om)
            lam_mp = [E[i] for i in range(n)]
            order = sorted(range(n), key=lambda i: -lam_mp[i])
            lam_mp = [lam_mp[i] for i in order]
            Qs = mpmath.matrix(n, n)
            for c, i in enumerate(order):
                for r in range(n):
                    Qs[r, c] = Q[r, i]
            lam = np.array([float(x) for x in lam_mp])
            _check_floor(lam, floor)
            qf = np.array([[float(Qs[r, c]) for c in range(n)] for r in range(n)])
            signs = np.sign(qf[np.argmax(np.abs(qf), axis=0), np.arange(n)])
            signs[signs == 0] = 1.0
            scale = mpmath.matrix(n, n)
            for c in range(n):
                scale[c, c] = int(signs[c]) / mpmath.sqrt(lam_mp[c])
            Um = Qs * scale
            if mode == "symmetric":
                Um = Um * Qs.T
            U_dd = from_mp_matrix(Um)
        Hp = dd_matmul(dd_matmul(U_dd.T, H), U_dd).to_float()
        res = dd_matmul(dd_matmul(U_dd.T, O), U_dd)
        res = res - DD(np.eye(n))
        residual = float(np.abs(res.to_float()).max())
        U = U_dd.to_float()
    else:
        O = np.asarray(O, dtype=float)
        H = np.asarray(H, dtype=float)
        lam, D = np.linalg.eigh(O)
        order = np.argsort(-lam, kind="stable")  # keeps ties in eigensolver order
        lam, D = lam[order], D[:, order]
        _check_floor(lam, floor)
        D = _fix_signs(D)
        U = D / np.sqrt(lam)
        if mode == "symmetric":
            U = U @ D.T
        Hp = U.T @ H @ U
        residual = float(np.abs(U.T @ O @ U - np.eye(n)).max())
        U_dd = None
    Hp = (Hp + Hp.T) / 2
    return OrthoResult(U, lam, Hp, float(lam[0] / lam[-1]), residual, mode,
                       "extended" if extended else "double", U_dd)


def _check_floor(lam: np.ndarray, floor: float) -> None:
    bad = lam <= floor * lam[0]
    if bad.any():
        raise NearSingularOverlapError(int(bad.sum()), float(lam[-1] / lam[0]), floor)


@dataclass
class GroundSolution:
    energy: float
    vector: np.ndarray
    full_spectrum: np.ndarray | None = None


def solve_ground(Hp: np.ndarray) -> GroundSolution:
    """Lowest eigenpair of a symmetric matrix (largest |component| made positive)."""
    Hp = np.asarray(Hp, dtype=float)
    w, v = np.linalg.eigh(Hp)
    vec = _fix_signs(v[:, :1])[:, 0]
    vec = vec / np.linalg.norm(vec)
    return GroundSolution(float(w[0]), vec, w)


def classical_delta(solution: GroundSolution, Dp: np.ndarray) -> float:
    """``c^T Dp c`` for the ground vector, summed as 2 sum_{i>j} + diagonal."""
    c = solution.vector
    Dp = np.asarray(Dp, dtype=float)
    if Dp.shape != (c.size, c.size):
        raise ValueError(f"delta matrix shape {Dp.shape} does not match vector length {c.size}")
    lower = np.tril(np.outer(c, c) * Dp, k=-1).sum()
    return float(2.0 * lower + np.sum(c * c * np.diag(Dp)))
