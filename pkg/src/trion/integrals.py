"""Analytic matrix elements over explicitly correlated exponentials.

All S-state integrals reduce to the family

    Gamma(l, m, n) = int r1^l r2^m R^n exp(-a r1 - b r2 - g R) dR dr2 dr1

over the triangle domain |r1 - r2| <= R <= r1 + r2.  The base integral is
``2 / ((a+b)(b+g)(g+a))``; higher indices follow by differentiating with
respect to the exponents, which acts on a term set
``{(p, q, s): coeff}`` meaning ``sum coeff (a+b)^-p (b+g)^-q (g+a)^-s``.
The full six-dimensional volume element contributes a factor 8 pi^2
together with the weight r1 r2 R.

Products of Re/Im parts are written through the complex bilinear values
``K(u, v)`` and ``K(u, conj v)`` of the underlying exponentials.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from ._dd import DD, DDComplex, PI, PI2
from .basis import BasisFunction, BasisSet
from .systems import KineticCoefficients, ThreeBodySystem, kinetic_coefficients

MAX_ORDER = 6

# Gamma indices needed by overlap, kinetic and potential elements
_KERNEL_INDICES = (
    (1, 1, 1),
    (0, 3, 0), (2, 1, 0), (0, 1, 2),
    (1, 2, 0), (3, 0, 0), (1, 0, 2),
    (2, 0, 1), (0, 2, 1), (0, 0, 3),
    (0, 1, 1), (1, 0, 1), (1, 1, 0),
)


class DivergentIntegralError(ArithmeticError):
    pass


class UnsupportedOrderError(ValueError):
    pass


@lru_cache(maxsize=None)
def gamma_terms(l: int, m: int, n: int) -> dict[tuple[int, int, int], int]:
    """Term set of Gamma(l, m, n) as ``{(p, q, s): integer coefficient}``.

    -d/da maps (p,q,s) -> p (p+1,q,s) + s (p,q,s+1); -d/db increments p
    and q; -d/dg increments q and s.
    """
    if min(l, m, n) < 0:
        raise ValueError("Gamma indices must be non-negative")
    if (l, m, n) == (0, 0, 0):
        return {(1, 1, 1): 2}
    out: defaultdict[tuple[int, int, int], int] = defaultdict(int)
    if l > 0:
        for (p, q, s), c in gamma_terms(l - 1, m, n).items():
            out[(p + 1, q, s)] += c * p
            out[(p, q, s + 1)] += c * s
    elif m > 0:
        for (p, q, s), c in gamma_terms(l, m - 1, n).items():
            out[(p + 1, q, s)] += c * p
            out[(p, q + 1, s)] += c * q
    else:
        for (p, q, s), c in gamma_terms(l, m, n - 1).items():
            out[(p, q + 1, s)] += c * q
            out[(p, q, s + 1)] += c * s
    return {k: v for k, v in out.items() if v}


def _neumaier(values: Sequence[np.ndarray]) -> np.ndarray:
    total = np.zeros_like(values[0])
    comp = np.zeros_like(values[0])
    for v in values:
        t = total + v
        big = np.abs(total) >= np.abs(v)
        comp = comp + np.where(big, (total - t) + v, (v - t) + total)
        total = t
    return total + comp


def _check_convergent(a, b, g) -> None:
    ab, bg, ga = np.real(a + b), np.real(b + g), np.real(g + a)
    if not (np.all(ab > 0) and np.all(bg > 0) and np.all(ga > 0)):
        raise DivergentIntegralError("pair-sum real parts must be positive for a convergent integral")


def gamma(l: int, m: int, n: int, alpha, beta, gamma_):
    """Gamma(l, m, n) for complex exponents (scalars or broadcastable arrays)."""
    if max(l, m, n) > MAX_ORDER:
        raise UnsupportedOrderError(f"Gamma indices above {MAX_ORDER} are not supported")
    a = np.asarray(alpha, dtype=np.complex128)
    b = np.asarray(beta, dtype=np.complex128)
    g = np.asarray(gamma_, dtype=np.complex128)
    _check_convergent(a, b, g)
    x, y, z = 1.0 / (a + b), 1.0 / (b + g), 1.0 / (g + a)
    terms = [c * x**p * y**q * z**s for (p, q, s), c in gamma_terms(l, m, n).items()]
    re = _neumaier([np.real(t) for t in terms])
    im = _neumaier([np.imag(t) for t in terms])
    out = re + 1j * im
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# precision-generic pair kernels

def _powers(x, top: int) -> list:
    out = [None, x]
    for _ in range(top - 1):
        out.append(out[-1] * x)
    return out


def _gamma_table(A, B, G, indices, extended: bool) -> dict:
    terms = {idx: gamma_terms(*idx) for idx in indices}
    top = max(max(k) for t in terms.values() for k in t)
    xp = _powers(1 / (A + B), top)
    yp = _powers(1 / (B + G), top)
    zp = _powers(1 / (G + A), top)
    table = {}
    for idx, t in terms.items():
        vals = [c * (xp[p] * yp[q] * zp[s]) for (p, q, s), c in t.items()]
        if extended:
            acc = vals[0]
            for v in vals[1:]:
                acc = acc + v
        else:
            acc = _neumaier([np.real(v) for v in vals]) + 1j * _neumaier([np.imag(v) for v in vals])
        table[idx] = acc
    return table


def _pair_kernels(wi, wj, k: KineticCoefficients, extended: bool):
    """Complex bilinear overlap, Hamiltonian and delta values of two exponentials.

    ``wi``/``wj`` are (alpha, beta, gamma) triples of arrays.  Returns
    (S, H, D1, D2) with D1 = <delta(r1)>, D2 = <delta(r2)>.
    """
    ai, bi, gi = wi
    aj, bj, gj = wj
    A, B, G = ai + aj, bi + bj, gi + gj
    t = _gamma_table(A, B, G, _KERNEL_INDICES, extended)
    S = t[1, 1, 1]
    # r1 r2 R times r1^.R^, r2^.R^ and r1^.r2^
    q1 = (t[0, 3, 0] - t[2, 1, 0] - t[0, 1, 2]) * 0.5
    q2 = (t[1, 2, 0] - t[3, 0, 0] + t[1, 0, 2]) * 0.5
    q12 = (t[2, 0, 1] + t[0, 2, 1] - t[0, 0, 3]) * 0.5

    t11 = (ai * aj + gi * gj) * S - (ai * gj + gi * aj) * q1
    t22 = (bi * bj + gi * gj) * S + (bi * gj + gi * bj) * q2
    kin = t11 * k.inv_2m12 + t22 * k.inv_2m13
    if k.inv_m1 != 0.0:
        c_ij = ai * bj * q12 + ai * gj * q1 - gi * bj * q2 - gi * gj * S
        c_ji = aj * bi * q12 + aj * gi * q1 - gj * bi * q2 - gj * gi * S
        kin = kin + (c_ij + c_ji) * (0.5 * k.inv_m1)
    pot = t[0, 1, 1] * k.zz12 + t[1, 0, 1] * k.zz13 + t[1, 1, 0] * k.zz23

    if extended:
        vol, d_fac = PI2 * 8.0, PI * 8.0
    else:
        vol, d_fac = 8.0 * np.pi**2, 8.0 * np.pi
    bg, ag = B + G, A + G
    D1 = d_fac / (bg * bg * bg)
    D2 = d_fac / (ag * ag * ag)
    return S * vol, (kin + pot) * vol, D1, D2


def _combine(P, Q, im_i: np.ndarray, im_j: np.ndarray, extended: bool):
    """Real element for Re/Im selectors from K(u,v)=P and K(u,conj v)=Q."""
    rr = (Q.real + P.real) * 0.5
    ii = (Q.real - P.real) * 0.5
    ri = (P.imag - Q.imag) * 0.5
    ir = (P.imag + Q.imag) * 0.5
    mi, mj = np.broadcast_arrays(im_i, im_j)

    def pick(a, b, c, d):
        return np.where(~mi & ~mj, a, np.where(mi & mj, b, np.where(~mi & mj, c, d)))

    if extended:
        return DD(pick(rr.hi, ii.hi, ri.hi, ir.hi), pick(rr.lo, ii.lo, ri.lo, ir.lo))
    return pick(rr, ii, ri, ir)


def _swap(w):
    a, b, g = w
    return (b, a, g)


def _conj(w):
    return tuple(x.conj() for x in w)


def _summed_kernels(wi, wj, sym_i, sym_j, sign, coeffs, extended):
    """Image-summed complex kernels ([P...], [Q...]) with P = K(u, v), Q = K(u, conj v)."""
    images_i = [(wi, 1.0)] + ([(_swap(wi), sign)] if sym_i else [])
    images_j = [(wj, 1.0)] + ([(_swap(wj), sign)] if sym_j else [])
    P_tot = Q_tot = None
    for vi, si in images_i:
        for vj, sj in images_j:
            P = _pair_kernels(vi, vj, coeffs, extended)
            Q = _pair_kernels(vi, _conj(vj), coeffs, extended)
            s = si * sj
            if s != 1.0:
                P = [x * s for x in P]
                Q = [x * s for x in Q]
            if P_tot is None:
                P_tot, Q_tot = list(P), list(Q)
            else:
                P_tot = [a + b for a, b in zip(P_tot, P)]
                Q_tot = [a + b for a, b in zip(Q_tot, Q)]
    return P_tot, Q_tot


def _single(fi: BasisFunction, fj: BasisFunction, coeffs: KineticCoefficients):
    wi = tuple(np.asarray(x, dtype=np.complex128) for x in fi.exponents)
    wj = tuple(np.asarray(x, dtype=np.complex128) for x in fj.exponents)
    for ei in ([wi, _swap(wi)] if fi.symmetrized else [wi]):
        for ej in ([wj, _swap(wj)] if fj.symmetrized else [wj]):
            _check_convergent(*(x + y for x, y in zip(ei, ej)))
    P, Q = _summed_kernels(wi, wj, fi.symmetrized, fj.symmetrized, fi.sym_sign, coeffs, False)
    im_i, im_j = np.asarray(fi.part == "Im"), np.asarray(fj.part == "Im")
    return [float(_combine(p, q, im_i, im_j, False)) for p, q in zip(P, Q)]


_UNIT = KineticCoefficients(0.5, 0.5, 0.0, 0.0, 0.0, 0.0)


def overlap_element(fi: BasisFunction, fj: BasisFunction) -> float:
    return _single(fi, fj, _UNIT)[0]


def hamiltonian_element(fi: BasisFunction, fj: BasisFunction, coeffs: KineticCoefficients) -> float:
    return _single(fi, fj, coeffs)[1]


def delta_element(fi: BasisFunction, fj: BasisFunction, which: str = "r1") -> float:
    if which not in ("r1", "r2"):
        raise ValueError("which must be 'r1' or 'r2'")
    return _single(fi, fj, _UNIT)[2 if which == "r1" else 3]


# ---------------------------------------------------------------------------
# matrix assembly

@dataclass
class Matrices:
    """Hamiltonian, overlap and delta matrices in the raw (non-orthogonal) basis.

    In the extended path each entry is a ``DD`` array; ``float()`` views
    are available through :meth:`as_float`.
    """

    H: np.ndarray | DD
    O: np.ndarray | DD
    D1: np.ndarray | DD
    D2: np.ndarray | DD
    precision: str = "double"

    @property
    def n(self) -> int:
        return self.H.shape[0]

    def as_float(self) -> "Matrices":
        if self.precision == "double":
            return self
        return Matrices(*(m.to_float() for m in (self.H, self.O, self.D1, self.D2)), precision="double")


def _symmetrize(m, extended: bool):
    if extended:
        return (m + m.T) * 0.5
    return (m + m.T) / 2


def build_matrices(basis: BasisSet, system: ThreeBodySystem, precision: str = "double") -> Matrices:
    """Fill H, O, D1 = delta(r1), D2 = delta(r2) for a basis set."""
    if precision not in ("double", "extended"):
        raise ValueError("precision must be 'double' or 'extended'")
    extended = precision == "extended"
    coeffs = kinetic_coefficients(system)
    w = basis.exponent_array()
    parts = basis.parts()
    sym = basis.symmetrized
    sign = basis.functions[0].sym_sign if basis.functions else 1

    # evaluate kernels once per distinct exponent triple
    uniq, inv = np.unique(w, axis=0, return_inverse=True)
    inv = np.asarray(inv).reshape(-1)
    re = uniq.real
    s = re[:, None, :] + re[None, :, :]
    checks = [s]
    if sym:
        sw = re[:, [1, 0, 2]]
        checks += [sw[:, None, :] + re[None, :, :], re[:, None, :] + sw[None, :, :], sw[:, None, :] + sw[None, :, :]]
    for c in checks:
        bad = (c[..., 0] + c[..., 1] <= 0) | (c[..., 1] + c[..., 2] <= 0) | (c[..., 2] + c[..., 0] <= 0)
        if bad.any():
            ui, uj = np.argwhere(bad)[0]
            i = int(np.flatnonzero(inv == ui)[0])
            j = int(np.flatnonzero(inv == uj)[0])
            raise DivergentIntegralError(f"divergent integral for basis pair ({i}, {j})")

    def cols(arr):
        if extended:
            return tuple(DDComplex.from_complex(arr[:, k]) for k in range(3))
        return tuple(arr[:, k] for k in range(3))

    u = cols(uniq)
    ui = tuple(x[:, None] for x in u)
    uj = tuple(x[None, :] for x in u)
    P, Q = _summed_kernels(ui, uj, sym, sym, sign, coeffs, extended)
    rows, cols_ = inv[:, None], inv[None, :]
    mi, mj = parts[:, None], parts[None, :]

    def gather(z):
        if extended:
            return DDComplex(DD(z.real.hi[rows, cols_], z.real.lo[rows, cols_]),
                             DD(z.imag.hi[rows, cols_], z.imag.lo[rows, cols_]))
        return z[rows, cols_]

    out = [_symmetrize(_combine(gather(p), gather(q), mi, mj, extended), extended)
           for p, q in zip(P, Q)]
    result = Matrices(*[out[1], out[0], out[2], out[3]], precision=precision)
    diag = np.diag(result.O.to_float() if extended else result.O)
    if not np.all(np.isfinite(diag)) or np.any(diag <= 0):
        bad = int(np.flatnonzero(~(diag > 0))[0])
        raise ArithmeticError(f"non-positive overlap diagonal at ({bad}, {bad})")
    return result
