"""Explicitly correlated exponential basis sets.

Each basis function is the real or imaginary part of
``exp(-alpha r1 - beta r2 - gamma R)`` with complex exponents, optionally
symmetrised under r1 <-> r2.  Exponents are drawn uniformly inside interval
subsets; every drawn triple contributes two functions (Re, then Im).

Random numbers come from numpy's PCG64 bit generator seeded with
``SeedSequence([seed, subset_index])``, so every subset has its own stream
and a basis is fully determined by ``(subsets, seed)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import data

MAX_RETRIES = 1000


class BasisSizeError(ValueError):
    pass


class BasisGenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class IntervalSubset:
    """Six closed intervals (Re/Im of alpha, beta, gamma) and a function count."""

    bounds: tuple[tuple[float, float], ...]
    count: int

    def __post_init__(self):
        if len(self.bounds) != 6:
            raise ValueError("an interval subset needs exactly six (lo, hi) bounds")
        for lo, hi in self.bounds:
            if not lo <= hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
        if self.count < 2 or self.count % 2:
            raise ValueError(f"subset count must be even and >= 2, got {self.count}")

    @property
    def lows(self) -> np.ndarray:
        return np.array([b[0] for b in self.bounds], dtype=float)

    @property
    def highs(self) -> np.ndarray:
        return np.array([b[1] for b in self.bounds], dtype=float)

    def to_row(self) -> list[float]:
        """The 13-number config row: 12 bounds then the count."""
        return [x for b in self.bounds for x in b] + [self.count]

    @classmethod
    def from_row(cls, row: Sequence[float]) -> "IntervalSubset":
        if len(row) != 13:
            raise ValueError("an interval row has 12 bounds followed by a count")
        bounds = tuple((float(row[2 * k]), float(row[2 * k + 1])) for k in range(6))
        return cls(bounds, int(row[12]))


@dataclass(frozen=True)
class BasisFunction:
    alpha: complex
    beta: complex
    gamma: complex
    part: str = "Re"
    symmetrized: bool = False
    sym_sign: int = 1

    def __post_init__(self):
        if self.part not in ("Re", "Im"):
            raise ValueError(f"part must be 'Re' or 'Im', got {self.part!r}")
        if self.sym_sign not in (1, -1):
            raise ValueError("sym_sign must be +1 or -1")

    @property
    def exponents(self) -> tuple[complex, complex, complex]:
        return (self.alpha, self.beta, self.gamma)

    def is_valid(self) -> bool:
        a, b, g = (complex(x) for x in self.exponents)
        if not (a.real + b.real > 0 and b.real + g.real > 0 and g.real + a.real > 0):
            return False
        if self.part == "Im" and a.imag == 0 and b.imag == 0 and g.imag == 0:
            return False
        return True


def exchange(fn: BasisFunction) -> BasisFunction:
    """Image of ``fn`` under r1 <-> r2 (swaps alpha and beta)."""
    return BasisFunction(fn.beta, fn.alpha, fn.gamma, fn.part, fn.symmetrized, fn.sym_sign)


@dataclass(frozen=True)
class BasisSet:
    functions: tuple[BasisFunction, ...]
    seed: int
    subsets: tuple[IntervalSubset, ...] = ()
    subset_index: tuple[int, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.functions)

    @property
    def n_qubits(self) -> int:
        return int(len(self.functions)).bit_length() - 1

    @property
    def symmetrized(self) -> bool:
        return bool(self.functions) and self.functions[0].symmetrized

    def exponent_array(self) -> np.ndarray:
        """Complex array of shape (N, 3)."""
        return np.array([fn.exponents for fn in self.functions], dtype=np.complex128)

    def parts(self) -> np.ndarray:
        """Boolean array, True where a function is an Im part."""
        return np.array([fn.part == "Im" for fn in self.functions])

    def to_json(self) -> str:
        def c(z: complex) -> list[float]:
            return [float(f"{z.real:.17g}"), float(f"{z.imag:.17g}")]

        doc = {
            "seed": self.seed,
            "symmetrized": self.symmetrized,
            "subsets": [s.to_row() for s in self.subsets],
            "functions": [
                {"alpha": c(f.alpha), "beta": c(f.beta), "gamma": c(f.gamma),
                 "part": f.part, "subset": k}
                for f, k in zip(self.functions, self.subset_index or [0] * len(self.functions))
            ],
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "BasisSet":
        doc = json.loads(text)
        sym = bool(doc.get("symmetrized", False))
        fns, idx = [], []
        for f in doc["functions"]:
            fns.append(BasisFunction(complex(*f["alpha"]), complex(*f["beta"]),
                                     complex(*f["gamma"]), f["part"], sym))
            idx.append(int(f.get("subset", 0)))
        subsets = tuple(IntervalSubset.from_row(r) for r in doc.get("subsets", []))
        return cls(tuple(fns), int(doc.get("seed", 0)), subsets, tuple(idx))


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def subset_rng(seed: int, subset_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, subset_index])))


def generate_basis(subsets: Sequence[IntervalSubset], seed: int,
                   symmetrized: bool) -> BasisSet:
    """Draw a basis set; see the module docstring for the sampling scheme."""
    total = sum(s.count for s in subsets)
    if not _is_power_of_two(total):
        raise BasisSizeError(f"total function count {total} is not a power of two")
    if seed < 0 or seed >= 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")

    functions: list[BasisFunction] = []
    index: list[int] = []
    for k, subset in enumerate(subsets):
        rng = subset_rng(seed, k)
        lo, hi = subset.lows, subset.highs
        for _ in range(subset.count // 2):
            for _attempt in range(MAX_RETRIES):
                x = rng.uniform(lo, hi)
                a, b, g = complex(x[0], x[1]), complex(x[2], x[3]), complex(x[4], x[5])
                pair = (BasisFunction(a, b, g, "Re", symmetrized),
                        BasisFunction(a, b, g, "Im", symmetrized))
                if all(f.is_valid() for f in pair):
                    break
            else:
                raise BasisGenerationError(
                    f"subset {k}: no valid exponent triple after {MAX_RETRIES} draws "
                    "(degenerate imaginary parts or non-convergent real parts)"
                )
            functions.extend(pair)
            index.extend((k, k))
    return BasisSet(tuple(functions), seed, tuple(subsets), tuple(index))


def check_pairwise(basis: BasisSet) -> bool:
    """True when every pair (including exchange images) gives convergent integrals."""
    w = basis.exponent_array().real
    images = [w]
    if basis.symmetrized:
        images.append(w[:, [1, 0, 2]])
    for wi in images:
        for wj in images:
            s = wi[:, None, :] + wj[None, :, :]
            if not ((s[..., 0] + s[..., 1] > 0).all() and (s[..., 1] + s[..., 2] > 0).all()
                    and (s[..., 2] + s[..., 0] > 0).all()):
                return False
    return True


def preset_subsets(system: str, n_functions: int) -> list[IntervalSubset]:
    try:
        rows = data.INTERVAL_TABLES[(system, n_functions)]
    except KeyError:
        have = sorted(n for (s, n) in data.INTERVAL_TABLES if s == system)
        raise BasisSizeError(
            f"no interval table for {system!r} with N={n_functions}; available N: {have}"
        ) from None
    return [IntervalSubset(tuple(r[:6]), r[6]) for r in rows]
