"""End-to-end preparation of an orthonormal-basis Hamiltonian.

``prepare`` draws the basis, builds H, O and the two delta matrices,
orthogonalises and diagonalises.  The extended-precision build takes tens
of seconds at N=128, so results can be cached as ``.npz`` files keyed by a
hash of every input that affects them.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import data
from .basis import BasisSet, generate_basis, preset_subsets
from .integrals import build_matrices
from .spectra import GroundSolution, canonical_orthogonalize, classical_delta, solve_ground
from .systems import ThreeBodySystem, preset

DEFAULT_SEED = 100
CACHE_VERSION = 1


@dataclass
class HamiltonianBundle:
    system: ThreeBodySystem
    basis: BasisSet
    Hp: np.ndarray
    D1p: np.ndarray
    D2p: np.ndarray
    overlap_eigenvalues: np.ndarray
    residual: float
    precision: str
    ortho: str
    build_time_s: float = 0.0
    ground: GroundSolution = field(init=False)

    def __post_init__(self):
        self.ground = solve_ground(self.Hp)

    @property
    def n(self) -> int:
        return self.Hp.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.n.bit_length() - 1

    @property
    def condition(self) -> float:
        lam = self.overlap_eigenvalues
        return float(lam[0] / lam[-1])

    @property
    def exact_energy(self) -> float | None:
        return data.EXACT_ENERGIES.get(self.system.name)

    def deltas(self) -> tuple[float, float]:
        return classical_delta(self.ground, self.D1p), classical_delta(self.ground, self.D2p)

    def summary(self) -> dict:
        d1, d2 = self.deltas()
        exact = self.exact_energy
        return {
            "system": self.system.to_dict(),
            "n_functions": self.n,
            "n_qubits": self.n_qubits,
            "seed": self.basis.seed,
            "precision": self.precision,
            "ortho": self.ortho,
            "energy": self.ground.energy,
            "exact_reference": exact,
            "error_vs_exact": None if exact is None else self.ground.energy - exact,
            "overlap_condition": self.condition,
            "orthonormality_residual": self.residual,
            "delta_r1": d1,
            "delta_r2": d2,
        }


def cache_key(system: ThreeBodySystem, basis: BasisSet, precision: str, ortho: str) -> str:
    payload = json.dumps({"v": CACHE_VERSION, "system": system.to_dict(), "basis": basis.to_json(),
                          "precision": precision, "ortho": ortho}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:20]


def make_basis(system: ThreeBodySystem, n_functions: int, seed: int = DEFAULT_SEED,
               subsets=None) -> BasisSet:
    if subsets is None:
        subsets = preset_subsets(system.name, n_functions)
    return generate_basis(subsets, seed, system.symmetric_23)


def build_bundle(system: ThreeBodySystem, basis: BasisSet, precision: str = "extended",
                 ortho: str = "canonical", cache_dir=None) -> HamiltonianBundle:
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"{system.name}_{len(basis)}_{basis.seed}_{cache_key(system, basis, precision, ortho)}.npz"
        if path.exists():
            z = np.load(path)
            return HamiltonianBundle(system, basis, z["Hp"], z["D1p"], z["D2p"], z["lam"],
                                     float(z["residual"]), precision, ortho, float(z["build_time_s"]))
    t0 = time.perf_counter()
    mats = build_matrices(basis, system, precision=precision)
    res = canonical_orthogonalize(mats.H, mats.O, mode=ortho)
    D1p, D2p = res.transform(mats.D1), res.transform(mats.D2)
    elapsed = time.perf_counter() - t0
    bundle = HamiltonianBundle(system, basis, res.Hp, D1p, D2p, res.lam, res.residual,
                               precision, ortho, elapsed)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp.npz")
        np.savez(tmp, Hp=res.Hp, D1p=D1p, D2p=D2p, lam=res.lam, residual=res.residual,
                 build_time_s=elapsed)
        tmp.replace(path)
    return bundle


def prepare(system: str | ThreeBodySystem, n_functions: int = 128, seed: int = DEFAULT_SEED,
            precision: str = "extended", ortho: str = "canonical", cache_dir=None,
            subsets=None) -> HamiltonianBundle:
    """Basis, matrices, orthogonalisation and ground state for one system."""
    if isinstance(system, str):
        system = preset(system)
    basis = make_basis(system, n_functions, seed, subsets)
    return build_bundle(system, basis, precision, ortho, cache_dir)
