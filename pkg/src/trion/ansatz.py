"""Minimal complete pool, layered disentangled ansatz and its simulation.

Pool operators are stored as Pauli strings ``P`` with odd Y-weight; the
generator is ``iP``, which is real antisymmetric, so every rotation
``exp(i theta P) = cos(theta) + sin(theta) iP`` keeps a real state real.

The ansatz applies ``k`` layers of the whole pool to ``|0...0>``.  Layer 1
acts first and, inside a layer, operators act in pool order.  Every
(layer, slot) pair owns its own parameter, stored flat as
``theta[m * len(pool) + l]``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .encoding import PauliString, commutator

MAX_CLOSURE_QUBITS = 5


class PoolError(ValueError):
    pass


@dataclass(frozen=True)
class McpPool:
    operators: tuple[PauliString, ...]
    n: int

    def __post_init__(self):
        for p in self.operators:
            if p.n != self.n:
                raise PoolError(f"operator {p.ops} does not act on {self.n} qubits")
            if p.y_count % 2 == 0:
                raise PoolError(f"operator {p.ops} has even Y-weight; i*P would not be real")

    def __len__(self) -> int:
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    def labels(self) -> list[str]:
        return ["i" + p.ops for p in self.operators]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["string", "weight", "cnot_cost"])
        for p in self.operators:
            w.writerow([p.ops, p.weight, string_cnot_cost(p)])
        return buf.getvalue()

    @classmethod
    def from_strings(cls, strings) -> "McpPool":
        ops = tuple(PauliString(s.strip().lstrip("i")) for s in strings if s.strip())
        if not ops:
            raise PoolError("empty pool")
        return cls(ops, ops[0].n)

    @classmethod
    def from_file(cls, path) -> "McpPool":
        """Read a user-supplied pool: one string per line, or a CSV with a ``string`` column."""
        with open(path) as fh:
            text = fh.read()
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if lines and lines[0].split(",")[0].strip() == "string":
            lines = [ln.split(",")[0] for ln in lines[1:]]
        return cls.from_strings(lines)


POOL_BASES = {
    # qubit 1 first: "IY" is iY2, "YI" is iY1, "YZ" is iZ2Y1
    "plain": ("IY", "YI"),
    "conditioned": ("YZ", "IY"),
}


def build_mcp(n: int, base: str = "plain") -> McpPool:
    """Recursive pool V_n = {Z_n V_{n-1}, iY_n, iY_{n-1}}, size 2n - 2.

    ``base="plain"`` starts from V_2 = {iY2, iY1}.  That pool reaches only a
    codimension-one set of real states (closure rank 2^n - 2), so
    ``base="conditioned"`` starts from V_2 = {iZ2Y1, iY2} instead, which is
    complete for every n checked.
    """
    if n < 2:
        raise PoolError("the pool needs at least two qubits")
    try:
        ops = list(POOL_BASES[base])
    except KeyError:
        raise PoolError(f"unknown pool base {base!r}; choose from {sorted(POOL_BASES)}") from None
    for m in range(3, n + 1):
        ops = [s + "Z" for s in ops]
        ops += ["I" * (m - 1) + "Y", "I" * (m - 2) + "YI"]
    return McpPool(tuple(PauliString(s) for s in ops), n)


def generator_matrix(p: PauliString) -> np.ndarray:
    """Dense real matrix of iP."""
    m = 1j * p.to_matrix()
    if np.abs(m.imag).max() > 0:
        raise PoolError(f"i*{p.ops} is not real")
    return m.real


def lie_closure_rank(pool: McpPool) -> int:
    """Dimension of {A psi0 : A in the Lie closure of the pool}.

    A pool can rotate every real n-qubit state exactly when this equals
    2^n - 1.  Uses dense matrices, so n is capped at MAX_CLOSURE_QUBITS.
    """
    if pool.n > MAX_CLOSURE_QUBITS:
        raise PoolError(f"dense closure limited to n <= {MAX_CLOSURE_QUBITS}")
    # every commutator of Pauli strings is again a Pauli string up to phase,
    # so the closure is spanned by a finite set of strings
    seen = {p.ops: p for p in pool}
    frontier = list(pool)
    while frontier:
        new = []
        for a in frontier:
            for b in list(seen.values()):
                c = commutator(a, b)
                if c is not None and c.ops not in seen:
                    # [iA, iB] = -2AB is real; keep the hermitian string c.ops with odd Y
                    seen[c.ops] = PauliString(c.ops)
                    new.append(seen[c.ops])
        frontier = new
    psi0 = np.zeros(2**pool.n)
    psi0[0] = 1.0
    cols = np.array([generator_matrix(p) @ psi0 for p in seen.values()])
    return int(np.linalg.matrix_rank(cols, tol=1e-10))


def string_cnot_cost(p: PauliString) -> int:
    """CNOT count of a staircase circuit for exp(i theta P)."""
    return max(2 * p.weight - 2, 0)


def cnot_cost(pool_or_ops, k: int = 1) -> int:
    """Total CNOT count of ``k`` layers of a pool (or of an explicit operator list)."""
    return k * sum(string_cnot_cost(p) for p in pool_or_ops)


class _Generator:
    """Index/sign tables so that (iP psi)[j] = sign[j] * psi[perm[j]]."""

    __slots__ = ("perm", "sign")

    def __init__(self, p: PauliString):
        if p.y_count % 2 == 0:
            raise PoolError(f"{p.ops} has even Y-weight; rotation would leave the real space")
        j = np.arange(2**p.n)
        src = j ^ p.x_mask
        parity = np.array([bin(v).count("1") & 1 for v in (src & p.z_mask)])
        s = (1j ** (p.y_count + 1)).real
        self.perm = src
        self.sign = s * (1.0 - 2.0 * parity)

    def apply(self, psi: np.ndarray) -> np.ndarray:
        return self.sign * psi[self.perm]


def apply_generator(psi: np.ndarray, p: PauliString) -> np.ndarray:
    return _Generator(p).apply(np.asarray(psi, dtype=float))


def apply_rotation(psi: np.ndarray, p: PauliString, theta: float) -> np.ndarray:
    """exp(i theta P) psi for an odd-Y string P."""
    psi = np.asarray(psi, dtype=float)
    return np.cos(theta) * psi + np.sin(theta) * _Generator(p).apply(psi)


def reference_state(n: int) -> np.ndarray:
    psi = np.zeros(2**n)
    psi[0] = 1.0
    return psi


@dataclass
class AnsatzConfig:
    k: int
    pool: McpPool
    init: str = "zeros"
    init_seed: int = 0
    init_scale: float = 1e-2

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need at least one layer")
        if self.init not in ("zeros", "uniform"):
            raise ValueError("init must be 'zeros' or 'uniform'")

    @property
    def n_params(self) -> int:
        return self.k * len(self.pool)

    @property
    def operators(self) -> list[PauliString]:
        return list(self.pool) * self.k

    def initial_theta(self) -> np.ndarray:
        if self.init == "zeros":
            return np.zeros(self.n_params)
        rng = np.random.default_rng(self.init_seed)
        return rng.uniform(-self.init_scale, self.init_scale, self.n_params)

    def to_json(self) -> str:
        return json.dumps({
            "n": self.pool.n, "k": self.k, "pool": [p.ops for p in self.pool],
            "init": self.init, "seed": self.init_seed, "n_params": self.n_params,
            "cnot_total": cnot_cost(self.pool, self.k),
        }, indent=1) + "\n"


@dataclass
class AnsatzSimulator:
    """Statevector simulation of an ordered product of pool rotations.

    ``operators`` is the flat list in application order.  Counters record
    how many energies and gradients were evaluated.
    """

    operators: list[PauliString]
    n: int
    eval_count: int = 0
    grad_count: int = 0
    _gens: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._gens = [_Generator(p) for p in self.operators]

    @classmethod
    def from_config(cls, config: AnsatzConfig) -> "AnsatzSimulator":
        return cls(config.operators, config.pool.n)

    def append(self, p: PauliString) -> None:
        self.operators.append(p)
        self._gens.append(_Generator(p))

    def _check(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (len(self._gens),):
            raise ValueError(f"expected {len(self._gens)} parameters, got shape {theta.shape}")
        return theta

    def state(self, theta) -> np.ndarray:
        theta = self._check(theta)
        psi = reference_state(self.n)
        for g, t in zip(self._gens, theta):
            psi = np.cos(t) * psi + np.sin(t) * g.apply(psi)
        return psi

    def energy(self, theta, H: np.ndarray) -> float:
        psi = self.state(theta)
        self.eval_count += 1
        return float(psi @ H @ psi)

    def energy_and_gradient(self, theta, H: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        """Energy, analytic gradient and final state in one forward and one reverse sweep."""
        theta = self._check(theta)
        psi = self.state(theta)
        lam = H @ psi
        energy = float(psi @ lam)
        grad = np.empty_like(theta)
        phi = psi.copy()
        for j in range(len(theta) - 1, -1, -1):
            g, c, s = self._gens[j], np.cos(theta[j]), np.sin(theta[j])
            grad[j] = 2.0 * (lam @ g.apply(phi))
            # undo rotation j on both sides: U^T = cos - sin iP
            phi = c * phi - s * g.apply(phi)
            lam = c * lam - s * g.apply(lam)
        self.eval_count += 1
        self.grad_count += 1
        return energy, grad, psi


def prepare_state(config: AnsatzConfig, theta) -> np.ndarray:
    return AnsatzSimulator.from_config(config).state(theta)


def energy_and_gradient(config: AnsatzConfig, theta, H: np.ndarray) -> tuple[float, np.ndarray]:
    e, g, _ = AnsatzSimulator.from_config(config).energy_and_gradient(theta, H)
    return e, g
