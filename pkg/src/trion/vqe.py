"""Variational drivers: the layered disentangled ansatz and adaptive growth.

Both drivers minimise ``psi^T Hp psi`` with :func:`bfgs_minimize` and log
every objective evaluation (line-search probes included) to a
:class:`RunTrace`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .ansatz import AnsatzConfig, AnsatzSimulator, McpPool, _Generator, cnot_cost, reference_state
from .io import dump_json, rows_csv
from .optimize import OptimizeResult, OptimizerConfig, OptimizerFailure, bfgs_minimize
from .spectra import GroundSolution, solve_ground

__all__ = [
    "AdaptConfig", "OptimizerConfig", "OptimizerFailure", "RunTrace", "adapt_gradients",
    "bfgs_minimize", "fidelity", "observable_expectation", "run_adapt", "run_ni_ducc",
]

TRACE_COLUMNS = ("eval", "energy", "error_vs_diag", "error_vs_exact", "fidelity",
                 "grad_norm", "elapsed_s")


def _matrix(op) -> np.ndarray:
    return np.asarray(getattr(op, "matrix", op), dtype=float)


def fidelity(psi: np.ndarray, ground: GroundSolution) -> float:
    """|<psi|ground>|; the global sign is irrelevant."""
    psi = np.asarray(psi, dtype=float)
    if psi.shape != ground.vector.shape:
        raise ValueError(f"state length {psi.size} does not match ground vector {ground.vector.size}")
    return float(abs(psi @ ground.vector))


def observable_expectation(psi: np.ndarray, op) -> float:
    """psi^T M psi for a matrix or an EncodedOperator."""
    M = _matrix(op)
    psi = np.asarray(psi, dtype=float)
    if M.shape != (psi.size, psi.size):
        raise ValueError(f"operator shape {M.shape} does not match state length {psi.size}")
    return float(psi @ M @ psi)


@dataclass
class RunTrace:
    """Per-evaluation log plus a final summary.

    ``elapsed_s`` is recorded only when ``timed`` is set so that repeated
    runs write identical CSV files; wall time always goes to the summary.
    """

    label: str = ""
    records: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    iterations: list = field(default_factory=list)
    theta: np.ndarray | None = None
    psi: np.ndarray | None = None
    timed: bool = False

    def log(self, energy, e_diag, e_exact, fid, grad_norm, elapsed):
        self.records.append((len(self.records) + 1, energy, energy - e_diag,
                             energy - e_exact if e_exact is not None else math.nan,
                             fid, grad_norm, elapsed))

    @property
    def n_evals(self) -> int:
        return len(self.records)

    @property
    def final_error(self) -> float:
        return self.summary.get("error_vs_diag", math.nan)

    def to_csv(self) -> str:
        rows = []
        for ev, e, ed, ex, fid, gn, t in self.records:
            rows.append([ev, f"{e:.17g}", f"{ed:.6e}", f"{ex:.6e}", f"{fid:.17g}", f"{gn:.6e}",
                         f"{t:.3f}" if self.timed else ""])
        return rows_csv(TRACE_COLUMNS, rows)

    def iterations_csv(self) -> str:
        cols = ("iteration", "operator", "pool_index", "g", "energy", "error_vs_diag", "evals")
        rows = [[r["iteration"], r["operator"], r["pool_index"], f"{r['g']:.6e}",
                 f"{r['energy']:.17g}", f"{r['error_vs_diag']:.6e}", r["evals"]]
                for r in self.iterations]
        return rows_csv(cols, rows)

    def summary_json(self) -> str:
        return dump_json(self.summary)


def _references(Hp, ground, exact):
    if ground is None:
        ground = solve_ground(Hp)
    return ground, exact


def run_ni_ducc(Hp, config: AnsatzConfig, cfg: OptimizerConfig | None = None, *,
                ground: GroundSolution | None = None, exact: float | None = None,
                theta0=None, timed: bool = False, label: str = "") -> RunTrace:
    """Minimise the layered-ansatz energy from the configured initial point."""
    H = _matrix(Hp)
    cfg = cfg or OptimizerConfig()
    ground, exact = _references(H, ground, exact)
    sim = AnsatzSimulator.from_config(config)
    trace = RunTrace(label=label, timed=timed)
    t0 = time.perf_counter()

    def objective(theta):
        e, g, psi = sim.energy_and_gradient(theta, H)
        trace.log(e, ground.energy, exact, fidelity(psi, ground), float(np.linalg.norm(g)),
                  time.perf_counter() - t0)
        return e, g

    x0 = config.initial_theta() if theta0 is None else np.asarray(theta0, dtype=float)
    res = bfgs_minimize(objective, x0, cfg)
    trace.theta = res.x
    trace.psi = sim.state(res.x)
    trace.summary = _summary(trace, res, ground, exact, config.n_params,
                             cnot_cost(config.pool, config.k), time.perf_counter() - t0)
    trace.summary.update({"method": "ni-ducc", "k": config.k, "n_qubits": config.pool.n,
                          "init": config.init})
    return trace


def _summary(trace, res: OptimizeResult, ground, exact, n_params, cnots, wall):
    fid = fidelity(trace.psi, ground)
    return {
        "energy": res.fun,
        "ground_energy": ground.energy,
        "error_vs_diag": res.fun - ground.energy,
        "error_vs_exact": (res.fun - exact) if exact is not None else None,
        "exact_reference": exact,
        "fidelity": fid,
        "grad_norm": res.grad_norm,
        "converged": res.converged,
        "status": res.status,
        "n_params": n_params,
        "cnot_total": cnots,
        "function_evaluations": trace.n_evals,
        "bfgs_iterations": res.n_iter,
        "wall_time_s": round(wall, 3),
    }


def adapt_gradients(psi: np.ndarray, Hp, pool: McpPool) -> tuple[np.ndarray, float]:
    """g_j = |psi^T [H, A_j] psi| with A_j = iP_j, and their Euclidean norm.

    A_j is real antisymmetric, so psi^T [H, A_j] psi = 2 (H psi)^T (A_j psi).
    """
    H = _matrix(Hp)
    psi = np.asarray(psi, dtype=float)
    hpsi = H @ psi
    g = np.array([abs(2.0 * (hpsi @ _Generator(p).apply(psi))) for p in pool])
    return g, float(np.linalg.norm(g))


@dataclass
class AdaptConfig:
    epsilon: float = 1e-2
    max_operators: int = 400
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    max_total_evals: int = 500000

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_operators < 0:
            raise ValueError("max_operators must be non-negative")


def run_adapt(Hp, pool: McpPool, cfg: AdaptConfig | None = None, *,
              ground: GroundSolution | None = None, exact: float | None = None,
              timed: bool = False, label: str = "") -> RunTrace:
    """Grow the ansatz one pool operator at a time.

    Each outer step appends the operator with the largest |g_j| (lowest
    index on ties) with a zero parameter, then re-optimises all parameters
    from the previous optimum.  Evaluations accumulate across inner solves.
    """
    H = _matrix(Hp)
    cfg = cfg or AdaptConfig()
    ground, exact = _references(H, ground, exact)
    sim = AnsatzSimulator([], pool.n)
    trace = RunTrace(label=label, timed=timed)
    t0 = time.perf_counter()
    theta = np.zeros(0)
    psi = reference_state(pool.n)
    energy = float(psi @ H @ psi)
    res = OptimizeResult(theta, energy, theta, 0, 0, True, "no operators")
    truncated = False
    budget_left = cfg.max_total_evals

    def objective(th):
        e, g, state = sim.energy_and_gradient(th, H)
        trace.log(e, ground.energy, exact, fidelity(state, ground), float(np.linalg.norm(g)),
                  time.perf_counter() - t0)
        return e, g

    while True:
        gvec, gnorm = adapt_gradients(psi, H, pool)
        if gnorm < cfg.epsilon:
            break
        if len(sim.operators) >= cfg.max_operators:
            truncated = True
            break
        if budget_left <= 0:
            truncated = True
            break
        j = int(np.argmax(gvec))  # argmax returns the first maximum: lowest index wins ties
        sim.append(pool.operators[j])
        theta = np.append(theta, 0.0)
        before = trace.n_evals
        inner = OptimizerConfig(cfg.optimizer.grad_norm_tol, min(budget_left, cfg.optimizer.max_evals), cfg.optimizer.c1,
                                cfg.optimizer.c2, cfg.optimizer.max_line_evals)
        res = bfgs_minimize(objective, theta, inner)
        budget_left -= trace.n_evals - before
        theta = res.x
        psi = sim.state(theta)
        trace.iterations.append({
            "iteration": len(trace.iterations) + 1, "operator": "i" + pool.operators[j].ops,
            "pool_index": j, "g": gnorm, "energy": res.fun,
            "error_vs_diag": res.fun - ground.energy, "evals": trace.n_evals,
        })
    trace.theta = theta
    trace.psi = psi
    trace.summary = _summary(trace, res, ground, exact, len(theta), cnot_cost(sim.operators),
                             time.perf_counter() - t0)
    trace.summary["energy"] = float(psi @ H @ psi)
    trace.summary["error_vs_diag"] = trace.summary["energy"] - ground.energy
    if exact is not None:
        trace.summary["error_vs_exact"] = trace.summary["energy"] - exact
    gs = [r["g"] for r in trace.iterations]
    drops = sum(b <= a for a, b in zip(gs, gs[1:]))
    trace.summary.update({
        "method": "adapt", "epsilon": cfg.epsilon, "n_operators": len(theta),
        "final_g": float(adapt_gradients(psi, H, pool)[1]), "truncated": truncated,
        "g_nonincreasing_fraction": drops / max(len(gs) - 1, 1),
        "n_qubits": pool.n,
    })
    return trace
