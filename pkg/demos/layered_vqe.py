"""
Layered ansatz on H2+
=====================

Minimise the energy of k layers of pool rotations with BFGS and watch how
the error against exact diagonalisation falls with the number of objective
evaluations.  The trace holds one row per evaluation, line-search probes
included.
"""

import os

import numpy as np

from trion.ansatz import AnsatzConfig, build_mcp
from trion.optimize import OptimizerConfig
from trion.pipeline import prepare
from trion.vqe import run_ni_ducc

b = prepare("h2plus", 128, cache_dir=os.environ.get("TRION_CACHE"))

# the reference state |0000000> is the first canonical function; for H2+ it
# has almost no weight in the ground state, so the optimiser starts far away
print(f"overlap of reference with ground state: {b.ground.vector[0] ** 2:.1e}")

for base in ("plain", "conditioned"):
    for k in (4, 11):
        cfg = AnsatzConfig(k, build_mcp(b.n_qubits, base))
        trace = run_ni_ducc(b.Hp, cfg, OptimizerConfig(max_evals=5000),
                            ground=b.ground, exact=b.exact_energy)
        err = np.array([r[2] for r in trace.records])
        marks = [i for i in (10, 100, 1000, 5000) if i <= len(err)]
        history = ", ".join(f"{i}: {err[:i].min():.1e}" for i in marks)
        print(f"{base:11s} k={k:2d}  best error after n evaluations  {history}")
