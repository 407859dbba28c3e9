"""
Adaptive growth against a fixed layered ansatz
===============================================

The adaptive driver adds one pool rotation at a time, picked by the
largest energy gradient, and re-optimises everything after each addition.
Smaller thresholds give more accurate states at the price of many more
objective evaluations.
"""

import os

from trion.ansatz import AnsatzConfig, build_mcp
from trion.pipeline import prepare
from trion.vqe import AdaptConfig, run_adapt, run_ni_ducc

b = prepare("h2plus", 128, cache_dir=os.environ.get("TRION_CACHE"))
pool = build_mcp(b.n_qubits, "conditioned")

layered = run_ni_ducc(b.Hp, AnsatzConfig(11, pool), ground=b.ground)
print(f"layered k=11: {layered.n_evals} evaluations, error {layered.summary['error_vs_diag']:.1e}")

for eps in (1e-1, 1e-2, 1e-3):
    trace = run_adapt(b.Hp, pool, AdaptConfig(eps), ground=b.ground)
    s = trace.summary
    print(f"adaptive eps={eps:g}: {s['n_operators']} rotations, {trace.n_evals} evaluations, "
          f"error {s['error_vs_diag']:.1e}")

# the chosen operators show which parts of the pool matter
print([it["operator"] for it in trace.iterations[:12]])
