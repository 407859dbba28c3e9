"""
Which rotation pools can reach every real state?
================================================

A pool of real generators iP can rotate |0...0> into any real state
exactly when the Lie algebra it generates moves the reference state in
2^n - 1 independent directions.  The plain recursive pool falls one short;
starting the recursion from a Z-conditioned rotation fixes that.
"""

from trion.ansatz import build_mcp, cnot_cost, lie_closure_rank

for n in range(2, 6):
    plain = lie_closure_rank(build_mcp(n, "plain"))
    cond = lie_closure_rank(build_mcp(n, "conditioned"))
    print(f"n={n}: plain rank {plain}, conditioned rank {cond}, complete = {2**n - 1}")

# both pools have 2n - 2 strings; the conditioned base adds one Z to one
# string, so it costs the same or slightly more CNOTs per layer
for base in ("plain", "conditioned"):
    pool = build_mcp(7, base)
    print(base, pool.labels())
    print(f"  eleven layers: {11 * len(pool)} rotations, {cnot_cost(pool, 11)} CNOTs")
