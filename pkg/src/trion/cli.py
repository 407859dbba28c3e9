"""Command-line front end: ``trion <command> [options]``.

Every command writes plain CSV/JSON into ``--out`` and embeds the flag set
in a ``metadata`` block so runs can be repeated exactly.

Exit codes: 0 success, 2 usage error, 3 numerical failure (for example a
near-singular overlap), 4 optimisation budget exhausted before convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__, data
from .ansatz import POOL_BASES, AnsatzConfig, McpPool, build_mcp, cnot_cost, lie_closure_rank, string_cnot_cost
from .basis import BasisGenerationError, BasisSet, BasisSizeError, IntervalSubset
from .encoding import pauli_decompose
from .integrals import DivergentIntegralError, build_matrices
from .io import dump_json, read_matrix, rows_csv, spectrum_csv, write_matrix
from .optimize import OptimizerConfig, OptimizerFailure
from .pipeline import DEFAULT_SEED, build_bundle, make_basis
from .spectra import NearSingularOverlapError, canonical_orthogonalize, classical_delta, solve_ground
from .systems import PRESET_NAMES, ThreeBodySystem, preset
from .vqe import AdaptConfig, observable_expectation, run_adapt, run_ni_ducc

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_BUDGET = 0, 2, 3, 4


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file whose keys mirror the long flag names")
    common.add_argument("--system", default="h2plus",
                        help=f"preset ({', '.join(PRESET_NAMES)}); HD+ puts the deuteron at particle 2")
    common.add_argument("--qubits", type=int, default=7, help="n; the basis has 2^n functions")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--out", default="out")
    common.add_argument("--precision", choices=("double", "extended"), default="extended")
    common.add_argument("--ortho", choices=("canonical", "symmetric"), default="canonical")
    common.add_argument("--cache-dir", default=None, help="reuse orthonormal Hamiltonians across runs")
    common.add_argument("--intervals", help="JSON list of 13-number rows (12 bounds, count)")
    common.add_argument("--proton-first", action="store_true", help="HD+: proton as particle 2")

    vq = argparse.ArgumentParser(add_help=False)
    vq.add_argument("--pool", default="plain",
                    help="pool recursion base (plain, conditioned) or a file of Pauli strings")
    vq.add_argument("--max-evals", type=int, default=20000)
    vq.add_argument("--grad-tol", type=float, default=1e-10)
    vq.add_argument("--timed", action="store_true", help="fill the elapsed_s column (breaks byte-identical reruns)")

    p = argparse.ArgumentParser(prog="trion", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("generate-basis", parents=[common], help="draw a basis set")

    b = sub.add_parser("build-hamiltonian", parents=[common], help="matrices in the raw and orthonormal basis")
    b.add_argument("--basis", help="basis.json from generate-basis")

    s = sub.add_parser("solve-classical", parents=[common], help="exact diagonalisation")
    s.add_argument("--basis", help="basis.json from generate-basis")
    s.add_argument("--matrices", help="directory with H.txt, O.txt (and optionally D1.txt, D2.txt) to import")

    v = sub.add_parser("vqe", parents=[common, vq], help="layered NI-DUCC run")
    grp = v.add_mutually_exclusive_group()
    grp.add_argument("--k", type=int, default=11, help="number of layers")
    grp.add_argument("--k-sweep", type=_ints, help="comma-separated layer counts")
    v.add_argument("--init", choices=("zeros", "uniform"), default="zeros")
    v.add_argument("--init-seed", type=int, default=0)
    v.add_argument("--observables", choices=("delta",), help="also evaluate delta operators on the final state")

    a = sub.add_parser("adapt", parents=[common, vq], help="Qubit-ADAPT runs over an epsilon grid")
    a.add_argument("--epsilons", type=_floats, default=[1e-1, 1e-2, 1e-3, 1e-4])
    a.add_argument("--reference-k", type=int, default=11, help="layer count of the NI-DUCC comparison run")
    a.add_argument("--max-operators", type=int, default=400)

    o = sub.add_parser("observables", parents=[common], help="classical deltas and Pauli-encoded operators")
    o.add_argument("--no-pauli", action="store_true", help="skip writing Pauli term tables")

    r = sub.add_parser("resources", parents=[common], help="pool strings and CNOT costs")
    r.add_argument("--k", type=int, default=11)
    r.add_argument("--pool", default="plain")
    r.add_argument("--closure", action="store_true", help="also report the Lie-closure rank (n <= 5)")
    return p


def _apply_config(parser: argparse.ArgumentParser, argv) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if "layers" in cfg and "epsilons" in cfg:
            raise UsageError("config sets both layers and epsilons; a run uses exactly one")
        defaults = {}
        for key, val in cfg.items():
            key = {"layers": "k", "epsilon": "epsilons"}.get(key, key).replace("-", "_")
            if key == "epsilons" and not isinstance(val, list):
                val = [val]
            defaults[key] = val
        sp = parser._subparsers._group_actions[0].choices[args.command]  # noqa: SLF001
        sp.set_defaults(**defaults)
        args = parser.parse_args(argv)
        if "system_definition" in cfg:
            args.custom_system = ThreeBodySystem.from_dict(cfg["system_definition"])
    if not 2 <= args.qubits <= 10:
        raise UsageError("--qubits must lie in [2, 10]")
    return args


def _system(args) -> ThreeBodySystem:
    if getattr(args, "custom_system", None) is not None:
        return args.custom_system
    try:
        return preset(args.system, deuteron_first=not args.proton_first)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc


def _metadata(args) -> dict:
    keep = {k: v for k, v in vars(args).items() if k not in ("custom_system", "config")}
    return {"command": args.command, "flags": keep, "version": __version__}


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _basis(args, system):
    if getattr(args, "basis", None):
        return BasisSet.from_json(Path(args.basis).read_text())
    subsets = None
    if getattr(args, "intervals", None):
        rows = json.loads(Path(args.intervals).read_text())
        subsets = [IntervalSubset.from_row(r) for r in rows]
    return make_basis(system, 2**args.qubits, args.seed, subsets)


def _bundle(args):
    system = _system(args)
    return build_bundle(system, _basis(args, system), args.precision, args.ortho, args.cache_dir)


def _pool(choice: str, n: int) -> McpPool:
    if choice in POOL_BASES:
        return build_mcp(n, choice)
    pool = McpPool.from_file(choice)
    if pool.n != n:
        raise UsageError(f"pool file acts on {pool.n} qubits, basis needs {n}")
    return pool


def _opt(args) -> OptimizerConfig:
    return OptimizerConfig(grad_norm_tol=args.grad_tol, max_evals=args.max_evals)


def cmd_generate_basis(args) -> int:
    basis = _basis(args, _system(args))
    (_out(args) / "basis.json").write_text(basis.to_json())
    print(f"wrote {len(basis)} functions to {Path(args.out) / 'basis.json'}")
    return EXIT_OK


def cmd_build_hamiltonian(args) -> int:
    system = _system(args)
    basis = _basis(args, system)
    out = _out(args)
    mats = build_matrices(basis, system, precision=args.precision).as_float()
    for name, M in (("H", mats.H), ("O", mats.O), ("D1", mats.D1), ("D2", mats.D2)):
        write_matrix(out / f"{name}.txt", M)
    bundle = build_bundle(system, basis, args.precision, args.ortho, args.cache_dir)
    for name, M in (("Hp", bundle.Hp), ("D1p", bundle.D1p), ("D2p", bundle.D2p)):
        write_matrix(out / f"{name}.txt", M)
    (out / "overlap_eigenvalues.csv").write_text(spectrum_csv(bundle.overlap_eigenvalues))
    (out / "build.json").write_text(dump_json({"metadata": _metadata(args), **bundle.summary()}))
    print(f"condition {bundle.condition:.3e}, residual {bundle.residual:.2e}")
    return EXIT_OK


def cmd_solve_classical(args) -> int:
    out = _out(args)
    if args.matrices:
        d = Path(args.matrices)
        H, O = read_matrix(d / "H.txt"), read_matrix(d / "O.txt")
        res = canonical_orthogonalize(H, O, mode=args.ortho)
        ground = solve_ground(res.Hp)
        summary = {"energy": ground.energy, "overlap_condition": res.condition,
                   "orthonormality_residual": res.residual}
        for tag in ("D1", "D2"):
            if (d / f"{tag}.txt").exists():
                summary[f"delta_{tag.lower()}"] = classical_delta(ground, res.transform(read_matrix(d / f"{tag}.txt")))
        spectrum = ground.full_spectrum
    else:
        bundle = _bundle(args)
        summary = bundle.summary()
        spectrum = bundle.ground.full_spectrum
    (out / "spectrum.csv").write_text(spectrum_csv(spectrum))
    (out / "classical.json").write_text(dump_json({"metadata": _metadata(args), **summary}))
    err = summary.get("error_vs_exact")
    print(f"E = {summary['energy']:.15f}" + (f"  error vs exact {err:.3e}" if err is not None else ""))
    return EXIT_OK


def _tag(args, extra: str) -> str:
    return f"{_system(args).name}_n{args.qubits}_{extra}_seed{args.seed}"


def cmd_vqe(args) -> int:
    bundle = _bundle(args)
    pool = _pool(args.pool, bundle.n_qubits)
    out = _out(args)
    ks = args.k_sweep or [args.k]
    rows, status = [], EXIT_OK
    for k in ks:
        cfg = AnsatzConfig(k, pool, init=args.init, init_seed=args.init_seed)
        trace = run_ni_ducc(bundle.Hp, cfg, _opt(args), ground=bundle.ground,
                            exact=bundle.exact_energy, timed=args.timed)
        summary = dict(trace.summary, metadata=_metadata(args), pool=pool.labels())
        if args.observables == "delta":
            d1, d2 = bundle.deltas()
            summary["delta_r1"] = {"vqe": observable_expectation(trace.psi, bundle.D1p), "classical": d1}
            summary["delta_r2"] = {"vqe": observable_expectation(trace.psi, bundle.D2p), "classical": d2}
        tag = _tag(args, f"k{k}")
        (out / f"trace_{tag}.csv").write_text(trace.to_csv())
        (out / f"summary_{tag}.json").write_text(dump_json(summary))
        rows.append([k, trace.summary["n_params"], f"{trace.summary['error_vs_diag']:.6e}",
                     f"{trace.summary['fidelity']:.15f}", trace.n_evals, trace.summary["converged"]])
        print(f"k={k}: error {trace.summary['error_vs_diag']:.3e}, fidelity {trace.summary['fidelity']:.12f}, "
              f"{trace.n_evals} evaluations ({trace.summary['status']})")
        if not trace.summary["converged"]:
            status = EXIT_BUDGET
    if len(ks) > 1:
        (out / f"ksweep_{_tag(args, 'all')}.csv").write_text(
            rows_csv(["k", "n_params", "error_vs_diag", "fidelity", "evaluations", "converged"], rows))
    return status


def cmd_adapt(args) -> int:
    bundle = _bundle(args)
    pool = _pool(args.pool, bundle.n_qubits)
    out = _out(args)
    ref = run_ni_ducc(bundle.Hp, AnsatzConfig(args.reference_k, pool), _opt(args),
                      ground=bundle.ground, exact=bundle.exact_energy)
    rows, status = [], EXIT_OK
    for eps in args.epsilons:
        cfg = AdaptConfig(eps, args.max_operators, _opt(args))
        trace = run_adapt(bundle.Hp, pool, cfg, ground=bundle.ground, exact=bundle.exact_energy,
                          timed=args.timed)
        tag = _tag(args, f"eps{eps:g}")
        (out / f"trace_{tag}.csv").write_text(trace.to_csv())
        (out / f"iterations_{tag}.csv").write_text(trace.iterations_csv())
        (out / f"summary_{tag}.json").write_text(dump_json(dict(trace.summary, metadata=_metadata(args))))
        rows.append([f"{eps:g}", trace.n_evals, trace.summary["n_operators"],
                     f"{trace.summary['error_vs_diag']:.6e}", ref.n_evals, ref.summary["n_params"],
                     f"{ref.summary['error_vs_diag']:.6e}"])
        print(f"eps={eps:g}: {trace.n_evals} evaluations, {trace.summary['n_operators']} operators, "
              f"error {trace.summary['error_vs_diag']:.3e} (NI-DUCC: {ref.n_evals})")
        if trace.summary["truncated"]:
            status = EXIT_BUDGET
    (out / f"adapt_comparison_{_tag(args, 'grid')}.csv").write_text(rows_csv(
        ["epsilon", "adapt_evaluations", "adapt_operators", "adapt_error_vs_diag",
         "niducc_evaluations", "niducc_params", "niducc_error_vs_diag"], rows))
    return status


def cmd_observables(args) -> int:
    bundle = _bundle(args)
    out = _out(args)
    d1, d2 = bundle.deltas()
    summary = {"metadata": _metadata(args), "delta_r1": d1, "delta_r2": d2,
               "energy": bundle.ground.energy}
    refs = {k[1]: v for k, v in data.DELTA_REFERENCES.items() if k[0] == bundle.system.name}
    if refs:
        summary["literature"] = refs
    if not args.no_pauli:
        for name, M in (("Hp", bundle.Hp), ("D1p", bundle.D1p), ("D2p", bundle.D2p)):
            enc = pauli_decompose(M)
            (out / f"pauli_{name}.csv").write_text(enc.to_csv())
            summary[f"pauli_terms_{name}"] = len(enc.pauli_terms)
    (out / "observables.json").write_text(dump_json(summary))
    print(f"delta(r1) = {d1:.10f}, delta(r2) = {d2:.10f}")
    return EXIT_OK


def cmd_resources(args) -> int:
    pool = _pool(args.pool, args.qubits)
    out = _out(args)
    rows = []
    for m in range(1, args.k + 1):
        for slot, p in enumerate(pool):
            rows.append([m, slot, p.ops, p.weight, string_cnot_cost(p)])
    total = cnot_cost(pool, args.k)
    (out / f"resources_n{args.qubits}_k{args.k}.csv").write_text(
        rows_csv(["layer", "slot", "string", "weight", "cnot_cost"], rows))
    (out / f"pool_n{args.qubits}.csv").write_text(pool.to_csv())
    info = {"metadata": _metadata(args), "placements": len(rows), "cnot_total": total}
    if args.closure:
        info["lie_closure_rank"] = lie_closure_rank(pool)
        info["complete_rank"] = 2**args.qubits - 1
    (out / f"resources_n{args.qubits}_k{args.k}.json").write_text(dump_json(info))
    print(f"{len(rows)} placements, {total} CNOTs")
    return EXIT_OK


COMMANDS = {
    "generate-basis": cmd_generate_basis,
    "build-hamiltonian": cmd_build_hamiltonian,
    "solve-classical": cmd_solve_classical,
    "vqe": cmd_vqe,
    "adapt": cmd_adapt,
    "observables": cmd_observables,
    "resources": cmd_resources,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"trion: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BasisSizeError, KeyError) as exc:
        print(f"trion: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NearSingularOverlapError, DivergentIntegralError, BasisGenerationError,
            OptimizerFailure, np.linalg.LinAlgError) as exc:
        print(f"trion: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
