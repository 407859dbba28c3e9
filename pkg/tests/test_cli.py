import json

import numpy as np
import pytest

from trion.cli import EXIT_BUDGET, EXIT_OK, EXIT_USAGE, main
from trion.io import MatrixFormatError, format_matrix, parse_matrix, read_matrix

# a single helium-like subset small enough for a three-qubit run
SMALL_ROW = [1.74188, 2.25322, 0.18652, 0.4652, 1.28024, 2.53851,
             -0.02126, 0.37233, 0.11632, 0.21375, 0.01845, 0.30082, 8]


@pytest.fixture
def small(tmp_path):
    path = tmp_path / "intervals.json"
    path.write_text(json.dumps([SMALL_ROW]))
    return ["--system", "helium", "--qubits", "3", "--intervals", str(path)]


def test_matrix_text_round_trip(tmp_path):
    A = np.random.default_rng(0).normal(size=(5, 5))
    A = A + A.T
    assert np.array_equal(parse_matrix(format_matrix(A)), A)
    with pytest.raises(MatrixFormatError):
        parse_matrix("3 rows symmetric\n1 2\n")


def test_generate_basis_is_deterministic(tmp_path, small):
    for d in ("a", "b"):
        assert main(["generate-basis", *small, "--out", str(tmp_path / d)]) == EXIT_OK
    a, b = (tmp_path / d / "basis.json" for d in ("a", "b"))
    assert a.read_bytes() == b.read_bytes()
    assert len(json.loads(a.read_text())["functions"]) == 8


def test_qubit_range_is_enforced(tmp_path, capsys):
    assert main(["resources", "--qubits", "11", "--out", str(tmp_path)]) == EXIT_USAGE
    assert "qubits" in capsys.readouterr().err


def test_missing_table_is_a_usage_error(tmp_path):
    assert main(["generate-basis", "--system", "helium", "--qubits", "9", "--out", str(tmp_path)]) == EXIT_USAGE


def test_unknown_subcommand_exits_with_usage_code():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == EXIT_USAGE


def test_resources_two_qubits(tmp_path):
    assert main(["resources", "--qubits", "2", "--k", "1", "--out", str(tmp_path)]) == EXIT_OK
    rows = (tmp_path / "resources_n2_k1.csv").read_text().splitlines()
    assert len(rows) == 3
    assert json.loads((tmp_path / "resources_n2_k1.json").read_text())["cnot_total"] == 0


def test_resources_seven_qubits(tmp_path):
    assert main(["resources", "--qubits", "7", "--k", "11", "--out", str(tmp_path)]) == EXIT_OK
    info = json.loads((tmp_path / "resources_n7_k11.json").read_text())
    assert info["placements"] == 132 and info["cnot_total"] == 660


def test_resources_closure_rank(tmp_path):
    args = ["resources", "--qubits", "3", "--k", "1", "--closure", "--out", str(tmp_path)]
    main(args)
    assert json.loads((tmp_path / "resources_n3_k1.json").read_text())["lie_closure_rank"] == 6
    main(args + ["--pool", "conditioned"])
    assert json.loads((tmp_path / "resources_n3_k1.json").read_text())["lie_closure_rank"] == 7


def test_build_then_solve_from_exported_matrices(tmp_path, small):
    out = tmp_path / "build"
    assert main(["build-hamiltonian", *small, "--out", str(out)]) == EXIT_OK
    assert read_matrix(out / "Hp.txt").shape == (8, 8)
    assert main(["solve-classical", *small, "--out", str(tmp_path / "a")]) == EXIT_OK
    direct = json.loads((tmp_path / "a" / "classical.json").read_text())["energy"]
    assert main(["solve-classical", "--matrices", str(out), "--precision", "double",
                 "--out", str(tmp_path / "b")]) == EXIT_OK
    imported = json.loads((tmp_path / "b" / "classical.json").read_text())["energy"]
    assert imported == pytest.approx(direct, abs=1e-9)


def test_vqe_and_adapt_runs(tmp_path, small):
    out = tmp_path / "run"
    code = main(["vqe", *small, "--pool", "conditioned", "--k-sweep", "1,3", "--out", str(out)])
    assert code in (EXIT_OK, EXIT_BUDGET)
    sweep = (out / "ksweep_helium_n3_all_seed100.csv").read_text().splitlines()
    assert len(sweep) == 3
    code = main(["adapt", *small, "--pool", "conditioned", "--epsilons", "0.1,0.01",
                 "--reference-k", "2", "--out", str(out)])
    assert code in (EXIT_OK, EXIT_BUDGET)
    assert len((out / "adapt_comparison_helium_n3_grid_seed100.csv").read_text().splitlines()) == 3


def test_config_file_sets_defaults(tmp_path, small):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"layers": 2, "pool": "conditioned", "max_evals": 50}))
    main(["vqe", *small, "--config", str(cfg), "--out", str(tmp_path)])
    summary = json.loads((tmp_path / "summary_helium_n3_k2_seed100.json").read_text())
    assert summary["k"] == 2 and summary["function_evaluations"] <= 50
    cfg.write_text(json.dumps({"layers": 2, "epsilons": [0.1]}))
    assert main(["vqe", *small, "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_USAGE
