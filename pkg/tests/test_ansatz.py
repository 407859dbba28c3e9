import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import central_difference, dense_expm
from trion.ansatz import (AnsatzConfig, AnsatzSimulator, McpPool, PoolError, apply_rotation,
                          build_mcp, cnot_cost, energy_and_gradient, generator_matrix,
                          lie_closure_rank, prepare_state, string_cnot_cost)
from trion.encoding import PauliString


def _random_h(n, seed):
    A = np.random.default_rng(seed).normal(size=(2**n, 2**n))
    return A + A.T


@pytest.mark.parametrize("n", range(2, 9))
def test_pool_size(n):
    for base in ("plain", "conditioned"):
        pool = build_mcp(n, base)
        assert len(pool) == 2 * n - 2 and pool.n == n
        assert all(p.y_count % 2 == 1 for p in pool)


def test_three_qubit_pool_strings():
    assert {p.ops for p in build_mcp(3)} == {"IYZ", "YIZ", "IIY", "IYI"}
    assert build_mcp(3).labels()[0] == "iIYZ"


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_closure_ranks(n):
    # the plain recursion misses exactly one direction of the real sphere
    assert lie_closure_rank(build_mcp(n, "plain")) == 2**n - 2
    assert lie_closure_rank(build_mcp(n, "conditioned")) == 2**n - 1


def test_closure_is_idempotent_for_complete_pool():
    pool = build_mcp(3, "conditioned")
    bigger = McpPool(pool.operators + (PauliString("YYY"),), 3)
    assert lie_closure_rank(bigger) == lie_closure_rank(pool) == 7


def test_closure_limited_to_small_n():
    with pytest.raises(PoolError):
        lie_closure_rank(build_mcp(6))


def test_pool_errors():
    with pytest.raises(PoolError):
        build_mcp(1)
    with pytest.raises(PoolError):
        build_mcp(3, "other")
    with pytest.raises(PoolError, match="even Y"):
        McpPool((PauliString("YY"),), 2)


def test_single_rotation_examples():
    y = PauliString("Y")
    assert np.allclose(apply_rotation([1.0, 0.0], y, np.pi / 2), [0.0, -1.0])
    psi = np.array([0.6, 0.8])
    assert np.array_equal(apply_rotation(psi, y, 0.0), psi)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["Y", "YZ", "IY", "XY", "YZX", "ZZY", "YYY"]),
       st.floats(-7, 7), st.integers(0, 2**32 - 1))
def test_rotation_matches_dense_exponential(s, theta, seed):
    p = PauliString(s)
    psi = np.random.default_rng(seed).normal(size=2**p.n)
    got = apply_rotation(psi, p, theta)
    ref = (dense_expm(1j * theta * p.to_matrix()) @ psi).real
    assert np.abs(got - ref).max() <= 1e-13 * max(1.0, np.abs(psi).max())
    assert np.linalg.norm(got) == pytest.approx(np.linalg.norm(psi), rel=1e-14)


def test_generator_matrix_is_real_antisymmetric():
    A = generator_matrix(PauliString("YZ"))
    assert np.array_equal(A, -A.T)


def test_prepare_state_single_rotation():
    cfg = AnsatzConfig(1, McpPool((PauliString("YI"),), 2))
    t = 0.3
    assert np.allclose(prepare_state(cfg, [t]), [np.cos(t), -np.sin(t), 0, 0])


def test_energy_at_zero_is_reference_diagonal():
    H = _random_h(3, 0)
    cfg = AnsatzConfig(2, build_mcp(3))
    e, g = energy_and_gradient(cfg, np.zeros(cfg.n_params), H)
    assert e == H[0, 0]


def test_energy_is_periodic():
    H = _random_h(3, 1)
    sim = AnsatzSimulator.from_config(AnsatzConfig(2, build_mcp(3)))
    th = np.random.default_rng(2).normal(size=8)
    assert sim.energy(th + 2 * np.pi, H) == pytest.approx(sim.energy(th, H), abs=1e-12)
    assert sim.eval_count == 2


@pytest.mark.parametrize("n,k", [(2, 1), (3, 2), (4, 3), (7, 1)])
def test_gradient_matches_finite_differences(n, k):
    H = _random_h(n, n + k)
    sim = AnsatzSimulator.from_config(AnsatzConfig(k, build_mcp(n, "conditioned")))
    th = np.random.default_rng(k).uniform(-1, 1, k * (2 * n - 2))
    e, g, psi = sim.energy_and_gradient(th, H)
    fd = central_difference(lambda x: sim.energy(x, H), th, 1e-5)
    assert e == pytest.approx(psi @ H @ psi, rel=1e-14)
    scale = np.abs(fd).max()
    assert np.abs(g - fd).max() <= 1e-6 * scale


def test_wrong_parameter_count():
    sim = AnsatzSimulator.from_config(AnsatzConfig(1, build_mcp(2)))
    with pytest.raises(ValueError):
        sim.state(np.zeros(3))


def test_cnot_costs():
    assert string_cnot_cost(PauliString("IY")) == 0
    assert string_cnot_cost(PauliString("YZZ")) == 4
    assert cnot_cost(build_mcp(2), k=1) == 0
    pool7 = build_mcp(7)
    assert len(pool7) * 11 == 132
    assert cnot_cost(pool7, k=11) == 660


def test_initial_theta_modes():
    pool = build_mcp(3)
    assert np.array_equal(AnsatzConfig(2, pool).initial_theta(), np.zeros(8))
    a = AnsatzConfig(2, pool, init="uniform", init_seed=5).initial_theta()
    b = AnsatzConfig(2, pool, init="uniform", init_seed=5).initial_theta()
    assert np.array_equal(a, b) and np.abs(a).max() <= 1e-2
    with pytest.raises(ValueError):
        AnsatzConfig(0, pool)


def test_pool_from_file(tmp_path):
    plain = tmp_path / "pool.txt"
    plain.write_text("# custom pool\niYZ\nIY\n")
    assert [p.ops for p in McpPool.from_file(plain)] == ["YZ", "IY"]
    table = tmp_path / "pool.csv"
    table.write_text(build_mcp(4).to_csv())
    assert McpPool.from_file(table) == build_mcp(4)
