import numpy as np
import pytest
from hypothesis import given, strategies as st

from trion.basis import (BasisFunction, BasisGenerationError, BasisSet, BasisSizeError,
                         IntervalSubset, check_pairwise, exchange, generate_basis,
                         preset_subsets, subset_rng)


def test_h2plus_table_gives_128_functions():
    subsets = preset_subsets("h2plus", 128)
    assert [s.count for s in subsets] == [56, 36, 22, 12, 2]
    b = generate_basis(subsets, seed=3, symmetrized=True)
    assert len(b) == 128 and b.n_qubits == 7
    triples = {f.exponents for f in b.functions}
    assert len(triples) == 64
    assert [f.part for f in b.functions[:4]] == ["Re", "Im", "Re", "Im"]
    assert b.functions[0].exponents == b.functions[1].exponents


def test_generation_is_deterministic():
    subsets = preset_subsets("helium", 128)
    a = generate_basis(subsets, 42, True)
    b = generate_basis(subsets, 42, True)
    assert a.to_json() == b.to_json()
    assert generate_basis(subsets, 43, True).to_json() != a.to_json()


def test_reference_draws_for_documented_generator():
    # frozen outputs of PCG64(SeedSequence([0, 0])); also quoted in the README
    assert subset_rng(0, 0).uniform(0.0, 1.0) == 0.6369616873214543
    f = generate_basis(preset_subsets("helium", 128), 0, True).functions[0]
    assert f.alpha == 2.0675839891949526 + 0.2617041613917154j
    assert f.beta == 1.3317957559631957 - 0.014754887932326235j
    assert f.gamma == 0.19555691940528253 + 0.27618479235591026j


def test_degenerate_imaginary_intervals_fail():
    sub = IntervalSubset(((1, 1), (0, 0), (1, 1), (0, 0), (1, 1), (0, 0)), 2)
    with pytest.raises(BasisGenerationError, match="subset 0"):
        generate_basis([sub], 0, False)


def test_size_must_be_power_of_two():
    sub = IntervalSubset(((1, 2), (0, 1), (1, 2), (0, 1), (0, 1), (0, 1)), 6)
    with pytest.raises(BasisSizeError):
        generate_basis([sub], 0, False)


def test_missing_table_reports_available_sizes():
    with pytest.raises(BasisSizeError, match="128"):
        preset_subsets("helium", 512)


def test_exchange_examples():
    f = BasisFunction(1 + 0.1j, 0.3, 3 + 2j)
    assert exchange(f).exponents == (0.3, 1 + 0.1j, 3 + 2j)
    g = BasisFunction(0.5 + 1j, 0.5 + 1j, 0.2)
    assert exchange(g) == g


def test_subset_row_round_trip():
    sub = preset_subsets("hminus", 128)[1]
    assert IntervalSubset.from_row(sub.to_row()) == sub


def test_json_round_trip():
    b = generate_basis(preset_subsets("hdplus", 128), 7, False)
    again = BasisSet.from_json(b.to_json())
    assert again.functions == b.functions and again.seed == 7


def test_sampling_marginals():
    sub = IntervalSubset(((0.5, 2.0), (-1, 1), (0.1, 0.3), (2, 5), (0, 1), (-3, -2)), 2 * 10_000)
    # counts need not be powers of two for direct sampling checks
    rng = subset_rng(11, 0)
    x = rng.uniform(sub.lows, sub.highs, size=(10_000, 6))
    mid = (sub.lows + sub.highs) / 2
    sigma = (sub.highs - sub.lows) / np.sqrt(12) / np.sqrt(10_000)
    assert np.all(x.min(0) >= sub.lows) and np.all(x.max(0) <= sub.highs)
    assert np.all(np.abs(x.mean(0) - mid) < 3 * sigma + 1e-15)


@pytest.mark.parametrize("system", ["h2plus", "hdplus", "helium", "hminus"])
def test_preset_bases_are_pairwise_convergent(system):
    b = generate_basis(preset_subsets(system, 128), 100, system != "hdplus")
    assert check_pairwise(b)
    assert all(f.is_valid() for f in b.functions)


@given(st.complex_numbers(max_magnitude=5), st.complex_numbers(max_magnitude=5),
       st.complex_numbers(max_magnitude=5))
def test_exchange_is_an_involution(a, b, g):
    f = BasisFunction(a, b, g, "Im")
    assert exchange(exchange(f)) == f
