import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from oracles import gamma_nquad, gamma_quadrature
from trion.basis import BasisFunction, BasisSet, generate_basis, preset_subsets
from trion.integrals import (DivergentIntegralError, UnsupportedOrderError, build_matrices,
                             delta_element, gamma, gamma_terms, hamiltonian_element,
                             overlap_element)
from trion.systems import KineticCoefficients, ThreeBodySystem, kinetic_coefficients, preset


def test_gamma_anchors():
    assert gamma(0, 0, 0, 1, 1, 1) == pytest.approx(0.25, rel=1e-15)
    assert gamma(1, 1, 1, 1, 1, 0) == pytest.approx(8.0, rel=1e-15)
    assert gamma(1, 0, 0, 1, 1, 1) == pytest.approx(0.25, rel=1e-15)


def test_base_term_set():
    assert gamma_terms(0, 0, 0) == {(1, 1, 1): 2}


def test_gamma_matches_direct_triple_quadrature():
    for idx, w in [((1, 0, 1), (1.3 + 0.4j, 0.7 - 0.9j, 0.2 + 0.5j)),
                   ((0, 2, 1), (0.9, 1.1 + 0.3j, 0.6 - 0.2j))]:
        assert gamma(*idx, *w) == pytest.approx(gamma_nquad(*idx, *w), rel=1e-8)


def test_gamma_matches_perimetric_quadrature_random():
    rng = np.random.default_rng(5)
    for _ in range(5):
        w = rng.uniform(0.1, 3, 3) + 1j * rng.uniform(-1, 1, 3)
        for idx in [(0, 0, 0), (2, 1, 0), (1, 2, 2), (3, 0, 3)]:
            assert gamma(*idx, *w) == pytest.approx(gamma_quadrature(*idx, *w), rel=1e-10)


def test_gamma_is_derivative_of_lower_order():
    w = np.array([1.1 + 0.2j, 0.8 - 0.4j, 0.5 + 0.1j])
    h = 1e-6
    for axis, shift in enumerate([(1, 0, 0), (0, 1, 0), (0, 0, 1)]):
        e = np.zeros(3)
        e[axis] = h
        fd = -(gamma(1, 1, 0, *(w + e)) - gamma(1, 1, 0, *(w - e))) / (2 * h)
        higher = gamma(1 + shift[0], 1 + shift[1], 0 + shift[2], *w)
        assert fd == pytest.approx(higher, rel=1e-6)


def test_gamma_errors():
    with pytest.raises(DivergentIntegralError):
        gamma(0, 0, 0, 1.0, -1.0, 0.5)
    with pytest.raises(UnsupportedOrderError):
        gamma(7, 0, 0, 1, 1, 1)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 3), st.floats(0.1, 3), st.floats(0.1, 3),
       st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_gamma_symmetry_under_relabelling(a, b, g, ia, ib, ig):
    # swapping r1 and r2 swaps (l, alpha) with (m, beta)
    al, be, ga = complex(a, ia), complex(b, ib), complex(g, ig)
    assert gamma(2, 1, 0, al, be, ga) == pytest.approx(gamma(1, 2, 0, be, al, ga), rel=1e-12)


def test_overlap_separable_anchor():
    f = BasisFunction(1, 1, 0)
    assert overlap_element(f, f) == pytest.approx(math.pi**2, rel=1e-14)


def test_delta_separable_anchor():
    f = BasisFunction(1, 1, 0)
    assert delta_element(f, f, "r1") == pytest.approx(math.pi, rel=1e-14)
    assert delta_element(f, f, "r2") == pytest.approx(math.pi, rel=1e-14)


def _re_im_product_quadrature(wi, wj, part_i, part_j):
    """8 pi^2 * triangle integral of part(e^{-wi.x}) part(e^{-wj.x}) r1 r2 R."""
    def piece(w, part, r1, r2, R):
        z = np.exp(-(w[0] * r1 + w[1] * r2 + w[2] * R))
        return z.real if part == "Re" else z.imag

    val = integrate.tplquad(
        lambda R, r2, r1: piece(wi, part_i, r1, r2, R) * piece(wj, part_j, r1, r2, R) * r1 * r2 * R,
        0, 40, 0, 40, lambda r1, r2: abs(r1 - r2), lambda r1, r2: r1 + r2,
        epsabs=1e-14, epsrel=1e-10)[0]
    return 8 * math.pi**2 * val


def test_re_im_overlap_matches_quadrature():
    wi = (1.2 + 0.7j, 0.9 - 0.3j, 0.3 + 0.4j)
    wj = (0.8 - 0.2j, 1.1 + 0.5j, 0.2 - 0.6j)
    fi, fj = BasisFunction(*wi, "Re"), BasisFunction(*wj, "Im")
    assert overlap_element(fi, fj) == pytest.approx(_re_im_product_quadrature(wi, wj, "Re", "Im"), rel=1e-8)


def test_delta_matches_collapsed_quadrature():
    wi = (1.2 + 0.7j, 0.9 - 0.3j, 0.3 + 0.4j)
    wj = (0.8 - 0.2j, 1.1 + 0.5j, 0.2 - 0.6j)
    fi, fj = BasisFunction(*wi, "Im"), BasisFunction(*wj, "Im")
    # r1 -> 0 makes R = r2: 4 pi int r^2 Im(e^{-(b+g) r}) Im(e^{-(b'+g') r}) dr
    ci, cj = wi[1] + wi[2], wj[1] + wj[2]
    ref = 4 * math.pi * integrate.quad(
        lambda r: r * r * np.exp(-ci * r).imag * np.exp(-cj * r).imag, 0, np.inf,
        epsabs=0, epsrel=1e-12, limit=200)[0]
    assert delta_element(fi, fj, "r1") == pytest.approx(ref, rel=1e-8)


def test_screened_helium_rayleigh_quotient():
    z = 27 / 16
    f = BasisFunction(z, z, 0, "Re", symmetrized=True)
    k = kinetic_coefficients(preset("helium"))
    ratio = hamiltonian_element(f, f, k) / overlap_element(f, f)
    assert ratio == pytest.approx(-(z**2), abs=1e-10)
    inv_r12 = KineticCoefficients(0, 0, 0, 0, 0, 1)
    assert hamiltonian_element(f, f, inv_r12) / overlap_element(f, f) == pytest.approx(5 / 8 * z, abs=1e-12)


def test_hydrogenic_product_is_eigenfunction():
    # e^{-Z r1 - Z r2} solves -lap1/2 - lap2/2 - Z/r1 - Z/r2 with E = -Z^2
    for z in (1.0, 2.0, 0.7):
        f = BasisFunction(z, z, 0)
        k = KineticCoefficients(0.5, 0.5, 0.0, -z, -z, 0.0)
        assert hamiltonian_element(f, f, k) / overlap_element(f, f) == pytest.approx(-z * z, rel=1e-13)


def test_mass_polarisation_vanishes_for_uncorrelated_function():
    f = BasisFunction(1.3, 0.8, 0)
    only_cross = KineticCoefficients(0, 0, 1.0, 0, 0, 0)
    assert abs(hamiltonian_element(f, f, only_cross)) < 1e-14


def _random_functions(rng, n, sym=False):
    out = []
    for _ in range(n):
        w = rng.uniform(0.2, 2, 3) + 1j * rng.uniform(-1, 1, 3)
        out.append(BasisFunction(*w, rng.choice(["Re", "Im"]), symmetrized=sym))
    return out


def test_elements_are_symmetric():
    rng = np.random.default_rng(9)
    k = kinetic_coefficients(preset("hdplus"))
    fs = _random_functions(rng, 20)
    for fi, fj in zip(fs[::2], fs[1::2]):
        assert overlap_element(fi, fj) == pytest.approx(overlap_element(fj, fi), rel=1e-12)
        h1, h2 = hamiltonian_element(fi, fj, k), hamiltonian_element(fj, fi, k)
        assert abs(h1 - h2) <= 1e-12 * max(abs(h1), 1.0)


def test_exchange_covariance_for_symmetric_system():
    rng = np.random.default_rng(4)
    k = kinetic_coefficients(preset("helium"))
    for fi, fj in zip(*[iter(_random_functions(rng, 10))] * 2):
        xi = BasisFunction(fi.beta, fi.alpha, fi.gamma, fi.part)
        xj = BasisFunction(fj.beta, fj.alpha, fj.gamma, fj.part)
        assert hamiltonian_element(fi, fj, k) == pytest.approx(hamiltonian_element(xi, xj, k), rel=1e-12)


def test_symmetrised_delta_elements_agree():
    rng = np.random.default_rng(2)
    for fi, fj in zip(*[iter(_random_functions(rng, 8, sym=True))] * 2):
        assert delta_element(fi, fj, "r1") == pytest.approx(delta_element(fi, fj, "r2"), rel=1e-12)


def test_build_matrices_matches_elements():
    rng = np.random.default_rng(12)
    fs = _random_functions(rng, 4, sym=True)
    basis = BasisSet(tuple(fs), 0)
    system = preset("hminus")
    m = build_matrices(basis, system)
    k = kinetic_coefficients(system)
    for i in range(4):
        for j in range(4):
            assert m.O[i, j] == pytest.approx(overlap_element(fs[i], fs[j]), rel=1e-12)
            assert m.H[i, j] == pytest.approx(hamiltonian_element(fs[i], fs[j], k), rel=1e-11, abs=1e-13)
            assert m.D1[i, j] == pytest.approx(delta_element(fs[i], fs[j], "r1"), rel=1e-12)


def test_extended_build_agrees_with_double():
    system = preset("h2plus")
    basis = generate_basis(preset_subsets("h2plus", 128), 1, True)
    d = build_matrices(basis, system, "double")
    x = build_matrices(basis, system, "extended").as_float()
    for a, b in ((d.H, x.H), (d.O, x.O), (d.D1, x.D1)):
        assert np.allclose(a, b, rtol=1e-13, atol=1e-13 * np.abs(b).max())
    assert np.all(np.diag(x.O) > 0)
    assert np.allclose(x.H, x.H.T, rtol=0, atol=0)


def test_divergence_reports_pair():
    bad = BasisFunction(0.1, 0.1, -0.05, "Re")
    worse = BasisFunction(0.1, -0.3, 0.2, "Re")
    system = ThreeBodySystem("x", 1.0, 2.0, 3.0, -1, 1, 1)
    with pytest.raises(DivergentIntegralError, match=r"\(\d+, \d+\)"):
        build_matrices(BasisSet((bad, worse), 0), system)
