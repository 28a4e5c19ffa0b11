from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from involutory.classical_decomposition import build_sl2
from involutory.filtered_k import FilteredElement, generators
from involutory.parabolic import (DEFAULT_TABLE, berman_check_parabolic, check_convolutions,
                                  check_homomorphism, check_surjectivity, check_virasoro_intertwining, closed_form,
                                  coeff, dim_parabolic, finite_difference_degree, injectivity_rank, kernel_test,
                                  project, radical_check, rho_terms, series_coefficients)

SL2 = build_sl2()


def test_first_coefficients():
    assert [coeff(1, j) for j in range(6)] == [2, -4, 4, -4, 4, -4]
    assert all(coeff(n, 0) == 2 for n in range(20))
    assert coeff(0, 1) == 0


@given(st.integers(1, 4), st.integers(1, 50))
def test_closed_forms(n, k):
    assert coeff(n, 2 * k) == closed_form(n, 2 * k)
    assert coeff(n, 2 * k + 1) == closed_form(n, 2 * k + 1)


@given(st.integers(0, 12), st.integers(0, 30))
def test_series_agree_with_coefficients(n, j):
    sign = 1 if j % 2 == 0 else -1
    assert series_coefficients(n, 30, sign)[j] == coeff(n, j)


def test_polynomial_growth():
    # even-index coefficients of t^n + t^-n grow like k^(n-1)
    assert [finite_difference_degree(n) for n in range(1, 6)] == [0, 1, 2, 3, 4]


def test_convolutions():
    assert all(r.passed for r in check_convolutions(10, 10, 20))


def test_mutated_table_breaks_identities():
    bad = DEFAULT_TABLE.mutated(2, 3, 1)
    assert not all(r.passed for r in check_convolutions(6, 6, 8, bad))
    assert not check_homomorphism(SL2, 1, 4, 3, bad).passed


@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("N", [0, 1, 3, 6])
def test_homomorphism_sl2(sign, N):
    assert check_homomorphism(SL2, sign, N, 5).passed


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.sampled_from(generators(SL2, 5)), st.integers(-3, 3).map(Fraction), max_size=4),
       st.integers(0, 6), st.integers(0, 6))
def test_projection_compatible(terms, N1, N2):
    lo, hi = sorted((N1, N2))
    assert project(lo, rho_terms(SL2, 1, hi, terms)) == rho_terms(SL2, 1, lo, terms)


def test_kernel_monotone():
    el = FilteredElement.X(SL2, 2, 0) - FilteredElement.X(SL2, 0, 0)
    ks = [kernel_test(SL2, 1, N, el) for N in range(6)]
    assert ks[0] and all(b <= a for a, b in zip(ks, ks[1:]))
    assert not kernel_test(SL2, 1, 0, FilteredElement.X(SL2, 0, 0))


def test_surjectivity_and_dims():
    for N in range(6):
        r = check_surjectivity(SL2, 1, N)
        assert r.passed and r.details["dim"] == dim_parabolic(SL2, N)
    assert injectivity_rank(SL2, 1, 8, 4) <= dim_parabolic(SL2, 4)


def test_radical_sl2():
    for N in range(1, 4):
        assert all(r.passed for r in radical_check(SL2, N))


def test_virasoro_intertwining():
    assert check_virasoro_intertwining(SL2, 1, 4, 3, 3).passed


def test_berman_parabolic(e8, gammas):
    res = berman_check_parabolic(e8, gammas, N=4, k_max=2)
    assert len(res) == 2 and all(r.passed for r in res)
