from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from involutory.filtered_k import (CompactVirasoroElement, DecompositionMismatch, FilteredElement,
                                   berman_check_filtered, bracket_filtered, bracket_terms, from_laurent,
                                   generators, jacobi_filtered, laurent_virasoro, loop_bracket, to_laurent,
                                   virasoro_action, virasoro_bracket, virasoro_terms)
from involutory.classical_decomposition import build_sl2

SL2 = build_sl2()
coef = st.integers(-4, 4).map(Fraction)


def elements(dec, m_max=4):
    return st.dictionaries(st.sampled_from(generators(dec, m_max)), coef, max_size=4)


@settings(max_examples=150)
@given(elements(SL2), elements(SL2))
def test_bracket_matches_loop_algebra(a, b):
    got = bracket_terms(SL2, a, b)
    want = from_laurent(SL2, loop_bracket(SL2, to_laurent(SL2, a), to_laurent(SL2, b)))
    assert got == want


@settings(max_examples=80)
@given(st.integers(1, 5), elements(SL2))
def test_virasoro_matches_loop_derivation(m, a):
    assert to_laurent(SL2, virasoro_terms({m: 1}, a, SL2.dim_k)) == {
        k: v for k, v in laurent_virasoro(m, to_laurent(SL2, a)).items() if v}


@settings(max_examples=80)
@given(st.integers(1, 4), elements(SL2, 3), elements(SL2, 3))
def test_virasoro_is_derivation(m, a, b):
    K = CompactVirasoroElement.K(m)
    x, y = FilteredElement(SL2, a), FilteredElement(SL2, b)
    lhs = virasoro_action(K, bracket_filtered(SL2, x, y))
    rhs = bracket_filtered(SL2, virasoro_action(K, x), y) + bracket_filtered(SL2, x, virasoro_action(K, y))
    assert lhs == rhs


def test_virasoro_bracket_closes():
    a, b = CompactVirasoroElement.K(3), CompactVirasoroElement.K(1)
    x = FilteredElement.X(SL2, 2, 0)
    lhs = virasoro_action(a, virasoro_action(b, x)) - virasoro_action(b, virasoro_action(a, x))
    assert lhs == virasoro_action(virasoro_bracket(a, b), x)
    with pytest.raises(ValueError):
        CompactVirasoroElement.K(0)


def test_y_sector_starts_at_one():
    with pytest.raises(ValueError):
        FilteredElement.Y(SL2, 0, 0)


def test_element_json_round_trip():
    x = FilteredElement.X(SL2, 2, 0, Fraction(3, 2)) + FilteredElement.Y(SL2, 1, 1)
    assert FilteredElement.from_json(SL2, x.to_json()) == x


def test_jacobi_exhaustive_sl2():
    r = jacobi_filtered(SL2, 4)
    assert r.passed and r.details["exhaustive"]


def test_berman_filtered(e8, gammas):
    assert all(r.passed for r in berman_check_filtered(e8, gammas))
    with pytest.raises(DecompositionMismatch):
        berman_check_filtered(SL2, gammas)
