from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from involutory.exact_linalg import (DEFAULT_PRIME, DenominatorDivisibleByP, Echelon, GaussianRational,
                                     SparseMatrix, dense_rank_exact, dense_rank_mod_p, format_scalar,
                                     kernel_dimension, parse_scalar, rank_exact, rank_mod_p,
                                     sqrt_minus_one_mod, to_mod_p)

fractions = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000)
small_matrices = st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=1, max_size=6))


@given(fractions, fractions)
def test_scalar_round_trip(a, b):
    for x in (a, GaussianRational(a, b)):
        y = parse_scalar(format_scalar(x))
        assert y == x


def test_format_is_canonical():
    assert format_scalar(15) == "15/1"
    assert format_scalar(GaussianRational(0, -1)) == "0/1-1/1*i"


@given(fractions, fractions, fractions, fractions)
def test_gaussian_field_axioms(a, b, c, d):
    x, y = GaussianRational(a, b), GaussianRational(c, d)
    assert (x * y) == (y * x)
    assert x * y - y * x == 0
    if y:
        assert (x / y) * y == x
    assert (x * x.conjugate()).is_real()


def test_i_mod_p():
    with pytest.raises(ValueError):
        sqrt_minus_one_mod(2**61 - 1)  # 3 mod 4
    for q in (13, 17, 29, 1000000009):
        if q % 4 == 1:
            r = sqrt_minus_one_mod(q)
            assert r * r % q == q - 1
    assert to_mod_p(GaussianRational(0, 1), 13) in (5, 8)


def test_denominator_divisible():
    with pytest.raises(DenominatorDivisibleByP):
        to_mod_p(Fraction(1, 7), 7)


@settings(max_examples=60)
@given(small_matrices)
def test_ranks_agree(rows):
    m = SparseMatrix.from_dense(rows)
    r = rank_exact(m)
    assert r == rank_mod_p(m, DEFAULT_PRIME)
    dicts = [{c: Fraction(v) for c, v in enumerate(row) if v} for row in rows]
    assert r == dense_rank_exact(dicts, len(rows[0]))
    assert r == dense_rank_mod_p([{c: int(v) for c, v in d.items()} for d in dicts], len(rows[0]))
    assert kernel_dimension(m) == m.cols - r


@given(small_matrices)
def test_echelon_membership(rows):
    ech = Echelon()
    for row in rows:
        ech.add({c: Fraction(v) for c, v in enumerate(row) if v})
    combo = {}
    for k, row in enumerate(rows):
        for c, v in enumerate(row):
            combo[c] = combo.get(c, 0) + (k + 1) * v
    assert ech.contains({c: Fraction(v) for c, v in combo.items() if v})


def test_sparse_matrix_json_round_trip():
    m = SparseMatrix.from_dense([[1, 0], [Fraction(1, 2), 3]])
    assert SparseMatrix.from_json(m.to_json()) == m
    assert m.transpose().transpose() == m
