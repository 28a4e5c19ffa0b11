import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from involutory.gamma_clifford import RepeatedIndex, SignedPerm, antisym_product, brute_force_antisym


def test_clifford(gammas):
    assert gammas.clifford_defects() == []


def test_gammas_are_signed_permutations(gammas):
    for I in range(1, 17):
        d = gammas[I].to_dense()
        assert d.shape == (128, 128)
        assert (np.abs(d).sum(axis=0) == 1).all() and (np.abs(d).sum(axis=1) == 1).all()


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 16), min_size=1, max_size=4, unique=True), st.booleans())
def test_antisymmetrised_products_match_brute_force(indices, first):
    blocks = ("AB", "dAdB") if len(indices) % 2 == 0 else ("AdB", "dAB")
    block = blocks[0] if first else blocks[1]
    fast = antisym_product(gammas_cache(), tuple(indices), block).to_dense()
    assert (fast == brute_force_antisym(gammas_cache(), tuple(indices), block)).all()


def gammas_cache():
    from involutory.gamma_clifford import build_gammas
    if not hasattr(gammas_cache, "g"):
        gammas_cache.g = build_gammas()
    return gammas_cache.g


def test_repeated_index(gammas):
    with pytest.raises(RepeatedIndex):
        antisym_product(gammas, (1, 1), "AB")


def test_two_form_antisymmetric(gammas):
    for I, J in itertools.combinations(range(1, 17), 2):
        assert (gammas.two(I, J).to_dense() == -gammas.two(J, I).to_dense()).all()


def test_signed_perm_algebra():
    a = SignedPerm.from_dense(np.array([[0, 1], [-1, 0]]))
    assert (a @ a).to_dense().tolist() == [[-1, 0], [0, -1]]
    assert (a @ a.T).to_dense().tolist() == [[1, 0], [0, 1]]
    assert a.kron(SignedPerm.identity(2)).to_dense().shape == (4, 4)
