import itertools
import random
from fractions import Fraction

import pytest

from involutory.classical_decomposition import (ClassicalDecomposition, build, build_rep0, ber1_classical_holds,
                                                casimir_commutes, quadratic_casimir, rep_defects)


def test_dimensions(e8, sl2):
    assert (e8.dim_k, e8.dim_p) == (120, 128)
    assert (sl2.dim_k, sl2.dim_p) == (1, 2)


@pytest.mark.parametrize("name", ["e8", "sl2"])
def test_jacobi_exhaustive(name, e8, sl2):
    dec = {"e8": e8, "sl2": sl2}[name]
    assert dec.jacobi_exhaustive() == 0
    assert dec.antisymmetry_defects() == []


def test_form_invariance_sampled(e8):
    rng = random.Random(5)
    for _ in range(300):
        assert e8.form_invariance_defect(*(rng.randrange(e8.dim) for _ in range(3))) == 0


def test_pp_spans_k(e8, sl2):
    assert e8.pp_spans_k() and sl2.pp_spans_k()


def test_json_round_trip(sl2, e8):
    for dec in (sl2, e8):
        again = ClassicalDecomposition.from_json(dec.to_json())
        assert again.table == dec.table
        assert again.dumps() == dec.dumps()


@pytest.mark.parametrize("which,value", [("16", 15), ("128s", 30), ("128c", 30)])
def test_e8_casimirs(e8, gammas, which, value):
    rep = build_rep0(e8, which, gammas)
    assert rep_defects(e8, rep) == []
    assert casimir_commutes(e8, rep)
    cas = quadratic_casimir(e8, rep).to_dense()
    assert all(cas[i][j] == (Fraction(value) if i == j else 0) for i in range(rep.dim) for j in range(rep.dim))


def test_sl2_reps(sl2):
    for which in ("1", "2", "char:3", "char:1/2"):
        assert rep_defects(sl2, build_rep0(sl2, which)) == []
    with pytest.raises(ValueError):
        build_rep0(sl2, "16")


def test_ber1_classical(e8, gammas):
    for I, J in itertools.combinations(range(1, 17), 2):
        assert ber1_classical_holds(e8, gammas, I, J)


def test_unknown_algebra():
    with pytest.raises(ValueError):
        build("g2")
