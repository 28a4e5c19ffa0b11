from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from involutory.classical_decomposition import build_rep0, build_sl2
from involutory.induced_reps import (E8LevelTwo, InducedModule, ModuleElement, PBWWord, UnresolvedEigenvalue,
                                     bubble_normal_order, casimir_split, chi_1920, d8_casimir_candidates,
                                     default_candidates, e8_quotient_levels, pbw_basis, pbw_count, pbw_words,
                                     quotient_dims, spin32_dims, split_by_casimir, submodule_generate,
                                     truncated_rep)
from involutory.exact_linalg import DEFAULT_PRIME

SL2 = build_sl2()


def test_pbw_counts(e8):
    assert [pbw_count(e8, l) for l in range(4)] == [1, 128, 8376, 373248]
    assert [len(pbw_words(e8, l)) for l in range(3)] == [1, 128, 8376]
    assert [pbw_count(SL2, l) for l in range(6)] == [len(pbw_words(SL2, l)) for l in range(6)]


def test_pbw_word_validation():
    with pytest.raises(ValueError):
        PBWWord(((0, 0),))
    with pytest.raises(ValueError):
        PBWWord(((2, 0), (1, 1)))
    w = PBWWord(((1, 1), (1, 1), (2, 0)))
    assert w.degree == 4
    assert PBWWord.from_compressed(w.compressed()) == w
    assert all(isinstance(x, PBWWord) for x in pbw_basis(SL2, 3))


letters = st.lists(st.sampled_from([(d, u) for d in range(1, 4)
                                    for u in ((0,) if d % 2 == 0 else (1, 2))]), max_size=4)


@settings(max_examples=200)
@given(letters)
def test_normal_order_matches_bubble_sort(seq):
    mod = InducedModule(SL2, build_rep0(SL2, "2"), 5)
    if sum(d for d, _ in seq) > 5:
        return
    assert mod.normal_order(seq) == bubble_normal_order(SL2, 5, seq)


@pytest.mark.parametrize("rep", ["2", "char:3", "1"])
@pytest.mark.parametrize("N", [0, 1, 2, 3])
def test_truncated_module_is_a_representation(rep, N):
    assert truncated_rep(SL2, build_rep0(SL2, rep), N).representation_defects() == []


def test_grading(e8, gammas):
    mod = InducedModule(e8, build_rep0(e8, "16"), 2)
    v = chi_1920(e8, gammas, 2)[7].terms
    for gen in [(0, 3), (1, 130), (1, 200)]:
        assert {sum(d for d, _ in w) for w, _ in mod.act(gen, v)} <= {1 + gen[0]}


def test_truncation_mismatch():
    with pytest.raises(ValueError):
        ModuleElement(1, {(((2, 0),), 0): Fraction(1)})


def test_sl2_submodules_exact_matches_mod_p():
    rep0 = build_rep0(SL2, "char:2")
    seeds = [ModuleElement(3, {(((1, 1),), 0): Fraction(1)})]
    a = submodule_generate(SL2, rep0, 3, seeds, exact=True)
    assert all(ld.exact_dim_W == ld.dim_W for ld in a.levels)
    full = submodule_generate(SL2, rep0, 3, [ModuleElement(3, {((), 0): Fraction(1)})])
    assert quotient_dims(full) == [0, 0, 0, 0]
    none = submodule_generate(SL2, rep0, 3, [])
    assert quotient_dims(none) == [pbw_count(SL2, l) for l in range(4)]


@pytest.mark.parametrize("rep", ["1", "2"])
def test_sl2_casimir_split(rep):
    sub = submodule_generate(SL2, build_rep0(SL2, rep), 3, [])
    for l in range(4):
        split = casimir_split(sub, l)
        assert sum(s["dimension"] for s in split) == sub.levels[l].dim_quotient


def test_real_character_has_no_candidate():
    # a real weight gives C = -2 on V0, outside the compact-type candidates 2n^2
    sub = submodule_generate(SL2, build_rep0(SL2, "char:2"), 0, [])
    with pytest.raises(UnresolvedEigenvalue):
        casimir_split(sub, 0)


def test_unresolved_eigenvalue():
    with pytest.raises(UnresolvedEigenvalue):
        split_by_casimir([[7]], {Fraction(1): []}, DEFAULT_PRIME)


def test_d8_candidates():
    cands = d8_casimir_candidates()
    assert (16, (1, 0, 0, 0, 0, 0, 0, 0)) in cands[Fraction(15)]
    assert any(d == 128 for d, _ in cands[Fraction(30)])
    assert any(d == 120 for d, _ in cands[Fraction(28)])
    assert Fraction(2 * 9) in default_candidates(SL2)


def test_level_two_involutions(e8, gammas):
    lv = E8LevelTwo(e8, gammas)
    rng = list(range(0, 134016, 997))
    for j in range(8):
        for b in rng:
            c, s = lv.g_on_basis(j, b)
            assert lv.g_on_basis(j, c) == (b, s)


def test_levels_above_two_rejected(gammas):
    with pytest.raises(ValueError):
        e8_quotient_levels(gammas, 3)


@pytest.mark.slow
def test_level_one_quotient(gammas):
    levels = e8_quotient_levels(gammas, 1)
    assert [lv["dim_quotient"] for lv in levels] == [16, 128]
    assert levels[1]["dim_W"] == 1920
    assert [s["eigenvalue"] for s in levels[1]["casimir_split"]] == ["30/1"]
    assert spin32_dims(levels) == [16, 128]
