import pytest

from involutory.loop_chevalley import (BadNode, berman_relation_defects, build_e9,
                                       check_gim_homomorphism, find_node_map, is_gim, jacobi_random,
                                       predicted_fixed_dimension, summarize)

E9 = build_e9()


def test_affine_cartan_matrix():
    A = E9.affine_cartan
    assert len(A) == 9
    assert all(A[i][i] == 2 for i in range(9))
    assert all(A[i][j] == A[j][i] for i in range(9) for j in range(9))


def test_jacobi_with_central_extension():
    assert jacobi_random(E9, 3000, seed=4) == 0


def test_berman_generators():
    assert berman_relation_defects(E9) == []


@pytest.mark.parametrize("M", [0, 1, 2])
def test_fixed_space_dimensions(M):
    assert E9.fixed_dimension(M) == predicted_fixed_dimension(E9.alg, M) == 120 + 248 * M


def test_node_map_is_unique():
    assert find_node_map(E9) == [1, 3, 4, 5, 6, 7, 8, 0, 2]


def test_bad_node():
    with pytest.raises(BadNode):
        E9.chevalley_e(12)


def test_gim_relations_pass():
    rels = check_gim_homomorphism()
    assert summarize(rels).passed
    assert len(rels) == 392


def test_literal_short_roots_fail():
    rels = check_gim_homomorphism(literal_short_roots=True)
    assert sum(r["status"] != "pass" for r in rels) == 12
    assert not summarize(rels).passed


def test_gim_matrix_detection():
    assert is_gim([[2, -1], [-1, 2]])
    assert is_gim([[2, 1], [1, 2]])
    assert not is_gim([[2, 1], [-1, 2]])
    assert not is_gim([[1, 0], [0, 2]])


def test_loop_element_arithmetic():
    x = E9.chevalley_e(1)
    assert not (x - x)
    assert x.scale(2) == x + x
