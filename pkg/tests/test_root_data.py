import pytest

from involutory.root_data import (build_root_system, chevalley_constants, ChevalleyAlgebra, so16_table, weyl_dim,
                                  weyl_orbit_roots)

POS_ROOTS = {("A", 1): 1, ("A", 4): 10, ("B", 3): 9, ("C", 3): 9, ("D", 4): 12, ("D", 8): 56,
             ("G", 2): 6, ("F", 4): 24, ("E", 6): 36, ("E", 7): 63, ("E", 8): 120}


@pytest.mark.parametrize("typ,rank", sorted(POS_ROOTS))
def test_positive_root_counts(typ, rank):
    rs = build_root_system(typ, rank)
    assert len(rs.roots) == 2 * POS_ROOTS[typ, rank]
    assert set(rs.roots) == weyl_orbit_roots(rs)


@pytest.mark.parametrize("bad", [("E", 9), ("F", 3), ("G", 3), ("D", 2), ("X", 2)])
def test_invalid_types(bad):
    with pytest.raises(ValueError):
        build_root_system(*bad)


def test_e8_highest_root_and_marks():
    rs = build_root_system("E", 8)
    assert sum(rs.highest_root) == 29
    assert rs.highest_root == (2, 3, 4, 6, 5, 4, 3, 2)
    assert rs.norm2(rs.highest_root) == rs.long_norm2


@pytest.mark.parametrize("typ,rank", [("A", 2), ("B", 3), ("G", 2), ("D", 4)])
def test_chevalley_jacobi(typ, rank):
    alg = ChevalleyAlgebra(build_root_system(typ, rank), chevalley_constants(build_root_system(typ, rank), verify=True))
    assert not alg.jacobi_violations()


def test_weyl_dims_small():
    rs = build_root_system("D", 8)
    assert weyl_dim(rs, (1, 0, 0, 0, 0, 0, 0, 0)) == 16
    assert weyl_dim(rs, (0, 1, 0, 0, 0, 0, 0, 0)) == 120
    assert weyl_dim(rs, (0, 0, 0, 0, 0, 0, 0, 1)) == 128
    assert weyl_dim(rs, (0,) * 8) == 1
    assert len(so16_table()) == 36
