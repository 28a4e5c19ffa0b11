import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from involutory.analysis_demo import default_grid, divergence_table, f_all, f_n, j_norm2


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 300), st.sampled_from([0.05, 0.1, 0.3]))
def test_fft_matches_direct_sum(N, eps):
    f = f_all(N, eps)
    for n in {1, N, (N + 1) // 2}:
        assert math.isclose(f[n - 1], f_n(n, N, eps), rel_tol=1e-9)
        assert math.isclose(f_n(n, N, eps), f_n(n, N, eps, reverse=True), rel_tol=1e-12)


def test_argument_checks():
    with pytest.raises(ValueError):
        f_n(0, 5, 0.1)
    with pytest.raises(ValueError):
        f_n(1, 5, 0.0)
    with pytest.raises(ValueError):
        divergence_table(-1, [10])


def test_partial_sums_monotone_and_growing():
    rep = divergence_table(0.1, default_grid(20_000))
    assert rep.monotone()
    assert 0.4 < rep.slope(2e3, 2e4) < 0.8
    assert rep.to_csv().splitlines()[0] == "N,partial_sum"


def test_lower_bound_positive():
    rep = divergence_table(0.1, [1000])
    assert rep.rows[0][3] > 0


def test_j_norm_converges():
    assert j_norm2(10**5, 0.1) < sum(n ** -1.2 for n in range(1, 10**6)) + 1e-9


def test_grid():
    g = default_grid(100_000)
    assert g[0] == 100 and g[-1] == 100_000 and g == sorted(set(g))
