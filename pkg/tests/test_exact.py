from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramanujan5 import exact

small = st.integers(-6, 6)


def matrices(n, m=None):
    return st.lists(st.lists(small, min_size=m or n, max_size=m or n), min_size=n, max_size=n)


@given(matrices(3))
def test_rat_inverse_roundtrip(a):
    if exact.rat_det(a) == 0:
        with pytest.raises(Exception):
            exact.rat_inverse(a)
        return
    inv = exact.rat_inverse(a)
    assert exact.mat_mul(a, inv) == exact.identity(3, Fraction(1), Fraction(0))


@given(matrices(4))
def test_det_matches_numpy(a):
    assert exact.rat_det(a) == round(np.linalg.det(np.array(a, dtype=float)))


@given(matrices(3))
def test_charpoly_cayley_hamilton(a):
    cp = exact.charpoly(a)
    acc = exact.zeros(3)
    power = exact.identity(3)
    for c in reversed(cp):
        acc = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(acc, power)]
        power = exact.mat_mul(power, a)
    assert all(x == 0 for row in acc for x in row)


@given(matrices(3, 4))
def test_hnf_canonical_under_column_operations(gens):
    lat = exact.RationalLattice(gens)
    # add column 0 to column 1 and swap two columns: same lattice
    moved = [row[:] for row in gens]
    for row in moved:
        row[1] += row[0]
        row[2], row[3] = row[3], row[2]
    assert exact.RationalLattice(moved) == lat
    for col in zip(*gens):
        assert lat.contains(list(col))


def test_rational_lattice_index():
    big = exact.RationalLattice([[Fraction(1, 2), 0], [0, 1]])
    sub = exact.RationalLattice([[1, 0], [0, 3]])
    assert exact.lattice_index(sub, big) == 6
    assert not big.contains([Fraction(1, 3), 0])


def _random_pd(rng, n):
    a = rng.integers(-3, 4, size=(n, n))
    return (a.T @ a + np.eye(n, dtype=int)).astype(int).tolist()


def _brute_count(g, bound, box):
    n = len(g)
    q = exact.GramForm(g)
    return sum(1 for x in product(range(-box, box + 1), repeat=n) if any(x) and q(x) <= bound)


@pytest.mark.parametrize("seed", range(6))
def test_fincke_pohst_against_box_search(seed):
    rng = np.random.default_rng(seed)
    g = _random_pd(rng, 3)
    bound = 12
    # x^T G x >= lambda_min |x|^2 bounds the box
    lam = min(np.linalg.eigvalsh(np.array(g, dtype=float)))
    box = int((bound / lam) ** 0.5) + 1
    full = exact.count_short(g, bound, canonical=False)
    assert full == _brute_count(g, bound, box)
    assert full == 2 * exact.count_short(g, bound)
    assert exact.count_short(g, bound, reduce=False) == exact.count_short(g, bound)


@settings(max_examples=25)
@given(st.integers(0, 10 ** 6))
def test_lll_is_unimodular_and_preserves_counts(seed):
    rng = np.random.default_rng(seed)
    g = _random_pd(rng, 4)
    H = exact.lll_gram(g)
    assert abs(exact.rat_det(H)) == 1
    assert exact.count_short(g, 10) == exact.count_short(g, 10, reduce=False)


def test_search_partition_covers_enumeration():
    g = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    whole = sorted(exact.enumerate_short(g, 20))
    parts = exact.search_partition(g, 20, 3)
    pieces = sorted(v for part in parts for v in exact.enumerate_short(g, 20, top_values=part))
    assert pieces == whole


def test_exact_ldl_rejects_indefinite():
    with pytest.raises(ValueError):
        exact.exact_ldl([[1, 2], [2, 1]])
    L, D = exact.exact_ldl([[4, 2], [2, 3]])
    assert D == [4, 2]


def test_canonical_sign():
    assert exact.canonical_sign((0, -1, 2)) == (0, 1, -2)
    assert exact.canonical_sign((0, 0)) == (0, 0)
