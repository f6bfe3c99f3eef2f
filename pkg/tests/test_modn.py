import random
from math import prod
from types import SimpleNamespace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramanujan5 import complexes, exact, gates, modn
from ramanujan5.algebra import AlgebraElem, iota

good_n = st.sampled_from([3, 5, 9, 13, 15, 17, 25, 39, 45])


@given(st.integers(2, 10 ** 6))
def test_factorize_and_crt(n):
    f = modn.factorize(n)
    assert prod(q ** k for q, k in f.items()) == n
    x = random.Random(n).randrange(n)
    assert modn.crt([(x % m, m) for m in (q ** k for q, k in f.items())]) == (x, n)


@settings(max_examples=30)
@given(good_n, st.integers(0, 10 ** 6))
def test_matrix_ring_identities(n, seed):
    rng = random.Random(seed)
    H = modn.random_hermitian(n, rng)
    K = modn.random_hermitian(n, rng)
    assert modn.is_hermitian(H)
    assert (H * K).dagger() == K.dagger() * H.dagger()
    assert H * H.inverse() == modn.ModNMatrix.identity(n)
    assert (H * K).det() == H.det() * K.det()


@pytest.fixture(scope="module")
def basis(bundle):
    return [AlgebraElem.from_vector(c) for c in exact.transpose(bundle.amax)]


@pytest.mark.parametrize("n", [3, 5, 13])
def test_trivialization_is_a_ring_map(basis, n):
    triv = modn.build_Bn(n, seed=1)
    rng = random.Random(n)
    for _ in range(4):
        x, y = rng.choice(basis), rng.choice(basis)
        assert triv.reduce(x * y) == triv.reduce(x) * triv.reduce(y)
        assert triv.reduce(x + y) == triv.reduce(x) + triv.reduce(y)


@pytest.mark.parametrize("n", [3, 5, 13])
def test_iota_becomes_the_adjoint_for_h(basis, n):
    triv = modn.build_Bn(n, seed=2)
    H = triv.hermitian()
    assert modn.is_hermitian(H) and H.det().is_unit()
    Hinv = H.inverse()
    for x in basis[:6]:
        assert triv.reduce(iota(x)) == Hinv * triv.reduce(x).dagger() * H


@pytest.mark.parametrize("q", [3, 5])
def test_reduction_is_surjective(basis, q):
    triv = modn.build_Bn(q)
    assert modn.span_rank([triv.reduce(x) for x in basis], q) == 50


@pytest.mark.slow
def test_eleven_trivialization(bundle, basis):
    triv = modn.build_Vp0(bundle, 1, seed=0)
    rng = random.Random(11)
    for _ in range(3):
        x, y = rng.choice(basis), rng.choice(basis)
        assert triv.reduce(x * y) == triv.reduce(x) * triv.reduce(y)
    assert modn.span_rank([triv.reduce(x) for x in basis], 11) == 50
    with pytest.raises(modn.NotIntegral):
        triv.reduce(gates.worked_gate(bundle).g)


@pytest.mark.slow
def test_composite_trivialization(bundle, basis):
    comp = modn.CompositeTrivialization(bundle, 33, seed=0)
    x, y = basis[3], basis[17]
    assert comp.reduce(x * y) == comp.reduce(x) * comp.reduce(y)
    assert comp.reduce(x).reduce(3) == comp.parts[0].reduce(x)
    assert comp.reduce(x).reduce(11) == comp.parts[1].reduce(x)


def test_reduce_gate_refuses_eleven(bundle):
    triv = SimpleNamespace(n=33)
    with pytest.raises(ValueError):
        modn.reduce_gate(gates.worked_gate(bundle), triv, None)


@pytest.mark.parametrize("n", [2, 7, 11, 22, 77])
def test_bad_moduli(n):
    with pytest.raises(ValueError):
        modn.hensel_gamma(n)


@settings(max_examples=20, deadline=None)
@given(good_n, st.integers(0, 10 ** 6))
def test_build_cn_property(n, seed):
    H = modn.random_hermitian(n, random.Random(seed))
    C, lam = modn.build_Cn(H)
    assert C.det().is_unit()
    assert C.dagger() * H * C == modn.ModNMatrix.antidiagonal(n) * lam


def test_build_cn_keeps_scalar_multiples_of_j():
    J = modn.ModNMatrix.antidiagonal(13)
    C, lam = modn.build_Cn(J * 4)
    assert C == modn.ModNMatrix.identity(13) and lam == 4


@pytest.mark.parametrize("n", [3, 5, 9, 13, 15])
def test_u1_count_matches_brute_force(n):
    assert len(complexes.unit_circle(n)) == modn.group_sizes(n)["u1"]


def test_u5_local_orders():
    # |U_5(F_3)| = q^10 prod (q^i - (-1)^i) and |GL_5(F_q)| for split q
    assert modn.group_sizes(3)["u5"] == 3 ** 10 * prod(3 ** i - (-1) ** i for i in range(1, 6))
    assert modn.group_sizes(11)["u5"] == prod(11 ** 5 - 11 ** i for i in range(5))
    assert modn.group_sizes(9)["u5"] == modn.group_sizes(3)["u5"] * 3 ** 25


def test_vertex_counts():
    s = modn.group_sizes(5, p=11)
    assert s["vertices"] == s["u5"] // s["u1"]
    assert modn.group_sizes(5, p=3)["vertices"] == s["u5"]


def test_export_is_deterministic(bundle):
    triv = modn.build_Bn(5, seed=3)
    cn = modn.build_Cn(triv.hermitian())
    z = modn.reduce_gate(gates.worked_gate(bundle), triv, cn)
    assert modn.export_reduced([z], 5) == modn.export_reduced([z], 5)
    assert modn.is_unitary(z)
