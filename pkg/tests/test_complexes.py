import logging
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramanujan5 import cli, complexes
from ramanujan5.complexes import Template


@st.composite
def cyclic_instances(draw):
    n = draw(st.integers(5, 60))
    k = draw(st.integers(1, 4))
    gens = draw(st.lists(st.integers(1, n - 1), min_size=k, max_size=k, unique=True))
    q = [f"y{i}" for i in range(k)]
    simplices = [(y,) for y in q]
    if k >= 2 and draw(st.booleans()):
        simplices.append((q[0], q[1]))
    return complexes.CyclicGroup(n), dict(zip(q, gens)), Template(q=q, simplices=simplices)


@settings(max_examples=30, deadline=None)
@given(cyclic_instances())
def test_split_builder_equals_oracle(inst):
    G, gm, T = inst
    c = complexes.build_split_complex(G, gm, T)
    assert complexes.equals_oracle(c, complexes.brute_force_split(G, gm, T))
    assert c.is_downward_closed()


@settings(max_examples=30, deadline=None)
@given(cyclic_instances())
def test_inert_builder_equals_oracle(inst):
    G, gm, T = inst
    parts = {j: [y] for j, y in enumerate(T.q)}
    chambers = [tuple(range(len(T.q)))]
    T = Template(q=T.q, simplices=[], parts=parts, chambers=chambers)
    c = complexes.build_inert_complex(G, gm, T)
    assert complexes.equals_oracle(c, complexes.brute_force_inert(G, gm, T))


@pytest.mark.parametrize("name", cli.TOYS)
def test_group_axioms_and_equivariance(name):
    G, gm, T, case = cli.toy_instance(name)
    elems = G.elements()
    assert G.check_axioms(elems[:20])
    build = complexes.build_split_complex if case == "split" else complexes.build_inert_complex
    c = build(G, gm, T)

    def shift(v, h):
        if case == "split":
            return G.mul(v, h)
        tag, body = v
        return (tag, G.mul(body, h)) if tag == "g" else (tag, frozenset(G.mul(a, h) for a in body))

    rng = random.Random(0)
    top = max(c.simplices)
    for h in rng.sample(elems, min(5, len(elems))):
        moved = {frozenset(shift(v, h) for v in s) for s in c.simplices[top]}
        assert moved == {frozenset(s) for s in c.simplices[top]}


@pytest.mark.parametrize("name", cli.TOYS)
def test_star_is_the_link_of_the_full_complex(name):
    G, gm, T, case = cli.toy_instance(name)
    build = complexes.build_split_complex if case == "split" else complexes.build_inert_complex
    c = build(G, gm, T)
    x = G.elements()[1]
    star = complexes.explore_vertex(G, gm, T, x, 1, case)
    center = star.center
    for d, simp in c.simplices.items():
        through = {frozenset(s) for s in simp if center in s}
        assert through == {frozenset(s) for s in star.simplices.get(d, ())}


def test_toy_counts():
    G, gm, T, _ = cli.toy_instance("cyclic7")
    assert complexes.build_split_complex(G, gm, T).counts() == {0: 7, 1: 21, 2: 7}
    G, gm, T, _ = cli.toy_instance("inert-cyclic15")
    assert complexes.build_inert_complex(G, gm, T).counts() == {0: 45, 1: 45, 2: 15}


def test_validate_flags_duplicate_and_identity_gates():
    G = complexes.CyclicGroup(9)
    rep = complexes.validate_structure(complexes.Star(0, {0: {(0,)}}, False, 1), {},
                                       group=G, gates=[1, 3, 1])
    assert not rep.ok and any(v[0] == "duplicate gate" for v in rep.violations)
    rep = complexes.validate_structure(complexes.Star(0, {0: {(0,)}}, False, 1), {},
                                       group=G, gates=[0, 2])
    assert any(v[0] == "gate is identity" for v in rep.violations)


def test_validate_flags_excess_degree():
    G, gm, T, case = cli.toy_instance("dihedral10")
    c = complexes.build_split_complex(G, gm, T)
    assert complexes.validate_structure(c, {1: 7, 2: 6}, group=G, gates=list(gm.values())).ok
    rep = complexes.validate_structure(c, {1: 6, 2: 6})
    assert any(v[0] == "degree" for v in rep.violations)


def test_coloring_violation_is_reported():
    G = complexes.CyclicGroup(12, colors=3)
    T = Template(q=["a"], simplices=[("a",)])
    c = complexes.build_split_complex(G, {"a": 3}, T)  # 3 is 0 mod 3: same color
    assert not c.coloring_valid()
    assert any(v[0] == "coloring" for v in complexes.validate_structure(c, {}).violations)


def test_partial_gate_map_warns(caplog):
    G = complexes.CyclicGroup(7)
    T = Template(q=["a", "b"], simplices=[("a",), ("b",), ("a", "b")])
    with caplog.at_level(logging.WARNING):
        c = complexes.build_split_complex(G, {"a": 1}, T)
    assert not c.complete
    assert "missing" in caplog.text
    assert c.counts() == {0: 7, 1: 7}


def test_jsonl_is_deterministic():
    G, gm, T, _ = cli.toy_instance("inert-dihedral12")
    a = complexes.build_inert_complex(G, gm, T).to_jsonl()
    b = complexes.build_inert_complex(G, gm, T).to_jsonl()
    assert a == b and a.count("\n") == 42 + 60 + 24


def test_stream_star_matches_explore():
    G, gm, T, case = cli.toy_instance("s4")
    x = G.identity()
    streamed = {frozenset(t) for t in complexes.stream_star(G, gm, T, x, case)}
    star = complexes.explore_vertex(G, gm, T, x, 1, case)
    every = {frozenset(s) for simp in star.simplices.values() for s in simp}
    assert streamed <= every
    maximal = {s for s in every if not any(s < t for t in every)}
    assert maximal <= streamed


def test_matrix_group_modulo_scalars():
    n = 5
    G = complexes.MatrixGroupModN(n, complexes.unit_circle(n))
    from ramanujan5.modn import ModNMatrix, ModNScalar
    z = complexes.unit_circle(n)[1]
    assert G.key(ModNMatrix.identity(n) * z) == G.identity()
    J = G.key(ModNMatrix.antidiagonal(n))
    assert G.mul(J, J) == G.identity() and G.inv(J) == J
    assert ModNScalar(1, 0, n) in complexes.unit_circle(n)


def test_degree_bounds_from_tables():
    from ramanujan5.building import valency_table
    q = 3
    b = complexes.degree_bounds(valency_table(q, "split"), "split")
    assert b[1] == valency_table(q, "split")[(0, "01")] + valency_table(q, "split")[(0, "02")]
    assert set(b) == {1, 2, 3, 4}
