import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhforge.algebra import AlgebraMap, BasedAlgebra, direct_sum, dual_numbers, field_algebra, matrix_algebra
from qhforge.io import algebra_from_dict, algebra_to_dict, bimodule_from_dict, bimodule_to_dict, dumps
from qhforge.iso import find_isomorphism
from qhforge.linalg import rank
from qhforge.modules import (
    AModule,
    Bimodule,
    dual_bimodule,
    ext1,
    find_bimodule_isomorphism,
    hom_space,
    projective,
    quotient_module,
    radical_submodule,
    regular_bimodule,
    regular_module,
    tensor_over,
    trivial_extension,
    twist_module,
)
from qhforge.schur import build_schur, transpose_map
from qhforge.structure import (
    basic_algebra,
    blocks,
    cartan_matrix,
    decompose,
    loewy_length,
    radical,
    radical_by_traces,
    verify_radical,
)


def incidence_algebra(p: int, n: int, rel) -> BasedAlgebra:
    """Incidence algebra of the order generated by ``rel`` on ``range(n)``; basis e_xy for x <= y."""
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from(rel)
    tc = nx.transitive_closure_dag(g)
    pairs = [(x, x) for x in range(n)] + sorted(tc.edges)
    idx = {pq: i for i, pq in enumerate(pairs)}
    d = len(pairs)
    mult = np.zeros((d, d, d), dtype=np.int64)
    for (x, y), i in idx.items():
        for (y2, z), j in idx.items():
            if y == y2:
                mult[i, j, idx[(x, z)]] = 1
    unit = np.zeros(d, dtype=np.int64)
    unit[:n] = 1
    idem = [(x, np.eye(d, dtype=np.int64)[x]) for x in range(n)]
    return BasedAlgebra(p, mult, unit, idem, name="incidence")


@st.composite
def incidence(draw):
    p = draw(st.sampled_from([2, 3, 5]))
    n = draw(st.integers(1, 5))
    rel = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=6))
    rel = [(a, b) for a, b in rel if a < b]
    return incidence_algebra(p, n, rel)


@pytest.fixture(scope="module")
def s22():
    return build_schur(2, 2)


# -- examples ----------------------------------------------------------------

def test_radical_examples(s22):
    assert radical(matrix_algebra(5, 2)).shape[0] == 0
    j = radical(dual_numbers(3))
    assert j.tolist() == [[0, 1]]
    # simple dims 2 and 1: dim J = 10 - (2^2 + 1^2)
    d = decompose(s22.algebra)
    assert sorted(d.simple_dims.values()) == [1, 2]
    assert radical(s22.algebra).shape[0] == 10 - sum(k * k for k in d.simple_dims.values()) == 5
    assert radical_by_traces(s22.algebra).shape[0] == 5
    assert verify_radical(s22.algebra, radical(s22.algebra))["ok"]


def test_primitive_idempotents(s22):
    ss = direct_sum(field_algebra(3), field_algebra(3))
    assert sorted(map(tuple, decompose(ss).primitives.tolist())) == [(0, 1), (1, 0)]
    assert decompose(dual_numbers(3)).primitives.tolist() == [[1, 0]]
    d = decompose(s22.algebra)
    assert len(d.primitives) == 3
    assert d.simple_dims == {2: 2, 0: 1}


def test_basic_algebra(s22):
    assert basic_algebra(matrix_algebra(3, 2)).basic.dim == 1
    assert basic_algebra(dual_numbers(3)).basic.dim == 2
    m = basic_algebra(build_schur(3, 1).algebra)
    assert m.basic.dim == 1 and m.dimension_count()
    assert basic_algebra(s22.algebra).dimension_count()


def test_cartan_and_blocks(s22):
    labs, c = cartan_matrix(direct_sum(field_algebra(2, "a"), field_algebra(2, "b")))
    assert np.array_equal(c, np.eye(2, dtype=np.int64))
    assert cartan_matrix(dual_numbers(2))[1].tolist() == [[2]]
    labs, c = cartan_matrix(s22.algebra)
    order = [labs.index(2), labs.index(0)]
    # reciprocity: P(2) = Delta(2) = [L(2), L(0)], P(0) has Delta(0) and Delta(2), so L(0) twice
    assert c[np.ix_(order, order)].tolist() == [[1, 1], [1, 2]]
    assert blocks(s22.algebra) == [[2, 0]]
    assert blocks(direct_sum(field_algebra(2, "a"), field_algebra(2, "b"))) == [["a"], ["b"]]


def test_blocks_of_s27_match_interval_linkage():
    s = build_schur(3, 7).algebra
    bl = sorted(sorted(b) for b in blocks(s))
    # the isolated weight 5 is its own block; the intervals {1}, {3}, {7} are linked
    assert bl == [[1, 3, 7], [5]]


def test_hom_examples(s22):
    a = s22.algebra
    d = decompose(a)
    for lab in d.labels:
        pm = projective(a, d.reps[lab])
        simple = quotient_module(pm, radical_submodule(pm))
        assert hom_space(simple, simple).shape[0] == 1
    # Hom(P(l), A) = e_l A, of dimension [A : L(l)] * dim End L(l)
    reg = regular_module(a)
    for lab in d.labels:
        pm = projective(a, d.reps[lab])
        assert hom_space(pm, reg).shape[0] == a.right_span(d.reps[lab].reshape(1, -1)).shape[0]
    zero = AModule(a, np.zeros((a.dim, 0, 0), dtype=np.int64))
    assert hom_space(reg, zero).shape[0] == 0


def _simple(a, lab):
    d = decompose(a)
    pm = projective(a, d.reps[lab])
    return quotient_module(pm, radical_submodule(pm))


def test_ext_examples(s22):
    dn = dual_numbers(3)
    ldn = _simple(dn, "1")
    assert ext1(ldn, ldn).dim == 1
    assert ext1(projective(dn, dn.unit), ldn).dim == 0
    b = basic_algebra(s22.algebra).basic
    assert ext1(_simple(b, 0), _simple(b, 2)).dim == 1


def test_trivial_extension_examples():
    f = field_algebra(5)
    zero = Bimodule(f, f, np.zeros((1, 0, 0)), np.zeros((1, 0, 0)))
    assert trivial_extension(f, zero).dim == 1
    te = trivial_extension(f, regular_bimodule(f))
    assert find_isomorphism(te, dual_numbers(5)).found


def test_dual_bimodule_examples(s22):
    f = field_algebra(3)
    d = dual_bimodule(regular_bimodule(f))
    assert d.dim == 1 and find_bimodule_isomorphism(d, regular_bimodule(f)) is not None
    reg = regular_bimodule(s22.algebra)
    assert dual_bimodule(reg).dim == reg.dim
    dd = dual_bimodule(dual_bimodule(reg))
    assert np.array_equal(dd.left.action, reg.left.action)


def test_transpose_twist_is_involution(s22):
    t = transpose_map(s22)
    reg = regular_module(s22.algebra)
    back = twist_module(twist_module(reg, t), t)
    assert back.side == "left" and np.array_equal(back.action, reg.action)


def test_simples_exchanged_by_transpose():
    s = build_schur(3, 4)
    a, t = s.algebra, transpose_map(s)
    for lab in decompose(a).labels:
        left = _simple(a, lab)
        right = twist_module(left, t).as_left_over_opposite()
        # a simple right module annihilated by exactly the same weight idempotents
        for lam, e in a.idempotents:
            assert (np.count_nonzero(left.act(e)) == 0) == (np.count_nonzero(right.act(e)) == 0)


def test_tensor_unit_constraints(s22):
    b = basic_algebra(s22.algebra).basic
    reg = regular_bimodule(b)
    t = tensor_over(reg, reg)
    assert t.dim == b.dim
    assert find_bimodule_isomorphism(t, reg) is not None


def test_algebra_map_properties():
    dn = dual_numbers(3)
    ident = AlgebraMap(dn, dn, np.eye(2, dtype=np.int64))
    assert ident.is_multiplicative() and ident.is_bijective()
    bad = AlgebraMap(dn, dn, [[0, 1], [1, 0]])
    assert not bad.is_multiplicative()


def test_invalid_structure_constants_are_rejected():
    with pytest.raises(ValueError):
        BasedAlgebra(3, np.zeros((2, 2, 1)), [1, 0])
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0, 0] = mult[0, 1, 1] = mult[1, 0, 1] = 1
    mult[1, 1, 0] = 1
    # b_1 is not a unit here
    with pytest.raises(ValueError):
        BasedAlgebra(3, mult, [0, 1])


def test_io_roundtrip(s22):
    a = s22.algebra
    back = algebra_from_dict(algebra_to_dict(a))
    assert np.array_equal(back.mult, a.mult) and back.labels == a.labels
    reg = regular_bimodule(a)
    m = bimodule_from_dict(bimodule_to_dict(reg), a)
    assert np.array_equal(m.right.action, reg.right.action)
    assert dumps(algebra_to_dict(a)) == dumps(algebra_to_dict(back))


# -- properties --------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(incidence())
def test_incidence_radical(a):
    n = len(a.idempotents)
    j = radical(a)
    assert j.shape[0] == a.dim - n
    assert rank(np.vstack([j, radical_by_traces(a)]), a.p) == j.shape[0] == radical_by_traces(a).shape[0]
    assert verify_radical(a, j)["ok"]


@settings(max_examples=30, deadline=None)
@given(incidence())
def test_incidence_cartan_is_the_zeta_matrix(a):
    labs, c = cartan_matrix(a)
    for x, y in itertools.product(range(len(labs)), repeat=2):
        ex, ey = a.idempotent(labs[x]), a.idempotent(labs[y])
        assert c[x, y] == a.peirce(ex, ey).shape[0] <= 1
    assert np.all(np.diag(c) == 1)
    assert loewy_length(a) >= 1


@settings(max_examples=25, deadline=None)
@given(incidence())
def test_dual_and_trivial_extension_properties(a):
    reg = regular_bimodule(a)
    star = dual_bimodule(reg)
    assert star.dim == a.dim
    star.validate()
    te = trivial_extension(a, star)
    assert te.dim == 2 * a.dim
    # the trivial extension by the dual is symmetric: f(x, y) = dual part of xy
    n = a.dim
    form = np.zeros(2 * n, dtype=np.int64)
    form[n:] = a.unit  # evaluation of the dual coordinate at 1 ... f((x,u)) = u(1)
    gram = np.tensordot(te.mult, form, axes=(2, 0)) % a.p
    assert np.array_equal(gram, gram.T)
    assert rank(gram, a.p) == 2 * n


@settings(max_examples=25, deadline=None)
@given(incidence())
def test_io_roundtrip_property(a):
    back = algebra_from_dict(algebra_to_dict(a))
    assert np.array_equal(back.mult, a.mult)
    assert dumps(algebra_to_dict(back)) == dumps(algebra_to_dict(a))
