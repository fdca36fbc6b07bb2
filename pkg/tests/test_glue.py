import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhforge.algebra import dual_numbers
from qhforge.glue import (
    GluedWindowSpec,
    build_B_window,
    build_C_window,
    build_L2_window,
    build_T1n,
    c_window_middle,
    check_symmetric,
    cn,
    cn_quotient_epi,
    dihedral_relation_holds,
    field_spec,
    window_poset,
)
from qhforge.iso import find_isomorphism
from qhforge.modules import dual_bimodule, regular_bimodule, trivial_extension
from qhforge.qh import check_quasihereditary

P = 3


@pytest.fixture(scope="module")
def spec():
    return field_spec(P)


def test_b_window(spec):
    b, _ = build_B_window(spec, 1, 1)
    assert b.dim == 1
    b, comps = build_B_window(spec, 1, 2)
    # path algebra of one arrow: e1, e2 and the arrow t with e1 t = t = t e2
    assert b.dim == 3
    (t,) = range(*comps[("T", 1)])
    e1, e2 = b.idempotent((1, 1)), b.idempotent((2, 1))
    tv = b.basis_vector(t)
    assert np.array_equal(b.mul(e1, tv), tv) and np.array_equal(b.mul(tv, e2), tv)
    assert not b.mul(tv, tv).any()


def test_c_window_products(spec):
    assert build_C_window(spec, 1, 1).dim == 1
    w = build_C_window(spec, 1, 2)
    a, c = w.algebra, w.components
    assert a.dim == 5
    t, ts, s = (a.basis_vector(c[name][0]) for name in [("T", 1), ("T*", 1), ("A*", 1)])
    assert np.array_equal(a.mul(t, ts), s)
    assert not a.mul(ts, t).any()
    for x in (t, ts, s):
        assert not a.mul(s, x).any() and not a.mul(x, s).any()
    assert a.grading == [0, 0, 1, 2, 1]


@pytest.mark.parametrize("n", range(1, 7))
def test_c_window_dimension(spec, n):
    assert build_C_window(spec, 1, n).dim == 4 * n - 3


def test_tilting_bimodule_dims(spec):
    assert build_T1n(spec, 1).bimodule.dim == 1
    t = build_T1n(spec, 2)
    assert t.bimodule.dim == 4
    assert np.array_equal(dual_bimodule(t.bimodule).left.action @ t.witness % P,
                          t.witness @ t.bimodule.left.action % P)


def test_cn_iteration(spec):
    w, t, nxt = cn(spec, 1)
    assert w.dim == t.bimodule.dim == 1
    w, t, nxt = cn(spec, 2)
    assert (w.dim, t.bimodule.dim) == (5, 4)
    w2, t2, _ = cn(nxt, 2)
    assert w2.dim == 2 * 5 + 2 * 4 + 5 == 23


def test_quotient_epimorphisms(spec):
    w1, _, _ = cn(spec, 1)
    e = cn_quotient_epi(w1)
    assert np.array_equal(e.matrix, np.eye(1, dtype=np.int64))
    w, _, nxt = cn(spec, 2)
    e = cn_quotient_epi(w)
    assert e.is_multiplicative() and e.is_surjective()
    ker = e.kernel()
    assert ker.shape[0] == 4 and w.algebra.is_ideal(ker)
    # the kernel is spanned by e2, t, t*, s
    expect = {w.components[("A", 2)][0], w.components[("T", 1)][0], w.components[("T*", 1)][0],
              w.components[("A*", 1)][0]}
    assert {int(np.flatnonzero(v)[0]) for v in ker} == expect
    w2, _, _ = cn(nxt, 2)
    comp = cn_quotient_epi(w2).compose(e)
    assert comp.is_multiplicative() and comp.is_surjective() and comp.target.dim == 1


def test_symmetric_forms(spec):
    dn = dual_numbers(P)
    assert check_symmetric(trivial_extension(dn, dual_bimodule(regular_bimodule(dn))))["symmetric"]
    rep = check_symmetric(build_C_window(spec, 1, 2).algebra)
    assert not rep["symmetric"] and rep["boundary"] == [(2, 1)]
    rep = check_symmetric(build_C_window(spec, 1, 4).algebra)
    assert rep["boundary"] == [(4, 1)] and rep["corner_symmetric"]
    assert {(2, 1), (3, 1)} <= set(rep["self_dual_projectives"])
    assert check_symmetric(build_C_window(spec, 1, 4, cut="none").algebra)["symmetric"]


def test_dihedral_relation():
    assert dihedral_relation_holds(6)


def test_l2_window_reproduces_c_window(spec):
    left = build_C_window(spec, -1, 0, cut="none")
    mid, low, high = c_window_middle(spec, 1, 2)
    right = build_C_window(spec, 3, 4, cut="top")
    out = build_L2_window(left, mid.algebra, right, low, high, window_poset(spec, 1, 2, 2))
    plain = build_C_window(spec, -1, 4)
    assert out.dim == plain.dim == 21
    assert find_isomorphism(out.algebra, plain.algebra).found
    assert check_quasihereditary(out.algebra, out.poset(2)).ok
    assert check_symmetric(out.algebra)["boundary"] == [(4, 1)]


def test_spec_validation_rejects_bad_witness(spec):
    w, t, nxt = cn(spec, 2)
    bad = GluedWindowSpec(nxt.base, nxt.bimodule, np.eye(nxt.bimodule.dim, dtype=np.int64))
    with pytest.raises(ValueError):
        bad.validate()
    assert nxt.validate()


@settings(max_examples=15, deadline=None)
@given(st.integers(-3, 2), st.integers(0, 4), st.sampled_from([2, 3, 5]))
def test_window_properties(k, width, p):
    sp = field_spec(p)
    n = k + width
    w = build_C_window(sp, k, n)
    assert w.dim == 4 * (n - k + 1) - 3
    assert check_quasihereditary(w.algebra, window_poset(sp, k, n, 2)).ok
    # the mirrored cut is the truncation compatible with the first order
    m = build_C_window(sp, k, n, cut="bottom")
    assert check_quasihereditary(m.algebra, window_poset(sp, k, n, 1)).ok
    g = np.array(w.algebra.grading)
    for i, j, l in zip(*np.nonzero(w.algebra.mult)):
        assert g[i] + g[j] == g[l]
