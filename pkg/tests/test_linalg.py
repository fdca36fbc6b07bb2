import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhforge.linalg import (
    PrimeField,
    commutant,
    complement,
    coordinates,
    in_span,
    intersect,
    inverse,
    is_prime,
    matmul,
    nullspace,
    rank,
    row_basis,
    rref,
    solve,
)

PRIMES = [2, 3, 5, 7]


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(vals, dtype=np.int64).reshape(r, c)


def test_zero_matrix_rref():
    r, k, piv = rref(np.zeros((3, 3), dtype=np.int64), 5)
    assert k == 0 and piv == [] and not r.any()


def test_identity_rref():
    eye = np.eye(4, dtype=np.int64)
    r, k, piv = rref(eye, 7)
    assert np.array_equal(r, eye) and k == 4 and piv == [0, 1, 2, 3]


def test_char_two_duplicate_rows():
    assert rank([[1, 1], [1, 1]], 2) == 1


def test_nullspace_examples():
    assert nullspace(np.eye(3, dtype=np.int64), 3).shape == (0, 3)
    assert np.array_equal(nullspace(np.zeros((2, 3), dtype=np.int64), 3), np.eye(3, dtype=np.int64))
    assert nullspace([[1, 2]], 3).tolist() == [[1, 1]]


def test_solve_examples():
    b = np.array([1, 2, 0])
    assert np.array_equal(solve(np.eye(3, dtype=np.int64), b, 3), b)
    assert solve(np.zeros((2, 2), dtype=np.int64), [1, 0], 3) is None
    x = solve([[1, 1]], [1], 2)
    assert x.tolist() in ([1, 0], [0, 1])


def test_commutant_identity_and_full():
    assert commutant([np.eye(3, dtype=np.int64)], 5).shape[0] == 9
    units = []
    for i, j in itertools.product(range(2), repeat=2):
        e = np.zeros((2, 2), dtype=np.int64)
        e[i, j] = 1
        units.append(e)
    assert commutant(units, 3).shape[0] == 1


def test_commutant_of_place_permutations():
    # swap of tensor factors on GF(2)^2 (x) GF(2)^2, basis index 2a + b
    swap = np.zeros((4, 4), dtype=np.int64)
    for a, b in itertools.product(range(2), repeat=2):
        swap[2 * b + a, 2 * a + b] = 1
    # Burnside: orbits of the swap acting on pairs of basis indices
    pairs = list(itertools.product(range(4), repeat=2))
    flip = {0: 0, 1: 2, 2: 1, 3: 3}
    fixed = sum(1 for u, v in pairs if flip[u] == u and flip[v] == v)
    orbits = (len(pairs) + fixed) // 2
    assert orbits == 10
    assert commutant([swap], 2).shape[0] == orbits


def test_field_and_primes():
    assert [q for q in range(20) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19]
    with pytest.raises(ValueError):
        PrimeField(4)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_is_reduced_and_idempotent(pm):
    p, m = pm
    r, k, piv = rref(m, p)
    assert k == len(piv)
    for i, c in enumerate(piv):
        assert r[i, c] == 1
        assert np.count_nonzero(r[:, c]) == 1
    assert not r[k:].any()
    r2, k2, _ = rref(r, p)
    assert k2 == k and np.array_equal(r2, r)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(pm):
    p, m = pm
    ns = nullspace(m, p)
    assert rank(m, p) + ns.shape[0] == m.shape[1]
    if ns.shape[0] and m.shape[0]:
        assert not matmul(m, ns.T, p).any()


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_consistent_systems(pm, data):
    p, m = pm
    if m.shape[0] == 0:
        return
    x0 = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=m.shape[1], max_size=m.shape[1])))
    b = matmul(m, x0.reshape(-1, 1), p)[:, 0]
    x = solve(m, b, p)
    assert x is not None
    assert np.array_equal(matmul(m, x.reshape(-1, 1), p)[:, 0], b)


@settings(max_examples=40, deadline=None)
@given(matrices(max_rows=5, max_cols=5))
def test_inverse_of_square(pm):
    p, m = pm
    if m.shape[0] != m.shape[1] or m.shape[0] == 0:
        return
    inv = inverse(m, p)
    if rank(m, p) < m.shape[0]:
        assert inv is None
    else:
        assert np.array_equal(matmul(m, inv, p), np.eye(m.shape[0], dtype=np.int64))


@settings(max_examples=40, deadline=None)
@given(matrices(), matrices())
def test_subspace_operations(pa, pb):
    p, u = pa
    _, w = pb
    n = u.shape[1]
    w = w[:, :n] % p if w.shape[1] >= n else np.zeros((0, n), dtype=np.int64)
    ub, wb = row_basis(u, p, n), row_basis(w, p, n)
    cap = intersect(ub, wb, p)
    # dim(U + W) + dim(U cap W) = dim U + dim W
    total = row_basis(np.vstack([ub, wb]), p, n).shape[0]
    assert total + cap.shape[0] == ub.shape[0] + wb.shape[0]
    for v in cap:
        assert in_span(ub, v, p) and in_span(wb, v, p)
    comp = complement(ub, n, p)
    assert ub.shape[0] + comp.shape[0] == n
    assert rank(np.vstack([ub, comp]), p) == n
    for v in ub:
        c = coordinates(ub, v, p)
        assert np.array_equal(matmul(c.reshape(1, -1), ub, p)[0], v)
