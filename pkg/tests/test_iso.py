import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from qhforge.algebra import BasedAlgebra, direct_sum, dual_numbers, field_algebra
from qhforge.glue import build_C_window, field_spec
from qhforge.iso import find_isomorphism, invariants
from qhforge.linalg import inverse, matmul, rank

from test_algebra import incidence


def rebase(a: BasedAlgebra, g: np.ndarray) -> BasedAlgebra:
    """The same algebra on the basis given by the rows of ``g``."""
    p = a.p
    gi = inverse(g, p)
    prods = a.products(g, g).reshape(-1, a.dim)
    mult = matmul(prods, gi, p).reshape(a.dim, a.dim, a.dim)
    conv = lambda v: matmul(np.asarray(v).reshape(1, -1), gi, p)[0]
    idem = [(lab, conv(v)) for lab, v in a.idempotents]
    return BasedAlgebra(p, mult, conv(a.unit), idem, name="rebased")


def invertible(seed: int, n: int, p: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    while True:
        g = rng.integers(0, p, (n, n))
        if rank(g, p) == n:
            return g


def test_examples():
    assert find_isomorphism(dual_numbers(3), dual_numbers(3)).found
    res = find_isomorphism(dual_numbers(3), direct_sum(field_algebra(3, "a"), field_algebra(3, "b")))
    assert res.verdict == "refuted"
    c = build_C_window(field_spec(3), 1, 3).algebra
    res = find_isomorphism(c, c, graded=True)
    assert res.found and res.map.preserves_grading()


@settings(max_examples=25, deadline=None)
@given(incidence(), st.integers(0, 2**32))
def test_search_recovers_basis_changes(a, seed):
    g = invertible(seed, a.dim, a.p)
    b = rebase(a, g)
    assert invariants(a) == invariants(b)
    res = find_isomorphism(a, b)
    assert res.found
    assert res.map.is_multiplicative() and res.map.is_bijective()


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 4), st.sampled_from([2, 3]), st.integers(0, 2**32))
def test_search_on_windows(n, p, seed):
    a = build_C_window(field_spec(p), 1, n).algebra
    g = invertible(seed, a.dim, p)
    res = find_isomorphism(rebase(a, g), a)
    assert res.found and res.map.is_multiplicative()
