"""Exact dense linear algebra over GF(p).

Matrices are numpy ``int64`` arrays with entries in ``range(p)``.  Vectors
spanning a subspace are stored as the *rows* of a 2-d array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PrimeField",
    "is_prime",
    "as_matrix",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "inverse",
    "commutant",
    "row_basis",
    "coordinates",
    "in_span",
    "intersect",
    "complement",
    "matmul",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(x, self.p - 2, self.p)

    def __repr__(self):
        return f"GF({self.p})"


def as_matrix(m, p: int, cols: int | None = None) -> np.ndarray:
    a = np.array(m, dtype=np.int64)
    if a.ndim == 1:
        if a.size == 0 and cols is not None:
            return np.zeros((0, cols), dtype=np.int64)
        a = a.reshape(1, -1) if a.size else a.reshape(0, cols or 0)
    return a % p


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # entries < p, so the int64 accumulator is safe for any inner size < 2^63 / p^2
    return (a @ b) % p


def rref(m, p: int):
    """Reduced row echelon form.  Returns ``(R, rank, pivots)``."""
    a = as_matrix(m, p).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, r, pivots


def rank(m, p: int) -> int:
    return rref(m, p)[1]


def nullspace(m, p: int) -> np.ndarray:
    """Basis (as rows) of ``{v : m v = 0}``."""
    a = as_matrix(m, p)
    cols = a.shape[1]
    r, k, piv = rref(a, p)
    pset = set(piv)
    free = [c for c in range(cols) if c not in pset]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    if free:
        basis[np.arange(len(free)), free] = 1
        if piv:
            basis[:, piv] = (-r[:k][:, free].T) % p
    return basis


def solve(m, b, p: int):
    """Some ``x`` with ``m x = b``, or ``None`` when the system is inconsistent."""
    a = as_matrix(m, p)
    rows, cols = a.shape
    bb = np.array(b, dtype=np.int64).reshape(rows, -1) % p
    aug = np.hstack([a, bb])
    r, k, piv = rref(aug, p)
    if any(c >= cols for c in piv):
        return None
    x = np.zeros((cols, bb.shape[1]), dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r[i, cols:]
    return x[:, 0] if np.ndim(b) == 1 else x


def inverse(m, p: int):
    a = as_matrix(m, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    r, k, piv = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if k < n or piv[n - 1] >= n:
        return None
    return r[:, n:]


def commutant(generators, p: int) -> np.ndarray:
    """Basis of ``{X : X g = g X}``; each row is a row-major flattened ``X``."""
    gens = [as_matrix(g, p) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    d = gens[0].shape[0]
    if any(g.shape != (d, d) for g in gens):
        raise ValueError("generators must be square of equal size")
    eye = np.eye(d, dtype=np.int64)
    # row-major vec: vec(Xg) = (I kron g^T) vec X, vec(gX) = (g kron I) vec X
    blocks = [np.kron(eye, g.T) - np.kron(g, eye) for g in gens]
    return nullspace(np.vstack(blocks) % p, p)


def row_basis(vectors, p: int, cols: int | None = None) -> np.ndarray:
    """Echelon basis of the row span."""
    a = as_matrix(vectors, p, cols)
    if a.shape[0] == 0:
        return a.reshape(0, a.shape[1] if a.ndim == 2 else (cols or 0))
    r, k, _ = rref(a, p)
    return r[:k]


def coordinates(basis: np.ndarray, v, p: int):
    """Coefficients ``c`` with ``c @ basis = v`` (rows of ``v`` handled at once)."""
    v = np.array(v, dtype=np.int64) % p
    single = v.ndim == 1
    vv = v.reshape(1, -1) if single else v
    if basis.shape[0] == 0:
        if np.any(vv):
            return None
        out = np.zeros((vv.shape[0], 0), dtype=np.int64)
        return out[0] if single else out
    x = solve(basis.T, vv.T, p)
    if x is None:
        return None
    return x[:, 0] if single else x.T


def in_span(basis: np.ndarray, v, p: int) -> bool:
    if basis.shape[0] == 0:
        return not np.any(np.asarray(v) % p)
    return rank(np.vstack([basis, as_matrix(v, p)]), p) == rank(basis, p)


def intersect(u: np.ndarray, w: np.ndarray, p: int) -> np.ndarray:
    n = u.shape[1]
    if u.shape[0] == 0 or w.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    null = nullspace(np.vstack([u, (-w) % p]).T, p)
    if null.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    return row_basis(matmul(null[:, : u.shape[0]], u, p), p, n)


def complement(u: np.ndarray, n: int, p: int, within: np.ndarray | None = None) -> np.ndarray:
    """Rows completing ``u`` to a basis of ``within`` (default: the whole space).

    ``within`` must be a basis of a space containing ``u``; the complement is
    chosen among its rows.
    """
    if within is None:
        within = np.eye(n, dtype=np.int64)
    u = as_matrix(u, p, n)
    if u.shape[0] == 0:
        return within.copy()
    cu = coordinates(within, u, p)
    if cu is None:
        raise ValueError("subspace is not contained in the ambient space")
    _, _, piv = rref(cu, p)
    pset = set(piv)
    keep = [i for i in range(within.shape[0]) if i not in pset]
    return within[keep]
