"""Finite-dimensional algebras over GF(p) given by structure constants."""

from __future__ import annotations

import numpy as np
from scipy import sparse

from .linalg import PrimeField, as_matrix, coordinates, complement, inverse, matmul, rank, row_basis

__all__ = ["BasedAlgebra", "AlgebraMap", "direct_sum", "field_algebra", "dual_numbers", "matrix_algebra"]


class BasedAlgebra:
    """Associative unital algebra with basis ``b_0..b_{n-1}``.

    ``mult[i, j, k]`` is the coefficient of ``b_k`` in ``b_i b_j``.  Elements
    are coefficient vectors.  ``idempotents`` is a list of ``(label, vector)``
    pairs, orthogonal and summing to the unit; ``grading`` is an optional list
    of nonnegative degrees, one per basis element.
    """

    def __init__(self, p: int, mult, unit, idempotents=None, grading=None, name: str = "", validate: bool = True):
        self.field = PrimeField(p)
        self.p = p
        self.mult = np.asarray(mult, dtype=np.int64) % p
        n = self.mult.shape[0]
        if self.mult.shape != (n, n, n):
            raise ValueError("structure constants must have shape (n, n, n)")
        self.dim = n
        self.unit = np.asarray(unit, dtype=np.int64).reshape(n) % p
        if idempotents is None:
            idempotents = [("1", self.unit)]
        self.idempotents = [(lab, np.asarray(v, dtype=np.int64).reshape(n) % p) for lab, v in idempotents]
        self.grading = None if grading is None else [int(d) for d in grading]
        self.name = name
        self._cache: dict = {}
        if validate:
            self.validate()

    # -- elementwise arithmetic -------------------------------------------
    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def _flat(self, side: str):
        # sparse views: "l" rows i -> (j, k); "r" rows j -> (i, k)
        key = ("flat", side)
        if key not in self._cache:
            n = self.dim
            m = self.mult if side == "l" else self.mult.transpose(1, 0, 2)
            self._cache[key] = sparse.csr_matrix(m.reshape(n, n * n)).T.tocsr()
        return self._cache[key]

    def _contract(self, x, side: str) -> np.ndarray:
        """``sum_i x_i mult[i]`` (side "l") or ``sum_j x_j mult[:, j]`` (side "r")."""
        n = self.dim
        v = np.asarray(x, dtype=np.int64)
        if v.ndim == 1:
            return (np.asarray(self._flat(side) @ v) % self.p).reshape(n, n)
        out = np.asarray(self._flat(side) @ v.T) % self.p
        return out.T.reshape(-1, n, n)

    def mul(self, x, y) -> np.ndarray:
        return (np.asarray(y, dtype=np.int64) @ self._contract(x, "l")) % self.p

    def power(self, x, k: int) -> np.ndarray:
        out = self.unit.copy()
        base = np.asarray(x, dtype=np.int64) % self.p
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def left_matrix(self, x) -> np.ndarray:
        """Matrix of ``y -> x y`` acting on column vectors."""
        return self._contract(x, "l").T.copy()

    def right_matrix(self, y) -> np.ndarray:
        """Matrix of ``x -> x y`` acting on column vectors."""
        return self._contract(y, "r").T.copy()

    def left_mats(self) -> np.ndarray:
        """Stack of left multiplication matrices of the basis elements."""
        if "left" not in self._cache:
            self._cache["left"] = np.ascontiguousarray(self.mult.transpose(0, 2, 1))
        return self._cache["left"]

    def right_mats(self) -> np.ndarray:
        if "right" not in self._cache:
            self._cache["right"] = np.ascontiguousarray(self.mult.transpose(1, 2, 0))
        return self._cache["right"]

    def products(self, u, w) -> np.ndarray:
        """All products ``u_a w_b`` as an array of shape ``(len(u), len(w), n)``."""
        n = self.dim
        u = as_matrix(u, self.p, n)
        w = as_matrix(w, self.p, n)
        if u.shape[0] == 0 or w.shape[0] == 0:
            return np.zeros((u.shape[0], w.shape[0], n), dtype=np.int64)
        t = self._contract(u, "l")
        return np.matmul(w[None, :, :], t) % self.p

    # -- subspaces ---------------------------------------------------------
    def left_span(self, v) -> np.ndarray:
        """Basis of the left ideal ``A v``."""
        v = as_matrix(v, self.p, self.dim)
        if v.shape[0] == 0:
            return v
        return row_basis(self.products(np.eye(self.dim, dtype=np.int64), v).reshape(-1, self.dim), self.p, self.dim)

    def right_span(self, v) -> np.ndarray:
        v = as_matrix(v, self.p, self.dim)
        if v.shape[0] == 0:
            return v
        return row_basis(self.products(v, np.eye(self.dim, dtype=np.int64)).reshape(-1, self.dim), self.p, self.dim)

    def ideal(self, v) -> np.ndarray:
        """Basis of the two-sided ideal generated by ``v``."""
        return self.right_span(self.left_span(v))

    def span_products(self, u, w) -> np.ndarray:
        u = as_matrix(u, self.p, self.dim)
        w = as_matrix(w, self.p, self.dim)
        if u.shape[0] == 0 or w.shape[0] == 0:
            return np.zeros((0, self.dim), dtype=np.int64)
        return row_basis(self.products(u, w).reshape(-1, self.dim), self.p, self.dim)

    def peirce(self, e, f) -> np.ndarray:
        """Basis of ``e A f``."""
        m = matmul(self.left_matrix(e), self.right_matrix(f), self.p)
        return row_basis(m.T, self.p, self.dim)

    def is_ideal(self, basis) -> bool:
        basis = as_matrix(basis, self.p, self.dim)
        if basis.shape[0] == 0:
            return True
        eye = np.eye(self.dim, dtype=np.int64)
        k = rank(basis, self.p)
        both = np.vstack([basis, self.products(eye, basis).reshape(-1, self.dim), self.products(basis, eye).reshape(-1, self.dim)])
        return rank(both, self.p) == k

    def idempotent(self, label) -> np.ndarray:
        for lab, v in self.idempotents:
            if lab == label:
                return v
        raise KeyError(f"no idempotent labelled {label!r}")

    @property
    def labels(self) -> list:
        return [lab for lab, _ in self.idempotents]

    # -- validation --------------------------------------------------------
    def validate(self):
        p, n = self.p, self.dim
        m = self.mult
        if not _associative(m, p):
            raise ValueError("structure constants are not associative")
        eye = np.eye(n, dtype=np.int64)
        if not (np.array_equal(self.left_matrix(self.unit), eye) and np.array_equal(self.right_matrix(self.unit), eye)):
            raise ValueError("unit vector is not a two-sided identity")
        total = np.zeros(n, dtype=np.int64)
        for a, (la, ea) in enumerate(self.idempotents):
            total = (total + ea) % p
            for b, (lb, eb) in enumerate(self.idempotents):
                prod = self.mul(ea, eb)
                want = ea if a == b else np.zeros(n, dtype=np.int64)
                if not np.array_equal(prod, want):
                    raise ValueError(f"idempotents {la!r}, {lb!r} are not orthogonal idempotents")
        if not np.array_equal(total, self.unit):
            raise ValueError("idempotents do not sum to the unit")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("idempotent labels must be distinct")
        if self.grading is not None:
            g = np.array(self.grading)
            if len(g) != n or np.any(g < 0):
                raise ValueError("grading must list a nonnegative degree per basis element")
            i, j, k = np.nonzero(m)
            if np.any(g[i] + g[j] != g[k]):
                raise ValueError("multiplication does not respect the grading")

    # -- constructions -----------------------------------------------------
    def with_idempotents(self, idempotents, name: str | None = None) -> "BasedAlgebra":
        return BasedAlgebra(self.p, self.mult, self.unit, idempotents, self.grading,
                            self.name if name is None else name, validate=False)._checked_idempotents()

    def _checked_idempotents(self):
        n = self.dim
        total = np.zeros(n, dtype=np.int64)
        for a, (la, ea) in enumerate(self.idempotents):
            total = (total + ea) % self.p
            for b, (lb, eb) in enumerate(self.idempotents):
                want = ea if a == b else np.zeros(n, dtype=np.int64)
                if not np.array_equal(self.mul(ea, eb), want):
                    raise ValueError(f"idempotents {la!r}, {lb!r} are not orthogonal idempotents")
        if not np.array_equal(total, self.unit):
            raise ValueError("idempotents do not sum to the unit")
        return self

    def opposite(self) -> "BasedAlgebra":
        return BasedAlgebra(self.p, self.mult.transpose(1, 0, 2), self.unit, self.idempotents, self.grading,
                            f"{self.name}^op", validate=False)

    def subalgebra(self, basis, unit, idempotents=None, grading=None, name: str = "") -> "BasedAlgebra":
        """Algebra on the span of ``basis`` (rows), which must be closed under products.

        The returned algebra has ``embedding`` set to ``basis``.  Idempotents
        and unit are given as vectors of the ambient algebra.
        """
        basis = as_matrix(basis, self.p, self.dim)
        k = basis.shape[0]
        prods = self.products(basis, basis).reshape(-1, self.dim)
        coords = coordinates(basis, prods, self.p)
        if coords is None:
            raise ValueError("span is not closed under multiplication")
        mult = coords.reshape(k, k, k)
        to_sub = lambda v: coordinates(basis, v, self.p)
        u = to_sub(unit)
        idem = None
        if idempotents is not None:
            idem = [(lab, to_sub(v)) for lab, v in idempotents]
        if any(x is None for x in [u] + [v for _, v in (idem or [])]):
            raise ValueError("unit or idempotent outside the subalgebra")
        sub = BasedAlgebra(self.p, mult, u, idem, grading, name or f"sub({self.name})", validate=False)
        sub.embedding = basis
        return sub

    def corner(self, e, idempotents=None, name: str = "") -> "BasedAlgebra":
        """The idempotent subalgebra ``e A e`` with unit ``e``."""
        basis = self.peirce(e, e)
        grading = None
        if self.grading is not None:
            basis, grading = self._homogeneous(basis)
        if idempotents is None:
            idempotents = [("1", e)]
        return self.subalgebra(basis, e, idempotents, grading, name or f"eAe({self.name})")

    def _homogeneous(self, basis):
        # split a graded-stable subspace into homogeneous pieces
        g = np.array(self.grading)
        rows, degs = [], []
        for d in sorted(set(self.grading)):
            mask = g == d
            part = basis.copy()
            part[:, ~mask] = 0
            part = row_basis(part, self.p, self.dim)
            rows.append(part)
            degs += [d] * part.shape[0]
        out = np.vstack(rows) if rows else basis
        if out.shape[0] != basis.shape[0]:
            raise ValueError("subspace is not spanned by homogeneous elements")
        return out, degs

    def quotient(self, ideal, name: str = "", complement_basis=None) -> "BasedAlgebra":
        """``A / I``.  Sets ``projection`` (n x m, row vectors) and ``lift`` (m x n)."""
        p, n = self.p, self.dim
        ideal = row_basis(ideal, p, n)
        if complement_basis is None:
            complement_basis = complement(ideal, n, p)
        c = as_matrix(complement_basis, p, n)
        m = c.shape[0]
        full = np.vstack([c, ideal])
        inv = inverse(full, p)
        if inv is None:
            raise ValueError("complement does not complete the ideal to a basis")
        proj = inv[:, :m]  # v @ proj = coordinates of v mod I
        prods = self.products(c, c).reshape(-1, n)
        mult = matmul(prods, proj, p).reshape(m, m, m)
        unit = matmul(self.unit.reshape(1, -1), proj, p)[0]
        idem = []
        for lab, v in self.idempotents:
            w = matmul(v.reshape(1, -1), proj, p)[0]
            if np.any(w):
                idem.append((lab, w))
        grading = None
        if self.grading is not None:
            grading = []
            g = np.array(self.grading)
            for row in c:
                ds = set(g[np.flatnonzero(row)])
                if len(ds) != 1:
                    raise ValueError("complement is not homogeneous")
                grading.append(ds.pop())
        q = BasedAlgebra(p, mult, unit, idem, grading, name or f"{self.name}/I", validate=False)
        q.projection = proj
        q.lift = c
        return q

    def regrade(self, grading) -> "BasedAlgebra":
        return BasedAlgebra(self.p, self.mult, self.unit, self.idempotents, grading, self.name)

    def __repr__(self):
        return f"BasedAlgebra({self.name or '?'}, dim={self.dim}, GF({self.p}))"


def _associative(m: np.ndarray, p: int) -> bool:
    """Compare (b_i b_j) b_k with b_i (b_j b_k) over all triples, sparsely."""
    n = m.shape[0]
    flat = sparse.csr_matrix(m.reshape(n * n, n))
    # lhs[(i,j), (k,mm)] and rhs[(j,k), (i,mm)]
    lhs = (flat @ sparse.csr_matrix(m.reshape(n, n * n))).tocoo()
    rhs = (flat @ sparse.csr_matrix(m.transpose(1, 0, 2).reshape(n, n * n))).tocoo()

    def entries(coo, order):
        v = coo.data % p
        keep = v != 0
        r, c, v = coo.row[keep], coo.col[keep], v[keep]
        a, b = np.divmod(r, n)
        c1, c2 = np.divmod(c, n)
        quad = {"lhs": (a, b, c1, c2), "rhs": (c1, a, b, c2)}[order]
        key = ((quad[0] * n + quad[1]) * n + quad[2]) * n + quad[3]
        idx = np.argsort(key, kind="stable")
        return key[idx], v[idx]

    k1, v1 = entries(lhs, "lhs")
    k2, v2 = entries(rhs, "rhs")
    return np.array_equal(k1, k2) and np.array_equal(v1, v2)


class AlgebraMap:
    """Linear map ``x -> x @ matrix`` between algebras; ``kind`` is "hom" or "antihom"."""

    def __init__(self, source: BasedAlgebra, target: BasedAlgebra, matrix, kind: str = "hom"):
        if kind not in ("hom", "antihom"):
            raise ValueError("kind must be 'hom' or 'antihom'")
        self.source = source
        self.target = target
        self.matrix = np.asarray(matrix, dtype=np.int64).reshape(source.dim, target.dim) % source.p
        self.kind = kind

    def __call__(self, x) -> np.ndarray:
        return matmul(np.asarray(x, dtype=np.int64), self.matrix, self.source.p)

    def is_multiplicative(self) -> bool:
        s, t, p = self.source, self.target, self.source.p
        n = s.dim
        lhs = matmul(s.mult.reshape(n * n, n), self.matrix, p).reshape(n, n, t.dim)
        rhs = t.products(self.matrix, self.matrix)
        if self.kind == "antihom":
            rhs = rhs.transpose(1, 0, 2)
        return np.array_equal(lhs, rhs) and np.array_equal(self(s.unit), t.unit)

    def is_bijective(self) -> bool:
        return self.source.dim == self.target.dim and rank(self.matrix, self.source.p) == self.source.dim

    def is_surjective(self) -> bool:
        return rank(self.matrix, self.source.p) == self.target.dim

    def kernel(self) -> np.ndarray:
        from .linalg import nullspace
        return nullspace(self.matrix.T, self.source.p)

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        """``other`` after ``self``."""
        kind = "hom" if self.kind == other.kind else "antihom"
        return AlgebraMap(self.source, other.target, matmul(self.matrix, other.matrix, self.source.p), kind)

    def preserves_grading(self) -> bool:
        if self.source.grading is None or self.target.grading is None:
            return False
        gt = np.array(self.target.grading)
        for i, d in enumerate(self.source.grading):
            if np.any(gt[np.flatnonzero(self.matrix[i])] != d):
                return False
        return True


def direct_sum(*algebras: BasedAlgebra, name: str = "") -> BasedAlgebra:
    p = algebras[0].p
    dims = [a.dim for a in algebras]
    n = sum(dims)
    mult = np.zeros((n, n, n), dtype=np.int64)
    unit = np.zeros(n, dtype=np.int64)
    idem = []
    graded = all(a.grading is not None for a in algebras)
    grading = [] if graded else None
    off = 0
    for a in algebras:
        if a.p != p:
            raise ValueError("summands over different fields")
        s = slice(off, off + a.dim)
        mult[s, s, s] = a.mult
        unit[s] = a.unit
        for lab, v in a.idempotents:
            w = np.zeros(n, dtype=np.int64)
            w[s] = v
            idem.append((lab, w))
        if graded:
            grading += a.grading
        off += a.dim
    out = BasedAlgebra(p, mult, unit, idem, grading, name or " + ".join(a.name for a in algebras), validate=False)
    out.offsets = [sum(dims[:i]) for i in range(len(dims))]
    return out


def field_algebra(p: int, label="1", grading=None) -> BasedAlgebra:
    return BasedAlgebra(p, np.ones((1, 1, 1), dtype=np.int64), [1], [(label, [1])],
                        grading if grading is not None else [0], name=f"GF({p})")


def dual_numbers(p: int) -> BasedAlgebra:
    """GF(p)[x]/x^2 on the basis 1, x."""
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0, 0] = mult[0, 1, 1] = mult[1, 0, 1] = 1
    return BasedAlgebra(p, mult, [1, 0], grading=[0, 1], name="F[x]/x^2")


def matrix_algebra(p: int, d: int) -> BasedAlgebra:
    """Full matrix algebra on matrix units ``E_ij`` (index ``i*d + j``)."""
    n = d * d
    mult = np.zeros((n, n, n), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                mult[i * d + j, j * d + k, i * d + k] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[[i * d + i for i in range(d)]] = 1
    idem = []
    for i in range(d):
        v = np.zeros(n, dtype=np.int64)
        v[i * d + i] = 1
        idem.append((f"E{i}", v))
    return BasedAlgebra(p, mult, unit, idem, name=f"M{d}")
