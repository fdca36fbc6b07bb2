"""Modules and bimodules given by action matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraMap, BasedAlgebra
from .linalg import as_matrix, complement, coordinates, intersect, inverse, matmul, nullspace, rank, row_basis
from .structure import decompose, radical

__all__ = [
    "AModule",
    "Bimodule",
    "Ext1",
    "algebra_generators",
    "regular_module",
    "projective",
    "submodule",
    "quotient_module",
    "module_sum",
    "dual_module",
    "twist_module",
    "generated_submodule",
    "radical_submodule",
    "trace",
    "hom_space",
    "is_isomorphic",
    "find_isomorphism",
    "ext1",
    "universal_extension",
    "endomorphism_algebra",
    "regular_bimodule",
    "dual_bimodule",
    "tensor_over",
    "bimodule_hom_space",
    "find_bimodule_isomorphism",
    "restrict_bimodule",
    "trivial_extension",
]


class AModule:
    """Module over ``algebra``: ``action[i]`` is the matrix of basis element ``i``.

    Matrices act on column vectors.  For a left module ``act(ab) = act(a) act(b)``;
    for a right module ``act(ab) = act(b) act(a)`` (so ``v.b = act(b) v``).
    """

    def __init__(self, algebra: BasedAlgebra, action, side: str = "left", validate: bool = False):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.algebra = algebra
        self.side = side
        self.action = np.asarray(action, dtype=np.int64) % algebra.p
        if self.action.ndim != 3 or self.action.shape[0] != algebra.dim:
            raise ValueError("action must have shape (dim A, d, d)")
        self.dim = self.action.shape[1]
        self._cache: dict = {}
        if validate:
            self.validate()

    @property
    def p(self) -> int:
        return self.algebra.p

    def act(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        if self.dim == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return np.tensordot(x, self.action, axes=(0, 0)) % self.p

    def validate(self):
        a, p = self.algebra, self.p
        n, d = a.dim, self.dim
        if d == 0:
            return
        flat = self.action.reshape(n, d * d)
        # sum_k mult[i,j,k] act_k
        want = matmul(a.mult.reshape(n * n, n), flat, p).reshape(n, n, d, d)
        if self.side == "left":
            got = np.matmul(self.action[:, None], self.action[None, :]) % p
        else:
            got = np.matmul(self.action[None, :], self.action[:, None]) % p
        if not np.array_equal(got, want):
            raise ValueError("action does not respect multiplication")
        if not np.array_equal(self.act(a.unit), np.eye(d, dtype=np.int64)):
            raise ValueError("unit does not act as the identity")

    def as_left_over_opposite(self) -> "AModule":
        return AModule(self.algebra.opposite(), self.action, "left" if self.side == "right" else "right")

    def __repr__(self):
        return f"AModule({self.side}, dim={self.dim}, over {self.algebra.name or self.algebra.dim})"


def algebra_generators(a: BasedAlgebra):
    """Peirce-homogeneous generating set ``[(i, j, vector)]``.

    Consists of the primitive idempotents together with, for each pair of
    primitives, a basis of ``e_i A e_j`` modulo ``e_i J^2 e_j``.
    """
    if "gens" in a._cache:
        return a._cache["gens"]
    p, n = a.p, a.dim
    d = decompose(a)
    j = radical(a)
    j2 = a.span_products(j, j)
    out = [(i, i, e) for i, e in enumerate(d.primitives)]
    for i, e in enumerate(d.primitives):
        ea = a.right_span(e.reshape(1, -1))
        for k, f in enumerate(d.primitives):
            block = row_basis(matmul(ea, a.right_matrix(f).T, p), p, n)
            if block.shape[0] == 0:
                continue
            low = row_basis(matmul(matmul(j2, a.left_matrix(e).T, p), a.right_matrix(f).T, p), p, n)
            for v in complement(low, n, p, within=block):
                if i == k and np.array_equal(v, e):
                    continue
                out.append((i, k, v))
    a._cache["gens"] = out
    return out


def regular_module(a: BasedAlgebra, side: str = "left") -> AModule:
    mats = a.left_mats() if side == "left" else a.right_mats()
    return AModule(a, mats, side)


def submodule(m: AModule, basis) -> AModule:
    """Restriction of the action to an invariant subspace (rows of ``basis``)."""
    b = as_matrix(basis, m.p, m.dim)
    k = b.shape[0]
    if k == 0:
        return AModule(m.algebra, np.zeros((m.algebra.dim, 0, 0), dtype=np.int64), m.side)
    imgs = np.matmul(m.action, b.T[None]) % m.p  # (n, d, k): act(b_i) applied to the basis
    flat = imgs.transpose(0, 2, 1).reshape(-1, m.dim)
    coords = coordinates(b, flat, m.p)
    if coords is None:
        raise ValueError("subspace is not invariant")
    act = coords.reshape(m.algebra.dim, k, k).transpose(0, 2, 1)
    out = AModule(m.algebra, act, m.side)
    out.embedding = b
    return out


def quotient_module(m: AModule, basis) -> AModule:
    """``M / U``; sets ``projection`` (d x q) and ``lift`` (q x d), row conventions."""
    p, d = m.p, m.dim
    u = row_basis(basis, p, d)
    c = complement(u, d, p)
    q = c.shape[0]
    full = np.vstack([c, u])
    inv = inverse(full, p)
    proj = inv[:, :q]
    # column action: new coords of act(b) c_j
    imgs = np.matmul(m.action, c.T[None]) % p  # (n, d, q)
    act = np.matmul(proj.T[None], imgs) % p  # (n, q, q)
    out = AModule(m.algebra, act, m.side)
    out.projection = proj
    out.lift = c
    return out


def module_sum(*mods: AModule) -> AModule:
    a = mods[0].algebra
    d = sum(x.dim for x in mods)
    act = np.zeros((a.dim, d, d), dtype=np.int64)
    off = 0
    for x in mods:
        act[:, off:off + x.dim, off:off + x.dim] = x.action
        off += x.dim
    out = AModule(a, act, mods[0].side)
    out.offsets = np.cumsum([0] + [x.dim for x in mods]).tolist()
    return out


def dual_module(m: AModule) -> AModule:
    """``Hom_F(M, F)`` on the dual basis; a left module becomes a right module."""
    side = "right" if m.side == "left" else "left"
    return AModule(m.algebra, m.action.transpose(0, 2, 1), side)


def twist_module(m: AModule, t: AlgebraMap) -> AModule:
    """Twist by an antiautomorphism ``t``: the side flips, ``b`` acts as ``t(b)``."""
    if t.kind != "antihom":
        raise ValueError("twisting flips sides and needs an antihomomorphism")
    act = np.tensordot(t.matrix, m.action, axes=(1, 0)) % m.p
    return AModule(m.algebra, act, "right" if m.side == "left" else "left")


def generated_submodule(m: AModule, vectors) -> np.ndarray:
    """Basis of the submodule generated by ``vectors`` (rows)."""
    v = as_matrix(vectors, m.p, m.dim)
    if v.shape[0] == 0:
        return v
    imgs = np.matmul(m.action, v.T[None]) % m.p
    return row_basis(imgs.transpose(0, 2, 1).reshape(-1, m.dim), m.p, m.dim)


def radical_submodule(m: AModule) -> np.ndarray:
    j = radical(m.algebra)
    if j.shape[0] == 0 or m.dim == 0:
        return np.zeros((0, m.dim), dtype=np.int64)
    mats = np.tensordot(j, m.action, axes=(1, 0)) % m.p  # (r, d, d)
    return row_basis(mats.transpose(0, 2, 1).reshape(-1, m.dim), m.p, m.dim)


def trace(m: AModule, idempotents) -> np.ndarray:
    """Sum of images of all maps from ``A e`` into ``m``, i.e. ``A e M`` (left)."""
    rows = []
    for e in idempotents:
        img = m.act(e)
        rows.append(img.T)
    if not rows or m.dim == 0:
        return np.zeros((0, m.dim), dtype=np.int64)
    return generated_submodule(m, np.vstack(rows))


def projective(a: BasedAlgebra, e, side: str = "left") -> AModule:
    """``A e`` (left) or ``e A`` (right) as a submodule of the regular module."""
    e = np.asarray(e, dtype=np.int64).reshape(1, -1)
    basis = a.left_span(e) if side == "left" else a.right_span(e)
    return submodule(regular_module(a, side), basis)


# -- homomorphisms ---------------------------------------------------------

def _peirce_frame(m: AModule):
    """Basis change adapted to ``M = sum e_i M`` over the primitive idempotents."""
    if "frame" in m._cache:
        return m._cache["frame"]
    d = decompose(m.algebra)
    cols, sizes = [], []
    for e in d.primitives:
        img = row_basis(m.act(e).T, m.p, m.dim)
        cols.append(img)
        sizes.append(img.shape[0])
    q = np.vstack(cols).T if m.dim else np.zeros((0, 0), dtype=np.int64)  # columns: new basis
    qinv = inverse(q, m.p) if m.dim else q
    if m.dim and qinv is None:
        raise ValueError("primitive idempotents do not decompose the module")
    offs = np.cumsum([0] + sizes).tolist()
    m._cache["frame"] = (q, qinv, offs)
    return m._cache["frame"]


def hom_space(m: AModule, n: AModule) -> np.ndarray:
    """Basis of module maps ``m -> n`` as matrices of shape ``(dim n, dim m)``."""
    if m.algebra is not n.algebra and m.algebra.dim != n.algebra.dim:
        raise ValueError("modules over different algebras")
    if m.side != n.side:
        raise ValueError("modules on different sides")
    p = m.p
    if m.dim == 0 or n.dim == 0:
        return np.zeros((0, n.dim, m.dim), dtype=np.int64)
    qm, qmi, om = _peirce_frame(m)
    qn, qni, on = _peirce_frame(n)
    k = len(om) - 1
    # unknown block Y_i : e_i M -> e_i N
    var_off = [0]
    for i in range(k):
        var_off.append(var_off[-1] + (on[i + 1] - on[i]) * (om[i + 1] - om[i]))
    nv = var_off[-1]
    if nv == 0:
        return np.zeros((0, n.dim, m.dim), dtype=np.int64)
    rows = []
    for i, j, g in algebra_generators(m.algebra):
        if i == j and np.array_equal(g, decompose(m.algebra).primitives[i]):
            continue
        gm = matmul(matmul(qmi, m.act(g), p), qm, p)
        gn = matmul(matmul(qni, n.act(g), p), qn, p)
        # with action matrices X.act_M(g) = act_N(g).X ; left: g maps e_j-part to e_i-part
        src, dst = (j, i) if m.side == "left" else (i, j)
        a_m = gm[om[dst]:om[dst + 1], om[src]:om[src + 1]]
        a_n = gn[on[dst]:on[dst + 1], on[src]:on[src + 1]]
        nd, md = a_n.shape[0], a_m.shape[1]
        if nd == 0 or md == 0:
            continue
        nsrc = on[src + 1] - on[src]
        mdst = om[dst + 1] - om[dst]
        # a_n Y_src - Y_dst a_m = 0, Y_src is (nsrc x md), Y_dst is (nd x mdst)
        blk = np.zeros((nd * md, nv), dtype=np.int64)
        if nsrc:
            blk[:, var_off[src]:var_off[src + 1]] += np.kron(a_n, np.eye(md, dtype=np.int64))
        if mdst:
            blk[:, var_off[dst]:var_off[dst + 1]] -= np.kron(np.eye(nd, dtype=np.int64), a_m.T)
        rows.append(blk % p)
    sol = nullspace(np.vstack(rows), p) if rows else np.eye(nv, dtype=np.int64)
    out = np.zeros((sol.shape[0], n.dim, m.dim), dtype=np.int64)
    for t, v in enumerate(sol):
        x = np.zeros((n.dim, m.dim), dtype=np.int64)
        for i in range(k):
            r0, r1, c0, c1 = on[i], on[i + 1], om[i], om[i + 1]
            x[r0:r1, c0:c1] = v[var_off[i]:var_off[i + 1]].reshape(r1 - r0, c1 - c0)
        out[t] = matmul(matmul(qn, x, p), qmi, p)
    return out


def _invertible_combination(basis: np.ndarray, p: int, seed: int, tries: int = 64):
    """An invertible element of the span of ``basis`` (square matrices), or ``None``."""
    k = basis.shape[0]
    if k == 0:
        return None
    size = basis.shape[1]
    for x in basis:
        if rank(x, p) == size:
            return x
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        c = rng.integers(0, p, size=k)
        x = np.tensordot(c, basis, axes=(0, 0)) % p
        if rank(x, p) == size:
            return x
    if p**k <= 4096:
        # exhaustive over small spans (deterministic order)
        for idx in range(p**k):
            c = [(idx // p**t) % p for t in range(k)]
            x = np.tensordot(np.array(c, dtype=np.int64), basis, axes=(0, 0)) % p
            if rank(x, p) == size:
                return x
    return None


def find_isomorphism(m: AModule, n: AModule, seed: int = 0):
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return _invertible_combination(hom_space(m, n), m.p, seed)


def is_isomorphic(m: AModule, n: AModule, seed: int = 0) -> bool:
    return find_isomorphism(m, n, seed) is not None


def endomorphism_algebra(m: AModule, opposite: bool = True, idempotents=None, name: str = ""):
    """``End(m)`` on a basis of module maps; ``opposite`` multiplies as ``x.y = y o x``.

    Returns ``(algebra, basis)`` where ``basis[k]`` is the matrix of basis element ``k``.
    """
    p = m.p
    basis = hom_space(m, m)
    k = basis.shape[0]
    flat = basis.reshape(k, -1)
    prods = np.matmul(basis[:, None], basis[None, :]) % p  # (x, y) -> x o y
    if opposite:
        prods = prods.transpose(1, 0, 2, 3)
    coords = coordinates(flat, prods.reshape(k * k, -1), p)
    mult = coords.reshape(k, k, k)
    unit = coordinates(flat, np.eye(m.dim, dtype=np.int64).reshape(-1), p)
    idem = None
    if idempotents is not None:
        idem = [(lab, coordinates(flat, e.reshape(-1), p)) for lab, e in idempotents]
    return BasedAlgebra(p, mult, unit, idem, name=name or "End"), basis


# -- extensions ------------------------------------------------------------

@dataclass
class Ext1:
    dim: int
    cocycles: np.ndarray  # (dim, dim N, dim Omega): maps Omega -> N spanning Ext^1 modulo coboundaries
    cover: AModule  # projective cover P0 of the first argument
    omega: np.ndarray  # basis of the kernel of P0 -> M (rows, coordinates in P0)
    target: AModule


def _projective_cover(m: AModule):
    """``(P0, pi)`` with ``pi`` a surjection ``P0 -> m`` (matrix ``dim m x dim P0``)."""
    a, p = m.algebra, m.p
    d = decompose(a)
    rad = radical_submodule(m)
    parts, maps = [], []
    for lab in d.labels:
        e = d.reps[lab]
        img = row_basis(m.act(e).T, p, m.dim)  # e M
        if img.shape[0] == 0:
            continue
        gens = complement(intersect(rad, img, p), m.dim, p, within=img)
        pe = projective(a, e, m.side)
        for w in gens:
            # w lies in e M; the basis element x of A e goes to x.w
            cols = np.stack([matmul(m.act(x), w.reshape(-1, 1), p)[:, 0] for x in pe.embedding], axis=1)
            parts.append(pe)
            maps.append(cols)
    if not parts:
        z = AModule(a, np.zeros((a.dim, 0, 0), dtype=np.int64), m.side)
        return z, np.zeros((m.dim, 0), dtype=np.int64)
    p0 = module_sum(*parts)
    return p0, np.hstack(maps) % p


def ext1(m: AModule, n: AModule) -> Ext1:
    """``Ext^1(m, n)`` from ``0 -> Omega -> P0 -> m -> 0`` with ``P0`` a projective cover."""
    p = m.p
    p0, pi = _projective_cover(m)
    omega = nullspace(pi, p) if p0.dim else np.zeros((0, 0), dtype=np.int64)
    om = submodule(p0, omega)
    homs = hom_space(om, n)  # (h, dim n, dim omega)
    h = homs.shape[0]
    if h == 0:
        return Ext1(0, np.zeros((0, n.dim, om.dim), dtype=np.int64), p0, omega, n)
    # restrictions of maps P0 -> n to Omega
    full = hom_space(p0, n)
    restr = np.matmul(full, omega.T[None]) % p if full.shape[0] else np.zeros((0, n.dim, om.dim), dtype=np.int64)
    coords = coordinates(homs.reshape(h, -1), restr.reshape(restr.shape[0], -1), p) if restr.shape[0] else np.zeros((0, h), dtype=np.int64)
    bound = row_basis(coords, p, h)
    reps = complement(bound, h, p)
    cocycles = np.tensordot(reps, homs, axes=(1, 0)) % p if reps.shape[0] else np.zeros((0, n.dim, om.dim), dtype=np.int64)
    return Ext1(int(reps.shape[0]), cocycles, p0, omega, n)


def universal_extension(n: AModule, ext: Ext1) -> AModule:
    """Middle term of ``0 -> n -> E -> X^d -> 0`` realising every class in ``ext``."""
    p = n.p
    d = ext.dim
    if d == 0:
        return n
    p0 = ext.cover
    big = module_sum(n, *([p0] * d))
    rows = []
    k = ext.omega.shape[0]
    for s in range(d):
        for t in range(k):
            v = np.zeros(big.dim, dtype=np.int64)
            v[: n.dim] = ext.cocycles[s][:, t]
            off = n.dim + s * p0.dim
            v[off:off + p0.dim] = (-ext.omega[t]) % p
            rows.append(v)
    return quotient_module(big, np.array(rows))


# -- bimodules -------------------------------------------------------------

class Bimodule:
    """``left``-``right`` bimodule: commuting left and right actions on one space."""

    def __init__(self, left: BasedAlgebra, right: BasedAlgebra, left_action, right_action, validate: bool = False):
        self.left_algebra = left
        self.right_algebra = right
        self.left = AModule(left, left_action, "left")
        self.right = AModule(right, right_action, "right")
        if self.left.dim != self.right.dim:
            raise ValueError("left and right actions on spaces of different dimension")
        self.dim = self.left.dim
        if validate:
            self.validate()

    @property
    def p(self) -> int:
        return self.left_algebra.p

    def validate(self):
        self.left.validate()
        self.right.validate()
        la, ra = self.left.action, self.right.action
        if self.dim and not np.array_equal(
            np.matmul(la[:, None], ra[None, :]) % self.p, np.matmul(ra[None, :], la[:, None]) % self.p
        ):
            raise ValueError("left and right actions do not commute")

    def __repr__(self):
        return f"Bimodule(dim={self.dim})"


def regular_bimodule(a: BasedAlgebra) -> Bimodule:
    return Bimodule(a, a, a.left_mats(), a.right_mats())


def restrict_bimodule(m: Bimodule, basis) -> Bimodule:
    """Sub-bimodule on an invariant subspace."""
    l = submodule(m.left, basis)
    r = submodule(m.right, basis)
    out = Bimodule(m.left_algebra, m.right_algebra, l.action, r.action)
    out.embedding = l.embedding
    return out


def dual_bimodule(m: Bimodule) -> Bimodule:
    """``M* = Hom_F(M, F)`` with ``(a.f.b)(x) = f(b x a)``; a ``B``-``A``-bimodule."""
    # f -> a.f is f o (right action of a): the transpose of the right action matrix
    return Bimodule(m.right_algebra, m.left_algebra, m.right.action.transpose(0, 2, 1), m.left.action.transpose(0, 2, 1))


def bimodule_hom_space(m: Bimodule, n: Bimodule) -> np.ndarray:
    """Bimodule maps ``m -> n`` as matrices ``(dim n, dim m)``."""
    p = m.p
    hl = hom_space(m.left, n.left)
    if hl.shape[0] == 0:
        return hl
    # impose right equivariance on the span of left maps
    rows = []
    for i, j, g in algebra_generators(m.right_algebra):
        am, an = m.right.act(g), n.right.act(g)
        cons = (np.matmul(an[None], hl) - np.matmul(hl, am[None])) % p  # (h, dn, dm)
        rows.append(cons.reshape(hl.shape[0], -1).T)
    null = nullspace(np.vstack(rows), p)
    if null.shape[0] == 0:
        return np.zeros((0, n.dim, m.dim), dtype=np.int64)
    return np.tensordot(null, hl, axes=(1, 0)) % p


def find_bimodule_isomorphism(m: Bimodule, n: Bimodule, seed: int = 0):
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return _invertible_combination(bimodule_hom_space(m, n), m.p, seed)


def tensor_over(m: Bimodule, n: Bimodule) -> Bimodule:
    """``m (x)_B n`` as the cokernel of ``u.b (x) v - u (x) b.v`` inside ``m (x)_F n``."""
    b = m.right_algebra
    p = m.p
    dm, dn = m.dim, n.dim
    if b.dim != n.left_algebra.dim:
        raise ValueError("middle algebras do not match")
    rel = []
    eye_m, eye_n = np.eye(dm, dtype=np.int64), np.eye(dn, dtype=np.int64)
    for k in range(b.dim):
        # index (s, t) -> s * dn + t; column action matrices
        r = m.right.action[k]
        l = n.left.action[k]
        rel.append((np.kron(r, eye_n) - np.kron(eye_m, l)) % p)
    # relations are images of basis tensors: columns of each matrix
    rels = np.hstack(rel).T if rel else np.zeros((0, dm * dn), dtype=np.int64)
    la = np.stack([np.kron(m.left.action[k], eye_n) for k in range(m.left_algebra.dim)]) % p
    ra = np.stack([np.kron(eye_m, n.right.action[k]) for k in range(n.right_algebra.dim)]) % p
    big = Bimodule(m.left_algebra, n.right_algebra, la, ra)
    ql = quotient_module(big.left, rels)
    qr_act = np.matmul(ql.projection.T[None], np.matmul(ra, ql.lift.T[None]) % p) % p
    out = Bimodule(m.left_algebra, n.right_algebra, ql.action, qr_act)
    out.projection = ql.projection  # row vector of m (x) n -> coordinates in the quotient
    return out


def trivial_extension(a: BasedAlgebra, m: Bimodule, name: str = "") -> BasedAlgebra:
    """``a + m`` with ``(x, u)(y, v) = (xy, xv + uy)``; graded with ``a`` in degree 0 and ``m`` in degree 1."""
    n, d = a.dim, m.dim
    tot = n + d
    mult = np.zeros((tot, tot, tot), dtype=np.int64)
    mult[:n, :n, :n] = a.mult
    if d:
        # a_i . m_s has coordinates left.action[i][:, s]; m_s . a_j has right.action[j][:, s]
        mult[:n, n:, n:] = m.left.action.transpose(0, 2, 1)
        mult[n:, :n, n:] = m.right.action.transpose(2, 0, 1)
    unit = np.concatenate([a.unit, np.zeros(d, dtype=np.int64)])
    idem = [(lab, np.concatenate([v, np.zeros(d, dtype=np.int64)])) for lab, v in a.idempotents]
    grading = [0] * n + [1] * d
    return BasedAlgebra(a.p, mult, unit, idem or None, grading, name or f"{a.name} x| M")
