"""Radicals, primitive idempotents, Cartan matrices, blocks and basic algebras."""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .algebra import BasedAlgebra
from .linalg import as_matrix, coordinates, matmul, nullspace, rank, row_basis

__all__ = [
    "NonSplitError",
    "Decomposition",
    "MoritaContext",
    "decompose",
    "radical",
    "radical_by_traces",
    "radical_power",
    "loewy_length",
    "lift_idempotent",
    "lift_idempotents",
    "cartan_matrix",
    "blocks",
    "basic_algebra",
    "verify_radical",
]


class NonSplitError(RuntimeError):
    """A simple quotient is not a full matrix algebra over the prime field."""


@dataclass
class Decomposition:
    """Complete set of primitive orthogonal idempotents with their classes.

    ``primitives[i]`` lies under the listed idempotent ``parent[i]`` and covers
    the simple module ``labels[klass[i]]``.  ``augmentation[i]`` is a linear
    functional on the algebra whose restriction to ``e_i A e_i`` is the
    projection onto the residue field.
    """

    primitives: np.ndarray
    parent: list
    klass: list
    labels: list
    augmentation: np.ndarray
    reps: dict = field(default_factory=dict)
    simple_dims: dict = field(default_factory=dict)


def lift_idempotent(a: BasedAlgebra, x, max_iter: int = 64) -> np.ndarray:
    """Newton iteration ``e <- 3e^2 - 2e^3`` from an idempotent modulo a nilpotent ideal."""
    e = np.asarray(x, dtype=np.int64) % a.p
    for _ in range(max_iter):
        e2 = a.mul(e, e)
        nxt = (3 * e2 - 2 * a.mul(e2, e)) % a.p
        if np.array_equal(nxt, e):
            return e
        e = nxt
    raise ValueError("idempotent lifting did not converge (input not idempotent modulo a nilpotent ideal)")


def _eigenvalues(m: np.ndarray, p: int) -> list:
    n = m.shape[0]
    eye = np.eye(n, dtype=np.int64)
    return [t for t in range(p) if rank((m - t * eye) % p, p) < n]


def _local_residue(sub: BasedAlgebra):
    """Residue functional of a split local algebra, or an element that splits it.

    Returns ``("local", c)``, ``("split", x)`` or ``("unknown", None)``.
    """
    p, m = sub.p, sub.dim
    c = np.zeros(m, dtype=np.int64)
    unknown = False
    for i in range(m):
        ev = _eigenvalues(sub.left_mats()[i], p)
        if len(ev) >= 2:
            return "split", sub.basis_vector(i)
        if not ev:
            unknown = True
        else:
            c[i] = ev[0]
    if unknown:
        return "unknown", None
    kern = nullspace(c.reshape(1, -1), p)
    if kern.shape[0] != m - 1 or (c @ sub.unit) % p != 1:
        return "unknown", None
    # ker c must be a nilpotent two-sided ideal
    eye = np.eye(m, dtype=np.int64)
    prods = np.vstack([sub.products(kern, eye).reshape(-1, m), sub.products(eye, kern).reshape(-1, m)])
    if np.any(prods @ c % p):
        return "unknown", None
    power = kern
    for _ in range(m + 1):
        if power.shape[0] == 0:
            return "local", c
        nxt = sub.span_products(power, kern)
        if nxt.shape[0] == power.shape[0]:
            return "unknown", None
        power = nxt
    return "unknown", None


def _fitting_split(sub: BasedAlgebra, x):
    """Split the unit of ``sub`` along the Fitting decomposition of ``x``."""
    p, m = sub.p, sub.dim
    for c in _eigenvalues(sub.left_matrix(x), p):
        y = (x - c * sub.unit) % p
        z = sub.power(y, m)
        if not np.any(z):
            continue
        # unit of the ring z F[y]: solve u z = z with u in span{z y^k}
        span = [z]
        for _ in range(m):
            span.append(sub.mul(span[-1], y))
        span = row_basis(np.array(span), p, m)
        targets = np.array([sub.mul(s, z) for s in span])
        coef = coordinates(targets, z, p)
        if coef is None:
            continue
        u = matmul(coef.reshape(1, -1), span, p)[0]
        if not np.array_equal(sub.mul(u, u), u):
            continue
        rest = (sub.unit - u) % p
        if np.any(rest):
            return [u, rest]
    return None


def _split_primitive(a: BasedAlgebra, e, rng, tries: int) -> list:
    """Primitive orthogonal idempotents summing to ``e`` plus their residue data."""
    sub = a.corner(e)
    emb = sub.embedding
    kind, val = _local_residue(sub)
    if kind == "local":
        return [(e, sub, val)]
    parts = None
    if kind == "split":
        parts = _fitting_split(sub, val)
    attempt = 0
    while parts is None and attempt < tries:
        x = rng.integers(0, a.p, size=sub.dim)
        parts = _fitting_split(sub, x)
        attempt += 1
    if parts is None:
        raise NonSplitError(
            f"could not split the corner algebra of dimension {sub.dim} over GF({a.p}); "
            "its semisimple quotient is not split (or is not reachable by the seeded search)"
        )
    out = []
    for u in parts:
        out += _split_primitive(a, matmul(u.reshape(1, -1), emb, a.p)[0], rng, tries)
    return out


def decompose(a: BasedAlgebra, seed: int = 0, tries: int = 200) -> Decomposition:
    """Refine the listed idempotents into primitive ones and sort them into classes.

    A class is labelled by the listed idempotent in which it first appears
    (list order); several new classes under one listed idempotent get
    suffixes ``label``, ``(label, 1)``, ...
    """
    key = ("decomp", seed)
    if key in a._cache:
        return a._cache[key]
    p, n = a.p, a.dim
    rng = np.random.default_rng(seed)
    prims, parent, gammas, subs = [], [], [], []
    for lab, e in a.idempotents:
        for f, sub, c in _split_primitive(a, e, rng, tries):
            prims.append(f)
            parent.append(lab)
            # residue functional extended to A via x -> c(f x f)
            fxf = matmul(a.left_matrix(f), a.right_matrix(f), p).T
            coords = coordinates(sub.embedding, fxf, p)
            gammas.append(matmul(coords, c.reshape(-1, 1), p)[:, 0])
    prims = np.array(prims, dtype=np.int64).reshape(len(prims), n)
    gammas = np.array(gammas, dtype=np.int64).reshape(len(prims), n)
    k = len(prims)
    klass = [-1] * k
    labels, reps, counts = [], {}, {}
    for i in range(k):
        if klass[i] >= 0:
            continue
        lab = parent[i]
        counts[lab] = counts.get(lab, 0) + 1
        name = lab if counts[lab] == 1 else (lab, counts[lab] - 1)
        c = len(labels)
        labels.append(name)
        reps[name] = prims[i]
        klass[i] = c
        for j in range(i + 1, k):
            if klass[j] < 0 and _isomorphic_primitives(a, prims[i], prims[j], gammas[i]):
                klass[j] = c
    sizes = {labels[c]: klass.count(c) for c in range(len(labels))}
    d = Decomposition(prims, parent, klass, labels, gammas, reps, sizes)
    a._cache[key] = d
    return d


def _isomorphic_primitives(a: BasedAlgebra, e, f, gamma_e) -> bool:
    x = a.peirce(e, f)
    y = a.peirce(f, e)
    if x.shape[0] == 0 or y.shape[0] == 0:
        return False
    return bool(np.any(a.products(x, y) @ gamma_e % a.p))


def radical(a: BasedAlgebra, seed: int = 0) -> np.ndarray:
    """Basis of the Jacobson radical, assembled Peirce block by Peirce block.

    For primitive ``e, f`` the block ``e J f`` consists of the ``x`` in ``e A f``
    with ``x y`` in the radical of the local algebra ``e A e`` for every ``y``
    in ``f A e``.
    """
    key = ("radical", seed)
    if key in a._cache:
        return a._cache[key]
    p, n = a.p, a.dim
    d = decompose(a, seed)
    rows = []
    for i, e in enumerate(d.primitives):
        for f in d.primitives:
            x = a.peirce(e, f)
            if x.shape[0] == 0:
                continue
            y = a.peirce(f, e)
            if y.shape[0] == 0:
                rows.append(x)
                continue
            g = (a.products(x, y) @ d.augmentation[i]) % p  # g[s, t] = gamma(x_s y_t)
            null = nullspace(g.T, p)
            if null.shape[0]:
                rows.append(matmul(null, x, p))
    j = row_basis(np.vstack(rows), p, n) if rows else np.zeros((0, n), dtype=np.int64)
    semisimple_dim = sum(s * s for s in d.simple_dims.values())
    if n - j.shape[0] != semisimple_dim:
        raise NonSplitError(
            f"radical has codimension {n - j.shape[0]}, expected {semisimple_dim} for a split algebra"
        )
    a._cache[key] = j
    return j


def radical_power(a: BasedAlgebra, k: int, seed: int = 0) -> np.ndarray:
    j = radical(a, seed)
    out = a.unit.reshape(1, -1) if k == 0 else j
    for _ in range(k - 1):
        out = a.span_products(out, j)
    return out


def loewy_length(a: BasedAlgebra, seed: int = 0) -> int:
    j = radical(a, seed)
    power, k = j, 1
    while power.shape[0]:
        power = a.span_products(power, j)
        k += 1
    return k


def radical_by_traces(a: BasedAlgebra) -> np.ndarray:
    """Radical via iterated p-power trace conditions on the regular representation.

    ``I_0 = A`` and ``I_i`` is the set of ``x`` in ``I_{i-1}`` with
    ``g_i(x y) = 0`` for all ``y``, where ``g_i(z) = Tr(Z^(p^i)) / p^i mod p``
    for an integer lift ``Z`` of the left regular matrix of ``z``.  Stops once
    ``p^i`` exceeds the dimension.  Quadratic in the dimension times a matrix
    power, so only for small algebras; it serves as an independent check.
    """
    p, n = a.p, a.dim
    eye = np.eye(n, dtype=np.int64)
    current = eye.copy()
    i = 0
    while True:
        if current.shape[0] == 0:
            return current
        mod = p ** (i + 1)
        prods = a.products(current, eye)  # (k, n, n)
        cols = []
        for s in range(current.shape[0]):
            row = []
            for t in range(n):
                z = np.array(a.left_matrix(prods[s, t]), dtype=object)
                zp = _matpow_mod(z, p**i, mod)
                tr = int(sum(zp[q, q] for q in range(n))) % mod
                if tr % (p**i):
                    raise ArithmeticError("trace condition lost divisibility; previous step was not an ideal")
                row.append(tr // p**i)
            cols.append(row)
        g = np.array(cols, dtype=np.int64) % p  # g[s, t] = g_i(x_s b_t)
        null = nullspace(g.T, p)
        current = row_basis(matmul(null, current, p), p, n) if null.shape[0] else np.zeros((0, n), dtype=np.int64)
        i += 1
        if p**i > n:
            return current


def _matpow_mod(m, k: int, mod: int):
    n = m.shape[0]
    out = np.identity(n, dtype=object)
    base = m % mod
    while k:
        if k & 1:
            out = out.dot(base) % mod
        base = base.dot(base) % mod
        k >>= 1
    return out


def verify_radical(a: BasedAlgebra, j: np.ndarray) -> dict:
    """Independent checks: two-sided ideal, nilpotency index, semisimple quotient."""
    p, n = a.p, a.dim
    report = {"dim": int(j.shape[0]), "ideal": a.is_ideal(j)}
    power, k = j, 1
    while power.shape[0] and k <= n + 1:
        power = a.span_products(power, j)
        k += 1
    report["nilpotency_index"] = k if power.shape[0] == 0 else None
    if j.shape[0] < n:
        q = a.quotient(j)
        report["quotient_radical_dim"] = int(radical(q).shape[0])
    else:
        report["quotient_radical_dim"] = 0
    report["ok"] = report["ideal"] and report["nilpotency_index"] is not None and report["quotient_radical_dim"] == 0
    return report


def lift_idempotents(a: BasedAlgebra, seed: int = 0) -> list:
    """Labelled complete set of primitive orthogonal idempotents."""
    d = decompose(a, seed)
    return [(d.labels[c], e) for c, e in zip(d.klass, d.primitives)]


def cartan_matrix(a: BasedAlgebra, seed: int = 0):
    """``(labels, C)`` with ``C[l][m] = dim e_l A e_m = [P(m) : L(l)]``."""
    d = decompose(a, seed)
    labs = d.labels
    c = np.array([[a.peirce(d.reps[x], d.reps[y]).shape[0] for y in labs] for x in labs], dtype=np.int64)
    return labs, c


def blocks(a: BasedAlgebra, seed: int = 0) -> list:
    labs, c = cartan_matrix(a, seed)
    g = nx.Graph()
    g.add_nodes_from(range(len(labs)))
    for i in range(len(labs)):
        for j in range(len(labs)):
            if i != j and c[i, j]:
                g.add_edge(i, j)
    comps = [sorted(comp) for comp in nx.connected_components(g)]
    comps.sort()
    return [[labs[i] for i in comp] for comp in comps]


@dataclass
class MoritaContext:
    algebra: BasedAlgebra
    basic: BasedAlgebra
    idempotent: np.ndarray
    left: np.ndarray  # basis of A e
    right: np.ndarray  # basis of e A

    def dimension_count(self) -> bool:
        """``dim A = sum dim P(l) * dim L(l)`` over the simple labels."""
        a = self.algebra
        d = decompose(a)
        total = sum(a.left_span(d.reps[lab].reshape(1, -1)).shape[0] * d.simple_dims[lab] for lab in d.labels)
        return total == a.dim


def basic_algebra(a: BasedAlgebra, seed: int = 0) -> MoritaContext:
    d = decompose(a, seed)
    e = np.zeros(a.dim, dtype=np.int64)
    for lab in d.labels:
        e = (e + d.reps[lab]) % a.p
    b = a.corner(e, [(lab, d.reps[lab]) for lab in d.labels], name=f"basic({a.name})")
    left = a.left_span(e.reshape(1, -1))
    right = a.right_span(e.reshape(1, -1))
    return MoritaContext(a, b, e, left, right)
