"""Isomorphism search for basic split algebras.

Primitive idempotents are matched up to permutation, then images of arrow
generators are chosen by backtracking.  A partial assignment is viable when
the subalgebra of ``A x B`` it generates is still the graph of a function;
a complete assignment whose graph projects onto both factors is an
isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product

import numpy as np

from .algebra import AlgebraMap, BasedAlgebra
from .linalg import complement, inverse, matmul, rank, row_basis
from .structure import decompose, radical, radical_power

__all__ = ["IsoResult", "invariants", "find_isomorphism", "peirce_table"]


@dataclass
class IsoResult:
    verdict: str  # "isomorphic", "invariants-match", "refuted"
    map: AlgebraMap | None = None
    nodes: int = 0
    reason: str = ""
    matching: list = field(default_factory=list)  # source label -> target label

    @property
    def found(self) -> bool:
        return self.verdict == "isomorphic"


def _degree_zero(a: BasedAlgebra):
    """Degree-0 subalgebra and its radical in ambient coordinates."""
    if "degree_zero" not in a._cache:
        g = np.array(a.grading)
        zero = np.eye(a.dim, dtype=np.int64)[g == 0]
        sub = a.subalgebra(zero, a.unit, a.idempotents or None, name="deg0")
        j = radical(sub)
        rad = matmul(j, zero, a.p) if j.shape[0] else np.zeros((0, a.dim), dtype=np.int64)
        a._cache["degree_zero"] = (sub, zero, rad)
    return a._cache["degree_zero"]


def _primitives(a: BasedAlgebra, graded: bool = False):
    """Labels and primitive idempotents, one per simple; homogeneous of degree 0 when ``graded``."""
    if graded:
        key = "graded_primitives"
        if key not in a._cache:
            sub, zero, _ = _degree_zero(a)
            labels, prims = _primitives(sub)
            a._cache[key] = (labels, [matmul(v.reshape(1, -1), zero, a.p)[0] for v in prims])
        return a._cache[key]
    d = decompose(a)
    if any(v != 1 for v in d.simple_dims.values()):
        raise ValueError(f"{a.name or 'algebra'} is not basic")
    prims = [d.primitives[d.klass.index(c)] for c in range(len(d.labels))]
    return list(d.labels), prims


def _block(a: BasedAlgebra, e, f, sub=None) -> np.ndarray:
    """Basis of ``e X f`` for ``X`` the span of ``sub`` (default: all of ``a``)."""
    p, n = a.p, a.dim
    x = np.eye(n, dtype=np.int64) if sub is None else sub
    if x.shape[0] == 0:
        return x
    return row_basis(matmul(matmul(x, a.left_matrix(e).T, p), a.right_matrix(f).T, p), p, n)


def peirce_table(a: BasedAlgebra, graded: bool = False):
    """``table[i][j]``: dims of ``e_i J^m e_j`` for ``m = 0, 1, ...`` (of degree pieces when ``graded``)."""
    labels, prims = _primitives(a, graded)
    if graded:
        g = np.array(a.grading)
        layers = [np.eye(a.dim, dtype=np.int64)[g == d] for d in range(max(a.grading) + 1)]
    else:
        layers = [np.eye(a.dim, dtype=np.int64)]
        m = 1
        while layers[-1].shape[0]:
            layers.append(radical_power(a, m))
            m += 1
    k = len(prims)
    tab = [[tuple(_block(a, prims[i], prims[j], x).shape[0] for x in layers) for j in range(k)] for i in range(k)]
    return labels, tab


def _canonical(rows) -> list:
    return sorted(sorted(r) for r in rows)


def invariants(a: BasedAlgebra, graded: bool = False) -> dict:
    """Peirce data that any isomorphism must preserve, up to relabelling."""
    labels, tab = peirce_table(a, graded)
    if graded:
        arrows = [[c[1] if len(c) > 1 else 0 for c in row] for row in tab]
    else:
        arrows = [[c[1] - c[2] if len(c) > 2 else 0 for c in row] for row in tab]
    return {
        "dim": a.dim,
        "simples": len(labels),
        "cartan": _canonical([[c[0] for c in row] for row in tab]),
        "quiver": _canonical(arrows),
        "layers": _canonical(tab),
    }


def _generators(a: BasedAlgebra, prims, graded: bool):
    """Arrow generators ``(i, j, vector, degree)``; with idempotents they generate ``a``."""
    p, n = a.p, a.dim
    out = []
    if graded:
        g = np.array(a.grading)
        piece = {d: np.eye(n, dtype=np.int64)[g == d] for d in set(a.grading)}
        rad0 = _degree_zero(a)[2]
        # degree-0 arrows: radical of the degree-0 part modulo its square
        if rad0.shape[0]:
            low0 = a.span_products(rad0, rad0)
            for i, e in enumerate(prims):
                for j, f in enumerate(prims):
                    blk = _block(a, e, f, rad0)
                    if blk.shape[0]:
                        for v in complement(_block(a, e, f, low0) if low0.shape[0] else low0, n, p, within=blk):
                            out.append((i, j, v, 0))
        piece[0] = rad0
        for d in sorted(x for x in piece if x > 0):
            low = [a.products(piece[d1], piece[d - d1]).reshape(-1, n) for d1 in range(0, d + 1)
                   if d - d1 in piece and piece[d1].shape[0] and piece[d - d1].shape[0]]
            low = row_basis(np.vstack(low), p, n) if low else np.zeros((0, n), dtype=np.int64)
            for i, e in enumerate(prims):
                for j, f in enumerate(prims):
                    blk = _block(a, e, f, piece[d])
                    if blk.shape[0]:
                        for v in complement(_block(a, e, f, low), n, p, within=blk):
                            out.append((i, j, v, d))
        return out
    j1 = radical(a)
    j2 = a.span_products(j1, j1) if j1.shape[0] else j1
    for i, e in enumerate(prims):
        for k, f in enumerate(prims):
            blk = _block(a, e, f, j1)
            if blk.shape[0] == 0:
                continue
            low = _block(a, e, f, j2) if j2.shape[0] else j2
            for v in complement(low, n, p, within=blk):
                out.append((i, k, v, None))
    return out


class _Graph:
    """Subalgebra of ``A x B`` generated by pairs, kept as an echelon basis."""

    def __init__(self, a: BasedAlgebra, b: BasedAlgebra):
        self.a, self.b = a, b
        self.p = a.p

    def close(self, gens_a, gens_b):
        p, na = self.p, self.a.dim
        ga, gb = np.array(gens_a), np.array(gens_b)
        basis = row_basis(np.hstack([self.a.unit[None], self.b.unit[None]]), p)
        frontier = basis
        while frontier.shape[0]:
            # left-multiply the frontier by all generators
            pa = self.a.products(ga, frontier[:, :na]).reshape(-1, na)
            pb = self.b.products(gb, frontier[:, na:]).reshape(-1, self.b.dim)
            new = np.hstack([pa, pb]) % p
            merged = row_basis(np.vstack([basis, new]), p)
            if merged.shape[0] == basis.shape[0]:
                break
            frontier = complement(basis, merged.shape[1], p, within=merged)
            basis = merged
        return basis

    def is_function(self, basis) -> bool:
        na = self.a.dim
        return rank(basis[:, :na], self.p) == basis.shape[0]


def _candidates(b: BasedAlgebra, e, f, deg, graded: bool, j1, j2, limit: int, rng):
    p, n = b.p, b.dim
    if graded and deg == 0:
        space = _block(b, e, f, _degree_zero(b)[2])
    elif graded:
        g = np.array(b.grading)
        space = _block(b, e, f, np.eye(n, dtype=np.int64)[g == deg])
    else:
        space = _block(b, e, f, j1)
    k = space.shape[0]
    if k == 0:
        return [], False
    sampled = p**k > limit
    if sampled:
        coeffs = rng.integers(0, p, size=(limit, k))
    else:
        coeffs = np.array(list(product(range(p), repeat=k)), dtype=np.int64)
    vecs = matmul(coeffs, space, p)
    # image must be nonzero modulo J^2 of B (arrows stay arrows)
    low = _block(b, e, f, j2) if (not graded and j2.shape[0]) else np.zeros((0, n), dtype=np.int64)
    out = []
    seen = set()
    for v in vecs:
        if not np.any(v):
            continue
        if low.shape[0] and rank(np.vstack([low, v]), p) == low.shape[0]:
            continue
        key = v.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(v)
    return out, sampled


def find_isomorphism(
    a: BasedAlgebra, b: BasedAlgebra, graded: bool = False, budget: int = 10**6, seed: int = 0, limit: int = 729
) -> IsoResult:
    """Search for an algebra isomorphism ``a -> b`` (degree preserving when ``graded``)."""
    if a.p != b.p:
        return IsoResult("refuted", reason="different fields")
    if graded and (a.grading is None or b.grading is None):
        raise ValueError("graded search needs gradings on both algebras")
    if a.dim != b.dim:
        return IsoResult("refuted", reason=f"dimensions {a.dim} != {b.dim}")
    ia, ib = invariants(a, graded), invariants(b, graded)
    for key in ("simples", "cartan", "quiver", "layers"):
        if ia[key] != ib[key]:
            return IsoResult("refuted", reason=f"{key} differs")
    la, pa = _primitives(a, graded)
    lb, pb = _primitives(b, graded)
    _, ta = peirce_table(a, graded)
    _, tb = peirce_table(b, graded)
    k = len(pa)
    gens = _generators(a, pa, graded)
    order = sorted(range(len(gens)), key=lambda t: (gens[t][0], gens[t][1]))
    gens = [gens[t] for t in order]
    rng = np.random.default_rng(seed)
    jb = radical(b) if not graded else None
    jb2 = b.span_products(jb, jb) if jb is not None and jb.shape[0] else np.zeros((0, b.dim), dtype=np.int64)
    graph = _Graph(a, b)
    nodes = 0
    exhausted = sampled = False
    for perm in permutations(range(k)):
        if any(ta[i][j] != tb[perm[i]][perm[j]] for i in range(k) for j in range(k)):
            continue
        base_a = list(pa)
        base_b = [pb[perm[i]] for i in range(k)]
        cands = []
        for i, j, _, d in gens:
            c, s = _candidates(b, pb[perm[i]], pb[perm[j]], d, graded, jb, jb2, limit, rng)
            cands.append(c)
            sampled = sampled or s
        if any(len(c) == 0 for c in cands):
            continue
        # explicit stack of (depth, iterator index) for an iterative DFS
        chosen: list = []
        stack = [0]
        while stack:
            depth = len(chosen)
            idx = stack[-1]
            if depth == len(gens):
                basis = graph.close(base_a + [g[2] for g in gens], base_b + chosen)
                if graph.is_function(basis) and basis.shape[0] == a.dim and rank(basis[:, a.dim:], a.p) == b.dim:
                    inv = inverse(basis[:, : a.dim], a.p)
                    m = matmul(inv, basis[:, a.dim:], a.p)
                    phi = AlgebraMap(a, b, m, "hom")
                    if phi.is_multiplicative() and phi.is_bijective():
                        return IsoResult("isomorphic", phi, nodes, matching=[(la[i], lb[perm[i]]) for i in range(k)])
                stack.pop()
                if chosen:
                    chosen.pop()
                    stack[-1] += 1
                continue
            if idx >= len(cands[depth]):
                stack.pop()
                if chosen:
                    chosen.pop()
                    stack[-1] += 1
                continue
            nodes += 1
            if nodes > budget:
                exhausted = True
                break
            v = cands[depth][idx]
            basis = graph.close(base_a + [g[2] for g in gens[: depth + 1]], base_b + chosen + [v])
            if graph.is_function(basis):
                chosen.append(v)
                stack.append(0)
            else:
                stack[-1] += 1
        if exhausted:
            break
    if exhausted or sampled:
        why = "search budget exhausted" if exhausted else "candidate images were sampled, search incomplete"
        return IsoResult("invariants-match", None, nodes, reason=why)
    return IsoResult("refuted", None, nodes, reason="no isomorphism extends any idempotent matching")
