"""Windows of the glued algebras B and C built from an algebra with a self-dual bimodule.

Index conventions: ``A_i`` sits on the diagonal, ``T_i`` is the copy of the
bimodule in block ``(i, i+1)``, ``T*_i`` its dual in block ``(i+1, i)`` and
``A*_i`` the dual of ``A_i`` in block ``(i, i)``.  Coordinates on a dual
component are those of the dual basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraMap, BasedAlgebra, field_algebra
from .linalg import inverse, matmul, rank
from .modules import (
    Bimodule,
    dual_bimodule,
    find_bimodule_isomorphism,
    regular_bimodule,
    trivial_extension,
)
from .qh import WeightPoset
from .structure import decompose, radical

__all__ = [
    "GluedWindowSpec",
    "CWindow",
    "SelfDualTiltingBimodule",
    "field_spec",
    "build_B_window",
    "build_C_window",
    "build_T1n",
    "cn",
    "cn_quotient_epi",
    "window_poset",
    "check_symmetric",
    "sigma_index",
    "tau_index",
    "dihedral_relation_holds",
    "build_L2_window",
    "Boundary",
    "L2Window",
    "c_window_middle",
]


@dataclass
class GluedWindowSpec:
    """An algebra ``A`` with an ``A``-``A``-bimodule ``T`` and an isomorphism ``T -> T*``.

    ``witness`` is the matrix of the isomorphism on columns: ``t`` goes to the
    functional with dual coordinates ``witness @ t``.
    """

    base: BasedAlgebra
    bimodule: Bimodule
    witness: np.ndarray
    poset: WeightPoset | None = None

    def __post_init__(self):
        self.witness = np.asarray(self.witness, dtype=np.int64) % self.base.p
        if self.poset is None:
            self.poset = WeightPoset.chain(self.labels)

    @property
    def labels(self) -> list:
        return [lab for lab, _ in self.base.idempotents]

    def validate(self):
        a, t, w, p = self.base, self.bimodule, self.witness, self.base.p
        if w.shape != (t.dim, t.dim) or rank(w, p) != t.dim:
            raise ValueError("witness is not invertible")
        star = dual_bimodule(t)
        for k in range(a.dim):
            if not np.array_equal(matmul(w, t.left.action[k], p), matmul(star.left.action[k], w, p)):
                raise ValueError("witness is not a left module map")
            if not np.array_equal(matmul(w, t.right.action[k], p), matmul(star.right.action[k], w, p)):
                raise ValueError("witness is not a right module map")
        d = decompose(a)
        if any(s != 1 for s in d.simple_dims.values()) or len(d.labels) != len(a.idempotents):
            raise ValueError("the base algebra must be basic with primitive listed idempotents")
        return True


def field_spec(p: int) -> GluedWindowSpec:
    f = field_algebra(p, label=1)
    return GluedWindowSpec(f, regular_bimodule(f), np.eye(1, dtype=np.int64))


@dataclass
class CWindow:
    algebra: BasedAlgebra
    components: dict  # name -> (start, stop); names ("A", i), ("T", i), ("T*", i), ("A*", i)
    k: int
    n: int
    spec: GluedWindowSpec = field(repr=False)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def indices(self, name) -> range:
        s, e = self.components[name]
        return range(s, e)

    def component_table(self) -> list:
        return [{"component": [c[0], c[1]], "start": s, "stop": e} for c, (s, e) in self.components.items()]


@dataclass
class SelfDualTiltingBimodule:
    bimodule: Bimodule
    witness: np.ndarray  # isomorphism onto the dual, on columns
    twist: AlgebraMap  # the map used to define the right action
    components: dict  # (name, left index, right index) -> positions in the bimodule basis


def _labels(spec: GluedWindowSpec, i: int) -> list:
    return [(i, lab) for lab in spec.labels]


def build_B_window(spec: GluedWindowSpec, k: int, n: int):
    """``A_k + T_k + A_{k+1} + ... + A_n`` with ``T . T = 0``; returns ``(algebra, components)``."""
    if n < k:
        raise ValueError("empty window")
    a, t, p = spec.base, spec.bimodule, spec.base.p
    da, dt = a.dim, t.dim
    comps, off = {}, 0
    for i in range(k, n + 1):
        comps[("A", i)] = (off, off + da)
        off += da
    for i in range(k, n):
        comps[("T", i)] = (off, off + dt)
        off += dt
    mult = np.zeros((off, off, off), dtype=np.int64)
    for i in range(k, n + 1):
        s = slice(*comps[("A", i)])
        mult[s, s, s] = a.mult
    for i in range(k, n):
        ai, aj, ti = slice(*comps[("A", i)]), slice(*comps[("A", i + 1)]), slice(*comps[("T", i)])
        mult[ai, ti, ti] = t.left.action.transpose(0, 2, 1)
        mult[ti, aj, ti] = t.right.action.transpose(2, 0, 1)
    unit = np.zeros(off, dtype=np.int64)
    idem = []
    for i in range(k, n + 1):
        s = comps[("A", i)][0]
        unit[s:s + da] = a.unit
        for lab, v in a.idempotents:
            w = np.zeros(off, dtype=np.int64)
            w[s:s + da] = v
            idem.append(((i, lab), w))
    grading = [0] * ((n - k + 1) * da) + [1] * ((n - k) * dt)
    alg = BasedAlgebra(p, mult % p, unit, idem, grading, name=f"B[{k},{n}]")
    return alg, comps


def build_C_window(spec: GluedWindowSpec, k: int = 1, n: int = 1, cut: str = "top") -> CWindow:
    """Trivial extension of the B window by its dual, with the top ``A*_n`` removed.

    ``cut="bottom"`` removes ``A*_k`` instead: the truncation that kills the
    indices below the window, which is the one compatible with the first order.
    ``cut="none"`` keeps both end components.
    """
    if cut not in ("top", "bottom", "none"):
        raise ValueError("cut must be 'top', 'bottom' or 'none'")
    b, bcomps = build_B_window(spec, k, n)
    c = trivial_extension(b, dual_bimodule(regular_bimodule(b)))
    nb = b.dim
    comps = dict(bcomps)
    for (kind, i), (s, e) in bcomps.items():
        comps[(kind + "*", i)] = (nb + s, nb + e)
    drop = set()
    if cut != "none":
        drop = set(range(*comps.pop(("A*", n if cut == "top" else k))))
    keep = [x for x in range(c.dim) if x not in drop]
    # the removed dual component is an ideal, so deleting its coordinates is the quotient map
    mult = c.mult[np.ix_(keep, keep, keep)]
    pos = {old: new for new, old in enumerate(keep)}
    comps = {name: (pos[s], pos[e - 1] + 1) for name, (s, e) in comps.items()}
    grading = [0] * len(keep)
    for (kind, _), (s, e) in comps.items():
        for x in range(s, e):
            grading[x] = {"A": 0, "T": 1, "T*": 1, "A*": 2}[kind]
    idem = [(lab, v[keep]) for lab, v in c.idempotents]
    name = {"top": f"C[{k},{n}]", "bottom": f"C'[{k},{n}]", "none": f"C~[{k},{n}]"}[cut]
    alg = BasedAlgebra(b.p, mult, c.unit[keep], idem, grading, name=name)
    order = sorted(comps.items(), key=lambda kv: kv[1][0])
    return CWindow(alg, dict(order), k, n, spec)


def window_poset(spec: GluedWindowSpec, k: int, n: int, which: int = 1) -> WeightPoset:
    """Order 1: a weight with larger index is smaller; order 2: larger index is larger."""
    labels, less = [], []
    for i in range(k, n + 1):
        labels += _labels(spec, i)
        less += [((i, a), (i, b)) for a, b in spec.poset.relations()]
    for i in range(k, n + 1):
        for j in range(k, n + 1):
            if i == j:
                continue
            smaller = i > j if which == 1 else i < j
            if smaller:
                less += [(x, y) for x in _labels(spec, i) for y in _labels(spec, j)]
    return WeightPoset(labels, less)


def _component_map(src: CWindow, dst: CWindow, index_map, witness) -> np.ndarray:
    """Row-convention matrix of ``sigma``-type maps sending index ``i`` to ``index_map(i)``.

    ``A`` and ``A*`` go across by the identity, ``T`` to ``T*`` by the witness and
    ``T*`` to ``T`` by its inverse transpose.
    """
    p = src.algebra.p
    m = np.zeros((src.dim, dst.dim), dtype=np.int64)
    winv = inverse(witness, p)
    for (kind, i), (s, e) in src.components.items():
        j = index_map(i)
        if kind in ("A", "A*"):
            target, block = (kind, j), np.eye(e - s, dtype=np.int64)
        elif kind == "T":
            # block (i, i+1) goes to block (j, j-1) which holds T*_{j-1}
            target, block = ("T*", j - 1), witness.T
        else:
            target, block = ("T", j - 1), winv
        if target not in dst.components:
            continue
        ts, te = dst.components[target]
        m[s:e, ts:te] = block
    return m % p


def sigma_index(i: int) -> int:
    return -i


def tau_index(i: int) -> int:
    return i + 1


def dihedral_relation_holds(width: int = 5) -> bool:
    """``sigma tau sigma = tau^{-1}`` on the component labels of a window of the given width."""
    comps = [(kind, i) for i in range(-width, width + 1) for kind in ("A", "A*")]
    comps += [(kind, i) for i in range(-width, width) for kind in ("T", "T*")]

    def act(f, c):
        kind, i = c
        if kind in ("A", "A*"):
            return kind, f(i)
        # an off-diagonal block is identified by its ordered pair of indices
        lo, hi = (i, i + 1) if kind == "T" else (i + 1, i)
        a, b = f(lo), f(hi)
        return ("T", a) if b == a + 1 else ("T*", b)

    lhs = [act(sigma_index, act(tau_index, act(sigma_index, c))) for c in comps]
    rhs = [act(lambda i: i - 1, c) for c in comps]
    return lhs == rhs


def build_T1n(spec: GluedWindowSpec, n: int, window: CWindow | None = None, seed: int = 0) -> SelfDualTiltingBimodule:
    """Blocks ``(i, j)`` with ``1 <= i <= n`` and ``0 <= j <= n-1`` of the window ``[0, n]``.

    The left action is multiplication by ``C[1,n]``; the right action
    multiplies by the image under the index map ``i -> n - i`` (reflection
    after translation), which uses the witness to swap ``T`` and ``T*``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    c1 = window or build_C_window(spec, 1, n)
    c0 = build_C_window(spec, 0, n)
    p = c0.algebra.p
    emb = np.zeros((c1.dim, c0.dim), dtype=np.int64)
    for name, (s, e) in c1.components.items():
        ts, te = c0.components[name]
        emb[s:e, ts:te] = np.eye(e - s, dtype=np.int64)
    psi = _component_map(c1, c0, lambda i: n - i, spec.witness)
    blocks = {}
    for i in range(1, n + 1):
        if i <= n - 1:
            blocks[("A", i, i)] = c0.components[("A", i)]
            blocks[("A*", i, i)] = c0.components[("A*", i)]
        blocks[("T*", i, i - 1)] = c0.components[("T*", i - 1)]
        if i <= n - 2:
            blocks[("T", i, i + 1)] = c0.components[("T", i)]
    idx = [x for key in sorted(blocks, key=lambda k: blocks[k][0]) for x in range(*blocks[key])]
    pos, comps = 0, {}
    for key in sorted(blocks, key=lambda k: blocks[k][0]):
        s, e = blocks[key]
        comps[key] = (pos, pos + e - s)
        pos += e - s
    lm = np.tensordot(emb, c0.algebra.left_mats(), axes=(1, 0)) % p
    rm = np.tensordot(psi, c0.algebra.right_mats(), axes=(1, 0)) % p
    out = np.setdiff1d(np.arange(c0.dim), idx)
    for mats in (lm, rm):
        if np.any(mats[:, out][:, :, idx]):
            raise RuntimeError("the chosen blocks are not stable under the actions")
    left = lm[:, idx][:, :, idx]
    right = rm[:, idx][:, :, idx]
    t = Bimodule(c1.algebra, c1.algebra, left, right, validate=True)
    w = find_bimodule_isomorphism(t, dual_bimodule(t), seed=seed)
    if w is None:
        raise RuntimeError("no isomorphism between the bimodule and its dual")
    twist = AlgebraMap(c1.algebra, c0.algebra, psi, "hom")
    return SelfDualTiltingBimodule(t, w, twist, comps)


def cn(spec: GluedWindowSpec, n: int, seed: int = 0):
    """``(C[1,n], T[1,n])`` and the glued-window input that feeds the pair back in."""
    if n < 1:
        raise ValueError("n must be at least 1")
    w = build_C_window(spec, 1, n)
    t = build_T1n(spec, n, window=w, seed=seed)
    nxt = GluedWindowSpec(w.algebra, t.bimodule, t.witness, window_poset(spec, 1, n, 2))
    return w, t, nxt


def cn_quotient_epi(bigger: CWindow) -> AlgebraMap:
    """Projection of ``C[1,n]`` onto its component ``A_1``; the kernel is the sum of the others."""
    a = bigger.spec.base
    m = np.zeros((bigger.dim, a.dim), dtype=np.int64)
    s, e = bigger.components[("A", 1)]
    m[s:e] = np.eye(a.dim, dtype=np.int64)
    return AlgebraMap(bigger.algebra, a, m, "hom")


def check_symmetric(a: BasedAlgebra, seed: int = 0) -> dict:
    """Look for a symmetric associative nondegenerate form ``(x, y) -> f(xy)``.

    Reports, per primitive, whether the projective ``A e`` has simple socle
    isomorphic to its top; where every projective passes the corner on those
    labels is checked for a form as well.
    """
    from .modules import projective, hom_space  # local: avoids a cycle at import time

    p, n = a.p, a.dim
    rng = np.random.default_rng(seed)
    # f must vanish on all commutators
    comm = (a.mult - a.mult.transpose(1, 0, 2)).reshape(n * n, n) % p
    from .linalg import nullspace, row_basis

    traces = nullspace(row_basis(comm, p, n), p)

    def nondegenerate(alg, fs):
        if fs.shape[0] == 0:
            return None
        k = alg.dim
        cands = list(fs) + [rng.integers(0, p, fs.shape[0]) @ fs % p for _ in range(32)]
        for f in cands:
            gram = np.tensordot(alg.mult, f, axes=(2, 0)) % p
            if rank(gram, p) == k:
                return f
        return None

    form = nondegenerate(a, traces)
    d = decompose(a)
    good, bad = [], []
    j = radical(a)
    for lab in d.labels:
        e = d.reps[lab]
        pe = projective(a, e)
        # socle = vectors killed by the radical
        if j.shape[0]:
            kill = np.vstack([pe.act(x) for x in j])
            from .linalg import nullspace as ns

            soc = ns(kill, p)
        else:
            soc = np.eye(pe.dim, dtype=np.int64)
        top_here = rank(pe.act(e) @ soc.T % p, p) if soc.shape[0] else 0
        (good if soc.shape[0] == 1 and top_here == 1 else bad).append(lab)
    corner_form = None
    if good and bad:
        e = sum(d.reps[l] for l in good) % p
        sub = a.corner(e)
        m = sub.dim
        comm = (sub.mult - sub.mult.transpose(1, 0, 2)).reshape(m * m, m) % p
        corner_form = nondegenerate(sub, nullspace(row_basis(comm, p, m), p))
    return {
        "symmetric": form is not None,
        "form": None if form is None else form.tolist(),
        "self_dual_projectives": good,
        "boundary": bad,
        "corner_symmetric": corner_form is not None if good and bad else form is not None,
    }


@dataclass
class Boundary:
    """A bimodule joining the middle algebra to an outer window.

    ``middle_map`` is the algebra surjection from the middle algebra onto the
    algebra acting on the middle side of ``bimodule``; ``middle_dual`` lists,
    per dual basis element of that algebra, the vector of the middle algebra
    it is identified with.
    """

    bimodule: Bimodule
    middle_map: AlgebraMap
    middle_dual: np.ndarray


@dataclass
class L2Window:
    algebra: BasedAlgebra
    components: dict  # ("L", name) / ("Q",) / ("R", name) / glue names -> (start, stop)
    left: CWindow
    middle: BasedAlgebra
    right: CWindow
    middle_poset: WeightPoset

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def index_of(self, lab) -> int:
        return lab[0]

    def poset(self, which: int = 2) -> WeightPoset:
        """Order 2: larger index is larger; order 1: larger index is smaller; inside an index as given."""
        labels = [lab for lab, _ in self.algebra.idempotents]
        inner = [(x, y) for x, y in self.middle_poset.relations() if x[0] == y[0]]
        for w in (self.left, self.right):
            for i in range(w.k, w.n + 1):
                inner += [((i, a), (i, b)) for a, b in w.spec.poset.relations()]
        less = list(inner)
        for x in labels:
            for y in labels:
                if x[0] != y[0] and ((x[0] < y[0]) if which == 2 else (x[0] > y[0])):
                    less.append((x, y))
        return WeightPoset(labels, less)


def _outer_map(w: CWindow, i: int) -> np.ndarray:
    """Rows: image of each window basis element in ``A_i`` (all other components go to zero)."""
    a = w.spec.base
    m = np.zeros((w.dim, a.dim), dtype=np.int64)
    s, e = w.components[("A", i)]
    m[s:e] = np.eye(a.dim, dtype=np.int64)
    return m


def _outer_dual(w: CWindow, i: int) -> np.ndarray:
    a = w.spec.base
    if ("A*", i) not in w.components:
        raise ValueError(f"the window {w.algebra.name} has no component A*_{i}")
    m = np.zeros((a.dim, w.dim), dtype=np.int64)
    s, e = w.components[("A*", i)]
    m[:, s:e] = np.eye(a.dim, dtype=np.int64)
    return m


def _canonical_pairings(t: Bimodule):
    """``T (x) T* -> R*`` and ``T* (x) T -> S*`` in dual coordinates, ``T`` an ``R``-``S`` bimodule.

    ``(t (x) f)(r) = f(r t)`` and ``(f (x) t)(s) = f(t s)``; returned as arrays
    indexed ``[t, f, k]`` and ``[f, t, k]``.
    """
    la, ra = t.left.action, t.right.action
    return np.einsum("kji->ijk", la), np.einsum("kji->jik", ra)


def _balanced(t: Bimodule, pair_l, pair_r) -> bool:
    """``(t s) (x) f = t (x) (s f)`` for the first pairing and ``(f r) (x) t = f (x) (r t)`` for the second."""
    p = t.p
    star = dual_bimodule(t)
    for k in range(t.right_algebra.dim):
        lhs = np.einsum("ui,ujc->ijc", t.right.action[k], pair_l)
        rhs = np.einsum("uj,iuc->ijc", star.left.action[k], pair_l)
        if np.any((lhs - rhs) % p):
            return False
    for k in range(t.left_algebra.dim):
        lhs = np.einsum("uj,uic->jic", star.right.action[k], pair_r)
        rhs = np.einsum("ui,juc->jic", t.left.action[k], pair_r)
        if np.any((lhs - rhs) % p):
            return False
    return True


def build_L2_window(left: CWindow, middle: BasedAlgebra, right: CWindow, low: Boundary, high: Boundary,
                    middle_poset: WeightPoset, pairings: dict | None = None) -> L2Window:
    """Glue ``left``, ``middle`` and ``right`` with the boundary bimodules.

    ``low.bimodule`` is an ``A``-``alpha`` bimodule joining ``A_n`` of ``left``
    to the middle, ``high.bimodule`` an ``alpha'``-``A`` bimodule joining the
    middle to ``A_k`` of ``right``.  Products of a bimodule with its dual land
    in the dual components by the canonical pairings unless ``pairings``
    supplies them (keys ``low``, ``low*``, ``high``, ``high*``); products
    between different pieces vanish otherwise.
    """
    p = middle.p
    i0, i1 = left.n, right.k
    t0, t1 = low.bimodule, high.bimodule
    for name, b in (("low", low), ("high", high)):
        if not (b.middle_map.is_multiplicative() and b.middle_map.is_surjective()):
            raise ValueError(f"{name} middle map is not an algebra surjection")
    c0, c0s = _canonical_pairings(t0)  # A_0^*, alpha_1^*
    c1, c1s = _canonical_pairings(t1)  # alpha_{p-1}^*, A_p^*
    if pairings:
        c0 = np.asarray(pairings.get("low", c0), dtype=np.int64)
        c0s = np.asarray(pairings.get("low*", c0s), dtype=np.int64)
        c1 = np.asarray(pairings.get("high", c1), dtype=np.int64)
        c1s = np.asarray(pairings.get("high*", c1s), dtype=np.int64)
        if not (_balanced(t0, c0, c0s) and _balanced(t1, c1, c1s)):
            raise ValueError("pairing is not balanced over the middle algebra")
    sizes = [("L", left.dim), ("Q", middle.dim), ("R", right.dim),
             ("T", t0.dim), ("T*", t0.dim), ("U", t1.dim), ("U*", t1.dim)]
    off, pos = 0, {}
    for name, d in sizes:
        pos[name] = slice(off, off + d)
        off += d
    n = off
    mult = np.zeros((n, n, n), dtype=np.int64)
    L, Q, R, T, Ts, U, Us = (pos[k] for k, _ in sizes)
    mult[L, L, L] = left.algebra.mult
    mult[Q, Q, Q] = middle.mult
    mult[R, R, R] = right.algebra.mult
    to_a0, to_a1 = _outer_map(left, i0), _outer_map(right, i1)
    rho0, rho1 = low.middle_map.matrix, high.middle_map.matrix
    star0, star1 = dual_bimodule(t0), dual_bimodule(t1)

    def lact(mapm, action):  # left action pulled back along a map, as mult slice [x, m, m']
        return np.tensordot(mapm, action, axes=(1, 0)).transpose(0, 2, 1) % p

    def ract(mapm, action):  # right action pulled back, as mult slice [m, y, m']
        return np.tensordot(mapm, action, axes=(1, 0)).transpose(2, 0, 1) % p

    mult[L, T, T] = lact(to_a0, t0.left.action)
    mult[T, Q, T] = ract(rho0, t0.right.action)
    mult[Q, Ts, Ts] = lact(rho0, star0.left.action)
    mult[Ts, L, Ts] = ract(to_a0, star0.right.action)
    mult[Q, U, U] = lact(rho1, t1.left.action)
    mult[U, R, U] = ract(to_a1, t1.right.action)
    mult[R, Us, Us] = lact(to_a1, star1.left.action)
    mult[Us, Q, Us] = ract(rho1, star1.right.action)
    mult[T, Ts, L] = np.tensordot(c0, _outer_dual(left, i0), axes=(2, 0))
    mult[Ts, T, Q] = np.tensordot(c0s, low.middle_dual, axes=(2, 0))
    mult[U, Us, Q] = np.tensordot(c1, high.middle_dual, axes=(2, 0))
    mult[Us, U, R] = np.tensordot(c1s, _outer_dual(right, i1), axes=(2, 0))
    mult %= p
    unit = np.zeros(n, dtype=np.int64)
    unit[L], unit[Q], unit[R] = left.algebra.unit, middle.unit, right.algebra.unit
    idem = []
    for sl, alg in ((L, left.algebra), (Q, middle), (R, right.algebra)):
        for lab, v in alg.idempotents:
            w = np.zeros(n, dtype=np.int64)
            w[sl] = v
            idem.append((lab, w))
    alg = BasedAlgebra(p, mult, unit, idem, name=f"L2[{left.k},{right.n}]")
    comps = {("L",) + nm: (s + L.start, e + L.start) for nm, (s, e) in left.components.items()}
    comps[("Q",)] = (Q.start, Q.stop)
    comps.update({("R",) + nm: (s + R.start, e + R.start) for nm, (s, e) in right.components.items()})
    comps.update({("T", i0): (T.start, T.stop), ("T*", i0): (Ts.start, Ts.stop),
                  ("T", i1 - 1): (U.start, U.stop), ("T*", i1 - 1): (Us.start, Us.stop)})
    return L2Window(alg, comps, left, middle, right, middle_poset)


def c_window_middle(spec: GluedWindowSpec, k: int, n: int):
    """A C window on ``[k, n]`` with both ends, cast as a middle algebra with its two boundaries.

    Gluing it between C windows over the same input reproduces a plain C window.
    """
    w = build_C_window(spec, k, n, cut="none")
    a, p = spec.base, spec.base.p
    lows, highs = _outer_map(w, k), _outer_map(w, n)
    low = Boundary(spec.bimodule, AlgebraMap(w.algebra, a, lows, "hom"), _outer_dual(w, k))
    high = Boundary(spec.bimodule, AlgebraMap(w.algebra, a, highs, "hom"), _outer_dual(w, n))
    return w, low, high
