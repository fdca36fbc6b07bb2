"""Weight posets, standard and tilting modules, heredity chains and Ringel duals."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np

from .algebra import BasedAlgebra
from .linalg import complement, matmul, rank, row_basis
from .modules import (
    AModule,
    dual_module,
    endomorphism_algebra,
    ext1,
    module_sum,
    projective,
    quotient_module,
    trace,
    universal_extension,
)
from .structure import decompose, radical

__all__ = [
    "WeightPoset",
    "Certificate",
    "QHStructure",
    "standard_module",
    "costandard_module",
    "check_quasihereditary",
    "delta_multiplicities",
    "tilting_module",
    "ringel_dual",
    "truncate_ideal",
    "truncate_coideal",
    "is_local",
]


class WeightPoset:
    """Finite strict partial order on labels; ``less`` holds pairs ``(a, b)`` with ``a < b``."""

    def __init__(self, labels, less=()):
        labels = list(labels)
        if len(set(map(_key, labels))) != len(labels):
            raise ValueError("labels must be distinct")
        g = nx.DiGraph()
        g.add_nodes_from(range(len(labels)))
        index = {_key(l): i for i, l in enumerate(labels)}
        for a, b in less:
            try:
                g.add_edge(index[_key(a)], index[_key(b)])
            except KeyError as exc:
                raise ValueError(f"unknown label in relation: {exc}") from None
        if not nx.is_directed_acyclic_graph(g):
            raise ValueError("relation is not a strict partial order")
        self.labels = labels
        self._index = index
        closure = nx.transitive_closure_dag(g)
        self._lt = {(labels[i], labels[j]) for i, j in closure.edges}
        self._graph = closure

    @classmethod
    def chain(cls, descending) -> "WeightPoset":
        """Total order with ``descending[0]`` largest."""
        d = list(descending)
        return cls(d, [(d[i + 1], d[i]) for i in range(len(d) - 1)])

    def _i(self, lab) -> int:
        try:
            return self._index[_key(lab)]
        except KeyError:
            raise KeyError(f"label {lab!r} not in poset") from None

    def lt(self, a, b) -> bool:
        return self._graph.has_edge(self._i(a), self._i(b))

    def le(self, a, b) -> bool:
        return _key(a) == _key(b) or self.lt(a, b)

    def above(self, lab) -> list:
        return [self.labels[j] for j in self._graph.successors(self._i(lab))]

    def below(self, lab) -> list:
        return [self.labels[j] for j in self._graph.predecessors(self._i(lab))]

    def relations(self) -> list:
        return sorted(self._lt, key=lambda t: (_key(t[0]), _key(t[1])))

    def cover_pairs(self) -> list:
        red = nx.transitive_reduction(self._graph)
        return sorted(((self.labels[i], self.labels[j]) for i, j in red.edges), key=lambda t: (_key(t[0]), _key(t[1])))

    def depth(self, lab) -> int:
        """Length of the longest chain starting at ``lab`` and going up."""
        memo = self.__dict__.setdefault("_depth", {})
        i = self._i(lab)
        if i not in memo:
            memo[i] = max((self.depth(self.labels[j]) + 1 for j in self._graph.successors(i)), default=0)
        return memo[i]

    def linear_extension(self) -> list:
        """Labels from the top down, sorted by (depth below the maxima, label)."""
        return sorted(self.labels, key=lambda l: (self.depth(l), _sortable(l)))

    def opposite(self) -> "WeightPoset":
        return WeightPoset(self.labels, [(b, a) for a, b in self._lt])

    def restrict(self, subset) -> "WeightPoset":
        keep = [l for l in self.labels if _key(l) in {_key(s) for s in subset}]
        ks = {_key(l) for l in keep}
        return WeightPoset(keep, [(a, b) for a, b in self._lt if _key(a) in ks and _key(b) in ks])

    def is_downward_closed(self, subset) -> bool:
        ks = {_key(s) for s in subset}
        return all(_key(b) in ks for s in subset for b in self.below(s))

    def is_upward_closed(self, subset) -> bool:
        ks = {_key(s) for s in subset}
        return all(_key(b) in ks for s in subset for b in self.above(s))

    def to_json(self) -> str:
        return json.dumps({"labels": self.labels, "covers": [list(c) for c in self.cover_pairs()]})

    @classmethod
    def from_json(cls, text: str) -> "WeightPoset":
        d = json.loads(text)
        labels = [_unjson(l) for l in d["labels"]]
        return cls(labels, [(_unjson(a), _unjson(b)) for a, b in d["covers"]])

    def __eq__(self, other):
        return isinstance(other, WeightPoset) and {_key(l) for l in self.labels} == {
            _key(l) for l in other.labels
        } and {(_key(a), _key(b)) for a, b in self._lt} == {(_key(a), _key(b)) for a, b in other._lt}

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"WeightPoset({self.labels}, covers={self.cover_pairs()})"


def _key(lab):
    return tuple(_key(x) for x in lab) if isinstance(lab, (list, tuple)) else lab


def _unjson(lab):
    return tuple(_unjson(x) for x in lab) if isinstance(lab, list) else lab


def _sortable(lab):
    if isinstance(lab, (int, np.integer)):
        return (0, int(lab), "")
    if isinstance(lab, (list, tuple)):
        return (1, 0, json.dumps(list(lab), default=str))
    return (2, 0, str(lab))


# -- heredity chain --------------------------------------------------------

@dataclass
class Certificate:
    ok: bool
    extension: list
    steps: list = field(default_factory=list)  # per step: label and the dimensions compared
    failure: dict | None = None

    def to_dict(self) -> dict:
        return {"ok": self.ok, "extension": self.extension, "steps": self.steps, "failure": self.failure}


def _rep(a: BasedAlgebra, lab):
    d = decompose(a)
    if lab not in d.reps:
        raise KeyError(f"label {lab!r} not among the algebra's idempotent labels")
    return d.reps[lab]


def _check_labels(a: BasedAlgebra, poset: WeightPoset):
    labs = decompose(a).labels
    if {_key(l) for l in labs} != {_key(l) for l in poset.labels}:
        raise ValueError(f"poset labels {poset.labels} do not match simple labels {labs}")


def check_quasihereditary(a: BasedAlgebra, poset: WeightPoset) -> Certificate:
    """Dlab's test along the linear extension: each step must be a heredity ideal.

    At step ``k`` with label ``lam`` and ``I`` the ideal generated by earlier
    labels, the corner ``e (A/I) e`` must be the field and the multiplication
    ``A e / I e  x  e A / e I -> (A e A + I) / I`` must be bijective.
    """
    _check_labels(a, poset)
    p, n = a.p, a.dim
    ext = poset.linear_extension()
    cert = Certificate(True, list(ext))
    ideal = np.zeros((0, n), dtype=np.int64)
    for lab in ext:
        e = _rep(a, lab).reshape(1, -1)
        ae = a.left_span(e)
        ea = a.right_span(e)
        ie = row_basis(matmul(ideal, a.right_matrix(e[0]).T, p), p, n) if ideal.shape[0] else ideal
        ei = row_basis(matmul(ideal, a.left_matrix(e[0]).T, p), p, n) if ideal.shape[0] else ideal
        left = complement(ie, n, p, within=row_basis(np.vstack([ie, ae]), p, n))
        right = complement(ei, n, p, within=row_basis(np.vstack([ei, ea]), p, n))
        eae = a.peirce(e[0], e[0])
        eie = row_basis(matmul(ei, a.right_matrix(e[0]).T, p), p, n) if ei.shape[0] else ei
        corner = eae.shape[0] - eie.shape[0]
        new = a.ideal(e)
        both = row_basis(np.vstack([ideal, new]), p, n)
        section = both.shape[0] - ideal.shape[0]
        prods = a.products(left, right).reshape(-1, n) if left.shape[0] and right.shape[0] else np.zeros((0, n), dtype=np.int64)
        witness = rank(np.vstack([ideal, prods]), p) - ideal.shape[0] if prods.shape[0] else 0
        step = {
            "label": lab,
            "left": int(left.shape[0]),
            "right": int(right.shape[0]),
            "corner": int(corner),
            "section": int(section),
            "product_rank": int(witness),
        }
        cert.steps.append(step)
        if corner != 1 or section != left.shape[0] * right.shape[0] or witness != section:
            cert.ok = False
            cert.failure = {
                "label": lab,
                "tensor_dim": int(left.shape[0] * right.shape[0]),
                "section_dim": int(section),
                "corner_dim": int(corner),
            }
            return cert
        ideal = both
    if ideal.shape[0] != n:
        cert.ok = False
        cert.failure = {"label": None, "reason": "chain does not reach the whole algebra"}
    return cert


# -- standard modules ------------------------------------------------------

def standard_module(a: BasedAlgebra, poset: WeightPoset, lab, side: str = "left") -> AModule:
    """``P(lam)`` modulo the trace of all ``P(mu)`` with ``mu > lam``."""
    e = _rep(a, lab)
    pl = projective(a, e, side)
    bigger = [_rep(a, m) for m in poset.above(lab)]
    if not bigger:
        return pl
    if side == "left":
        tr = trace(pl, bigger)
    else:
        tr = trace(pl, bigger)
    return quotient_module(pl, tr)


def costandard_module(a: BasedAlgebra, poset: WeightPoset, lab) -> AModule:
    """Dual of the right standard module."""
    return dual_module(standard_module(a, poset, lab, side="right"))


def is_local(a: BasedAlgebra) -> bool:
    return a.dim > 0 and a.dim - radical(a).shape[0] == 1


def _dim_e(m: AModule, e) -> int:
    return rank(m.act(e), m.p) if m.dim else 0


class QHStructure:
    """An algebra with a weight poset, with standard, costandard and tilting modules cached."""

    def __init__(self, algebra: BasedAlgebra, poset: WeightPoset, certify: bool = True):
        _check_labels(algebra, poset)
        self.algebra = algebra
        self.poset = poset
        self.certificate = check_quasihereditary(algebra, poset) if certify else None
        self._delta: dict = {}
        self._nabla: dict = {}
        self._tilt: dict = {}

    @property
    def labels(self) -> list:
        return self.poset.linear_extension()

    @cached_property
    def opposite(self) -> "QHStructure":
        return QHStructure(self.algebra.opposite(), self.poset, certify=False)

    def rep(self, lab):
        return _rep(self.algebra, lab)

    def standard(self, lab) -> AModule:
        if lab not in self._delta:
            self._delta[lab] = standard_module(self.algebra, self.poset, lab)
        return self._delta[lab]

    def costandard(self, lab) -> AModule:
        if lab not in self._nabla:
            right = self.opposite.standard(lab)  # left module over the opposite = right module here
            self._nabla[lab] = AModule(self.algebra, right.action.transpose(0, 2, 1), "left")
        return self._nabla[lab]

    def simple(self, lab) -> AModule:
        from .modules import radical_submodule

        pl = projective(self.algebra, self.rep(lab))
        return quotient_module(pl, radical_submodule(pl))

    def composition_factors(self, m: AModule) -> dict:
        # [M : L(lam)] = dim e_lam M for a primitive e_lam with split top
        return {lab: _dim_e(m, self.rep(lab)) for lab in self.labels}

    def tilting(self, lab) -> AModule:
        if lab not in self._tilt:
            self._tilt[lab] = tilting_module(self, lab)
        return self._tilt[lab]

    def bgg_count(self) -> int:
        """``sum dim Delta(lam) dim Delta^r(lam)``; equals ``dim A`` when quasi-hereditary."""
        return sum(self.standard(l).dim * self.opposite.standard(l).dim for l in self.labels)


def delta_multiplicities(m: AModule, qh: QHStructure):
    """Standard-filtration multiplicities of ``m`` by top-down peeling, or ``None``.

    Going down the linear extension, the trace of ``P(lam)`` in what is left
    must be a sum of copies of ``Delta(lam)``; ``None`` signals that ``m`` has no
    standard filtration.
    """
    if m.algebra is not qh.algebra and m.algebra.dim != qh.algebra.dim:
        raise ValueError("module over a different algebra")
    x = m
    out = {}
    done = []
    for lab in qh.labels:
        e = qh.rep(lab)
        if any(_dim_e(x, qh.rep(d)) for d in done):
            return None
        k = _dim_e(x, e)
        out[lab] = k
        done.append(lab)
        if k == 0:
            continue
        u = trace(x, [e])
        if u.shape[0] != k * qh.standard(lab).dim:
            return None
        x = quotient_module(x, u)
    return out if x.dim == 0 else None


def nabla_multiplicities(m: AModule, qh: QHStructure):
    """Costandard multiplicities, via standard peeling of the dual over the opposite algebra."""
    dual = AModule(qh.opposite.algebra, m.action.transpose(0, 2, 1), "left")
    return delta_multiplicities(dual, qh.opposite)


def tilting_module(qh: QHStructure, lab) -> AModule:
    """Start from ``Delta(lam)`` and add universal extensions by ``Delta(mu)``, ``mu`` going down."""
    t = qh.standard(lab)
    lower = [m for m in qh.labels if qh.poset.lt(m, lab)]
    bound = sum(qh.standard(m).dim * max(1, qh.standard(lab).dim) for m in qh.labels) + t.dim
    changed = True
    while changed:
        changed = False
        for mu in lower:
            e = ext1(qh.standard(mu), t)
            if e.dim:
                t = universal_extension(t, e)
                changed = True
            if t.dim > bound * 64:
                raise RuntimeError("tilting construction exceeded its dimension bound")
    return t


def check_tilting(qh: QHStructure, lab, t: AModule | None = None) -> dict:
    t = qh.tilting(lab) if t is None else t
    cf = qh.composition_factors(t)
    end, _ = endomorphism_algebra(t)
    return {
        "dim": t.dim,
        "top_multiplicity": cf[lab],
        "factors_below": all(qh.poset.le(m, lab) for m, c in cf.items() if c),
        "delta": delta_multiplicities(t, qh),
        "nabla": nabla_multiplicities(t, qh),
        "indecomposable": is_local(end),
    }


def ringel_dual(qh: QHStructure) -> BasedAlgebra:
    """``End(T)`` with ``T`` the sum of all ``T(lam)``, acting on the right of ``T``.

    The idempotents are the projections onto the summands, labelled by weight;
    the poset of the result is the opposite order, stored as ``weight_poset``.
    """
    labs = qh.labels
    mods = [qh.tilting(l) for l in labs]
    t = module_sum(*mods)
    offs = t.offsets
    projs = []
    for i, l in enumerate(labs):
        pr = np.zeros((t.dim, t.dim), dtype=np.int64)
        pr[offs[i]:offs[i + 1], offs[i]:offs[i + 1]] = np.eye(offs[i + 1] - offs[i], dtype=np.int64)
        projs.append((l, pr))
    out, basis = endomorphism_algebra(t, opposite=True, idempotents=projs, name=f"R({qh.algebra.name})")
    out.weight_poset = qh.poset.opposite()
    out.tilting = t
    out.endomorphism_basis = basis
    return out


# -- truncations -----------------------------------------------------------

def truncate_ideal(a: BasedAlgebra, poset: WeightPoset, keep) -> BasedAlgebra:
    """``A / (sum of A e A over labels outside keep)``; ``keep`` must be downward closed."""
    keep = list(keep)
    if not poset.is_downward_closed(keep):
        raise ValueError("label set is not downward closed")
    ks = {_key(k) for k in keep}
    gens = [_rep(a, l) for l in poset.labels if _key(l) not in ks]
    if not gens:
        return a
    ideal = a.ideal(np.array(gens))
    q = a.quotient(ideal, name=f"{a.name}^J")
    q.weight_poset = poset.restrict(keep)
    return q


def truncate_coideal(a: BasedAlgebra, poset: WeightPoset, keep) -> BasedAlgebra:
    """``e A e`` with ``e`` the sum of the idempotents labelled in ``keep`` (upward closed)."""
    keep = list(keep)
    if not poset.is_upward_closed(keep):
        raise ValueError("label set is not upward closed")
    ks = {_key(k) for k in keep}
    if ks == {_key(l) for l in poset.labels}:
        return a
    d = decompose(a)
    idem = []
    for lab in keep:
        c = d.labels.index(lab)
        idem.append((lab, sum(d.primitives[i] for i, k in enumerate(d.klass) if k == c) % a.p))
    e = sum(v for _, v in idem) % a.p
    out = a.corner(e, idempotents=idem, name=f"{a.name}_I")
    out.weight_poset = poset.restrict(keep)
    return out
