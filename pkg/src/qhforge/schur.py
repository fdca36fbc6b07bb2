"""Schur algebras S(2, r) on tensor space and their interval filtration."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb

import numpy as np

from .algebra import AlgebraMap, BasedAlgebra

__all__ = [
    "SchurAlgebra",
    "build_schur",
    "weights",
    "place_permutation_generators",
    "MAX_R",
    "transpose_map",
    "RingelCase",
    "ringel_selfdual_case",
    "IntervalDecomposition",
    "interval_decomposition",
]

MAX_R = 12


def weights(r: int) -> list:
    """Dominant weights ``lambda = #e1 - #e2 >= 0`` of S(2, r), descending."""
    return list(range(r, -1, -2))


def _types(r: int) -> list:
    # orbit of a pair of multi-indices (u, v) <-> counts (a00, a01, a10, a11)
    return [t for t in product(range(r + 1), repeat=4) if sum(t) == r]


@dataclass
class SchurAlgebra:
    p: int
    r: int
    algebra: BasedAlgebra
    types: list
    weights: list
    xi: dict  # all torus weights r, r-2, ..., -r
    transpose: AlgebraMap = field(repr=False)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def tensor_matrix(self, x) -> np.ndarray:
        """Action of the element ``x`` on the ``2^r``-dimensional tensor space."""
        r = self.r
        idx = np.arange(2**r)
        bits = (idx[:, None] >> np.arange(r)[None, :]) & 1
        code = bits[:, None, :] * 2 + bits[None, :, :]  # (u, v, position)
        counts = np.stack([(code == c).sum(axis=2) for c in range(4)], axis=-1)
        lookup = {t: i for i, t in enumerate(self.types)}
        which = np.vectorize(lambda a, b, c, d: lookup[(a, b, c, d)])(*np.moveaxis(counts, -1, 0))
        x = np.asarray(x, dtype=np.int64)
        return x[which] % self.p


def place_permutation_generators(r: int) -> list:
    """Matrices of a transposition and an r-cycle permuting tensor positions."""
    if r < 2:
        return [np.eye(2**r, dtype=np.int64)]
    n = 2**r
    idx = np.arange(n)
    bits = (idx[:, None] >> np.arange(r)[None, :]) & 1
    gens = []
    for perm in ([1, 0] + list(range(2, r)), list(range(1, r)) + [0]):
        moved = (bits[:, perm] << np.arange(r)[None, :]).sum(axis=1)
        g = np.zeros((n, n), dtype=np.int64)
        g[moved, idx] = 1
        gens.append(g)
    return gens


def build_schur(p: int, r: int) -> SchurAlgebra:
    """S(2, r) over GF(p) on the basis of Sigma_r-orbit sums of matrix units.

    An orbit sum ``xi_t`` has entry 1 at ``(u, v)`` exactly when the pair of
    multi-indices has type ``t``, so these matrices span the commutant of the
    place permutations.  Products are read off one representative entry:
    the coefficient of ``xi_c`` in ``xi_a xi_b`` is the ``(u, v)`` entry of the
    matrix product for any ``(u, v)`` of type ``c``.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r > MAX_R:
        raise MemoryError(f"r = {r} exceeds the tensor-space budget (r <= {MAX_R})")
    types = _types(r)
    n = len(types)
    assert n == comb(r + 3, 3)
    lookup = np.full((r + 1,) * 4, -1, dtype=np.int64)
    for i, t in enumerate(types):
        lookup[t] = i
    s_all = (np.arange(2**r)[:, None] >> np.arange(r)[None, :]) & 1
    mult = np.zeros((n, n, n), dtype=np.int64)
    for c, (a00, a01, a10, a11) in enumerate(types):
        u = np.array([0] * (a00 + a01) + [1] * (a10 + a11))
        v = np.array([0] * a00 + [1] * a01 + [0] * a10 + [1] * a11)
        left = u[None, :] * 2 + s_all
        right = s_all * 2 + v[None, :]
        lc = [(left == k).sum(axis=1) for k in range(4)]
        rc = [(right == k).sum(axis=1) for k in range(4)]
        ta = lookup[lc[0], lc[1], lc[2], lc[3]]
        tb = lookup[rc[0], rc[1], rc[2], rc[3]]
        np.add.at(mult[:, :, c], (ta, tb), 1)
    mult %= p
    ws = weights(r)
    xi = {}
    for lam in range(r, -r - 1, -2):
        x = (r + lam) // 2
        vec = np.zeros(n, dtype=np.int64)
        vec[lookup[x, 0, 0, r - x]] = 1
        xi[lam] = vec
    unit = sum(xi.values()) % p
    # listing dominant weights first makes each simple class take its highest weight as label
    alg = BasedAlgebra(p, mult, unit, list(xi.items()), name=f"S(2,{r})/GF({p})")
    perm = np.zeros((n, n), dtype=np.int64)
    for i, (a, b, c, d) in enumerate(types):
        perm[i, lookup[a, c, b, d]] = 1
    tmap = AlgebraMap(alg, alg, perm, "antihom")
    return SchurAlgebra(p, r, alg, types, ws, xi, tmap)


def transpose_map(s: SchurAlgebra) -> AlgebraMap:
    """The antiautomorphism induced by transposing every tensor factor."""
    return s.transpose


# -- Ringel self-dual degrees and the interval decomposition ----------------

@dataclass
class RingelCase:
    kind: str  # "shifted" (r = a p^k - 2 or - 3), "minus-one", "small", "none"
    p: int
    r: int
    a: int | None = None
    k: int | None = None
    shift: int | None = None  # 2 or 3

    @property
    def yes(self) -> bool:
        return self.kind == "shifted"

    @property
    def parity(self) -> str:
        return "odd" if self.r % 2 else "even"

    def explain(self) -> str:
        if self.kind == "shifted":
            return f"r = {self.r} = {self.a}*{self.p}^{self.k} - {self.shift} ({self.parity} case)"
        if self.kind == "minus-one":
            return (f"r = {self.r} = {self.a}*{self.p}^{self.k} - 1; Morita equivalent to "
                    f"S(2,{self.r - 2}) + F, which is the case to verify")
        if self.kind == "small":
            return f"r = {self.r} < p^2 = {self.p ** 2}, outside the interval construction"
        return f"r = {self.r} is not Ringel self-dual for p = {self.p}"


def _split(m: int, p: int):
    """``(a, k)`` with ``m = a p^k``, ``k >= 1`` and ``2 <= a <= p``, or ``None``."""
    k, q = 1, p
    while q <= m:
        if m % q == 0 and 2 <= m // q <= p:
            return m // q, k
        k, q = k + 1, q * p
    return None


def ringel_selfdual_case(p: int, r: int) -> RingelCase:
    for shift in (2, 3):
        hit = _split(r + shift, p)
        if hit:
            return RingelCase("shifted", p, r, hit[0], hit[1], shift)
    hit = _split(r + 1, p)
    if hit:
        return RingelCase("minus-one", p, r, hit[0], hit[1], 1)
    if r < p * p:
        return RingelCase("small", p, r)
    return RingelCase("none", p, r)


@dataclass
class IntervalDecomposition:
    p: int
    r: int
    a: int
    k: int
    intervals: dict  # j -> sorted list of weights, j = 1..a
    isolated: list  # I_0
    reference_degree: int  # A = S(2, reference_degree)
    table: str  # "literal" or "reconciled"
    candidates: dict = field(default_factory=dict)  # table name -> intervals, for the record

    def lowest(self, j: int) -> int:
        return min(self.intervals[j])

    def highest(self, j: int) -> int:
        return max(self.intervals[j])

    def block_of(self, lam) -> int:
        for j, ws in self.intervals.items():
            if lam in ws:
                return j
        return 0

    def to_dict(self) -> dict:
        return {
            "p": self.p, "r": self.r, "a": self.a, "k": self.k, "table": self.table,
            "intervals": {str(j): v for j, v in self.intervals.items()},
            "isolated": self.isolated, "reference_degree": self.reference_degree,
        }


def _odd_table(r: int, a: int, q: int) -> dict:
    lam = weights(r)
    out = {}
    for j in range(1, a + 1):
        # the two row shapes alternate with j; which one starts depends on the parity of r
        high_form = (j % 2 == 1) == (r % 2 == 1)
        lo, hi = ((j - 1) * q + 1, j * q - 2) if high_form else ((j - 1) * q, j * q - 3)
        out[j] = sorted(x for x in lam if lo <= x <= hi)
    return out


def _two_tables(r: int, k: int) -> dict:
    lam = set(weights(r))
    h = 2 ** (k - 1)
    if r % 2:
        literal = {1: list(range(1, h - 2, 2)), 2: list(range(h + 1, 2 * h - 2, 2))}
        reconciled = {1: list(range(1, 2 * h - 2, 2)), 2: list(range(2 * h + 1, 4 * h - 2, 2))}
    else:
        literal = {1: list(range(0, h - 1, 2)), 2: list(range(h, 2 * h - 1, 2))}
        reconciled = {1: list(range(0, 2 * h - 1, 2)), 2: list(range(2 * h, 4 * h - 1, 2))}
    clip = lambda t: {j: sorted(x for x in v if x in lam) for j, v in t.items()}
    return {"literal": clip(literal), "reconciled": clip(reconciled)}


def interval_decomposition(p: int, r: int) -> IntervalDecomposition:
    """Intervals ``I_1, ..., I_a`` of weights attached to a Ringel self-dual degree.

    For ``p = 2`` both the literal table and the version with the exponent
    raised by one are computed; the first one whose intervals all have as
    many weights as the reference algebra is used.
    """
    case = ringel_selfdual_case(p, r)
    if not case.yes:
        raise ValueError(case.explain())
    a, k, q = case.a, case.k, p ** case.k
    if p == 2:
        ref = q - 3 if r % 2 else q - 2
        cands = _two_tables(r, k)
    else:
        ref = q - 2 if r % 2 else q - 3
        cands = {"literal": _odd_table(r, a, q)}
    if ref < 0:
        raise ValueError(f"reference algebra S(2,{ref}) does not exist for r = {r}")
    size = len(weights(ref))
    for name, ints in cands.items():
        flat = [x for v in ints.values() for x in v]
        if len(flat) == len(set(flat)) and all(len(v) == size and v for v in ints.values()):
            iso = sorted(set(weights(r)) - set(flat))
            return IntervalDecomposition(p, r, a, k, ints, iso, ref, name, cands)
    raise ValueError(f"no interval table has blocks of size {size}: {cands}")
