"""Simplicial homology over Z/p, induced maps, and inverse-limit reports.

Chains over Z/2 are python ints used as bitsets; other primes use sparse
dicts.  Homology bases come from column reduction in the canonical simplex
order, so induced matrices are reproducible.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .complexes import SimplicialComplex, order_complex
from .config import DEFAULT, RunConfig, is_prime
from .errors import InputError
from .poset import FinitePoset, MonotoneMap, height, iter_bits


class _F2:
    p = 2
    zero = 0

    @staticmethod
    def vec(items):
        v = 0
        for i, c in items:
            if c & 1:
                v ^= 1 << i
        return v

    @staticmethod
    def low(v):
        return v.bit_length() - 1

    @staticmethod
    def lead(v, i):
        return 1

    @staticmethod
    def axpy(v, c, w):
        return v ^ w if c & 1 else v

    @staticmethod
    def items(v):
        return ((i, 1) for i in iter_bits(v))

    @staticmethod
    def inv(a):
        return 1


class _Fp:
    zero = None

    def __init__(self, p):
        self.p = p

    def vec(self, items):
        out = {}
        for i, c in items:
            out[i] = (out.get(i, 0) + c) % self.p
        return {i: c for i, c in out.items() if c}

    @staticmethod
    def low(v):
        return max(v)

    @staticmethod
    def lead(v, i):
        return v[i]

    def axpy(self, v, c, w):
        c %= self.p
        if not c:
            return v
        out = dict(v)
        for i, a in w.items():
            b = (out.get(i, 0) + c * a) % self.p
            if b:
                out[i] = b
            else:
                out.pop(i, None)
        return out

    @staticmethod
    def items(v):
        return sorted(v.items())

    def inv(self, a):
        return pow(a, -1, self.p)


def field_ops(p: int):
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    return _F2 if p == 2 else _Fp(p)


class _Pivots:
    """Echelon store keyed by lowest-nonzero (max) index, each row tagged."""

    def __init__(self, F):
        self.F = F
        self.rows = {}

    def reduce(self, v, tag):
        F = self.F
        while v:
            lo = F.low(v)
            hit = self.rows.get(lo)
            if hit is None:
                break
            pv, ptag = hit
            c = (-F.lead(v, lo) * F.inv(F.lead(pv, lo))) % F.p
            v = F.axpy(v, c, pv)
            tag = F.axpy(tag, c, ptag)
        return v, tag

    def add(self, v, tag):
        self.rows[self.F.low(v)] = (v, tag)


class ChainComplex:
    """Boundary operators of a simplicial complex over Z/p."""

    def __init__(self, K: SimplicialComplex, p: int = 2, check: bool = True):
        self.K = K
        self.p = p
        self.F = field_ops(p)
        self._cols = {}
        if check:
            self.check_dd()

    def boundary_columns(self, d: int) -> list:
        """Columns of the boundary map from d-chains to (d-1)-chains."""
        if d not in self._cols:
            F = self.F
            if d <= 0 or d > self.K.dim:
                cols = [F.vec(()) for _ in range(self.K.count(d))]
            else:
                idx = self.K.index(d - 1)
                cols = [F.vec((idx[s[:k] + s[k + 1:]], (-1) ** k) for k in range(len(s)))
                        for s in self.K.simplices[d]]
            self._cols[d] = cols
        return self._cols[d]

    def apply(self, d: int, v):
        F = self.F
        cols = self.boundary_columns(d)
        out = F.vec(())
        for i, c in F.items(v):
            out = F.axpy(out, c, cols[i])
        return out

    def check_dd(self):
        for d in range(2, self.K.dim + 1):
            for j, col in enumerate(self.boundary_columns(d)):
                if self.apply(d - 1, col):
                    raise AssertionError(f"boundary of boundary nonzero at degree {d}, column {j}")

    def rank(self, d: int) -> int:
        piv = _Pivots(self.F)
        r = 0
        zero = self.F.vec(())
        for col in self.boundary_columns(d):
            v, _ = piv.reduce(col, zero)
            if v:
                piv.add(v, zero)
                r += 1
        return r

    def betti(self) -> list[int]:
        n = self.K.dim
        if n < 0:
            return []
        ranks = [0] + [self.rank(d) for d in range(1, n + 2)]
        return [self.K.count(d) - ranks[d] - ranks[d + 1] for d in range(n + 1)]


class HomologyBasis:
    """A basis of H_l as cycle representatives plus a coordinate solver."""

    def __init__(self, C: ChainComplex, l: int):
        self.C, self.l = C, l
        F = C.F
        zero = F.vec(())
        store = _Pivots(F)
        for col in C.boundary_columns(l + 1):
            v, _ = store.reduce(col, zero)
            if v:
                store.add(v, zero)
        self.rank_boundary = len(store.rows)
        cyc = _Pivots(F)
        cycles = []
        for j, col in enumerate(C.boundary_columns(l)):
            v, tag = cyc.reduce(col, F.vec([(j, 1)]))
            if v:
                cyc.add(v, tag)
            else:
                cycles.append(tag)
        self.reps = []
        for z in cycles:
            v, _ = store.reduce(z, zero)
            if v:
                store.add(v, F.vec([(len(self.reps), 1)]))
                self.reps.append(v)
        self._store = store

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coordinates(self, z) -> np.ndarray:
        F = self.C.F
        v, tag = self._store.reduce(z, F.vec(()))
        if v:
            raise InputError("chain is not a cycle")
        out = np.zeros(self.dim, dtype=np.int64)
        # reduction subtracts multiples of the representatives, so the tag holds -coordinates
        for i, c in F.items(tag):
            out[i] = -c % F.p
        return out


def betti(K: SimplicialComplex, p: int = 2) -> list[int]:
    return ChainComplex(K, p).betti()


def poset_betti(X: FinitePoset, p: int = 2) -> list[int]:
    return betti(order_complex(X), p)


class PosetHomology:
    """Cached order complex, chain complex and bases for one poset."""

    def __init__(self, X: FinitePoset, p: int = 2):
        self.X, self.p = X, p
        self.K = order_complex(X)
        self.C = ChainComplex(self.K, p)
        self.pos = {e: i for i, e in enumerate(self.K.vertices)}
        self._bases = {}

    def basis(self, l: int) -> HomologyBasis:
        if l not in self._bases:
            self._bases[l] = HomologyBasis(self.C, l)
        return self._bases[l]


def _induced(f: MonotoneMap, src: PosetHomology, dst: PosetHomology, l: int) -> np.ndarray:
    F = src.C.F
    bs, bt = src.basis(l), dst.basis(l)
    out = np.zeros((bt.dim, bs.dim), dtype=np.int64)
    if not bs.dim or not bt.dim:
        return out
    vmap = [dst.pos[f(v)] for v in src.K.vertices]
    tidx = dst.K.index(l)
    simplices = src.K.simplices[l]
    for j, rep in enumerate(bs.reps):
        acc = []
        for i, c in F.items(rep):
            img = tuple(vmap[v] for v in simplices[i])
            if len(set(img)) == len(img):
                acc.append((tidx[img], c))
        out[:, j] = bt.coordinates(F.vec(acc))
    return out


def induced_homology_map(f: MonotoneMap, l: int, p: int = 2,
                         cache: dict | None = None) -> np.ndarray:
    """Matrix of H_l(K(f)) in the canonical homology bases (rows: target)."""
    cache = {} if cache is None else cache

    def get(X):
        key = id(X)
        if key not in cache:
            cache[key] = PosetHomology(X, p)
        return cache[key]

    return _induced(f, get(f.source), get(f.target), l)


def rank_mod_p(M: np.ndarray, p: int) -> int:
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        others = np.nonzero(A[:, c])[0]
        for i in others:
            if i != r:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        r += 1
    return r


STABILIZED, GROWING, INCONCLUSIVE = "stabilized", "growing", "inconclusive"


@dataclass
class HomologySequenceReport:
    degree: int
    p: int
    betti: list[int]
    maps: list[np.ndarray]
    stable_dims: list[list[int]]
    window: int
    verdict: str
    verdict_dim: int | None = None
    window_stages: list[int] = field(default_factory=list)

    def stable_dim(self, stage: int) -> int:
        """Deepest available stable-image dimension at a 1-based stage."""
        return self.stable_dims[stage - 1][-1]

    @property
    def trailing_values(self) -> list[int]:
        return [self.stable_dim(n) for n in self.window_stages]

    def summary(self) -> str:
        v = f"{self.verdict} at {self.verdict_dim}" if self.verdict == STABILIZED else self.verdict
        return (f"H{self.degree} (p={self.p}): betti {self.betti}; trailing stable dims "
                f"{self.trailing_values} at stages {self.window_stages}; {v}")

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "p": self.p,
            "betti": list(self.betti),
            "maps": [m.tolist() for m in self.maps],
            "stable_dims": {str(n + 1): list(s) for n, s in enumerate(self.stable_dims)},
            "window": self.window,
            "window_stages": list(self.window_stages),
            "verdict": self.verdict,
            "verdict_dim": self.verdict_dim,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def stable_image_dims(betti_numbers, maps, p) -> list[list[int]]:
    """s[n][k] = rank of the composite of the k bonds leaving stage n + k down to stage n."""
    N = len(betti_numbers)
    out = []
    for n in range(N):
        row = [betti_numbers[n]]
        P = np.eye(betti_numbers[n], dtype=np.int64)
        for k in range(1, N - n):
            P = (P @ maps[n + k - 1]) % p
            row.append(rank_mod_p(P, p) if P.size else 0)
        out.append(row)
    return out


def stabilization_verdict(stable_dims, window: int):
    """Judge the trailing window of stages that have at least one later stage.

    The last stage is excluded: its only "image" is its own homology, which
    says nothing about the limit.
    """
    N = len(stable_dims)
    if N < 2:
        return INCONCLUSIVE, None, []
    stages = list(range(max(1, N - window), N))
    vals = [stable_dims[n - 1][-1] for n in stages]
    if all(v == vals[0] for v in vals):
        return STABILIZED, vals[0], stages
    if all(a < b for a, b in zip(vals, vals[1:])):
        return GROWING, None, stages
    return INCONCLUSIVE, None, stages


def homology_sequence(S, l: int, p: int = 2, window: int = 2, cache: dict | None = None) -> HomologySequenceReport:
    if window < 1:
        raise InputError("window must be at least 1")
    cache = {} if cache is None else cache

    def get(X):
        key = id(X)
        if key not in cache:
            cache[key] = PosetHomology(X, p)
        return cache[key]

    hs = [get(X) for X in S.stages]
    b = [h.basis(l).dim if l >= 0 else 0 for h in hs]
    maps = [_induced(t, hs[n + 1], hs[n], l) for n, t in enumerate(S.bonds)]
    sd = stable_image_dims(b, maps, p)
    verdict, d, stages = stabilization_verdict(sd, window)
    return HomologySequenceReport(l, p, b, maps, sd, window, verdict, d, stages)


def sequence_height(S) -> tuple[int, list[int]]:
    hs = [height(X) for X in S.stages]
    return max(hs), hs
