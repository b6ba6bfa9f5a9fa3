"""Random generators and brute-force oracles shared by the tests.

The oracles deliberately avoid the package's own algorithms: they work on
plain dicts, itertools enumeration and dense GF(p) elimination.
"""
from __future__ import annotations

import itertools
import random

import numpy as np

from finshape import FinitePoset, InverseSequence, MonotoneMap


def random_poset(rng: random.Random, n: int, density: float = 0.3, prefix: str = "e") -> FinitePoset:
    ids = [f"{prefix}{i}" for i in range(n)]
    rel = [(ids[i], ids[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return FinitePoset(ids, rel)


def relation_closure(X: FinitePoset) -> set:
    """Reflexive-transitive closure of the covers by Floyd-Warshall on a dict."""
    ids = list(X.ids)
    le = {(a, b): a == b for a in ids for b in ids}
    for a, b in X.covers:
        le[a, b] = True
    for k in ids:
        for i in ids:
            if le[i, k]:
                for j in ids:
                    if le[k, j]:
                        le[i, j] = True
    return {k for k, v in le.items() if v}


def all_monotone_brute(S: FinitePoset, T: FinitePoset) -> list[dict]:
    leS, leT = relation_closure(S), relation_closure(T)
    out = []
    for img in itertools.product(T.ids, repeat=len(S)):
        f = dict(zip(S.ids, img))
        if all((f[a], f[b]) in leT for a, b in leS):
            out.append(f)
    return out


def random_monotone(rng: random.Random, S: FinitePoset, T: FinitePoset, tries: int = 50) -> MonotoneMap:
    """Random order-preserving map, built in a linear-extension order."""
    leT = relation_closure(T)
    order = sorted(S.ids, key=lambda x: len(S.down_set(x)))
    for _ in range(tries):
        f = {}
        for x in order:
            below = [f[z] for z in S.down_set(x) if z != x]
            cand = [y for y in T.ids if all((b, y) in leT for b in below)]
            if not cand:
                break
            f[x] = rng.choice(cand)
        else:
            return MonotoneMap(S, T, f, check=True)
    return MonotoneMap(S, T, {x: T.ids[0] for x in S.ids}, check=True)


def random_sequence(rng: random.Random, stages: int, max_size: int = 15) -> InverseSequence:
    Xs = [random_poset(rng, rng.randint(1, max_size), rng.uniform(0.15, 0.5), prefix=f"s{n}_")
          for n in range(stages)]
    bonds = [random_monotone(rng, Xs[n + 1], Xs[n]) for n in range(stages - 1)]
    return InverseSequence(Xs, bonds)


def chains_brute(X: FinitePoset) -> list[tuple[str, ...]]:
    """All non-empty chains, found by testing every subset for total comparability."""
    le = relation_closure(X)
    ids = list(X.ids)
    out = []
    for r in range(1, len(ids) + 1):
        for sub in itertools.combinations(ids, r):
            if all((a, b) in le or (b, a) in le for a, b in itertools.combinations(sub, 2)):
                out.append(sub)
    return out


def height_brute(X: FinitePoset) -> int:
    return max(len(c) for c in chains_brute(X)) - 1


def rank_gf(M, p: int) -> int:
    """Plain Gaussian elimination over GF(p) on a dense integer matrix."""
    A = np.array(M, dtype=np.int64) % p
    if A.size == 0:
        return 0
    r = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i, c]), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        r += 1
        if r == rows:
            break
    return r


def span_size_rank_gf2(M) -> int:
    """Rank over GF(2) as log2 of the number of distinct column combinations."""
    A = np.array(M, dtype=np.int64) % 2
    if A.size == 0:
        return 0
    seen = set()
    for mask in itertools.product((0, 1), repeat=A.shape[1]):
        seen.add(tuple((A @ np.array(mask)) % 2))
    return len(seen).bit_length() - 1


def betti_brute(X: FinitePoset, p: int = 2) -> list[int]:
    """Betti numbers of the order complex from dense boundary matrices."""
    ch = chains_brute(X)
    # orient each chain by its order from below
    le = relation_closure(X)

    def key(c):
        return tuple(sorted(c, key=lambda v: sum((u, v) in le for u in c)))

    by_dim: dict[int, list] = {}
    for c in ch:
        by_dim.setdefault(len(c) - 1, []).append(key(c))
    top = max(by_dim)
    index = {d: {s: i for i, s in enumerate(v)} for d, v in by_dim.items()}
    ranks = {}
    for d in range(1, top + 1):
        B = np.zeros((len(by_dim[d - 1]), len(by_dim[d])), dtype=np.int64)
        for j, s in enumerate(by_dim[d]):
            for k in range(len(s)):
                face = s[:k] + s[k + 1:]
                B[index[d - 1][face], j] = (-1) ** k
        ranks[d] = rank_gf(B, p)
    return [len(by_dim[d]) - ranks.get(d, 0) - ranks.get(d + 1, 0) for d in range(top + 1)]


def hom_components_brute(S: FinitePoset, T: FinitePoset):
    """Connected components of the comparability graph on all monotone maps S -> T."""
    maps = all_monotone_brute(S, T)
    leT = relation_closure(T)
    keys = [tuple(f[x] for x in S.ids) for f in maps]
    parent = list(range(len(keys)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(len(keys)), 2):
        a, b = keys[i], keys[j]
        if all((u, v) in leT for u, v in zip(a, b)) or all((v, u) in leT for u, v in zip(a, b)):
            parent[find(i)] = find(j)
    return {k: find(i) for i, k in enumerate(keys)}
