"""Homotopy of monotone maps via fences in the pointwise order.

Two maps into a finite space are homotopic iff they are joined by a fence
f = h0 <=> h1 <=> ... <=> hk = g of pointwise comparable monotone maps.  If
f <= g there is always such a fence whose steps change a single point, so a
breadth-first search over one-point moves explores exactly the component of f.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .config import DEFAULT, RunConfig
from .errors import CapacityError, InputError
from .poset import FinitePoset, MonotoneMap, _max_of, _min_of, iter_bits

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass
class HomotopyResult:
    verdict: str
    fence: list[MonotoneMap] | None = None
    mode: str = "witness"
    explored: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def fence_length(self) -> int | None:
        return None if self.fence is None else len(self.fence) - 1

    def __bool__(self):
        return self.verdict == YES


class _MoveTables:
    def __init__(self, S: FinitePoset, T: FinitePoset):
        self.S, self.T = S, T
        n = len(S)
        self.lower = [[i for i in iter_bits(S._lower_cover_mask(j))] for j in range(n)]
        self.upper = [[] for _ in range(n)]
        for j in range(n):
            for i in self.lower[j]:
                self.upper[i].append(j)
        self.up = [T._above[v] | 1 << v for v in range(len(T))]
        self.down = [T._below[v] | 1 << v for v in range(len(T))]
        self.lin = S.linear_extension()
        self.full = (1 << len(T)) - 1

    def allowed(self, h: Sequence[int], x: int) -> int:
        m = self.full
        for y in self.lower[x]:
            m &= self.up[h[y]]
        for z in self.upper[x]:
            m &= self.down[h[z]]
        return m

    def moves(self, h: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        for x in range(len(h)):
            cur = h[x]
            m = self.allowed(h, x) & (self.up[cur] | self.down[cur]) & ~(1 << cur)
            for v in iter_bits(m):
                yield h[:x] + (v,) + h[x + 1:]


def enumerate_monotone(S: FinitePoset, T: FinitePoset, limit: int | None = None) -> Iterator[tuple[int, ...]]:
    """All monotone maps S -> T as image-index tuples (backtracking along a linear extension)."""
    tab = _MoveTables(S, T)
    n = len(S)
    h = [0] * n
    produced = 0

    def rec(k):
        nonlocal produced
        if k == n:
            produced += 1
            yield tuple(h)
            return
        x = tab.lin[k]
        m = tab.full
        for y in tab.lower[x]:
            m &= tab.up[h[y]]
        for v in iter_bits(m):
            h[x] = v
            yield from rec(k + 1)
            if limit is not None and produced >= limit:
                return

    yield from rec(0)


def count_monotone(S: FinitePoset, T: FinitePoset, bound: int) -> int:
    """Number of monotone maps, or bound + 1 if there are more than ``bound``."""
    c = 0
    for _ in enumerate_monotone(S, T, limit=bound + 1):
        c += 1
    return c


def compress_fence(fence: list[MonotoneMap]) -> list[MonotoneMap]:
    """Greedily jump to the furthest comparable map; endpoints are kept."""
    if len(fence) <= 2:
        return list(fence)
    out = [fence[0]]
    i = 0
    while i < len(fence) - 1:
        j = len(fence) - 1
        while j > i + 1 and not fence[i].comparable(fence[j]):
            j -= 1
        out.append(fence[j])
        i = j
    return out


def is_fence(fence: Sequence[MonotoneMap]) -> bool:
    from .poset import is_monotone
    return all(is_monotone(h) for h in fence) and all(
        a.comparable(b) for a, b in zip(fence, fence[1:]))


def _bfs(tab, start, goal, budget):
    parent = {start: None}
    q = deque([start])
    while q:
        h = q.popleft()
        if h == goal:
            path = []
            while h is not None:
                path.append(h)
                h = parent[h]
            return path[::-1], len(parent), False
        for nb in tab.moves(h):
            if nb not in parent:
                if budget is not None and len(parent) >= budget:
                    return None, len(parent), True
                parent[nb] = h
                q.append(nb)
    return None, len(parent), False


def _pointwise(T, a, b, join):
    img = []
    for u, v in zip(a, b):
        m = (T._above[u] | 1 << u) & (T._above[v] | 1 << v) if join else \
            (T._below[u] | 1 << u) & (T._below[v] | 1 << v)
        w = (_min_of if join else _max_of)(T, m) if m else None
        if w is None:
            return None
        img.append(w)
    return tuple(img)


def homotopic(f: MonotoneMap, g: MonotoneMap, mode: str = "exact",
              candidates: Iterable[MonotoneMap] = (), config: RunConfig = DEFAULT) -> HomotopyResult:
    """Decide (exact) or search for (witness) a fence between ``f`` and ``g``.

    Witness mode may answer ``no`` only when the search exhausted the whole
    component of ``f``; otherwise it answers ``yes`` or ``unknown``.
    """
    if f.source != g.source or f.target != g.target:
        raise InputError("maps do not share source and target")
    if mode not in ("exact", "witness"):
        raise InputError(f"unknown homotopy mode {mode!r}")
    S, T = f.source, f.target
    if f == g:
        return HomotopyResult(YES, [f], mode)
    if f.comparable(g):
        return HomotopyResult(YES, [f, g], mode)
    tab = _MoveTables(S, T)

    if mode == "exact":
        n = count_monotone(S, T, config.max_maps)
        if n > config.max_maps:
            raise CapacityError(f"more than {config.max_maps} monotone maps; exact mode refused")
        path, seen, _ = _bfs(tab, f._img, g._img, None)
        if path is None:
            return HomotopyResult(NO, None, mode, seen)
        fence = [MonotoneMap._from_indices(S, T, h) for h in path]
        return HomotopyResult(YES, compress_fence(fence), mode, seen)

    pool = [f._img, g._img]
    for c in candidates:
        if c.source != S or c.target != T:
            raise InputError("candidate map has the wrong source or target")
        if c._img not in pool and not _violates(tab, c._img):
            pool.append(c._img)
    base = list(pool)
    for i in range(len(base)):
        for j in range(i + 1, len(base)):
            for join in (True, False):
                h = _pointwise(T, base[i], base[j], join)
                if h is not None and h not in pool and not _violates(tab, h):
                    pool.append(h)
    maps = [MonotoneMap._from_indices(S, T, h) for h in pool]
    parent = {0: None}
    q = deque([0])
    while q:
        k = q.popleft()
        if k == 1:
            path = []
            while k is not None:
                path.append(maps[k])
                k = parent[k]
            return HomotopyResult(YES, compress_fence(path[::-1]), mode, len(pool))
        for j in range(len(maps)):
            if j not in parent and maps[k].comparable(maps[j]):
                parent[j] = k
                q.append(j)

    path, seen, truncated = _bfs(tab, f._img, g._img, config.witness_budget)
    if path is not None:
        fence = [MonotoneMap._from_indices(S, T, h) for h in path]
        return HomotopyResult(YES, compress_fence(fence), mode, seen)
    if not truncated:
        return HomotopyResult(NO, None, mode, seen, ["component of f exhausted"])
    return HomotopyResult(UNKNOWN, None, mode, seen, ["witness budget exhausted"])


def _violates(tab: _MoveTables, h) -> bool:
    return any(not (tab.up[h[x]] >> h[z] & 1) for x in range(len(h)) for z in tab.upper[x])
