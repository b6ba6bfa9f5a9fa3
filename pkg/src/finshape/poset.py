"""Finite T0-spaces as finite posets.

Elements are string ids kept in natural-sort order.  The order is stored as
strict down-set / up-set bitmasks (python ints), which keeps subposet,
beat-point and chain queries cheap for posets of a few thousand elements.
"""
from __future__ import annotations

import heapq
import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InputError, NotMonotoneError

DOWN_BEAT = "down-beat"
UP_BEAT = "up-beat"

_DIGITS = re.compile(r"(\d+)")


def natural_key(s: str):
    parts = _DIGITS.split(s)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts))


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinitePoset:
    """A finite poset given by element ids and strict relations.

    ``relations`` may be the cover relation or any relation whose transitive
    closure is the order; it is canonicalized to covers.
    """

    __slots__ = ("ids", "index", "labels", "_below", "_above", "_covers", "_lin")

    def __init__(self, elements: Iterable[str], relations: Iterable[tuple[str, str]] = (),
                 labels: Mapping[str, object] | None = None):
        ids = [str(e) for e in elements]
        if len(set(ids)) != len(ids):
            dup = sorted({e for e in ids if ids.count(e) > 1})
            raise InputError(f"duplicate element ids: {dup}")
        ids.sort(key=natural_key)
        index = {e: i for i, e in enumerate(ids)}
        preds = [[] for _ in ids]
        indeg = [0] * len(ids)
        succ = [[] for _ in ids]
        for x, y in relations:
            x, y = str(x), str(y)
            for e in (x, y):
                if e not in index:
                    raise InputError(f"relation mentions unknown element {e!r}")
            if x == y:
                raise InputError(f"reflexive pair ({x!r}, {y!r}) in strict relation")
            preds[index[y]].append(index[x])
            succ[index[x]].append(index[y])
            indeg[index[y]] += 1
        # Kahn; leftover nodes mean a cycle
        order = [i for i in range(len(ids)) if indeg[i] == 0]
        head = 0
        while head < len(order):
            u = order[head]
            head += 1
            for v in succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    order.append(v)
        if len(order) != len(ids):
            raise InputError("relation contains a cycle; not a partial order")
        below = [0] * len(ids)
        for v in order:
            m = 0
            for u in preds[v]:
                m |= below[u] | (1 << u)
            below[v] = m
        self._init(ids, index, below, dict(labels or {}))

    def _init(self, ids, index, below, labels):
        self.ids = tuple(ids)
        self.index = index
        self.labels = labels
        self._below = below
        above = [0] * len(ids)
        for y, m in enumerate(below):
            bit = 1 << y
            for x in iter_bits(m):
                above[x] |= bit
        self._above = above
        self._covers = None
        self._lin = None

    @classmethod
    def _from_masks(cls, ids, below, labels=None):
        obj = cls.__new__(cls)
        obj._init(list(ids), {e: i for i, e in enumerate(ids)}, list(below), dict(labels or {}))
        return obj

    # basic container protocol
    def __len__(self):
        return len(self.ids)

    def __iter__(self):
        return iter(self.ids)

    def __contains__(self, x):
        return x in self.index

    def __eq__(self, other):
        return (isinstance(other, FinitePoset) and self.ids == other.ids
                and self._below == other._below)

    def __hash__(self):
        return hash((self.ids, tuple(self._below)))

    def __repr__(self):
        return f"FinitePoset({len(self)} elements, {len(self.covers)} covers)"

    def _idx(self, x) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise InputError(f"unknown element id {x!r}") from None

    def _mask_ids(self, mask: int) -> frozenset:
        return frozenset(self.ids[i] for i in iter_bits(mask))

    @property
    def elements(self) -> list[str]:
        return list(self.ids)

    def label(self, x):
        return self.labels.get(x)

    def leq(self, x, y) -> bool:
        i, j = self._idx(x), self._idx(y)
        return i == j or bool(self._below[j] >> i & 1)

    def less(self, x, y) -> bool:
        return bool(self._below[self._idx(y)] >> self._idx(x) & 1)

    def comparable(self, x, y) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def _lower_cover_mask(self, j: int) -> int:
        m = self._below[j]
        shadow = 0
        for z in iter_bits(m):
            shadow |= self._below[z]
        return m & ~shadow

    @property
    def covers(self) -> tuple[tuple[str, str], ...]:
        if self._covers is None:
            out = []
            for j in range(len(self.ids)):
                for i in iter_bits(self._lower_cover_mask(j)):
                    out.append((self.ids[i], self.ids[j]))
            out.sort(key=lambda c: (natural_key(c[0]), natural_key(c[1])))
            self._covers = tuple(out)
        return self._covers

    def lower_covers(self, x) -> list[str]:
        return [self.ids[i] for i in iter_bits(self._lower_cover_mask(self._idx(x)))]

    def upper_covers(self, x) -> list[str]:
        j = self._idx(x)
        m = self._above[j]
        shadow = 0
        for z in iter_bits(m):
            shadow |= self._above[z]
        return [self.ids[i] for i in iter_bits(m & ~shadow)]

    def down_set(self, x) -> frozenset:
        i = self._idx(x)
        return self._mask_ids(self._below[i] | 1 << i)

    def up_set(self, x) -> frozenset:
        i = self._idx(x)
        return self._mask_ids(self._above[i] | 1 << i)

    def linear_extension(self) -> list[int]:
        """Indices sorted so that x < y implies x comes first."""
        if self._lin is None:
            self._lin = sorted(range(len(self.ids)), key=lambda i: (self._below[i].bit_count(), i))
        return self._lin

    def ranks(self) -> list[int]:
        """Length of the longest chain ending at each element (minimal elements have rank 0)."""
        rank = [0] * len(self.ids)
        for j in self.linear_extension():
            for i in iter_bits(self._lower_cover_mask(j)):
                rank[j] = max(rank[j], rank[i] + 1)
        return rank

    def subposet(self, keep: Iterable[str]) -> "FinitePoset":
        keep_idx = sorted({self._idx(x) for x in keep})
        remap = {old: new for new, old in enumerate(keep_idx)}
        keep_mask = 0
        for i in keep_idx:
            keep_mask |= 1 << i
        below = []
        for i in keep_idx:
            m = 0
            for k in iter_bits(self._below[i] & keep_mask):
                m |= 1 << remap[k]
            below.append(m)
        ids = [self.ids[i] for i in keep_idx]
        labels = {e: self.labels[e] for e in ids if e in self.labels}
        return FinitePoset._from_masks(ids, below, labels)

    def is_down_closed(self, subset: Iterable[str]) -> bool:
        s = {self._idx(x) for x in subset}
        mask = sum(1 << i for i in s)
        return all(self._below[i] & ~mask == 0 for i in s)


# Poset-level operations

def chain(n: int, prefix: str = "x") -> FinitePoset:
    ids = [f"{prefix}{i}" for i in range(n)]
    return FinitePoset(ids, zip(ids, ids[1:]))


def antichain(ids: Sequence[str]) -> FinitePoset:
    return FinitePoset(ids)


def circle_model() -> FinitePoset:
    """The 4-point minimal finite model of the circle: a, b < c, d."""
    return FinitePoset("abcd", [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def down_set(X: FinitePoset, x) -> frozenset:
    return X.down_set(x)


def up_set(X: FinitePoset, x) -> frozenset:
    return X.up_set(x)


def _max_of(X: FinitePoset, mask: int) -> int | None:
    best, best_count = None, -1
    for m in iter_bits(mask):
        c = (X._below[m] & mask).bit_count()
        if c > best_count:
            best, best_count = m, c
    if best is not None and X._below[best] & mask == mask & ~(1 << best):
        return best
    return None


def _min_of(X: FinitePoset, mask: int) -> int | None:
    best, best_count = None, -1
    for m in iter_bits(mask):
        c = (X._above[m] & mask).bit_count()
        if c > best_count:
            best, best_count = m, c
    if best is not None and X._above[best] & mask == mask & ~(1 << best):
        return best
    return None


def _beat_kinds(X: FinitePoset, i: int, alive: int):
    """Yield (kind, retraction target) for element ``i`` inside subspace ``alive``."""
    d = X._below[i] & alive
    if d:
        m = _max_of(X, d)
        if m is not None:
            yield DOWN_BEAT, m
    u = X._above[i] & alive
    if u:
        m = _min_of(X, u)
        if m is not None:
            yield UP_BEAT, m


def beat_points(X: FinitePoset) -> list[tuple[str, str]]:
    alive = (1 << len(X)) - 1
    out = []
    for i in range(len(X)):
        for kind, _ in _beat_kinds(X, i, alive):
            out.append((X.ids[i], kind))
    return out


def height(X: FinitePoset) -> int:
    if len(X) == 0:
        raise InputError("height of the empty poset is undefined")
    return max(X.ranks())


# Maps

class MonotoneMap:
    """A total function between the element sets of two finite posets.

    Order preservation is not checked on construction; call
    :func:`validate_monotone` (or pass ``check=True``).
    """

    __slots__ = ("source", "target", "assignment", "_img")

    def __init__(self, source: FinitePoset, target: FinitePoset, assignment: Mapping, check=False):
        assignment = {str(k): str(v) for k, v in assignment.items()}
        missing = [x for x in source.ids if x not in assignment]
        if missing:
            raise InputError(f"map is not total; no image for {missing}")
        extra = [x for x in assignment if x not in source.index]
        if extra:
            raise InputError(f"map assigns unknown source elements {extra}")
        bad = [x for x, y in assignment.items() if y not in target.index]
        if bad:
            raise InputError(f"images of {bad} are not elements of the target")
        self.source = source
        self.target = target
        self.assignment = {x: assignment[x] for x in source.ids}
        self._img = tuple(target.index[assignment[x]] for x in source.ids)
        if check:
            validate_monotone(self)

    @classmethod
    def _from_indices(cls, source, target, img):
        obj = cls.__new__(cls)
        obj.source, obj.target = source, target
        obj._img = tuple(img)
        obj.assignment = {x: target.ids[j] for x, j in zip(source.ids, obj._img)}
        return obj

    def __call__(self, x):
        try:
            return self.assignment[x]
        except KeyError:
            raise InputError(f"unknown element id {x!r}") from None

    def __matmul__(self, other: "MonotoneMap") -> "MonotoneMap":
        """``f @ g`` is the composite f∘g (apply g first)."""
        if other.target != self.source:
            raise InputError("composition mismatch: target of inner map is not source of outer map")
        return MonotoneMap._from_indices(other.source, self.target, [self._img[j] for j in other._img])

    def __eq__(self, other):
        return (isinstance(other, MonotoneMap) and self._img == other._img
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        return hash(self._img)

    def __repr__(self):
        return f"MonotoneMap({self.assignment})"

    def pointwise_leq(self, other: "MonotoneMap") -> bool:
        T = self.target
        return all(a == b or T._below[b] >> a & 1 for a, b in zip(self._img, other._img))

    def comparable(self, other: "MonotoneMap") -> bool:
        return self.pointwise_leq(other) or other.pointwise_leq(self)

    def image(self) -> frozenset:
        return frozenset(self.assignment.values())

    def restrict(self, source: FinitePoset, target: FinitePoset | None = None) -> "MonotoneMap":
        target = self.target if target is None else target
        return MonotoneMap(source, target, {x: self.assignment[x] for x in source.ids})


def identity(X: FinitePoset) -> MonotoneMap:
    return MonotoneMap._from_indices(X, X, range(len(X)))


def inclusion(sub: FinitePoset, X: FinitePoset) -> MonotoneMap:
    return MonotoneMap(sub, X, {x: x for x in sub.ids})


def constant(source: FinitePoset, target: FinitePoset, value) -> MonotoneMap:
    return MonotoneMap(source, target, {x: value for x in source.ids})


def monotone_violations(f: MonotoneMap) -> list[tuple[str, str]]:
    S, T = f.source, f.target
    out = []
    for j in range(len(S)):
        fj = f._img[j]
        for i in iter_bits(S._below[j]):
            fi = f._img[i]
            if fi != fj and not (T._below[fj] >> fi & 1):
                out.append((S.ids[i], S.ids[j]))
    return out


def validate_monotone(f: MonotoneMap) -> None:
    bad = monotone_violations(f)
    if bad:
        shown = ", ".join(f"{x}<{y} but {f(x)}!<={f(y)}" for x, y in bad[:10])
        more = f" (+{len(bad) - 10} more)" if len(bad) > 10 else ""
        raise NotMonotoneError(f"map is not order-preserving: {shown}{more}", bad)


def is_monotone(f: MonotoneMap) -> bool:
    return not monotone_violations(f)


# Cores

@dataclass
class CoreResult:
    original: FinitePoset
    core: FinitePoset
    inclusion: MonotoneMap
    retraction: MonotoneMap
    removal_log: list[tuple[str, str]] = field(default_factory=list)
    # immediate one-point retraction target for each removed element
    retract_to: dict[str, str] = field(default_factory=dict)

    def fence_to_identity(self) -> list[MonotoneMap]:
        """Self-maps of the original poset, from the identity to inclusion∘retraction.

        Step j applies the first j one-point retractions; consecutive maps are
        pointwise comparable, so the list is a fence.
        """
        X = self.original
        cur = list(range(len(X)))
        fence = [MonotoneMap._from_indices(X, X, cur)]
        for x, _ in self.removal_log:
            xi, ti = X.index[x], X.index[self.retract_to[x]]
            cur = [ti if c == xi else c for c in cur]
            fence.append(MonotoneMap._from_indices(X, X, cur))
        return fence


def core(X: FinitePoset) -> CoreResult:
    """Remove beat points one at a time, always taking the smallest id present."""
    n = len(X)
    alive = (1 << n) - 1
    target = {}
    log = []
    heap = list(range(n))
    in_heap = set(heap)
    while heap:
        i = heapq.heappop(heap)
        in_heap.discard(i)
        if not alive >> i & 1:
            continue
        kinds = list(_beat_kinds(X, i, alive))
        if not kinds:
            continue
        kind, t = kinds[0]
        alive &= ~(1 << i)
        target[i] = t
        log.append((X.ids[i], kind))
        # only elements comparable to i can change beat status
        for k in iter_bits((X._below[i] | X._above[i]) & alive):
            if k not in in_heap:
                heapq.heappush(heap, k)
                in_heap.add(k)
    keep = [X.ids[i] for i in iter_bits(alive)]
    C = X.subposet(keep)

    def resolve(i):
        while i in target:
            i = target[i]
        return i

    r = MonotoneMap(X, C, {X.ids[i]: X.ids[resolve(i)] for i in range(n)})
    return CoreResult(
        original=X, core=C, inclusion=inclusion(C, X), retraction=r, removal_log=log,
        retract_to={X.ids[i]: X.ids[t] for i, t in target.items()},
    )


def replay_removals(X: FinitePoset, removal_log) -> FinitePoset:
    """Re-apply a removal log, checking each step removes a genuine beat point."""
    cur = X
    for x, kind in removal_log:
        kinds = {k for e, k in beat_points(cur) if e == x}
        if kind not in kinds:
            raise InputError(f"{x!r} is not a {kind} point at this stage of the log")
        cur = cur.subposet([e for e in cur.ids if e != x])
    return cur


# Hasse diagram export

def hasse_export(X: FinitePoset, name: str = "hasse") -> str:
    q = json.dumps
    rank = X.ranks()
    lines = [f"digraph {q(name)} {{", "  rankdir=BT;", "  node [shape=ellipse];"]
    for x in X.ids:
        lines.append(f"  {q(x)};")
    for x, y in X.covers:
        lines.append(f"  {q(x)} -> {q(y)};")
    levels: dict[int, list[str]] = {}
    for i, x in enumerate(X.ids):
        levels.setdefault(rank[i], []).append(x)
    for r in sorted(levels):
        members = " ".join(f"{q(x)};" for x in levels[r])
        lines.append(f"  {{ rank=same; {members} }}")
    lines.append("}")
    return "\n".join(lines) + "\n"
