"""Simplicial complexes, order complexes and face posets."""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .errors import CapacityError, InputError
from .poset import FinitePoset, iter_bits


class SimplicialComplex:
    """Face-closed family of simplices over an ordered vertex list.

    Simplices are stored as ascending tuples of vertex positions, grouped by
    dimension; the vertex order fixes orientations.
    """

    def __init__(self, vertices: Sequence[str], simplices: Iterable[Iterable[str]], check=True):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertex ids")
        pos = {v: i for i, v in enumerate(self.vertices)}
        found = set()
        for s in simplices:
            s = [str(v) for v in s]
            if not s:
                raise InputError("empty simplex")
            try:
                t = tuple(sorted(pos[v] for v in s))
            except KeyError as e:
                raise InputError(f"simplex uses unknown vertex {e.args[0]!r}") from None
            if len(set(t)) != len(t):
                raise InputError(f"simplex {s} repeats a vertex")
            found.add(t)
        self._set_simplices(found)
        if check:
            self.validate()

    @classmethod
    def _trusted(cls, vertices, simplex_tuples):
        obj = cls.__new__(cls)
        obj.vertices = tuple(vertices)
        obj._set_simplices(simplex_tuples)
        return obj

    @classmethod
    def closure(cls, vertices, maximal) -> "SimplicialComplex":
        faces = set()
        for s in maximal:
            s = list(s)
            for k in range(1, len(s) + 1):
                faces.update(combinations(s, k))
        faces.update((v,) for v in vertices)
        return cls(vertices, faces)

    def _set_simplices(self, tuples):
        by_dim: dict[int, list] = {}
        for t in tuples:
            by_dim.setdefault(len(t) - 1, []).append(t)
        top = max(by_dim) if by_dim else -1
        self.simplices = [sorted(by_dim.get(d, [])) for d in range(top + 1)]
        self._index = None

    def validate(self):
        present = [set(level) for level in self.simplices]
        vertex_set = {(i,) for i in range(len(self.vertices))}
        if not present or present[0] != vertex_set:
            missing = sorted(vertex_set - (present[0] if present else set()))
            if missing:
                raise InputError(f"vertices {[self.vertices[m[0]] for m in missing]} are not 0-simplices")
        for d in range(1, len(present)):
            for s in self.simplices[d]:
                for k in range(len(s)):
                    face = s[:k] + s[k + 1:]
                    if face not in present[d - 1]:
                        names = [self.vertices[i] for i in face]
                        raise InputError(f"not face-closed: face {names} of {[self.vertices[i] for i in s]} missing")

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def __len__(self):
        return sum(len(level) for level in self.simplices)

    def count(self, d: int) -> int:
        return len(self.simplices[d]) if 0 <= d < len(self.simplices) else 0

    def index(self, d: int) -> dict:
        if self._index is None:
            self._index = [{s: i for i, s in enumerate(level)} for level in self.simplices]
        return self._index[d] if 0 <= d < len(self._index) else {}

    def named(self, d: int) -> list[tuple[str, ...]]:
        return [tuple(self.vertices[i] for i in s) for s in self.simplices[d]] if d <= self.dim else []

    def __repr__(self):
        return f"SimplicialComplex(f-vector={[len(s) for s in self.simplices]})"


MAX_SIMPLICES = 2_000_000


def order_complex(X: FinitePoset, max_simplices: int | None = MAX_SIMPLICES) -> SimplicialComplex:
    """Chains of ``X`` as simplices; vertices ordered by a linear extension.

    Raises CapacityError past ``max_simplices`` chains (None disables the cap).
    """
    lin = X.linear_extension()
    pos = {e: p for p, e in enumerate(lin)}
    out = []
    stack = [((pos[i],), i) for i in reversed(lin)]
    while stack:
        ch, last = stack.pop()
        out.append(ch)
        if max_simplices is not None and len(out) > max_simplices:
            raise CapacityError(f"order complex exceeds {max_simplices} simplices")
        for u in iter_bits(X._above[last]):
            stack.append((ch + (pos[u],), u))
    return SimplicialComplex._trusted([X.ids[i] for i in lin], out)


def simplex_id(names: Sequence[str]) -> str:
    return "(" + ",".join(names) + ")"


def face_poset(L: SimplicialComplex) -> FinitePoset:
    """Simplices of ``L`` ordered by inclusion."""
    L.validate()
    ids, labels, rel = [], {}, []
    for d in range(L.dim + 1):
        for s in L.simplices[d]:
            names = tuple(L.vertices[i] for i in s)
            sid = simplex_id(names)
            ids.append(sid)
            labels[sid] = names
            if d:
                for k in range(len(s)):
                    face = names[:k] + names[k + 1:]
                    rel.append((simplex_id(face), sid))
    return FinitePoset(ids, rel, labels)


def barycentric_subdivision(X: FinitePoset) -> FinitePoset:
    return face_poset(order_complex(X))
