"""Finite approximations of compact metric spaces by diameter posets."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import DEFAULT, RunConfig
from .errors import CapacityError, ConstructionError, InputError, ScheduleError, WellDefinednessError
from .metric import FiniteMetricSpace, Radius
from .poset import FinitePoset, MonotoneMap, validate_monotone
from .sequences import InverseSequence


def subset_id(points: Sequence[int]) -> str:
    return ",".join(str(i) for i in sorted(points))


# epsilon-approximations

def is_epsilon_approximation(M: FiniteMetricSpace, A: Sequence[int], eps, points=None):
    """(covered?, uncovered point indices) for strict coverage by balls of radius eps."""
    eps = Radius.parse(eps)
    A = list(A)
    if not A:
        raise InputError("empty sample")
    if any(not 0 <= a < len(M) for a in A):
        raise InputError("sample index out of range")
    pts = list(range(len(M))) if points is None else list(points)
    uncovered = []
    for start in range(0, len(pts), 2048):
        block = pts[start:start + 2048]
        ok = M.less(block, A, eps).any(axis=1)
        uncovered.extend(p for p, o in zip(block, ok) if not o)
    return not uncovered, uncovered


def _greedy(M, eps, seed=(0,), candidates=None):
    cand = np.arange(len(M)) if candidates is None else np.asarray(candidates)
    chosen = list(seed)
    if M.is_exact and eps.exact:
        # exact farthest-point order on integer squared distances
        best = M._sq(cand, chosen).min(axis=1)
        limit = eps.square * M._denom2
        while True:
            far = int(np.argmax(best))
            if best[far] < limit:
                return chosen
            chosen.append(int(cand[far]))
            best = np.minimum(best, M._sq(cand, [cand[far]])[:, 0])
    best = M.distances(cand, chosen).min(axis=1)
    while True:
        far = int(np.argmax(best))
        if best[far] < eps.value:
            return chosen
        chosen.append(int(cand[far]))
        best = np.minimum(best, M.distances(cand, [cand[far]])[:, 0])


def epsilon_approximation(M: FiniteMetricSpace, eps, method: str = "greedy", sample=None) -> list[int]:
    """A sample A with every point of M strictly within eps of A.

    ``greedy`` is farthest-point insertion from point 0; ``grid`` keeps one
    point per lattice cell then patches; ``given`` validates ``sample``.
    """
    eps = Radius.parse(eps)
    if method == "given":
        if sample is None:
            raise InputError("method 'given' needs a sample")
        ok, bad = is_epsilon_approximation(M, sample, eps)
        if not ok:
            raise InputError(f"sample is not an eps-approximation; uncovered points: {bad[:20]}"
                             + (f" (+{len(bad) - 20} more)" if len(bad) > 20 else ""))
        return sorted(set(int(a) for a in sample))
    if method == "greedy":
        return sorted(_greedy(M, eps))
    if method == "grid":
        if M.coords is None:
            raise InputError("grid method needs coordinates")
        side = eps.value / np.sqrt(M.dim) * (1 - 1e-9)
        cells = np.floor(M.coords / side).astype(np.int64)
        reps = {}
        for i, c in enumerate(map(tuple, cells)):
            reps.setdefault(c, i)
        chosen = sorted(reps.values())
        ok, bad = is_epsilon_approximation(M, chosen, eps)
        if not ok:
            chosen = _greedy(M, eps, seed=chosen)
        return sorted(set(chosen))
    raise InputError(f"unknown method {method!r}")


# diameter posets

@dataclass
class DiameterPoset:
    space: FiniteMetricSpace
    sample: tuple[int, ...]
    threshold: Radius
    poset: FinitePoset
    subsets: dict[str, tuple[int, ...]]

    def element_of(self, points) -> str | None:
        sid = subset_id(points)
        return sid if sid in self.subsets else None

    def __len__(self):
        return len(self.poset)


def _cliques(adj: np.ndarray, cap: int):
    n = len(adj)
    nbrs = [frozenset(np.nonzero(adj[i, i + 1:])[0] + i + 1) for i in range(n)]
    out = []
    stack = [((i,), nbrs[i]) for i in reversed(range(n))]
    while stack:
        clique, cand = stack.pop()
        out.append(clique)
        if len(out) > cap:
            raise CapacityError(f"diameter poset exceeds {cap} elements while growing cliques of size {len(clique)}")
        for j in sorted(cand, reverse=True):
            stack.append((clique + (j,), cand & nbrs[j]))
    return out


def build_diameter_poset(M: FiniteMetricSpace, A: Sequence[int], t, max_elements: int | None = None) -> DiameterPoset:
    """All non-empty subsets of A of diameter < t, ordered by inclusion."""
    t = Radius.parse(t)
    A = sorted(set(int(a) for a in A))
    if not A:
        raise InputError("empty sample")
    cap = DEFAULT.max_poset_elements if max_elements is None else max_elements
    adj = M.less(A, A, t)
    np.fill_diagonal(adj, False)
    cliques = _cliques(adj, cap)
    subsets, rel = {}, []
    for c in cliques:
        pts = tuple(A[i] for i in c)
        sid = subset_id(pts)
        subsets[sid] = pts
        if len(pts) > 1:
            for k in range(len(pts)):
                rel.append((subset_id(pts[:k] + pts[k + 1:]), sid))
    P = FinitePoset(subsets, rel, labels={k: list(v) for k, v in subsets.items()})
    return DiameterPoset(M, tuple(A), t, P, subsets)


def _image_map(src: DiameterPoset, dst: DiameterPoset, images: dict[int, set], what: str) -> MonotoneMap:
    assignment = {}
    for sid, pts in src.subsets.items():
        img = set().union(*(images[x] for x in pts))
        if not img:
            raise ConstructionError(f"{what}: empty image for {sid}; coarser sample does not cover it")
        tid = dst.element_of(img)
        if tid is None:
            raise WellDefinednessError(
                f"{what}: image {subset_id(img)} of {sid} has diameter >= {dst.threshold.to_json()}")
        assignment[sid] = tid
    f = MonotoneMap(src.poset, dst.poset, assignment)
    validate_monotone(f)
    return f


def bonding_q(src: DiameterPoset, dst: DiameterPoset, eps_n) -> MonotoneMap:
    """Send each subset to the coarser sample points lying strictly within the coarser radius of it."""
    eps_n = Radius.parse(eps_n)
    M = src.space
    pts = sorted({x for v in src.subsets.values() for x in v})
    near = M.less(pts, list(dst.sample), eps_n)
    images = {x: {dst.sample[j] for j in np.nonzero(row)[0]} for x, row in zip(pts, near)}
    return _image_map(src, dst, images, "q bond")


def bonding_p(src: DiameterPoset, dst: DiameterPoset) -> MonotoneMap:
    """Send each subset to the coarser sample points nearest to its members (ties kept)."""
    M = src.space
    pts = sorted({x for v in src.subsets.values() for x in v})
    images = {x: set(M.nearest(x, dst.sample)) for x in pts}
    return _image_map(src, dst, images, "p bond")


def point_map(M: FiniteMetricSpace, x: int, P: DiameterPoset) -> str:
    near = M.nearest(x, P.sample)
    sid = P.element_of(near)
    if sid is None:
        raise WellDefinednessError(f"nearest set {subset_id(near)} of point {x} has diameter >= threshold")
    return sid


def union_map(f: MonotoneMap, g: MonotoneMap, P: DiameterPoset) -> MonotoneMap:
    """Pointwise union f ∪ g of two maps into a diameter poset."""
    if f.source != g.source or f.target != P.poset or g.target != P.poset:
        raise InputError("union needs two maps with a common source into the same diameter poset")
    assignment = {}
    for x in f.source.ids:
        u = set(P.subsets[f(x)]) | set(P.subsets[g(x)])
        sid = P.element_of(u)
        if sid is None:
            raise WellDefinednessError(f"f({x}) ∪ g({x}) = {subset_id(u)} has diameter >= {P.threshold.to_json()}")
        assignment[x] = sid
    h = MonotoneMap(f.source, P.poset, assignment)
    validate_monotone(h)
    return h


# schedules and whole approximations

@dataclass
class EpsilonSchedule:
    values: list[Radius]
    variant: str = "q"

    def __post_init__(self):
        self.values = [Radius.parse(v) for v in self.values]
        if self.variant not in ("q", "p"):
            raise ScheduleError(f"variant must be 'q' or 'p', got {self.variant!r}")
        if not self.values:
            raise ScheduleError("empty schedule")
        for n in range(len(self.values) - 1):
            if not self.values[n + 1] < self.values[n].scaled(0.5):
                raise ScheduleError(
                    f"schedule violates eps_{n + 2} < eps_{n + 1}/2 "
                    f"({self.values[n + 1].to_json()} vs {self.values[n].to_json()})")

    def threshold(self, n: int) -> Radius:
        return self.values[n].scaled(4 if self.variant == "q" else 2)

    def __len__(self):
        return len(self.values)

    def to_dict(self):
        return {"values": [v.to_json() for v in self.values], "variant": self.variant}

    @classmethod
    def from_dict(cls, d):
        if "values" not in d:
            raise ScheduleError("schedule needs 'values'")
        return cls(list(d["values"]), d.get("variant", "q"))


@dataclass
class FiniteApproximation:
    space: FiniteMetricSpace
    schedule: EpsilonSchedule
    samples: list[list[int]]
    stages: list[DiameterPoset]
    bonds: list[MonotoneMap] = field(default_factory=list)

    @property
    def variant(self):
        return self.schedule.variant

    def sequence(self) -> InverseSequence:
        return InverseSequence([s.poset for s in self.stages], self.bonds, check=False)


def _with_stage(err, n):
    err.stage = n
    err.args = (f"stage {n}: {err.args[0]}",) + err.args[1:]
    return err


def build_finite_approximation(M: FiniteMetricSpace, schedule: EpsilonSchedule, stages: int | None = None,
                               method: str = "greedy", samples=None,
                               config: RunConfig = DEFAULT) -> FiniteApproximation:
    N = len(schedule) if stages is None else stages
    if N < 1 or N > len(schedule):
        raise InputError(f"stages must be between 1 and {len(schedule)}")
    if samples is not None and len(samples) < N:
        raise InputError("fewer samples than stages")
    chosen, posets, bonds = [], [], []
    for n in range(N):
        try:
            if samples is not None:
                A = epsilon_approximation(M, schedule.values[n], "given", samples[n])
            else:
                A = epsilon_approximation(M, schedule.values[n], method)
            P = build_diameter_poset(M, A, schedule.threshold(n), config.max_poset_elements)
            if n:
                if schedule.variant == "q":
                    bonds.append(bonding_q(P, posets[-1], schedule.values[n - 1]))
                else:
                    bonds.append(bonding_p(P, posets[-1]))
        except (ConstructionError, CapacityError, InputError) as e:
            raise _with_stage(e, n + 1)
        chosen.append(A)
        posets.append(P)
    return FiniteApproximation(M, schedule, chosen, posets, bonds)


def supported_elements(X: FinitePoset, allowed) -> list[str]:
    """Elements of a diameter poset whose point set lies inside ``allowed``."""
    allowed = set(int(a) for a in allowed)
    out = []
    for x in X.ids:
        lab = X.label(x)
        if lab is None:
            raise InputError(f"element {x!r} carries no point-set label")
        if set(int(i) for i in lab) <= allowed:
            out.append(x)
    return out
