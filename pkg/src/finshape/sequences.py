"""Inverse sequences of finite posets and their cores."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .complexes import barycentric_subdivision
from .config import DEFAULT, RunConfig
from .errors import CapacityError, ClosureError, InputError
from .homotopy import NO, UNKNOWN, YES, HomotopyResult, compress_fence, homotopic, is_fence
from .poset import CoreResult, FinitePoset, MonotoneMap, core, validate_monotone


class InverseSequence:
    """Stages X_1, X_2, ... with bonds[n]: stages[n + 1] -> stages[n] (0-based)."""

    def __init__(self, stages: Sequence[FinitePoset], bonds: Sequence[MonotoneMap], check=True):
        self.stages = list(stages)
        self.bonds = list(bonds)
        if not self.stages:
            raise InputError("an inverse sequence needs at least one stage")
        if len(self.bonds) != len(self.stages) - 1:
            raise InputError(f"{len(self.stages)} stages need {len(self.stages) - 1} bonds, got {len(self.bonds)}")
        for n, t in enumerate(self.bonds):
            if t.source != self.stages[n + 1] or t.target != self.stages[n]:
                raise InputError(f"bond {n + 1} does not run from stage {n + 2} to stage {n + 1}")
            if check:
                validate_monotone(t)

    def __len__(self):
        return len(self.stages)

    def __repr__(self):
        return f"InverseSequence(sizes={[len(X) for X in self.stages]})"


@dataclass
class SequenceCoreResult:
    core_sequence: InverseSequence
    cores: list[CoreResult]
    # retraction of stage n composed with bond n, from stage n+1 onto core n
    comparison_maps: list[MonotoneMap]

    @property
    def inclusions(self):
        return [c.inclusion for c in self.cores]

    @property
    def retractions(self):
        return [c.retraction for c in self.cores]


def sequence_core(S: InverseSequence) -> SequenceCoreResult:
    cores = [core(X) for X in S.stages]
    bonds, gs = [], []
    for n, t in enumerate(S.bonds):
        g = cores[n].retraction @ t
        bonds.append(g @ cores[n + 1].inclusion)
        gs.append(g)
    return SequenceCoreResult(InverseSequence([c.core for c in cores], bonds), cores, gs)


@dataclass
class DiagramCheck:
    stage: int  # 1-based index n of the bond t_{n,n+1}
    diagram: str  # "square", "upper-triangle", "lower-triangle"
    verdict: str  # pass | fail | inconclusive
    fence_length: int | None = None
    detail: str = ""

    def to_dict(self):
        return {"stage": self.stage, "diagram": self.diagram, "verdict": self.verdict,
                "fence_length": self.fence_length, "detail": self.detail}


@dataclass
class CoreEquivalenceReport:
    checks: list[DiagramCheck] = field(default_factory=list)
    prefix_length: int = 0

    @property
    def failed(self):
        return [c for c in self.checks if c.verdict == "fail"]

    @property
    def inconclusive(self):
        return [c for c in self.checks if c.verdict == "inconclusive"]

    @property
    def passed(self) -> bool:
        return not self.failed and not self.inconclusive

    def to_dict(self):
        return {"prefix_length": self.prefix_length, "checks": [c.to_dict() for c in self.checks]}


def _fence_after(fence, t):
    return [h @ t for h in fence]


def _homotopy_check(lhs, rhs, seed_fence, mode, config) -> HomotopyResult:
    """Try the constructive fence first; fall back to search."""
    if seed_fence and seed_fence[0] == lhs and seed_fence[-1] == rhs and is_fence(seed_fence):
        return HomotopyResult(YES, compress_fence(seed_fence), "witness")
    if mode == "exact":
        try:
            return homotopic(lhs, rhs, "exact", config=config)
        except CapacityError:
            pass
    return homotopic(lhs, rhs, "witness", candidates=seed_fence or (), config=config)


def _verdict(res: HomotopyResult) -> str:
    return {YES: "pass", NO: "fail", UNKNOWN: "inconclusive"}[res.verdict]


def verify_core_equivalence(S: InverseSequence, R: SequenceCoreResult, mode: str = "witness",
                            config: RunConfig = DEFAULT) -> CoreEquivalenceReport:
    """Check the ladder diagrams relating a sequence to its core.

    For each bond: the square (inclusion after core bond, homotopic to bond
    after inclusion), the upper triangle (comparison map after inclusion
    equals the core bond, checked strictly) and the lower triangle
    (inclusion after comparison map, homotopic to the bond).  Homotopies are
    witnessed by the fence from the identity to inclusion after retraction,
    obtained by replaying the removal log.
    """
    report = CoreEquivalenceReport(prefix_length=len(S))
    for n, t in enumerate(S.bonds):
        cn, cn1 = R.cores[n], R.cores[n + 1]
        h = R.core_sequence.bonds[n]
        g = R.comparison_maps[n]
        stage = n + 1
        # fence from inclusion∘retraction back to the identity, so composites start at the left-hand side
        back = cn.fence_to_identity()[::-1]

        res = _homotopy_check(cn.inclusion @ h, t @ cn1.inclusion,
                              _fence_after(back, t @ cn1.inclusion), mode, config)
        report.checks.append(DiagramCheck(stage, "square", _verdict(res), res.fence_length))

        ok = g @ cn1.inclusion == h
        report.checks.append(DiagramCheck(stage, "upper-triangle", "pass" if ok else "fail",
                                          None, "" if ok else "comparison map after inclusion differs from the core bond"))

        res = _homotopy_check(cn.inclusion @ g, t, _fence_after(back, t), mode, config)
        report.checks.append(DiagramCheck(stage, "lower-triangle", _verdict(res), res.fence_length))
    return report


def restrict_sequence(S: InverseSequence, selections: Sequence) -> InverseSequence:
    """Restrict every stage to a down-closed subset preserved by the bonds."""
    if len(selections) != len(S):
        raise InputError("need one selection per stage")
    stages = []
    for n, (X, sel) in enumerate(zip(S.stages, selections)):
        sel = set(sel)
        unknown = [x for x in sel if x not in X]
        if unknown:
            raise InputError(f"stage {n + 1}: unknown elements {sorted(unknown)[:5]}")
        if not sel:
            raise ClosureError(f"stage {n + 1}: empty selection")
        if not X.is_down_closed(sel):
            raise ClosureError(f"stage {n + 1}: selection is not down-closed (not an open subspace)")
        stages.append(X.subposet(sel))
    bonds = []
    for n, t in enumerate(S.bonds):
        for x in stages[n + 1].ids:
            if t(x) not in stages[n]:
                raise ClosureError(f"bond {n + 1} sends {x!r} to {t(x)!r}, outside the stage {n + 1} selection")
        bonds.append(t.restrict(stages[n + 1], stages[n]))
    return InverseSequence(stages, bonds)


def barycentric_tower(X: FinitePoset, depth: int, max_elements: int | None = None) -> InverseSequence:
    """X, X', X'', ... with bonds sending a chain to its maximum."""
    if depth < 1:
        raise InputError("depth must be at least 1")
    cap = DEFAULT.max_poset_elements if max_elements is None else max_elements
    stages, bonds = [X], []
    for n in range(1, depth):
        prev = stages[-1]
        nxt = barycentric_subdivision(prev)
        if len(nxt) > cap:
            raise CapacityError(f"stage {n + 1} has {len(nxt)} elements, above cap {cap}")
        bonds.append(MonotoneMap(nxt, prev, {c: nxt.label(c)[-1] for c in nxt.ids}, check=True))
        stages.append(nxt)
    return InverseSequence(stages, bonds)
