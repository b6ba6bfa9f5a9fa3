"""Point-cloud generators: the square-wave topologist's sine curve, circles, intervals."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Q

from .errors import CapacityError, InputError
from .metric import FiniteMetricSpace, Radius

HALF = Q(1, 2)


def sine_curve_segments(min_x: Q = Q(1, 2 ** 12)):
    """Segments of the sine-curve model whose right end lies at or beyond ``min_x``.

    Vertical segments at x = 1/2^k joined alternately along y = 1/2 and y = 0,
    plus the limit segment at x = 0.
    """
    segs = [("a_inf", (Q(0), Q(0)), (Q(0), HALF))]
    n = 0
    while Q(1, 2 ** n) >= min_x:
        x = Q(1, 2 ** n)
        segs.append((f"a_{n}", (x, Q(0)), (x, HALF)))
        n += 1
    n = 1
    while Q(1, 2 ** (2 * n - 2)) >= min_x:
        segs.append((f"top_{n}", (Q(1, 2 ** (2 * n - 1)), HALF), (Q(1, 2 ** (2 * n - 2)), HALF)))
        n += 1
    n = 1
    while Q(1, 2 ** (2 * n - 1)) >= min_x:
        segs.append((f"bottom_{n}", (Q(1, 2 ** (2 * n)), Q(0)), (Q(1, 2 ** (2 * n - 1)), Q(0))))
        n += 1
    return segs


def _lattice_on_segment(seg, h: Q):
    _, (x0, y0), (x1, y1) = seg
    pts = set()
    if x0 == x1:
        if (x0 / h).denominator == 1:
            k = math.ceil(min(y0, y1) / h)
            while k * h <= max(y0, y1):
                pts.add((x0, k * h))
                k += 1
    elif y0 == y1:
        if (y0 / h).denominator == 1:
            k = math.ceil(min(x0, x1) / h)
            while k * h <= max(x0, x1):
                pts.add((k * h, y0))
                k += 1
    else:
        raise InputError("only axis-parallel segments are supported")
    return pts


def sine_grid_points(n: int) -> list[tuple[Q, Q]]:
    """G_n ∩ S for the lattice of spacing 1/2^(3n-4)."""
    h = Q(1, 2 ** (3 * n - 4)) if 3 * n - 4 >= 0 else Q(2 ** (4 - 3 * n))
    pts = set()
    for seg in sine_curve_segments(min_x=h):
        pts |= _lattice_on_segment(seg, h)
    return sorted(pts)


def sine_epsilon(n: int) -> Radius:
    if n == 1:
        return Radius(square=Q(5))
    return Radius(square=Q(2, 4 ** (3 * n - 3)))


def sine_patch_points(n: int) -> list[tuple[Q, Q]]:
    """Points (0, (2k+1)/2^(3n-3)) that lie on the limit segment."""
    step = Q(1, 2 ** (3 * n - 3))
    out = []
    k = 0
    while (2 * k + 1) * step <= HALF:
        out.append((Q(0), (2 * k + 1) * step))
        k += 1
    return out


@dataclass
class SineStage:
    stage: int
    points: list[tuple[Q, Q]]
    epsilon: Radius

    def space(self) -> FiniteMetricSpace:
        return FiniteMetricSpace(self.points)


SUPPORTED_SINE_STAGES = (1, 2, 3)


def generate_sine_curve(n: int, allow_stage_4: bool = False) -> SineStage:
    if n == 4 and not allow_stage_4:
        raise CapacityError("stage 4 is behind the capacity flag")
    if n not in SUPPORTED_SINE_STAGES and n != 4:
        raise InputError(f"unsupported sine-curve stage {n}; use 1, 2 or 3")
    if n == 1:
        return SineStage(1, [(Q(0), Q(1, 4))], sine_epsilon(1))
    pts = set(sine_grid_points(n)) | set(sine_patch_points(n))
    return SineStage(n, sorted(pts), sine_epsilon(n))


def on_limit_segment(pt) -> bool:
    return pt[0] == 0


def sine_dense_sample(step: Q = Q(1, 512)) -> list[tuple[Q, Q]]:
    """Lattice points of spacing ``step`` on every segment reaching x >= step."""
    pts = set()
    for seg in sine_curve_segments(min_x=step):
        pts |= _lattice_on_segment(seg, step)
    return sorted(pts)


def sine_pipeline_space(stages: int = 3, allow_stage_4: bool = False):
    """One exact space holding every stage sample; returns (space, samples, radii)."""
    data = [generate_sine_curve(n, allow_stage_4) for n in range(1, stages + 1)]
    allpts = sorted({p for d in data for p in d.points})
    index = {p: i for i, p in enumerate(allpts)}
    M = FiniteMetricSpace(allpts)
    samples = [sorted(index[p] for p in d.points) for d in data]
    return M, samples, [d.epsilon for d in data]


def generate_circle(n: int) -> FiniteMetricSpace:
    if n < 3:
        raise InputError("a circle needs at least 3 points")
    ang = [2 * math.pi * k / n for k in range(n)]
    return FiniteMetricSpace([[math.cos(a), math.sin(a)] for a in ang])


def generate_interval(n: int, length: float = 1.0) -> FiniteMetricSpace:
    if n < 2:
        raise InputError("an interval sample needs at least 2 points")
    return FiniteMetricSpace([[length * k / (n - 1)] for k in range(n)])


def limit_segment_indices(M: FiniteMetricSpace) -> list[int]:
    """Indices of exact points lying on the limit segment x = 0."""
    if M.exact_points is None:
        raise InputError("space has no exact coordinates")
    return [i for i, p in enumerate(M.exact_points) if on_limit_segment(p)]
