"""Finite metric spaces with exact comparisons for rational coordinates."""
from __future__ import annotations

import math
import re
import warnings
from fractions import Fraction
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import InputError, TieWarning

_SQRT = re.compile(r"^\s*sqrt\(\s*([^)]+)\s*\)\s*$")


def parse_rational(v) -> Fraction | None:
    """Exact value for ints, Fractions and "p/q" strings; None for floats."""
    if isinstance(v, bool):
        raise InputError("booleans are not coordinates")
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot parse rational {v!r}") from None
    return None


class Radius:
    """A positive length, exact when its square is a known rational."""

    __slots__ = ("value", "square")

    def __init__(self, value: float | None = None, square: Fraction | None = None):
        if square is not None:
            square = Fraction(square)
            if square <= 0:
                raise InputError("radius must be positive")
            self.square = square
            self.value = math.sqrt(square)
        else:
            if value is None or not value > 0 or not math.isfinite(value):
                raise InputError(f"radius must be positive and finite, got {value!r}")
            self.square = None
            self.value = float(value)

    @classmethod
    def parse(cls, obj) -> "Radius":
        if isinstance(obj, Radius):
            return obj
        if isinstance(obj, str):
            m = _SQRT.match(obj)
            if m:
                return cls(square=parse_rational(m.group(1)))
        q = parse_rational(obj)
        if q is not None:
            return cls(square=q * q) if q > 0 else cls(value=float(q))
        return cls(value=float(obj))

    @property
    def exact(self) -> bool:
        return self.square is not None

    def scaled(self, c) -> "Radius":
        c = Fraction(c)
        if self.exact:
            return Radius(square=self.square * c * c)
        return Radius(value=self.value * float(c))

    def __lt__(self, other: "Radius") -> bool:
        if self.exact and other.exact:
            return self.square < other.square
        return self.value < other.value

    def __float__(self):
        return self.value

    def __eq__(self, other):
        if not isinstance(other, Radius):
            return NotImplemented
        if self.exact and other.exact:
            return self.square == other.square
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def to_json(self):
        if self.exact:
            s = self.square
            root = Fraction(math.isqrt(s.numerator), math.isqrt(s.denominator))
            if root * root == s:
                return str(root)
            return f"sqrt({s})"
        return self.value

    def __repr__(self):
        return f"Radius({self.to_json()!r})"


class FiniteMetricSpace:
    """Points in R^d (float or exact rational) or an explicit distance matrix."""

    def __init__(self, points=None, matrix=None, tolerance: float = 1e-12, audit_triangle=False):
        if (points is None) == (matrix is None):
            raise InputError("give exactly one of points or matrix")
        self.tolerance = tolerance
        self.exact_points = None
        self._int = None
        self._denom2 = None
        if points is not None:
            pts = [list(p) for p in points]
            if not pts:
                raise InputError("empty point set")
            dim = len(pts[0])
            if any(len(p) != dim for p in pts):
                raise InputError("points have inconsistent dimensions")
            exact = [[parse_rational(c) for c in p] for p in pts]
            if all(c is not None for p in exact for c in p):
                self.exact_points = [tuple(p) for p in exact]
                den = reduce(math.lcm, (c.denominator for p in exact for c in p), 1)
                ints = [[int(c * den) for c in p] for p in exact]
                big = max((abs(c) for p in ints for c in p), default=0)
                dtype = np.int64 if big < 2 ** 20 and dim <= 16 else object
                self._int = np.array(ints, dtype=dtype).reshape(len(pts), dim)
                self._denom2 = den * den
                self.coords = np.array([[float(c) for c in p] for p in exact]).reshape(len(pts), dim)
            else:
                self.coords = np.array([[float(c) for c in p] for p in pts], dtype=float).reshape(len(pts), dim)
            self.matrix = None
        else:
            M = np.array(matrix, dtype=float)
            if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
                raise InputError("distance matrix must be square and non-empty")
            if not np.allclose(M, M.T, atol=tolerance, rtol=0):
                raise InputError("distance matrix is not symmetric")
            if np.any(np.diag(M) != 0):
                raise InputError("distance matrix has a nonzero diagonal")
            off = M[~np.eye(len(M), dtype=bool)]
            if np.any(off <= 0):
                raise InputError("distance matrix has non-positive off-diagonal entries")
            self.matrix = M
            self.coords = None
        if self.coords is not None and len(self.coords) > 1:
            self._check_distinct()
        if audit_triangle:
            self.audit_triangle()

    def _check_distinct(self):
        if self._int is not None:
            seen = set(map(tuple, self._int.tolist()))
        else:
            seen = set(map(tuple, self.coords.tolist()))
        if len(seen) != len(self):
            raise InputError("duplicate points (distance zero off the diagonal)")

    def __len__(self):
        return len(self.matrix) if self.matrix is not None else len(self.coords)

    @property
    def is_exact(self) -> bool:
        return self._int is not None

    @property
    def dim(self) -> int | None:
        return None if self.coords is None else self.coords.shape[1]

    def _sq(self, rows, cols):
        rows, cols = np.asarray(rows, dtype=int), np.asarray(cols, dtype=int)
        if self._int is not None:
            diff = self._int[rows][:, None, :] - self._int[cols][None, :, :]
            return (diff * diff).sum(axis=2)
        if self.coords is not None:
            diff = self.coords[rows][:, None, :] - self.coords[cols][None, :, :]
            return (diff * diff).sum(axis=2)
        return self.matrix[np.ix_(rows, cols)] ** 2

    def distances(self, rows, cols) -> np.ndarray:
        rows, cols = np.asarray(rows, dtype=int), np.asarray(cols, dtype=int)
        if self.matrix is not None:
            return self.matrix[np.ix_(rows, cols)]
        if self._int is not None:
            return np.sqrt(self._sq(rows, cols).astype(float)) / math.sqrt(self._denom2)
        return np.sqrt(self._sq(rows, cols))

    def dist(self, i, j) -> float:
        return float(self.distances([i], [j])[0, 0])

    def sq_exact(self, i, j) -> Fraction:
        if self._int is None:
            raise InputError("space has no exact coordinates")
        return Fraction(int(self._sq([i], [j])[0, 0]), self._denom2)

    def less(self, rows, cols, r: Radius) -> np.ndarray:
        """Boolean matrix of d(row, col) < r (strict)."""
        if self._int is not None and r.exact:
            sq = self._sq(rows, cols)
            num, den = r.square.numerator, r.square.denominator
            rhs = num * self._denom2
            if sq.dtype != object and (int(sq.max(initial=0)) * den >= 2 ** 62 or rhs >= 2 ** 62):
                sq = sq.astype(object)
            return np.asarray(sq * den < rhs, dtype=bool)
        d = self.distances(rows, cols)
        near = np.abs(d - r.value) <= self.tolerance
        if near.any():
            warnings.warn(f"{int(near.sum())} distances lie within {self.tolerance} of threshold {r.value}",
                          TieWarning, stacklevel=2)
        return d < r.value

    def nearest(self, x: int, cols: Sequence[int]) -> list[int]:
        """All members of ``cols`` at minimal distance from point ``x`` (ties kept)."""
        cols = list(cols)
        if self._int is not None:
            sq = self._sq([x], cols)[0]
            m = sq.min()
            return [c for c, s in zip(cols, sq) if s == m]
        d = self.distances([x], cols)[0]
        m = d.min()
        return [c for c, v in zip(cols, d) if v <= m + self.tolerance]

    def diameter(self, idx: Sequence[int] | None = None) -> float:
        idx = list(range(len(self))) if idx is None else list(idx)
        return float(self.distances(idx, idx).max()) if idx else 0.0

    def audit_triangle(self):
        idx = np.arange(len(self))
        D = self.distances(idx, idx)
        viol = D[:, None, :] > D[:, :, None] + D[None, :, :] + self.tolerance
        if viol.any():
            i, k, j = np.argwhere(viol)[0]
            raise InputError(f"triangle inequality fails: d({i},{j}) > d({i},{k}) + d({k},{j})")

    def point_json(self, i):
        if self.exact_points is not None:
            return [str(c) for c in self.exact_points[i]]
        return [float(c) for c in self.coords[i]]
