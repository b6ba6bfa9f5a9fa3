"""Property-based checks of the structural invariants."""
import itertools
from fractions import Fraction

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from finshape import (EpsilonSchedule, FiniteMetricSpace, FinitePoset, MonotoneMap, beat_points,
                      build_diameter_poset, build_finite_approximation, core, height, identity,
                      induced_homology_map, is_epsilon_approximation, order_complex, poset_betti,
                      validate_monotone)
from finshape.homology import ChainComplex
from finshape.poset import replay_removals

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def posets(draw, max_size=9, prefix="e"):
    n = draw(st.integers(1, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    ids = [f"{prefix}{i}" for i in range(n)]
    return FinitePoset(ids, [(ids[i], ids[j]) for (i, j), b in zip(pairs, bits) if b])


@st.composite
def monotone_maps(draw, S, T):
    order = sorted(S.ids, key=lambda x: len(S.down_set(x)))
    f = {}
    for x in order:
        below = [f[z] for z in S.down_set(x) if z != x]
        cand = [y for y in T.ids if all(T.leq(b, y) for b in below)]
        if not cand:
            return MonotoneMap(S, T, {x: T.ids[0] for x in S.ids})
        f[x] = draw(st.sampled_from(cand))
    return MonotoneMap(S, T, f)


@SETTINGS
@given(posets(11))
def test_core_properties(X):
    R = core(X)
    assert beat_points(R.core) == []
    assert R.retraction @ R.inclusion == identity(R.core)
    assert replay_removals(X, R.removal_log) == R.core
    assert height(R.core) <= height(X)
    assert poset_betti(R.core) == poset_betti(X)[:len(poset_betti(R.core))]
    assert all(v == 0 for v in poset_betti(X)[len(poset_betti(R.core)):])


@SETTINGS
@given(posets(10))
def test_height_is_order_complex_dimension(X):
    assert order_complex(X).dim == height(X)


@SETTINGS
@given(posets(9), st.sampled_from([2, 3]))
def test_boundary_of_boundary(X, p):
    ChainComplex(order_complex(X), p).check_dd()


@SETTINGS
@given(st.data())
def test_functoriality(data):
    X = data.draw(posets(6, "x"))
    Y = data.draw(posets(6, "y"))
    Z = data.draw(posets(6, "z"))
    f = data.draw(monotone_maps(X, Y))
    g = data.draw(monotone_maps(Y, Z))
    validate_monotone(f)
    validate_monotone(g)
    p = data.draw(st.sampled_from([2, 3]))
    for l in (0, 1):
        lhs = induced_homology_map(g @ f, l, p)
        rhs = (induced_homology_map(g, l, p) @ induced_homology_map(f, l, p)) % p
        assert np.array_equal(lhs % p, rhs)


@SETTINGS
@given(st.data())
def test_comparable_maps_induce_the_same_map(data):
    X = data.draw(posets(6, "x"))
    Y = data.draw(posets(8, "y"))
    f = data.draw(monotone_maps(X, Y))
    fence = core(Y).fence_to_identity()
    for a, b in zip(fence, fence[1:]):
        assert a.comparable(b)
        for l in (0, 1):
            assert np.array_equal(induced_homology_map(a @ f, l), induced_homology_map(b @ f, l))


coords = st.integers(0, 24).map(lambda k: Fraction(k, 4))


@SETTINGS
@given(st.lists(st.tuples(coords, coords), min_size=1, max_size=9, unique=True),
       st.integers(1, 40).map(lambda k: Fraction(k, 4)))
def test_diameter_poset_invariants(pts, t):
    M = FiniteMetricSpace([[str(a), str(b)] for a, b in pts])
    D = build_diameter_poset(M, range(len(M)), str(t))
    ids = set(D.poset.ids)
    assert {str(i) for i in range(len(M))} <= ids
    for sid, sub in D.subsets.items():
        assert all(M.sq_exact(a, b) < t * t for a, b in itertools.combinations(sub, 2))
        for r in range(1, len(sub)):
            for face in itertools.combinations(sub, r):
                assert ",".join(map(str, face)) in ids


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["q", "p"]))
def test_random_cloud_pipelines_are_well_defined(seed, variant):
    rng = np.random.default_rng(seed)
    M = FiniteMetricSpace(rng.random((30, 2)))
    FA = build_finite_approximation(M, EpsilonSchedule([1.5, 0.6, 0.25], variant))
    S = FA.sequence()
    for t in S.bonds:
        validate_monotone(t)
    for n, A in enumerate(FA.samples):
        assert is_epsilon_approximation(M, A, FA.schedule.values[n])[0]
