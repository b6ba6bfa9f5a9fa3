import random

import pytest

from finshape import CapacityError, FinitePoset, MonotoneMap, RunConfig, antichain, chain, circle_model, homotopic
from finshape.homotopy import NO, UNKNOWN, YES, count_monotone, enumerate_monotone, is_fence

from helpers import all_monotone_brute, hom_components_brute, random_monotone, random_poset

PT = FinitePoset(["*"])


def test_equal_maps_fence_zero():
    f = MonotoneMap(PT, chain(2), {"*": "x0"})
    r = homotopic(f, f)
    assert r.verdict == YES and r.fence_length == 0


def test_comparable_constants_one_step():
    AB = FinitePoset(["A", "B"], [("A", "B")])
    r = homotopic(MonotoneMap(PT, AB, {"*": "A"}), MonotoneMap(PT, AB, {"*": "B"}))
    assert r.verdict == YES and r.fence_length == 1 and is_fence(r.fence)


def test_antichain_constants_not_homotopic():
    A = antichain(["A", "B"])
    f, g = MonotoneMap(PT, A, {"*": "A"}), MonotoneMap(PT, A, {"*": "B"})
    assert homotopic(f, g, "exact").verdict == NO
    assert homotopic(f, g, "witness").verdict == NO


def test_enumeration_matches_brute_force():
    rng = random.Random(1)
    for _ in range(30):
        S, T = random_poset(rng, rng.randint(1, 4), 0.5), random_poset(rng, rng.randint(1, 4), 0.5, "t")
        mine = {tuple(T.ids[i] for i in h) for h in enumerate_monotone(S, T)}
        brute = {tuple(f[x] for x in S.ids) for f in all_monotone_brute(S, T)}
        assert mine == brute
        assert count_monotone(S, T, 10 ** 6) == len(brute)


def test_exact_over_cap_raises():
    X = antichain([f"a{i}" for i in range(5)])
    f = MonotoneMap(X, X, {x: x for x in X.ids})
    g = MonotoneMap(X, X, {x: "a0" for x in X.ids})
    with pytest.raises(CapacityError):
        homotopic(f, g, "exact", config=RunConfig(max_maps=100))


def test_witness_finds_circle_rotation_not_homotopic_to_identity():
    X = circle_model()
    swap = MonotoneMap(X, X, {"a": "b", "b": "a", "c": "c", "d": "d"})
    r = homotopic(MonotoneMap(X, X, {x: x for x in X.ids}), swap, "exact")
    assert r.verdict == NO


def test_exact_agrees_with_hom_poset_oracle():
    rng = random.Random(2024)
    checked = 0
    while checked < 100:
        S = random_poset(rng, rng.randint(1, 4), rng.uniform(0.2, 0.7), "s")
        T = random_poset(rng, rng.randint(1, 4), rng.uniform(0.2, 0.7), "t")
        comp = hom_components_brute(S, T)
        keys = list(comp)
        a, b = rng.choice(keys), rng.choice(keys)
        f, g = (MonotoneMap(S, T, dict(zip(S.ids, k))) for k in (a, b))
        r = homotopic(f, g, "exact")
        assert r.verdict == (YES if comp[a] == comp[b] else NO)
        if r.verdict == YES:
            assert r.fence[0] == f and r.fence[-1] == g and is_fence(r.fence)
        checked += 1


def test_witness_never_contradicts_oracle():
    rng = random.Random(77)
    for _ in range(60):
        S = random_poset(rng, rng.randint(1, 4), 0.4, "s")
        T = random_poset(rng, rng.randint(1, 4), 0.4, "t")
        comp = hom_components_brute(S, T)
        f, g = random_monotone(rng, S, T), random_monotone(rng, S, T)
        r = homotopic(f, g, "witness")
        truth = comp[tuple(f(x) for x in S.ids)] == comp[tuple(g(x) for x in S.ids)]
        assert r.verdict in (YES, NO, UNKNOWN)
        if r.verdict == YES:
            assert truth
        if r.verdict == NO:
            assert not truth
