import random

import pytest

from finshape import (FinitePoset, InputError, MonotoneMap, NotMonotoneError, antichain, beat_points, chain,
                      circle_model, constant, core, down_set, hasse_export, height, identity, up_set,
                      validate_monotone)
from finshape.poset import DOWN_BEAT, UP_BEAT, replay_removals

from helpers import height_brute, random_poset, relation_closure


def two_chain():
    return FinitePoset(["A", "B"], [("A", "B")])


# construction

def test_cycle_rejected():
    with pytest.raises(InputError):
        FinitePoset(["a", "b"], [("a", "b"), ("b", "a")])


def test_duplicate_ids_rejected():
    with pytest.raises(InputError):
        FinitePoset(["a", "a"])


def test_full_order_reduced_to_covers():
    X = FinitePoset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert X.covers == (("a", "b"), ("b", "c"))


def test_closure_matches_floyd_warshall():
    rng = random.Random(3)
    for _ in range(30):
        X = random_poset(rng, rng.randint(1, 9), 0.35)
        le = relation_closure(X)
        for a in X.ids:
            for b in X.ids:
                assert X.leq(a, b) == ((a, b) in le)


# down / up sets

def test_down_set_examples():
    X = two_chain()
    assert down_set(X, "B") == {"A", "B"}
    assert down_set(X, "A") == {"A"}
    assert down_set(circle_model(), "c") == {"a", "b", "c"}


def test_up_set_examples():
    assert up_set(two_chain(), "A") == {"A", "B"}
    assert up_set(circle_model(), "a") == {"a", "c", "d"}
    assert up_set(antichain(["A", "B"]), "A") == {"A"}


# beat points

def test_beat_points_examples():
    assert beat_points(two_chain()) == [("A", UP_BEAT), ("B", DOWN_BEAT)]
    assert beat_points(circle_model()) == []
    assert beat_points(FinitePoset(["p"])) == []


def _beat_brute(X):
    le = relation_closure(X)
    out = []
    for x in X.ids:
        below = [y for y in X.ids if (y, x) in le and y != x]
        above = [y for y in X.ids if (x, y) in le and y != x]
        if any(all((z, m) in le for z in below) for m in below):
            out.append((x, DOWN_BEAT))
        if any(all((m, z) in le for z in above) for m in above):
            out.append((x, UP_BEAT))
    return sorted(out)


def test_beat_points_match_brute_force():
    rng = random.Random(11)
    for _ in range(100):
        X = random_poset(rng, rng.randint(1, 10), rng.uniform(0.1, 0.6))
        assert sorted(beat_points(X)) == _beat_brute(X)


# cores

def test_core_of_chain_is_point():
    R = core(chain(5))
    assert len(R.core) == 1
    assert len(R.removal_log) == 4


def test_core_of_circle_is_itself():
    X = circle_model()
    R = core(X)
    assert R.core == X and R.removal_log == []


def test_core_invariants_random():
    rng = random.Random(5)
    for _ in range(60):
        X = random_poset(rng, rng.randint(1, 12), rng.uniform(0.1, 0.6))
        R = core(X)
        assert beat_points(R.core) == []
        assert R.retraction @ R.inclusion == identity(R.core)
        assert replay_removals(X, R.removal_log) == R.core
        assert height(R.core) <= height(X)
        fence = R.fence_to_identity()
        assert fence[0] == identity(X)
        assert fence[-1] == R.inclusion @ R.retraction
        assert all(a.comparable(b) for a, b in zip(fence, fence[1:]))


# height

def test_height_examples():
    assert height(FinitePoset(["p"])) == 0
    assert height(chain(4)) == 3
    assert height(circle_model()) == 1


def test_height_matches_brute_force():
    rng = random.Random(8)
    for _ in range(40):
        X = random_poset(rng, rng.randint(1, 10), rng.uniform(0.1, 0.7))
        assert height(X) == height_brute(X)


# maps

def test_validate_monotone_examples():
    X = two_chain()
    validate_monotone(identity(X))
    validate_monotone(constant(X, antichain(["A'", "B'"]), "A'"))
    f = MonotoneMap(X, antichain(["A'", "B'"]), {"A": "A'", "B": "B'"})
    with pytest.raises(NotMonotoneError) as e:
        validate_monotone(f)
    assert ("A", "B") in e.value.violations


def test_map_totality_and_targets():
    X = two_chain()
    with pytest.raises(InputError):
        MonotoneMap(X, X, {"A": "A"})
    with pytest.raises(InputError):
        MonotoneMap(X, X, {"A": "A", "B": "Z"})


def test_composition_checks_endpoints():
    X, Y = two_chain(), circle_model()
    with pytest.raises(InputError):
        identity(X) @ identity(Y)


# hasse

def test_hasse_examples():
    assert "->" not in hasse_export(FinitePoset(["p"]))
    assert hasse_export(two_chain()).count("->") == 1
    dot = hasse_export(circle_model())
    assert dot.count("->") == 4
    assert dot.startswith("digraph")


def test_hasse_is_deterministic():
    X = circle_model()
    assert hasse_export(X) == hasse_export(FinitePoset(list(reversed(X.ids)), list(reversed(X.covers))))
