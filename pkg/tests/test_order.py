from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prevlab import (
    CycleDetected,
    DuplicateElement,
    NotMonotone,
    NotUpwardClosed,
    SizeLimitExceeded,
    StepFn,
    antichain,
    build_poset,
    chain,
    chi,
    from_layers,
    is_monotone,
    layer_cake,
    random_monotone,
    restrict,
    upsets,
)

from conftest import poset_with, posets, stepfns


def names(us):
    return [sorted(u.members) for u in us]


def test_build_antichain_and_chain(A2, C2):
    assert not A2.is_leq("x", "y") and not A2.is_leq("y", "x")
    assert C2.is_leq("bot", "top") and not C2.is_leq("top", "bot")


def test_transitive_closure():
    p = build_poset("abc", [("a", "b"), ("b", "c")])
    assert p.is_leq("a", "c")


def test_cycle_detected():
    with pytest.raises(CycleDetected):
        build_poset(["a", "b"], [("a", "b"), ("b", "a")])


def test_duplicate_element():
    with pytest.raises(DuplicateElement):
        build_poset(["a", "a"])


def test_upsets_examples(C2, A2, P1):
    assert names(upsets(C2)) == [[], ["top"], ["bot", "top"]]
    assert names(upsets(A2)) == [[], ["x"], ["y"], ["x", "y"]]
    assert names(upsets(P1)) == [[], ["*"]]


def test_upset_cap():
    with pytest.raises(SizeLimitExceeded):
        upsets(antichain(13))
    assert len(upsets(antichain(12))) == 4096


@given(posets(max_elems=6))
def test_upsets_match_brute_force(p):
    n = len(p)
    brute = set()
    for k in range(n + 1):
        for sub in combinations(range(n), k):
            s = set(sub)
            if all(j in s for i in s for j in range(n) if p.leq[i][j]):
                brute.add(frozenset(p.elements[i] for i in s))
    got = [frozenset(u.members) for u in upsets(p)]
    assert len(got) == len(set(got)) == len(brute)
    assert set(got) == brute
    sizes = [len(u) for u in got]
    assert sizes == sorted(sizes)


def test_chi_examples(A2, C2):
    h = chi(A2, ["x"])
    assert h["x"] == 1 and h["y"] == 0
    assert chi(C2, ["bot", "top"]) == StepFn.constant(C2, 1)
    with pytest.raises(NotUpwardClosed):
        chi(C2, ["bot"])


def test_stepfn_rejects_nonmonotone(C2):
    with pytest.raises(NotMonotone):
        StepFn.from_map(C2, {"bot": 2, "top": 1})


def test_random_monotone_deterministic(C2):
    p = chain(4)
    assert random_monotone(p, 11, 4) == random_monotone(p, 11, 4)
    for seed in range(50):
        h = random_monotone(C2, seed, 4)
        assert h["bot"] <= h["top"]
        assert all(v.denominator <= 4 for v in h.values)


def test_random_monotone_reaches_small_functions(C2):
    seen = {random_monotone(C2, s, 1).values for s in range(400)}
    assert (Fraction(0), Fraction(0)) in seen and (Fraction(0), Fraction(1)) in seen


@given(poset_with(stepfns, stepfns), st.builds(Fraction, st.integers(0, 9), st.integers(1, 5)))
def test_cone_operations_stay_monotone(case, a):
    p, h1, h2 = case
    for out in (h1 + h2, h1.max(h2), h1.min(h2), h1.scale(a)):
        assert is_monotone(p, out.values)


@given(poset_with(stepfns))
def test_layer_cake_reconstructs(case):
    p, h = case
    layers = layer_cake(h)
    assert all(c > 0 for c, _ in layers)
    assert all(p.is_upward_closed(m) for _, m in layers)
    assert from_layers(p, layers) == h


def test_restrict_keeps_induced_order():
    p = build_poset("abc", [("a", "b"), ("b", "c")])
    q = restrict(p, ["a", "c"])
    assert q.elements == ("a", "c") and q.is_leq("a", "c")
