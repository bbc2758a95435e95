import math
import random
from fractions import Fraction as F

import pytest

from prevlab import (
    EmptyGenerators,
    EmptyLens,
    Flavor,
    FlavorViolation,
    ForkPres,
    Inside,
    NotAFork,
    Outside,
    PrevisionPres,
    Shape,
    ShapeMismatch,
    StepFn,
    Valuation,
    chi,
    compare,
    egli_milner_semantic,
    eval_prev,
    grid_member,
    hoare_down,
    hull,
    integrate,
    is_member,
    lens,
    member,
    minkowski,
    r_apply,
    random_monotone,
    s_apply,
    same_set,
    smyth_up,
    stochastic_leq,
    support,
    verify_certificate,
    verify_order_embedding,
    verify_rs_identity,
    verify_sr_hull,
)
from prevlab.generate import flavored_space, random_generators, random_genset, random_poset
from prevlab.powercone import order_embedding_failure, rs_mismatch
from prevlab.valuation import random_of_flavor, random_valuation

half = F(1, 2)


@pytest.fixture
def gens(A2):
    return Valuation.point(A2, "x"), Valuation.point(A2, "y")


def test_member_examples(A2, gens):
    dx, dy = gens
    mid = Valuation.from_map(A2, {"x": half, "y": half})
    ok, cert = member(hoare_down([dx, dy]), mid)
    assert ok and cert == Inside(lam=(half, half))
    ok, cert = member(hoare_down([dy]), dx)
    assert not ok and isinstance(cert, Outside)
    assert cert.sep == chi(A2, ["x"]) and cert.margin == 1
    assert integrate(cert.sep, dx) > eval_prev(PrevisionPres.hoare([dy]), cert.sep)
    assert is_member(hoare_down([dy]), Valuation.zero(A2))


def test_member_flavor_slice(A2, gens):
    dx, dy = gens
    ok, cert = member(hoare_down([dx, dy], Flavor.NORM1), Valuation.from_map(A2, {"x": half}))
    assert not ok and cert == FlavorViolation(half)


def test_member_mid_point_not_in_either_ideal(A2, gens):
    dx, dy = gens
    mid = Valuation.from_map(A2, {"x": half, "y": half})
    assert is_member(hull([dx, dy], Shape.HOARE_DOWN), mid)
    assert not stochastic_leq(mid, dx) and not stochastic_leq(mid, dy)
    assert mid.measure(A2.mask_of(["y"])) > dx.measure(A2.mask_of(["y"]))
    assert mid.measure(A2.mask_of(["x"])) > dy.measure(A2.mask_of(["x"]))


def test_certificates_reverify_on_random_queries():
    rng = random.Random(1)
    seen = set()
    for _ in range(150):
        shape = rng.choice(list(Shape))
        flavor = rng.choice(list(Flavor))
        p = flavored_space(rng, flavor, 4)
        s = random_genset(rng, shape, flavor, p, 3)
        v = random_of_flavor(p, rng, flavor)
        ok, cert = member(s, v)
        assert verify_certificate(s, v, ok, cert)
        seen.add(type(cert))
    assert Inside in seen and Outside in seen


def test_tampered_certificate_fails(A2, gens):
    dx, dy = gens
    s = hoare_down([dy])
    _, cert = member(s, dx)
    assert not verify_certificate(s, dx, False, Outside(chi(A2, ["y"]), F(1), "hoare"))
    assert not verify_certificate(s, dx, True, Inside(lam=(F(1),)))


def test_r_and_s(A2, C2, gens):
    dx, dy = gens
    h = StepFn.from_map(A2, {"x": 1, "y": 3})
    assert eval_prev(r_apply(hoare_down([dx, dy])), h) == 3
    assert eval_prev(r_apply(smyth_up([dx, dy])), h) == 1
    fk = r_apply(lens([dx, dy], [dx, dy]))
    assert isinstance(fk, ForkPres)
    assert fk.lower == PrevisionPres.smyth([dx, dy]) and fk.upper == PrevisionPres.hoare([dx, dy])
    assert s_apply(PrevisionPres.hoare([dx, dy])) == hoare_down([dx, dy])
    top, bot = Valuation.point(C2, "top"), Valuation.point(C2, "bot")
    s = s_apply(PrevisionPres.smyth([top]))
    assert s == smyth_up([top]) and not is_member(s, bot)
    with pytest.raises(NotAFork):
        s_apply(ForkPres(PrevisionPres.smyth([top]), PrevisionPres.hoare([bot])))


def test_empty_lens_rejected(C2):
    with pytest.raises(EmptyLens):
        lens([Valuation.point(C2, "top")], [Valuation.point(C2, "bot")])
    with pytest.raises(EmptyGenerators):
        hull([], Shape.HOARE_DOWN)


def test_rs_examples(A2, gens):
    dx, dy = gens
    mid = Valuation.from_map(A2, {"x": half, "y": half})
    assert verify_rs_identity(PrevisionPres.hoare([dx]))
    assert verify_rs_identity(PrevisionPres.hoare([dx, mid]), trials=100)
    assert verify_rs_identity(ForkPres(PrevisionPres.smyth([dx, dy]), PrevisionPres.hoare([dx, dy])))


def test_support_is_the_lp_optimum(A2, gens):
    dx, dy = gens
    h = StepFn.from_map(A2, {"x": 2, "y": 5})
    s = lens([dx, dy], [dx, dy])
    assert support(s, h, True) == 5 and support(s, h, False) == 2


def test_rs_holds_for_a_smyth_pair(A2, gens):
    dx, dy = gens
    f = PrevisionPres.smyth([dx, dy])
    assert rs_mismatch(f) is None


def test_sr_hull_examples(A2, gens):
    dx, dy = gens
    mid = Valuation.from_map(A2, {"x": half, "y": half})
    assert verify_sr_hull([dx, dy], Shape.HOARE_DOWN, [mid, dx, dy, Valuation.zero(A2)])
    assert verify_sr_hull([dx], Shape.SMYTH_UP, [dx])
    ok, cert = member(hull([dx], Shape.HOARE_DOWN), dy)
    assert not ok and cert.sep == chi(A2, ["y"])
    assert grid_member(hull([dx, dy], Shape.HOARE_DOWN), mid)


def test_grid_never_contradicts_lp():
    rng = random.Random(9)
    for _ in range(80):
        shape = rng.choice(list(Shape))
        flavor = rng.choice(list(Flavor))
        p = flavored_space(rng, flavor, 4)
        raw = random_generators(rng, p, flavor, rng.randint(1, 3))
        probes = [random_of_flavor(p, rng, flavor) for _ in range(10)]
        assert verify_sr_hull(raw, shape, probes, flavor)


def test_compare_examples(A2, gens):
    dx, dy = gens
    assert compare(hoare_down([dx]), hoare_down([dx, dy]))
    assert compare(smyth_up([dx, dy]), smyth_up([dx]))
    assert not compare(hoare_down([dx, dy]), hoare_down([dx]))
    s = lens([dx, dy], [dx, dy])
    assert compare(s, s)
    with pytest.raises(ShapeMismatch):
        compare(hoare_down([dx]), smyth_up([dx]))


def test_order_embedding_examples(A2, gens):
    dx, dy = gens
    s1, s2 = hoare_down([dx]), hoare_down([dy])
    assert not compare(s1, s2)
    assert order_embedding_failure(s1, s2) is None
    assert verify_order_embedding(s1, s1)
    assert verify_order_embedding(smyth_up([dx, dy]), smyth_up([dx]))


def test_coprojection_and_hull_idempotence():
    rng = random.Random(12)
    for _ in range(60):
        shape = rng.choice(list(Shape))
        flavor = rng.choice(list(Flavor))
        p = flavored_space(rng, flavor, 4)
        s = random_genset(rng, shape, flavor, p, 3)
        back = s_apply(r_apply(s))
        if shape is Shape.HOARE_DOWN:
            assert compare(s, back)
        elif shape is Shape.SMYTH_UP:
            assert compare(back, s)
        assert same_set(s, back)
        raw = s.down or s.up
        once = hull(raw, shape, flavor)
        twice = hull(once.down or once.up, shape, flavor)
        assert same_set(once, twice)


def test_egli_milner_consistency():
    rng = random.Random(13)
    for _ in range(60):
        flavor = rng.choice(list(Flavor))
        p = flavored_space(rng, flavor, 4)
        s1 = random_genset(rng, Shape.LENS, flavor, p, 3)
        s2 = random_genset(rng, Shape.LENS, flavor, p, 3)
        parts = compare(s1.hoare_part(), s2.hoare_part()) and compare(s1.smyth_part(), s2.smyth_part())
        assert compare(s1, s2) == parts == egli_milner_semantic(s1, s2)


def test_minkowski_examples(P1):
    star = Valuation.point(P1, "*")
    assert minkowski(hoare_down([Valuation.point(P1, "*", 2)]), star) == half
    assert minkowski(hoare_down([Valuation.point(P1, "*", 2)]), Valuation.zero(P1)) == 0
    assert minkowski(hoare_down([Valuation.zero(P1)]), star) == math.inf
    for k in range(1, 6):
        x = Valuation.point(P1, "*", F(k, 3))
        assert minkowski(hoare_down([Valuation.point(P1, "*", 2)]), x) == F(k, 6)


def test_minkowski_laws():
    rng = random.Random(14)
    for _ in range(80):
        p = random_poset(rng, 4)
        flavor = rng.choice([Flavor.UNBOUNDED, Flavor.SUB1])
        s = hoare_down(random_generators(rng, p, flavor, rng.randint(1, 3)), flavor)
        v, w = random_valuation(p, rng), random_valuation(p, rng)
        a = F(rng.randint(1, 7), rng.randint(1, 3))
        mv, mw = minkowski(s, v), minkowski(s, w)
        assert minkowski(s, v.scale(a)) == (a * mv if mv != math.inf else math.inf)
        assert minkowski(s, v + w) <= mv + mw
        # v <=st g forces mass(v) <= mass(g), so the Sub1 slice never bites
        assert (mv <= 1) == is_member(s, v)
