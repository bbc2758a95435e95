import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from prevlab import StepFn, Valuation, build_poset

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def C2():
    return build_poset(["bot", "top"], [("bot", "top")])


@pytest.fixture
def A2():
    return build_poset(["x", "y"])


@pytest.fixture
def P1():
    return build_poset(["*"])


small_rats = st.builds(Fraction, st.integers(0, 12), st.integers(1, 4))


@st.composite
def posets(draw, max_elems=5):
    n = draw(st.integers(1, max_elems))
    names = [f"e{i}" for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return build_poset(names, [(names[i], names[j]) for (i, j), e in zip(pairs, edges) if e])


@st.composite
def stepfns(draw, p):
    raw = draw(st.lists(small_rats, min_size=len(p), max_size=len(p)))
    # push each raw value up the order: h(x) = max over y <= x of raw(y)
    vals = [max(raw[j] for j in range(len(p)) if p.leq[j][i]) for i in range(len(p))]
    return StepFn(p, tuple(vals))


@st.composite
def valuations(draw, p):
    return Valuation(p, tuple(draw(st.lists(small_rats, min_size=len(p), max_size=len(p)))))


@st.composite
def poset_with(draw, *makers, max_elems=5):
    p = draw(posets(max_elems))
    return (p, *[draw(m(p)) for m in makers])


def rng(seed):
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.format_line(number))
