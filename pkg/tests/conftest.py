from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from chainforge.chain import Chain

settings.register_profile(
    "ci",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
    print_blob=True,
)
settings.register_profile("dev", max_examples=15, deadline=None)
settings.load_profile("ci")


def rationals(lo=-5, hi=5, max_den=4):
    return st.builds(
        lambda n, d: Fraction(n, d),
        st.integers(lo * max_den, hi * max_den),
        st.integers(1, max_den),
    )


def positive_rationals(max_num=20, max_den=4):
    return st.builds(lambda n, d: Fraction(n, d), st.integers(1, max_num), st.integers(1, max_den))


@st.composite
def chains(draw, min_d=1, max_d=6):
    d = draw(st.integers(min_d, max_d))
    a = draw(st.lists(rationals(), min_size=d + 1, max_size=d + 1))
    lam = draw(st.lists(positive_rationals(), min_size=d, max_size=d))
    return Chain(a, lam)


@pytest.fixture
def example_chain():
    """3-chain with PST between its end vertices and spectrum {2, 1, -1, -2}."""
    return Chain([0, 0, 0, 0], [Fraction(5, 2), Fraction(9, 10), Fraction(8, 5)])


@pytest.fixture
def path3():
    return Chain.path(3)
