import functools

import pytest
from hypothesis import settings, strategies as st

from qdeform.scalars import Q, Scalar

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def small_polys():
    return st.lists(st.integers(-4, 4), min_size=1, max_size=4).map(
        lambda cs: sum((Scalar(c) * Q ** k for k, c in enumerate(cs)), Scalar(0)))


@st.composite
def scalars(draw, nonzero=False):
    num = draw(small_polys())
    den = draw(small_polys().filter(bool))
    x = num / den
    if nonzero and not x:
        x = Scalar(1)
    return x


units = functools.partial(scalars, nonzero=True)


@functools.lru_cache(maxsize=None)
def uq_algebras(name: str):
    """(u, datum, H0, H^lambda, A(lambda)) for a preset, built once per session."""
    from qdeform.uq import UqInput, build_uq, build_uq_flavor, uq_datum
    u = UqInput.preset(name)
    _, h0 = build_uq(u, "zero")
    _, hl = build_uq(u, "standard")
    return u, uq_datum(u), h0, hl, build_uq_flavor(u, "Alam")


@pytest.fixture(scope="session")
def a1():
    return uq_algebras("A1")


@pytest.fixture(scope="session")
def a2():
    return uq_algebras("A2")
