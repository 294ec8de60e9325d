import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from lefschetz.exterior import Form, LinearMap, Vector  # noqa: E402
from lefschetz.metric import CompatibleTriple  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_fractions = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


@st.composite
def forms(draw, n=None, degree=None, max_terms=5):
    n = draw(st.integers(1, 3)) if n is None else n
    degree = draw(st.integers(0, min(3, 2 * n))) if degree is None else degree
    idx = st.lists(st.integers(1, 2 * n), min_size=degree, max_size=degree, unique=True).map(
        lambda xs: tuple(sorted(xs)))
    terms = draw(st.dictionaries(idx, small_fractions, max_size=max_terms))
    return Form(n, degree, terms)


@st.composite
def vectors(draw, n):
    return Vector(n, tuple(draw(st.lists(small_fractions, min_size=2 * n, max_size=2 * n))))


@st.composite
def linear_maps(draw, n):
    rows = draw(st.lists(st.lists(st.integers(-2, 2), min_size=2 * n, max_size=2 * n),
                         min_size=2 * n, max_size=2 * n))
    return LinearMap(n, rows)


@pytest.fixture(params=[1, 2, 3], ids=lambda n: f"n={n}")
def standard_triple(request):
    return CompatibleTriple.standard(request.param)
