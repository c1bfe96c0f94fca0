import numpy as np
import pytest
from hypothesis import strategies as st

from pmra.laurent import LaurentPoly

coeff = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@st.composite
def polys(draw, lo=-6, hi=6, max_terms=6):
    ks = draw(st.lists(st.integers(lo, hi), min_size=0, max_size=max_terms, unique=True))
    return LaurentPoly({k: draw(coeff) for k in ks})


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
