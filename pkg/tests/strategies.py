"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from qtatoms.diagrams import Partition
from qtatoms.qtfield import QTScalar, qt_monomial


@st.composite
def partitions_st(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    parts = []
    rest, cap = n, n
    while rest:
        p = draw(st.integers(min_value=1, max_value=min(rest, cap)))
        parts.append(p)
        rest -= p
        cap = p
    return Partition(parts)


@st.composite
def partition_cell_st(draw, min_n=1, max_n=6):
    mu = draw(partitions_st(min_n, max_n))
    cells = mu.cells()
    return mu, cells[draw(st.integers(min_value=0, max_value=len(cells) - 1))]


@st.composite
def qtpoly_st(draw, max_deg=3, max_terms=4):
    terms = draw(
        st.lists(
            st.tuples(
                st.integers(0, max_deg), st.integers(0, max_deg), st.integers(-5, 5).filter(bool)
            ),
            max_size=max_terms,
        )
    )
    out = QTScalar(0)
    for a, b, c in terms:
        out = out + qt_monomial(a, b, c)
    return out


@st.composite
def qtscalar_st(draw, nonzero=False):
    num = draw(qtpoly_st())
    den = draw(qtpoly_st().filter(bool))
    if nonzero and not num:
        num = QTScalar(1)
    return num / den


@st.composite
def rationals_st(draw, nonzero=False):
    a = draw(st.integers(-9, 9).filter(bool) if nonzero else st.integers(-9, 9))
    b = draw(st.integers(1, 6))
    return Fraction(a, b)
