"""Hypothesis strategies for small graphs and societies."""
from hypothesis import strategies as st

from societykit.society import build_society


@st.composite
def edge_lists(draw, max_n=9, max_m=20):
    n = draw(st.integers(2, max_n))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=max_m))
    return list(range(n)), pairs


@st.composite
def societies(draw, max_n=9, max_m=20, min_omega=0):
    V, E = draw(edge_lists(max_n, max_m))
    k = draw(st.integers(min(min_omega, len(V)), len(V)))
    om = draw(st.permutations(V))[:k]
    return build_society(V, E, om)
