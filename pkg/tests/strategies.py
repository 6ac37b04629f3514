"""Hypothesis strategies for small polynomials and ideals."""

from __future__ import annotations

from hypothesis import strategies as st

from charp_lab.ffpoly import Poly, PolyRing


def polys(ring: PolyRing, max_deg: int = 3, max_terms: int = 4):
    exps = st.tuples(*[st.integers(0, max_deg)] * ring.nvars).filter(lambda e: sum(e) <= max_deg)
    terms = st.lists(st.tuples(exps, st.integers(0, ring.p - 1)), max_size=max_terms)
    return terms.map(lambda ts: Poly.from_terms(ring, ts))


def nonzero_polys(ring: PolyRing, max_deg: int = 3, max_terms: int = 4):
    return polys(ring, max_deg, max_terms).filter(lambda f: not f.is_zero())


def monomial_exps(nvars: int, max_deg: int):
    return st.tuples(*[st.integers(0, max_deg)] * nvars).filter(lambda e: sum(e) <= max_deg)
