from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from charp_lab.errors import ResourceLimitError
from charp_lab.ffpoly import PolyRing
from charp_lab.frobpure import RingPresentation, special_ideal_lattice
from charp_lab.idealkit import Ideal
from charp_lab.skewmod import (build_truncation, crosscheck_with_stight, delta_s_truncated, full_level, gamma_x,
                               graded_annihilator)
from charp_lab.stight import MultSet

from strategies import polys


@pytest.fixture(scope="module")
def axes_truncation(axes):
    return build_truncation(axes, axes.ideal(["X+Y"]), 4, 6)


def test_single_level_truncation(axes):
    T = build_truncation(axes, axes.a, 0, 2)
    assert len(T.ideals) == 1 and T.ideals[0] == axes.a
    # R/a in degree <= 2: 1, X, Y, Z, X^2, Y^2, Z^2
    assert len(T.bases[0]) == 7


def test_level_ideals_are_frobenius_powers(axes):
    T = build_truncation(axes, axes.ideal(["X+Y"]), 2, 4)
    want = [axes.ideal(["X+Y"]), axes.ideal(["X^2+Y^2"]), axes.ideal(["X^4+Y^4"])]
    assert T.ideals == want
    assert all(y.issubset(x) for x, y in zip(T.ideals, T.ideals[1:]))


def test_unit_a_test_gives_zero_module(axes):
    T = build_truncation(axes, Ideal.unit(axes.ring), 3, 4)
    assert T.is_zero_module()


def test_size_budget(axes):
    with pytest.raises(ResourceLimitError):
        build_truncation(axes, axes.a, 4, 30, size_budget=100)


def test_gamma_x_fpure_is_zero(axes):
    T = build_truncation(axes, axes.a, 3, 5)
    assert [g.dim for g in gamma_x(T)] == [0, 0, 0, 0]
    assert gamma_x(T)[0].contains(axes.ring.zero())


def test_gamma_x_detects_torsion_without_fpurity():
    ring = PolyRing(2, ("X",))
    a = Ideal.parse(ring, ["X^2"])
    R = RingPresentation(ring, a, check_radical=False)
    assert not R.is_fpure
    T = build_truncation(R, a, 2, 3)
    G = gamma_x(T)
    X = ring.parse("X")
    assert G[0].contains(X) and G[1].contains(X)
    assert not G[0].contains(ring.one())


def test_delta_one_matches_gamma(axes):
    T = build_truncation(axes, axes.ideal(["X+Y"]), 3, 4)
    d1 = delta_s_truncated(T, MultSet.one(), axes)
    g0 = gamma_x(T)[0]
    assert d1.space.dim == 0 == g0.dim
    d2 = delta_s_truncated(T, MultSet.powers(axes.ring.one()), axes)
    assert d2.space.vectors == g0.vectors


def test_delta_rcirc_contains_x(axes, axes_truncation):
    L = special_ideal_lattice(axes)
    d = delta_s_truncated(axes_truncation, MultSet.rcirc(), axes, L)
    assert d.certificate == axes.ring.parse("X+Y+Z")
    assert d.space.contains(axes.ring.parse("X"))
    assert not d.space.contains(axes.ring.parse("Z"))
    assert d.space.dim == 1


def test_graded_annihilator_of_zero(axes_truncation):
    B = graded_annihilator(axes_truncation, [axes_truncation.R.ring.zero()])
    assert all(b.is_unit() for b in B.levels)


def test_graded_annihilator_regular_ring():
    R = RingPresentation.from_strings(2, "X", [])
    T = build_truncation(R, R.a, 3, 3)
    B = graded_annihilator(T, full_level(T).polys())
    assert all(b.is_zero() for b in B.levels)
    assert B.is_constant() and B.is_ascending()


def test_graded_annihilator_of_delta(axes, axes_truncation):
    L = special_ideal_lattice(axes)
    d = delta_s_truncated(axes_truncation, MultSet.rcirc(), axes, L)
    B = graded_annihilator(axes_truncation, d.space.polys())
    assert B.is_ascending() and B.is_constant()
    assert B.levels[0] == axes.m
    assert B.to_json() == ["(X, Y, Z)"] * 5


def test_graded_annihilator_with_a_test_equal_to_a(axes):
    # Φ(R) is x-torsion-free and here Δ is zero, so the annihilator is all of R
    T = build_truncation(axes, axes.a, 4, 6)
    d = delta_s_truncated(T, MultSet.rcirc(), axes)
    assert d.space.dim == 0
    assert all(b.is_unit() for b in graded_annihilator(T, d.space.polys()).levels)


AXES = PolyRing(2, ("X", "Y", "Z"))


@given(polys(AXES, 3, 3), polys(AXES, 3, 3), polys(AXES, 2, 3), st.integers(0, 3))
def test_x_map_is_p_semilinear(axes_truncation, h, g, r, n):
    T = axes_truncation
    assert T.x(r * h + g, n) == T.ideals[n + 1].normal_form(r.frobenius(1) * T.x(h, n) + T.x(g, n))


@given(st.lists(polys(AXES, 3, 3), min_size=1, max_size=2))
def test_graded_annihilators_ascend(axes_truncation, elements):
    B = graded_annihilator(axes_truncation, elements)
    assert B.is_ascending()


CASES = [
    ("XYZ", ["X*Y", "X*Z", "Y*Z"], 2, ["X+Y"], "rcirc", 4, 6),
    ("XYZ", ["X*Y", "X*Z", "Y*Z"], 2, ["X+Y+Z", "Y*Z"], "rcirc", 3, 3),
    ("XYZ", ["X*Y", "Y*Z"], 2, ["X+Z"], "rcirc", 3, 3),
    ("XYZ", ["X*Y", "Y*Z"], 2, ["X", "Z"], "complement:Y", 3, 3),
    ("XYZ", ["X*Y", "X*Z", "Y*Z"], 2, ["X^2", "Y"], "one", 3, 3),
    ("XYZ", ["X^3+Y^3+Z^3"], 7, ["X", "Y"], "rcirc", 2, 1),
]


@pytest.mark.parametrize("names,gens,p,a_test,S,N,D", CASES)
def test_cross_module_oracle(names, gens, p, a_test, S, N, D):
    R = RingPresentation.from_strings(p, names, gens, declared_prime=(p == 7))
    L = special_ideal_lattice(R)
    if S.startswith("complement:"):
        S = MultSet.complement([R.ideal([S.split(":")[1]])])
    else:
        S = MultSet.rcirc() if S == "rcirc" else MultSet.one()
    T = build_truncation(R, R.ideal(a_test), N, D)
    res = crosscheck_with_stight(T, S, R, L)
    assert res["agree"], res["mismatches"]
    assert res["classes_checked"] == p ** len(T.bases[0])
