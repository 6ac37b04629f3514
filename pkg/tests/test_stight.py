from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from charp_lab.errors import PreconditionError
from charp_lab.frobpure import RingPresentation, special_ideal_lattice
from charp_lab.idealkit import Ideal, frobenius_power
from charp_lab.stight import (MultSet, big_test_ideal, meets, realize_as_s_test_ideal, s_test_element,
                              s_test_ideal, test_ideal_chain, tight_closure_membership)

SR_FIXTURES = {
    "axes": ("XYZ", ["X*Y", "X*Z", "Y*Z"]),
    "planes4": ("XYZW", ["X*Y*Z", "X*Y*W", "X*Z*W", "Y*Z*W"]),
    "plane_line": ("XYZ", ["X*Y", "Y*Z"]),
    "two_planes": ("XYZW", ["X*Y", "Z*W"]),
}
_lattices = {}


def fixture_lattice(name):
    if name not in _lattices:
        if name == "fermat":
            R = RingPresentation.from_strings(7, "XYZ", ["X^3+Y^3+Z^3"], declared_prime=True)
        else:
            names, gens = SR_FIXTURES[name]
            R = RingPresentation.from_strings(2, names, gens)
        _lattices[name] = (R, special_ideal_lattice(R))
    return _lattices[name]


ALL = list(SR_FIXTURES) + ["fermat"]


def test_meets_examples(axes, plane_line):
    assert meets(MultSet.rcirc(), axes.m, axes)
    assert not meets(MultSet.one(), axes.m, axes)
    assert meets(MultSet.complement([plane_line.ideal(["Y"])]), plane_line.ideal(["X", "Z"]), plane_line)
    assert meets(MultSet.powers(axes.ring.parse("X")), axes.ideal(["X", "Y"]), axes)
    assert not meets(MultSet.powers(axes.ring.parse("Z")), axes.ideal(["X", "Y"]), axes)
    with pytest.raises(PreconditionError):
        meets(MultSet.rcirc(), axes.ideal(["X+Y"]), axes)


def test_s_test_ideal_examples():
    R, L = fixture_lattice("axes")
    assert s_test_ideal(L, MultSet.rcirc(), R) == R.m
    for name in ALL:
        R, L = fixture_lattice(name)
        assert s_test_ideal(L, MultSet.one(), R).is_unit()
    R, L = fixture_lattice("plane_line")
    assert s_test_ideal(L, MultSet.complement([R.ideal(["X", "Z"])]), R) == R.ideal(["Y"])
    # every prime member lies in m, so nothing meets this S
    assert s_test_ideal(L, MultSet.complement([R.ideal(["X", "Z"]), R.m]), R).is_unit()


def test_big_test_ideal_examples():
    R, L = fixture_lattice("fermat")
    assert big_test_ideal(L, R) == R.m
    R, L = fixture_lattice("planes4")
    assert big_test_ideal(L, R) == R.ideal(["X*Y", "X*Z", "X*W", "Y*Z", "Y*W", "Z*W"])
    reg = RingPresentation.from_strings(2, "X", [])
    assert big_test_ideal(special_ideal_lattice(reg), reg).is_unit()


def test_realize_examples():
    R, L = fixture_lattice("plane_line")
    S = realize_as_s_test_ideal(L, R.ideal(["X", "Z"]), R)
    assert S == MultSet.complement([R.ideal(["Y"])])
    assert s_test_ideal(L, S, R) == R.ideal(["X", "Z"])
    assert realize_as_s_test_ideal(L, Ideal.unit(R.ring), R) == MultSet.one()
    R, L = fixture_lattice("axes")
    S = realize_as_s_test_ideal(L, R.a, R)
    assert S == MultSet.complement([])
    assert s_test_ideal(L, S, R) == R.a
    with pytest.raises(PreconditionError):
        realize_as_s_test_ideal(L, R.ideal(["X+Y"]), R)


@pytest.mark.parametrize("name", ALL)
def test_realization_roundtrip_exhaustive(name):
    R, L = fixture_lattice(name)
    for b in L.members:
        assert s_test_ideal(L, realize_as_s_test_ideal(L, b, R, check=False), R) == b


def test_s_test_element_examples():
    R, L = fixture_lattice("axes")
    assert s_test_element(L, MultSet.rcirc(), R) == R.ring.parse("X+Y+Z")
    R, L = fixture_lattice("fermat")
    assert s_test_element(L, MultSet.rcirc(), R) == R.ring.parse("X")
    R, L = fixture_lattice("plane_line")
    assert s_test_element(L, MultSet.complement([R.ideal(["Y"])]), R) == R.ring.parse("X")
    with pytest.raises(PreconditionError):
        s_test_element(L, MultSet.one(), R)


def test_membership_trivial_case(axes):
    a_test = axes.ideal(["X+Y"])
    v = tight_closure_membership(axes.ring.parse("X*Z + X + Y"), a_test, MultSet.rcirc(), axes)
    assert v.status == "member-certified" and v.certified


def test_membership_axes_example(axes):
    a_test = axes.ideal(["X+Y"])
    X = axes.ring.parse("X")
    v = tight_closure_membership(X, a_test, MultSet.rcirc(), axes, N=4)
    assert v.is_member
    assert v.certificate == axes.ring.parse("X+Y+Z")
    assert v.status == "member-up-to-bound" and v.bound == 4
    s = v.certificate
    for j in range(5):
        q = 2 ** j
        assert (frobenius_power(a_test, j) + axes.a).contains(s * X ** q)
    json = v.to_json()
    assert json["certificate"] == "X + Y + Z" and json["status"] == "member-up-to-bound"


def test_membership_nonmember_is_certified(axes):
    a_test = axes.ideal(["X+Y"])
    v = tight_closure_membership(axes.ring.parse("Z"), a_test, MultSet.rcirc(), axes, N=4)
    assert v.status == "non-member" and v.certified
    assert not (frobenius_power(a_test, v.level) + axes.a).contains(
        v.certificate * axes.ring.parse("Z") ** (2 ** v.level))


def test_membership_one_is_trivial_frobenius_closure(axes, fermat):
    for R in (axes, fermat):
        a_test = R.ideal(["X+Y"])
        v = tight_closure_membership(R.ring.parse("X"), a_test, MultSet.one(), R, N=4)
        assert v.status == "non-member" and v.certified and v.level <= 4


def test_membership_monomial_stabilization(axes):
    # monomial ideals of a Stanley-Reisner ring are tightly closed, and the stable
    # colon (a : X^oo) = (Y, Z) misses every element of R°, so refutation is certified
    a_test = axes.ideal(["X^2"])
    X = axes.ring.parse("X")
    v = tight_closure_membership(X, a_test, MultSet.rcirc(), axes, N=3)
    assert v.status == "non-member" and v.certified
    q = 2 ** v.level
    assert not (frobenius_power(a_test, v.level) + axes.a).contains(v.certificate * X ** q)
    v = tight_closure_membership(axes.ring.parse("Y"), axes.ideal(["X"]), MultSet.rcirc(), axes, N=3)
    assert v.status == "non-member"


def test_membership_powers(axes):
    a_test = axes.ideal(["X+Y"])
    v = tight_closure_membership(axes.ring.parse("X"), a_test, MultSet.powers(axes.ring.parse("X")), axes, N=3)
    assert v.status == "member-up-to-bound" and not v.certified
    # Y*Z = 0 in R, so powers of Y kill Z outright
    v = tight_closure_membership(axes.ring.parse("Z"), a_test, MultSet.powers(axes.ring.parse("Y")), axes, N=3)
    assert v.is_member
    v = tight_closure_membership(axes.ring.parse("Z"), a_test, MultSet.powers(axes.ring.parse("Z")), axes, N=3)
    assert v.status == "non-member" and not v.certified
    assert MultSet.powers(axes.ring.parse("1")) == MultSet.one()


@pytest.mark.parametrize("name,expected", [
    ("axes", [[], ["X", "Y", "Z"], ["1"]]),
    ("plane_line", [[], ["X", "Y", "Z"], ["1"]]),
    ("planes4", [[], ["X*Y", "X*Z", "X*W", "Y*Z", "Y*W", "Z*W"], ["X", "Y", "Z", "W"], ["1"]]),
    ("two_planes", [[], ["X*Y", "X*Z", "X*W", "Y*Z", "Y*W", "Z*W"], ["X", "Y", "Z", "W"], ["1"]]),
    ("fermat", [[], ["X", "Y", "Z"], ["1"]]),
])
def test_chains(name, expected):
    R, L = fixture_lattice(name)
    ch = test_ideal_chain(R, lattice=L)
    assert [str(c) for c in ch.members] == [str(R.ideal(e)) for e in expected]
    assert all(ch.in_lattice)
    assert all(x < y for x, y in zip(ch.members, ch.members[1:]))
    assert all(u is not None for u in ch.certificates)


def test_chain_regular_ring():
    R = RingPresentation.from_strings(2, "X", [])
    ch = test_ideal_chain(R)
    assert [str(c) for c in ch.members] == ["(0)", "(1)"]


def test_chain_requires_fpure():
    R = RingPresentation.from_strings(5, "XYZ", ["X^3+Y^3+Z^3"], declared_prime=True)
    with pytest.raises(PreconditionError):
        test_ideal_chain(R)


@given(st.sampled_from(list(SR_FIXTURES)), st.data())
def test_monotonicity_in_s(name, data):
    R, L = fixture_lattice(name)
    primes = list(L.primes)
    S_ex = data.draw(st.lists(st.sampled_from(primes), unique_by=str, max_size=3))
    T_ex = data.draw(st.lists(st.sampled_from(primes), unique_by=str, max_size=3))
    S, T = MultSet.complement(S_ex), MultSet.complement(T_ex)
    if all(meets(T, q, R) for q in primes if meets(S, q, R)):
        assert s_test_ideal(L, T, R).issubset(s_test_ideal(L, S, R))


@pytest.mark.parametrize("name", ALL)
def test_containment_always_certified(name):
    R, L = fixture_lattice(name)
    rng = random.Random(name)
    a_test = R.ideal(["X"])
    for g in list(a_test.gb)[:4]:
        r = g * R.ring.monomial([rng.randint(0, 1) for _ in range(R.ring.nvars)])
        for S in (MultSet.one(), MultSet.rcirc()):
            v = tight_closure_membership(r, a_test, S, R, N=2, lattice=L)
            assert v.status == "member-certified"


def test_tight_closure_of_fermat_example(fermat):
    """In the Fermat cone the test ideal is m, so m-multiples of r decide membership."""
    R = fermat
    L = special_ideal_lattice(R)
    a_test = R.ideal(["Y", "Z"])
    X2 = R.ring.parse("X^2")
    v = tight_closure_membership(X2, a_test, MultSet.rcirc(), R, N=2, lattice=L)
    assert v.is_member
    v = tight_closure_membership(R.ring.parse("X"), a_test, MultSet.rcirc(), R, N=2, lattice=L)
    assert v.status == "non-member"
