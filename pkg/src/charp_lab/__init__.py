"""charp-lab: prime-characteristic commutative algebra over quotients of polynomial rings."""

from __future__ import annotations

__version__ = "0.1.0"

from .ffpoly import Characteristic, MonomialOrder, Poly, PolyRing, parse_polynomial  # noqa: E402
from .groebner import GroebnerBasis, groebner_basis, ideal_member, normal_form  # noqa: E402
from .idealkit import Ideal, colon, frobenius_power, intersect, minimal_primes_monomial, pth_root  # noqa: E402
from .frobpure import (RingPresentation, SpecialIdealLattice, fedder_certificate, is_compatible,  # noqa: E402
                       special_ideal_lattice, star_closure)
from .stight import (MultSet, MembershipVerdict, big_test_ideal, realize_as_s_test_ideal,  # noqa: E402
                     s_test_element, s_test_ideal, test_ideal_chain, tight_closure_membership)
from .skewmod import build_truncation, delta_s_truncated, gamma_x, graded_annihilator  # noqa: E402

__all__ = [
    "Characteristic", "MonomialOrder", "Poly", "PolyRing", "parse_polynomial",
    "GroebnerBasis", "groebner_basis", "ideal_member", "normal_form",
    "Ideal", "colon", "frobenius_power", "intersect", "minimal_primes_monomial", "pth_root",
    "RingPresentation", "SpecialIdealLattice", "fedder_certificate", "is_compatible",
    "special_ideal_lattice", "star_closure",
    "MultSet", "MembershipVerdict", "big_test_ideal", "realize_as_s_test_ideal", "s_test_element",
    "s_test_ideal", "test_ideal_chain", "tight_closure_membership",
    "build_truncation", "delta_s_truncated", "gamma_x", "graded_annihilator",
]
