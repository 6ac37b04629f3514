"""Ideal algebra in A = F_p[X_1..X_n].

Ideals of a quotient R = A/a are handled as A-ideals containing a.  Monomial
ideals take exponent-vector shortcuts everywhere; everything else goes
through :mod:`charp_lab.groebner`.
"""

from __future__ import annotations

import itertools
from typing import Iterable, List, Optional, Sequence

from .errors import NotMonomialError, PreconditionError, SearchExhaustedError
from .ffpoly import Exps, MonomialOrder, Poly, PolyRing
from .groebner import (DEFAULT_PAIR_BUDGET, GroebnerBasis, divides, groebner_basis,
                       lcm_exps, minimal_monomials)


class Ideal:
    """Finitely generated ideal with a lazily computed reduced Groebner basis.

    ``prime`` is a tri-state flag (True/False/None = unknown).  It is set to
    True only when proven (variable-generated ideals) or declared by the
    caller, e.g. for the Fermat cubic fixture.
    """

    __slots__ = ("ring", "generators", "_gb", "prime", "_radical", "pair_budget")

    def __init__(self, ring: PolyRing, generators: Iterable[Poly] = (), *, prime: Optional[bool] = None,
                 pair_budget: int = DEFAULT_PAIR_BUDGET, _gb: Optional[GroebnerBasis] = None):
        gens = {g for g in generators if g}
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator ring mismatch")
        self.ring = ring
        self.generators = tuple(sorted(gens, key=lambda g: (ring.key(g.lm()), str(g)), reverse=True))
        self._gb = _gb
        self.prime = prime
        self._radical: Optional[bool] = None
        self.pair_budget = pair_budget

    # -- constructors ---------------------------------------------------------
    @classmethod
    def parse(cls, ring: PolyRing, texts: Sequence[str], **kw) -> Ideal:
        return cls(ring, [ring.parse(t) for t in texts], **kw)

    @classmethod
    def unit(cls, ring: PolyRing) -> Ideal:
        return cls(ring, [ring.one()])

    @classmethod
    def zero(cls, ring: PolyRing) -> Ideal:
        return cls(ring, [])

    @classmethod
    def maximal(cls, ring: PolyRing) -> Ideal:
        return cls(ring, ring.gens(), prime=True)

    @classmethod
    def from_monomials(cls, ring: PolyRing, monos: Iterable[Exps], **kw) -> Ideal:
        mins = minimal_monomials(monos)
        polys = [ring.monomial(m) for m in mins]
        ideal = cls(ring, polys, **kw)
        ideal._gb = GroebnerBasis(ring, sorted(polys, key=lambda g: ring.key(g.lm()), reverse=True))
        return ideal

    @classmethod
    def variables(cls, ring: PolyRing, indices: Iterable[int]) -> Ideal:
        return cls(ring, [ring.var(i) for i in indices], prime=True)

    # -- basis and flags ------------------------------------------------------
    @property
    def gb(self) -> GroebnerBasis:
        if self._gb is None:
            self._gb = groebner_basis(self.generators, self.ring, self.pair_budget)
        return self._gb

    @property
    def is_monomial(self) -> bool:
        if all(len(g) == 1 for g in self.generators):
            return True
        return self.gb.is_monomial

    @property
    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gb)

    @property
    def is_radical(self) -> Optional[bool]:
        """True/False for monomial ideals (square-free test); None when unknown."""
        if self._radical is None:
            if self.prime:
                self._radical = True
            elif self.is_monomial:
                self._radical = all(max(g.lm(), default=0) <= 1 for g in self.gb)
        return self._radical

    def is_variable_prime(self) -> bool:
        return self.is_monomial and all(sum(g.lm()) == 1 for g in self.gb) and not self.is_unit()

    def is_known_prime(self) -> bool:
        if self.prime is not None:
            return self.prime
        if self.is_zero() or self.is_variable_prime():
            return True
        return False

    def is_unit(self) -> bool:
        return self.gb.is_unit()

    def is_zero(self) -> bool:
        return not self.generators

    def monomial_generators(self) -> List[Exps]:
        if not self.is_monomial:
            raise NotMonomialError(f"{self} is not a monomial ideal")
        return [g.lm() for g in self.gb]

    # -- comparisons ----------------------------------------------------------
    def contains(self, f: Poly) -> bool:
        return self.gb.contains(f)

    __contains__ = contains

    def issubset(self, other: Ideal) -> bool:
        return all(other.contains(g) for g in self.generators)

    def __le__(self, other: Ideal) -> bool:
        return self.issubset(other)

    def __lt__(self, other: Ideal) -> bool:
        return self.issubset(other) and self != other

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.ring == other.ring and self.gb.key() == other.gb.key()

    def __hash__(self):
        return hash(self.gb.key())

    def key(self) -> tuple:
        return self.gb.key()

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other: Ideal) -> Ideal:
        return Ideal(self.ring, self.generators + other.generators, pair_budget=self.pair_budget)

    def __mul__(self, other: Ideal) -> Ideal:
        return Ideal(self.ring, [f * g for f in self.generators for g in other.generators],
                     pair_budget=self.pair_budget)

    def scaled(self, f: Poly) -> Ideal:
        return Ideal(self.ring, [f * g for g in self.generators], pair_budget=self.pair_budget)

    def reduced(self) -> Ideal:
        """Same ideal with the reduced basis as generating set."""
        out = Ideal(self.ring, self.gb.generators, prime=self.prime, pair_budget=self.pair_budget, _gb=self.gb)
        out._radical = self._radical
        return out

    def normal_form(self, f: Poly) -> Poly:
        return self.gb.normal_form(f)

    # -- serialization --------------------------------------------------------
    def to_strings(self) -> List[str]:
        """Canonical serialization: reduced basis, decreasing leading monomial."""
        return [str(g) for g in self.gb]

    def __str__(self):
        if self.is_zero():
            return "(0)"
        return "(" + ", ".join(self.to_strings()) + ")"

    __repr__ = __str__


class PrimeList(tuple):
    """Ordered, duplicate-free tuple of ideals flagged prime."""

    def __new__(cls, primes: Iterable[Ideal] = ()):
        seen = []
        for q in primes:
            if not q.is_known_prime():
                raise PreconditionError(f"{q} is not known to be prime")
            if q not in seen:
                seen.append(q)
        return super().__new__(cls, seen)


# -- operations ---------------------------------------------------------------

def _exps_gcd_div(g: Exps, m: Exps) -> Exps:
    return tuple([x - min(x, y) for x, y in zip(g, m)])


def intersect(I: Ideal, J: Ideal) -> Ideal:
    """I ∩ J: pairwise lcm for monomial ideals, otherwise t*I + (1-t)*J eliminated."""
    ring = I.ring
    if J.is_unit():
        return I
    if I.is_unit():
        return J
    if I.is_zero() or J.is_zero():
        return Ideal.zero(ring)
    if I.is_monomial and J.is_monomial:
        return Ideal.from_monomials(ring, [lcm_exps(a, b) for a in I.monomial_generators()
                                           for b in J.monomial_generators()])
    tname = "t"
    while tname in ring.names:
        tname += "_"
    big = PolyRing(ring.p, (tname,) + ring.names, MonomialOrder("grevlex", block=1))
    pos = list(range(1, ring.nvars + 1))
    t = big.var(0)
    gens = [t * g.embed(big, pos) for g in I.gb] + [(1 - t) * g.embed(big, pos) for g in J.gb]
    gb = groebner_basis(gens, big, I.pair_budget)
    keep = []
    for g in gb:
        if all(e[0] == 0 for e in g.terms):
            keep.append(Poly(ring, {e[1:]: c for e, c in g.terms.items()}))
    return Ideal(ring, keep, pair_budget=I.pair_budget)


def _exact_divide(f: Poly, g: Poly) -> Poly:
    """f / g for g dividing f exactly (multivariate long division)."""
    ring = f.ring
    q = ring.zero()
    r = f
    lm, lc = g.lead()
    inv = pow(lc, -1, ring.p)
    while r:
        m, c = r.lead()
        if not divides(lm, m):
            raise ArithmeticError(f"{g} does not divide {f}")
        shift = tuple(x - y for x, y in zip(m, lm))
        coef = (c * inv) % ring.p
        q = q + ring.monomial(shift, coef)
        r = r - g.mul_term(shift, coef)
    return q


def colon(I: Ideal, J: Ideal) -> Ideal:
    """(I : J) = {g : gJ ⊆ I}."""
    ring = I.ring
    if J.is_zero() or I.is_unit():
        return Ideal.unit(ring)
    if J.is_unit():
        return I
    if I.is_monomial and J.is_monomial:
        result = None
        for m in J.monomial_generators():
            part = Ideal.from_monomials(ring, [_exps_gcd_div(g, m) for g in I.monomial_generators()]) \
                if not I.is_zero() else Ideal.zero(ring)
            result = part if result is None else intersect(result, part)
        return result
    result = None
    for g in J.gb:
        inter = intersect(I, Ideal(ring, [g], pair_budget=I.pair_budget))
        part = Ideal(ring, [_exact_divide(h, g) for h in inter.gb], pair_budget=I.pair_budget)
        result = part if result is None else intersect(result, part)
    return result


def frobenius_power(I: Ideal, e: int) -> Ideal:
    """I^[p^e], generated by p^e-th powers of generators.

    Frobenius is flat on a polynomial ring, so raising the reduced basis of I
    gives the reduced basis of I^[p^e]; that basis is reused when I's basis is
    already known.
    """
    if e < 0:
        raise ValueError("Frobenius exponent must be non-negative")
    if e == 0:
        return I
    gb = None
    if I._gb is not None:
        gb = GroebnerBasis(I.ring, [g.frobenius(e) for g in I._gb])
    return Ideal(I.ring, [g.frobenius(e) for g in I.generators], pair_budget=I.pair_budget, _gb=gb)


def pth_root(J: Ideal, e: int = 1) -> Ideal:
    """Smallest K with J ⊆ K^[p^e].

    Each generator g is written as sum over mu of h_mu^q * mu (q = p^e), where
    mu runs through monomials with all exponents < q; the h_mu generate the
    answer.  Coefficients need no root extraction since c^p = c in F_p.
    """
    ring = J.ring
    p = ring.p ** e
    pieces = []
    for g in J.generators:
        buckets: dict = {}
        for e, c in g.terms.items():
            mu = tuple(x % p for x in e)
            buckets.setdefault(mu, {})[tuple(x // p for x in e)] = c
        pieces.extend(Poly(ring, d) for d in buckets.values())
    return Ideal(ring, pieces, pair_budget=J.pair_budget)


def minimal_primes_monomial(I: Ideal) -> PrimeList:
    """Minimal primes of a monomial ideal as minimal vertex covers of its support hypergraph."""
    ring = I.ring
    if not I.is_monomial:
        raise NotMonomialError(f"{I} is not a monomial ideal")
    if I.is_unit():
        return PrimeList()
    if I.is_zero():
        return PrimeList([Ideal.zero(ring)])
    edges = [frozenset(i for i, x in enumerate(m) if x) for m in I.monomial_generators()]
    covers: List[frozenset] = []
    n = ring.nvars
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            s = frozenset(subset)
            if any(c <= s for c in covers):
                continue
            if all(edge & s for edge in edges):
                covers.append(s)
    return PrimeList(Ideal.variables(ring, sorted(c)) for c in covers)


def radical_monomial(I: Ideal) -> Ideal:
    return Ideal.from_monomials(I.ring, [tuple(min(x, 1) for x in m) for m in I.monomial_generators()])


def prime_avoidance_element(a: Ideal, avoid: Sequence[Ideal], max_degree: int = 3,
                            budget: int = 200_000) -> Poly:
    """An element of ``a`` outside every ideal in ``avoid``.

    Candidates are F_p-combinations of a pool that starts as the reduced
    generators of ``a`` and grows by products of generators up to
    ``max_degree`` factors; combinations are tried by increasing support
    size in a fixed order, so the result is deterministic.
    """
    for q in avoid:
        if a.issubset(q):
            raise PreconditionError(f"{a} is contained in the avoided prime {q}")
    ring = a.ring
    gens = list(a.gb.generators)
    if not gens:
        raise PreconditionError("cannot avoid primes with the zero ideal")
    p = ring.p
    tried = 0
    seen = set()
    pool: List[Poly] = []
    for d in range(1, max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(len(gens)), d):
            prod = ring.one()
            for i in combo:
                prod = prod * gens[i]
            if prod not in seen:
                seen.add(prod)
                pool.append(prod)
        for k in range(1, len(pool) + 1):
            for subset in itertools.combinations(pool, k):
                for coeffs in itertools.product(range(1, p), repeat=k):
                    tried += 1
                    if tried > budget:
                        raise SearchExhaustedError(
                            f"prime avoidance search exceeded {budget} candidates; raise the budget or degree")
                    cand = ring.zero()
                    for c, g in zip(coeffs, subset):
                        cand = cand + g.scale(c)
                    if cand and not any(q.contains(cand) for q in avoid):
                        return cand
    raise SearchExhaustedError(f"no element of {a} avoids the given primes up to degree {max_degree}")


def has_positive_height(b: Ideal, minimal_primes_of_R: Sequence[Ideal]) -> bool:
    """True iff b is the unit ideal or lies in no minimal prime of R (b meets R°)."""
    if b.is_unit():
        return True
    return all(not b.issubset(q) for q in minimal_primes_of_R)
