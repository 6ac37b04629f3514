"""F-purity certificates and the finite lattice of Frobenius-compatible ideals.

For R = A/a the Fedder module C = (a^[p] : a) describes every p^-1-linear
map R -> R.  An ideal b ⊇ a is *compatible* when C·b ⊆ b^[p] ("uniform"
mode, the default), or when u·b ⊆ b^[p] for one chosen u ("single" mode).
Compatible ideals are what the library uses for the special ideals of the
injective hull; they form a finite set closed under intersection.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import FalsifiedExpectation, PreconditionError, ResourceLimitError
from .ffpoly import Poly, PolyRing
from .groebner import DEFAULT_PAIR_BUDGET
from .idealkit import (Ideal, PrimeList, colon, frobenius_power, intersect,
                       minimal_primes_monomial, pth_root)

COMPLETION_NOTICE = ("complete local rings are proxied by graded polynomial presentations; "
                     "all data is homogeneous, so lattices and chains are unaffected by completion")

MODES = ("uniform", "single")


def compat_threads() -> int:
    try:
        return max(1, int(os.environ.get("CHARP_LAB_THREADS", "1")))
    except ValueError:
        return 1


class RingPresentation:
    """R = A/a with its maximal ideal m = (X_1..X_n) and, once certified, a splitting generator u."""

    def __init__(self, ring: PolyRing, a: Ideal, *, minimal_primes: Optional[Sequence[Ideal]] = None,
                 declared_primes: Sequence[Ideal] = (), seeds: Sequence[Ideal] = (),
                 check_radical: bool = True, certify: bool = True):
        self.ring = ring
        self.a = a.reduced()
        self.m = Ideal.maximal(ring)
        self.declared_primes = tuple(declared_primes)
        self.seeds = tuple(seeds)
        self._fedder: Optional[Ideal] = None
        if not self.a.issubset(self.m):
            raise PreconditionError(f"defining ideal {self.a} is not contained in the maximal ideal")
        for d in self.declared_primes:
            if d == self.a:
                self.a.prime = True
        if check_radical and self.a.is_radical is False:
            raise PreconditionError(f"defining ideal {self.a} is not radical")
        if minimal_primes is None:
            if self.a.is_known_prime():
                minimal_primes = [self.a]
            elif self.a.is_monomial:
                minimal_primes = minimal_primes_monomial(self.a)
            elif check_radical:
                raise PreconditionError("minimal primes of a non-monomial, non-prime defining ideal "
                                        "must be supplied")
            else:
                minimal_primes = []
        self.minimal_primes = PrimeList(minimal_primes)
        self.u: Optional[Poly] = fedder_certificate(self, check_radical=check_radical) if certify else None

    @classmethod
    def from_strings(cls, p: int, names: Sequence[str], gens: Sequence[str], *,
                     declared_prime: bool = False, pair_budget: int = DEFAULT_PAIR_BUDGET, **kw):
        ring = PolyRing(p, tuple(names))
        a = Ideal.parse(ring, gens, pair_budget=pair_budget, prime=True if declared_prime else None)
        declared = [a] if declared_prime else []
        return cls(ring, a, declared_primes=declared, **kw)

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def is_fpure(self) -> bool:
        return self.u is not None

    def ideal(self, gens: Iterable[str | Poly]) -> Ideal:
        """An R-ideal given by generators, returned as an A-ideal containing a."""
        polys = [g if isinstance(g, Poly) else self.ring.parse(g) for g in gens]
        return Ideal(self.ring, polys + list(self.a.generators), pair_budget=self.a.pair_budget).reduced()

    def fedder_module(self) -> Ideal:
        """(a^[p] : a)."""
        if self._fedder is None:
            self._fedder = colon(frobenius_power(self.a, 1), self.a)
        return self._fedder

    def splitting_generators(self, mode: str = "uniform", u: Optional[Poly] = None) -> List[Poly]:
        if u is not None:
            return [u]
        if mode == "single":
            if self.u is None:
                raise PreconditionError("ring has no splitting certificate")
            return [self.u]
        if mode != "uniform":
            raise ValueError(f"unknown compatibility mode {mode!r}")
        # generators of a^[p] act trivially on every b ⊇ a
        ap = frobenius_power(self.a, 1)
        return [g for g in self.fedder_module().gb if not ap.contains(g)]

    def quotient(self, c: Ideal, minimal_primes: Sequence[Ideal]) -> RingPresentation:
        """Presentation of R/c (c ⊇ a radical), with a fresh Fedder certificate."""
        declared = [d for d in self.declared_primes if d == c]
        return RingPresentation(self.ring, c, minimal_primes=minimal_primes, declared_primes=declared,
                                seeds=self.seeds)

    def __repr__(self):
        return f"RingPresentation({self.ring}, a={self.a})"


def fedder_certificate(R: RingPresentation, check_radical: bool = True) -> Optional[Poly]:
    """Some u ∈ (a^[p] : a) outside m^[p], or None when R is not F-pure.

    Candidates are the reduced colon generators taken modulo a^[p]; the one
    of least degree wins, ties going to the smaller leading monomial.
    """
    a = R.a
    if a.is_unit():
        raise PreconditionError("defining ideal must be proper")
    if check_radical and a.is_radical is False:
        raise PreconditionError(f"{a} is not radical")
    ap = frobenius_power(a, 1)
    mp = frobenius_power(R.m, 1)
    cands = []
    for g in R.fedder_module().gb:
        h = ap.normal_form(g)
        if h and not mp.contains(h):
            cands.append(h)
    if not cands:
        return None
    key = R.ring.key
    return min(cands, key=lambda h: (h.degree(), key(h.lm()), sorted(h.terms.items())))


def is_compatible(b: Ideal, R: RingPresentation, *, mode: str = "uniform", u: Optional[Poly] = None,
                  depth: int = 1) -> bool:
    """True iff every splitting generator v satisfies v·b ⊆ b^[p].

    ``depth`` > 1 also checks the maps of level e ≤ depth, i.e.
    (a^[p^e] : a)·b ⊆ b^[p^e] (uniform mode) or u^(1+p+..+p^(e-1))·b ⊆ b^[p^e].
    """
    if b.is_unit():
        return True
    if not R.a.issubset(b):
        raise PreconditionError(f"{b} does not contain the defining ideal")
    for e in range(1, depth + 1):
        if e == 1:
            gens = R.splitting_generators(mode, u)
        elif u is not None or mode == "single":
            v = u if u is not None else R.u
            gens = [v ** sum(R.p ** i for i in range(e))]
        else:
            gens = [g for g in colon(frobenius_power(R.a, e), R.a).gb]
        bq = frobenius_power(b, e)
        if not all(bq.contains(v * g) for v in gens for g in b.gb):
            return False
    return True


def star_closure(seed: Ideal, R: RingPresentation, *, mode: str = "uniform", u: Optional[Poly] = None,
                 budget: int = 64) -> Ideal:
    """Smallest compatible ideal containing seed + a.

    Iterates b -> b + pth_root(C·b) until the reduced basis stops changing.
    """
    gens = R.splitting_generators(mode, u)
    b = (seed + R.a).reduced()
    for _ in range(budget):
        if b.is_unit():
            return b
        image = Ideal(R.ring, [v * g for v in gens for g in b.gb], pair_budget=b.pair_budget)
        nb = (b + pth_root(image)).reduced()
        if nb == b:
            return b
        b = nb
    raise ResourceLimitError(f"star closure did not stabilize within {budget} steps")


def _ideal_sort_key(I: Ideal):
    strs = I.to_strings()
    return (len(strs), [len(s) for s in strs], strs)


@dataclass
class SpecialIdealLattice:
    """Compatible ideals of R (as A-ideals ⊇ a), their prime members and the prime poset."""

    members: List[Ideal]
    primes: PrimeList
    hasse_edges: List[Tuple[int, int]]
    u: Optional[Poly]
    mode: str = "uniform"
    strategy: str = "monomial"
    candidate_basis: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def contains(self, b: Ideal) -> bool:
        return any(b == m for m in self.members)

    def find(self, b: Ideal) -> Ideal:
        for m in self.members:
            if m == b:
                return m
        raise KeyError(str(b))

    def minimal_primes_of(self, b: Ideal) -> List[Ideal]:
        """Minimal prime members containing b (its associated primes when b is a member)."""
        over = [q for q in self.primes if b.issubset(q)]
        return [q for q in over if not any(r.issubset(q) and r != q for r in over)]

    def to_json(self) -> dict:
        prime_strs = [ideal_to_string(q) for q in self.primes]
        return {
            "primes": prime_strs,
            "members": [ideal_to_string(m) for m in self.members],
            "hasse_edges": [[prime_strs[i], prime_strs[j]] for i, j in self.hasse_edges],
            "u": str(self.u) if self.u is not None else None,
            "mode": self.mode,
            "strategy": self.strategy,
        }


def ideal_to_string(I: Ideal) -> str:
    return str(I)


def _hasse(primes: Sequence[Ideal]) -> List[Tuple[int, int]]:
    n = len(primes)
    below = [[i != j and primes[i].issubset(primes[j]) for j in range(n)] for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if below[i][j] and not any(below[i][k] and below[k][j] for k in range(n)):
                edges.append((i, j))
    return edges


def _close(primes: Sequence[Ideal], extra: Sequence[Ideal], ring: PolyRing) -> List[Ideal]:
    found: Dict[tuple, Ideal] = {}
    for I in list(primes) + list(extra) + [Ideal.unit(ring)]:
        found.setdefault(I.key(), I)
    frontier = list(found.values())
    while frontier:
        new = []
        for I in frontier:
            for q in primes:
                J = intersect(I, q).reduced()
                if J.key() not in found:
                    found[J.key()] = J
                    new.append(J)
        frontier = new
    return sorted(found.values(), key=_ideal_sort_key)


def _check_many(cands: List[Ideal], R: RingPresentation, mode, u, depth) -> List[bool]:
    threads = compat_threads()
    if threads > 1 and len(cands) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda b: is_compatible(b, R, mode=mode, u=u, depth=depth), cands))
    return [is_compatible(b, R, mode=mode, u=u, depth=depth) for b in cands]


def special_ideal_lattice(R: RingPresentation, *, mode: str = "uniform", u: Optional[Poly] = None,
                          depth: int = 1, seeds: Sequence[Ideal] = ()) -> SpecialIdealLattice:
    """All compatible ideals of an F-pure R.

    Monomial a: every variable-generated prime over a is tested, then the set
    is closed under intersection.  Otherwise primes are discovered from the
    minimal primes of R, m, and star closures of variables and seeds; the
    examined seeds are listed in ``candidate_basis`` and a warning states
    that the result is complete only relative to them.
    """
    if mode == "single" and u is None and R.u is None:
        raise PreconditionError("R has no Fedder certificate; not certified F-pure")
    if u is None and not R.is_fpure:
        raise PreconditionError("R is not certified F-pure")
    ring = R.ring
    warnings: List[str] = []
    if R.a.is_monomial:
        strategy = "monomial"
        cands = []
        for size in range(0, ring.nvars + 1):
            for subset in itertools.combinations(range(ring.nvars), size):
                P = Ideal.variables(ring, subset) if subset else Ideal.zero(ring)
                if R.a.issubset(P):
                    cands.append(P)
        flags = _check_many(cands, R, mode, u, depth)
        primes = [P for P, ok in zip(cands, flags) if ok]
        basis = [ideal_to_string(P) for P in cands]
    else:
        strategy = "discovery"
        primes, basis, warnings = _discover(R, mode, u, depth, list(seeds) + list(R.seeds))
    primes = sorted(primes, key=_ideal_sort_key)
    for q in R.minimal_primes:
        if not any(q == P for P in primes):
            warnings.append(f"minimal prime {q} of R is not compatible")
    members = _close(primes, [R.a], ring)
    return SpecialIdealLattice(members=members, primes=PrimeList(primes), hasse_edges=_hasse(primes),
                               u=u if u is not None else R.u, mode="single" if u is not None else mode,
                               strategy=strategy, candidate_basis=basis, warnings=warnings)


def _discover(R: RingPresentation, mode, u, depth, seeds: List[Ideal]):
    ring = R.ring
    primes: Dict[tuple, Ideal] = {}
    warnings: List[str] = []
    examined: List[str] = []
    seen_seeds = set()
    queue: List[Ideal] = list(R.minimal_primes) + [R.m]
    queue += [Ideal(ring, [x]) for x in ring.gens()] + seeds

    def consider(b: Ideal):
        if b.is_unit():
            return
        if b.is_known_prime() or any(b == d for d in R.declared_primes):
            if b.key() not in primes and is_compatible(b, R, mode=mode, u=u, depth=depth):
                b.prime = True
                primes[b.key()] = b
                for i, x in enumerate(ring.gens()):
                    if not b.contains(x):
                        queue.append(b + Ideal(ring, [x]))
            return
        if b.is_monomial:
            for q in minimal_primes_monomial(b):
                consider((q + R.a).reduced())
            return
        warnings.append(f"compatible ideal {b} could not be split into prime components")

    while queue:
        s = (queue.pop(0) + R.a).reduced()
        if s.key() in seen_seeds:
            continue
        seen_seeds.add(s.key())
        examined.append(ideal_to_string(s))
        consider(star_closure(s, R, mode=mode, u=u))
        if s.is_known_prime() or any(s == d for d in R.declared_primes):
            consider(s)
    warnings.append("discovery strategy: lattice is complete only relative to the examined seeds "
                    f"({len(examined)} examined)")
    return list(primes.values()), examined, warnings


def lattice_diff(L1: SpecialIdealLattice, L2: SpecialIdealLattice) -> dict:
    """Members and primes present in exactly one of two lattices."""
    def strs(xs):
        return {ideal_to_string(x) for x in xs}
    return {
        "primes_only_first": sorted(strs(L1.primes) - strs(L2.primes)),
        "primes_only_second": sorted(strs(L2.primes) - strs(L1.primes)),
        "members_only_first": sorted(strs(L1.members) - strs(L2.members)),
        "members_only_second": sorted(strs(L2.members) - strs(L1.members)),
    }


def check_lattice_structure(L: SpecialIdealLattice, R: RingPresentation) -> List[str]:
    """Violations of the structural invariants (empty list when all hold)."""
    problems = []
    if not L.contains(R.a):
        problems.append("defining ideal missing from lattice")
    if not any(m.is_unit() for m in L.members):
        problems.append("unit ideal missing from lattice")
    for m in L.members:
        if m.is_monomial and m.is_radical is False:
            problems.append(f"member {m} is not radical")
        if m.is_unit():
            continue
        over = [q for q in L.primes if m.issubset(q)]
        inter = Ideal.unit(R.ring)
        for q in over:
            inter = intersect(inter, q)
        if inter != m:
            problems.append(f"member {m} is not the intersection of the prime members containing it")
    keys = {m.key() for m in L.members}
    for i, x in enumerate(L.members):
        for y in L.members[i + 1:]:
            if intersect(x, y).key() not in keys:
                problems.append(f"{x} ∩ {y} is not a member")
    return problems


def require_fpure(R: RingPresentation):
    if not R.is_fpure:
        raise FalsifiedExpectation(f"no Fedder certificate for {R.a}: ring is not F-pure")
