"""Finite truncations of Φ(R/a_test) = ⊕_n R/(a_test^[p^n] + a) with the x-map h ↦ h^p.

Level n elements are normal forms modulo the level ideal, restricted to the
span of standard monomials of degree ≤ D.  Over F_p the maps h ↦ s·h^(p^k)
are F_p-linear on that span, so every element set computed here is an
F_p-subspace and is found by Gaussian elimination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence

from .errors import ResourceLimitError
from .ffpoly import Exps, Poly
from .frobpure import RingPresentation, SpecialIdealLattice, special_ideal_lattice
from .groebner import divides
from .idealkit import Ideal, colon, frobenius_power, intersect
from .stight import MultSet, s_test_element, tight_closure_membership

DEFAULT_LEVELS = 4
DEFAULT_DEGREE_CAP = 6


def _rref(rows: List[List[int]], p: int) -> List[List[int]]:
    """Reduced row echelon form over F_p (rows are modified copies)."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    ncols = len(rows[0])
    out: List[List[int]] = []
    col = 0
    for col in range(ncols):
        piv = next((i for i, r in enumerate(rows) if r[col] % p), None)
        if piv is None:
            continue
        r = rows.pop(piv)
        inv = pow(r[col], -1, p)
        r = [(x * inv) % p for x in r]
        for k, other in enumerate(out):
            if other[col]:
                c = other[col]
                out[k] = [(x - c * y) % p for x, y in zip(other, r)]
        for k, other in enumerate(rows):
            if other[col]:
                c = other[col]
                rows[k] = [(x - c * y) % p for x, y in zip(other, r)]
        rows = [x for x in rows if any(x)]
        out.append(r)
    return out


def _nullspace(images: Sequence[Dict[tuple, int]], p: int) -> List[List[int]]:
    """Kernel of the linear map sending basis vector i to ``images[i]`` (sparse column)."""
    n = len(images)
    row_keys = sorted({k for img in images for k in img})
    if not row_keys:
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    rows = [[img.get(k, 0) % p for img in images] for k in row_keys]
    red = _rref(rows, p)
    pivots = {}
    for r in red:
        c = next(i for i, x in enumerate(r) if x)
        pivots[c] = r
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for c, r in pivots.items():
            v[c] = (-r[f]) % p
        basis.append(v)
    return basis


@dataclass
class ElementSpace:
    """F_p-subspace of a truncated level, given by a basis of coordinate vectors."""

    level: int
    monomials: List[Exps]
    vectors: List[List[int]]
    truncation: "SkewTruncation"

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def polys(self) -> List[Poly]:
        ring = self.truncation.R.ring
        return [Poly.from_terms(ring, [(m, c) for m, c in zip(self.monomials, v) if c]) for v in self.vectors]

    def elements(self, limit: int = 1 << 16) -> Iterator[Poly]:
        """Every element of the space (p^dim of them)."""
        p = self.truncation.R.p
        if p ** self.dim > limit:
            raise ResourceLimitError(f"space of size {p}^{self.dim} exceeds enumeration limit")
        ring = self.truncation.R.ring
        for coeffs in itertools.product(range(p), repeat=self.dim):
            d: Dict[Exps, int] = {}
            for c, v in zip(coeffs, self.vectors):
                if c:
                    for m, x in zip(self.monomials, v):
                        if x:
                            d[m] = (d.get(m, 0) + c * x) % p
            yield Poly(ring, {m: x for m, x in d.items() if x})

    def contains(self, h: Poly) -> bool:
        """Membership of the class of h (h is first reduced at this level)."""
        h = self.truncation.ideals[self.level].normal_form(h)
        index = {m: i for i, m in enumerate(self.monomials)}
        if any(m not in index for m in h.terms):
            return False
        target = [0] * len(self.monomials)
        for m, c in h.terms.items():
            target[index[m]] = c
        p = self.truncation.R.p
        return len(_rref(self.vectors + [target], p)) == len(_rref(self.vectors, p))


class SkewTruncation:
    """Levels 0..N of Φ(R/a_test), each with its standard monomials of degree ≤ D."""

    def __init__(self, R: RingPresentation, a_test: Ideal, N: int, D: int, ideals: List[Ideal],
                 bases: List[List[Exps]]):
        self.R = R
        self.a_test = a_test
        self.N = N
        self.D = D
        self.ideals = ideals
        self.bases = bases

    def x(self, h: Poly, n: int, k: int = 1) -> Poly:
        """x^k applied to the level-n class of h, as a normal form at level n + k."""
        if n + k > self.N:
            raise ValueError(f"level {n + k} is beyond the truncation")
        h = self.ideals[n].normal_form(h)
        for j in range(n + 1, n + k + 1):
            h = self.ideals[j].normal_form(h.frobenius(1))
        return h

    def is_zero_module(self) -> bool:
        return all(not b for b in self.bases)


def build_truncation(R: RingPresentation, a_test: Ideal, N: int = DEFAULT_LEVELS, D: int = DEFAULT_DEGREE_CAP,
                     size_budget: int = 20_000) -> SkewTruncation:
    """Materialize level ideals a_test^[p^n] + a and their degree-≤D standard monomials."""
    a_test = (a_test + R.a).reduced()
    ring = R.ring
    monos = [e for d in range(D + 1) for e in _monomials_of_degree(ring.nvars, d)]
    ideals, bases = [], []
    total = 0
    for n in range(N + 1):
        L = (frobenius_power(a_test, n) + R.a).reduced()
        lms = L.gb.leading_monomials()
        basis = [e for e in monos if not any(divides(m, e) for m in lms)]
        total += len(basis)
        if total > size_budget:
            raise ResourceLimitError(f"truncation exceeds {size_budget} basis elements")
        ideals.append(L)
        bases.append(basis)
    return SkewTruncation(R, a_test, N, D, ideals, bases)


def _monomials_of_degree(n: int, d: int) -> Iterator[Exps]:
    if n == 0:
        if d == 0:
            yield ()
        return
    for first in range(d, -1, -1):
        for rest in _monomials_of_degree(n - 1, d - first):
            yield (first,) + rest


def _kernel(T: SkewTruncation, level: int, maps: Sequence[tuple]) -> ElementSpace:
    """Common kernel of h ↦ s·h^(p^k) at level + k, for (s, k) in maps."""
    basis = T.bases[level]
    images = []
    for mu in basis:
        col: Dict[tuple, int] = {}
        for idx, (s, k) in enumerate(maps):
            target = level + k
            h = T.R.ring.monomial(mu)
            img = T.ideals[target].normal_form(s * T.x(h, level, k) if k else s * h)
            for m, c in img.terms.items():
                col[(idx, m)] = c
        images.append(col)
    return ElementSpace(level, list(basis), _nullspace(images, T.R.p), T)


def gamma_x(T: SkewTruncation) -> List[ElementSpace]:
    """Per level n, the elements h with x^k h = 0 for some k ≤ N - n (that is, k = N - n)."""
    one = T.R.ring.one()
    return [_kernel(T, n, [(one, T.N - n)]) for n in range(T.N + 1)]


@dataclass
class DeltaResult:
    space: ElementSpace
    certificate: Poly
    start_level: int


def delta_s_truncated(T: SkewTruncation, S: MultSet, R: RingPresentation,
                      lattice: Optional[SpecialIdealLattice] = None) -> DeltaResult:
    """Level-0 elements h with s·x^n h = 0 for n0 ≤ n ≤ N, up to the bound N.

    An S-test element must kill at every level, so for prime-complement sets
    n0 = 0.  For {1} and powers sets the union over n0 ≤ N is the condition
    at n = N alone.
    """
    S = S.resolve(R)
    if S.has_test_elements:
        if lattice is None:
            lattice = special_ideal_lattice(R)
        s = s_test_element(lattice, S, R)
        return DeltaResult(_kernel(T, 0, [(s, n) for n in range(T.N + 1)]), s, 0)
    s = R.ring.one() if S.kind == "one" else S.element
    return DeltaResult(_kernel(T, 0, [(s, T.N)]), s, T.N)


@dataclass
class GradedAnnihilatorDatum:
    levels: List[Ideal]

    def is_ascending(self) -> bool:
        return all(x.issubset(y) for x, y in zip(self.levels, self.levels[1:]))

    def is_constant(self) -> bool:
        return all(x == self.levels[0] for x in self.levels)

    def to_json(self) -> List[str]:
        return [str(b) for b in self.levels]


def graded_annihilator(T: SkewTruncation, elements: Sequence[Poly]) -> GradedAnnihilatorDatum:
    """Per-level annihilators of the R[x,f]-submodule generated by level-0 ``elements``.

    b_n = {r : r·x^n kills the submodule} = ∩_e ∩_(k ≤ N-n) (L_(n+k) : e^(p^(n+k))),
    cut off at the truncation depth.
    """
    ring = T.R.ring
    gens = [T.ideals[0].normal_form(e) for e in elements]
    gens = [e for e in gens if e]
    levels = []
    for n in range(T.N + 1):
        b = Ideal.unit(ring)
        for e in gens:
            for k in range(T.N - n + 1):
                j = n + k
                eq = e.frobenius(j)
                b = intersect(b, colon(T.ideals[j], Ideal(ring, [eq])))
        levels.append(b.reduced())
    return GradedAnnihilatorDatum(levels)


def full_level(T: SkewTruncation, level: int = 0) -> ElementSpace:
    """The whole truncated level as an element space."""
    n = len(T.bases[level])
    return ElementSpace(level, list(T.bases[level]), [[int(i == j) for i in range(n)] for j in range(n)], T)


def crosscheck_with_stight(T: SkewTruncation, S: MultSet, R: RingPresentation,
                           lattice: Optional[SpecialIdealLattice] = None, limit: int = 1 << 12) -> dict:
    """Compare Δ^S on the truncation with per-element membership verdicts at the same bound N.

    A class counts as a stight member unless it is refuted at a level ≤ N;
    every level-0 class of degree ≤ D is tried.
    """
    S = S.resolve(R)
    if S.has_test_elements and lattice is None:
        lattice = special_ideal_lattice(R)
    delta = delta_s_truncated(T, S, R, lattice)
    members, mismatches = [], []
    count = 0
    for h in full_level(T).elements(limit):
        count += 1
        v = tight_closure_membership(h, T.a_test, S, R, N=T.N, lattice=lattice)
        inside = not (v.status == "non-member" and v.level is not None and v.level <= T.N)
        if inside:
            members.append(str(h))
        if inside != delta.space.contains(h):
            mismatches.append(str(h))
    return {"a_test": str(T.a_test), "S": S.describe(), "levels": T.N, "degree_cap": T.D,
            "certificate": str(delta.certificate), "delta_dimension": delta.space.dim,
            "delta_basis": [str(g) for g in delta.space.polys()], "classes_checked": count,
            "members": sorted(members), "mismatches": mismatches, "agree": not mismatches}
