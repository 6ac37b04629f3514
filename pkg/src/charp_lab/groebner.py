"""Buchberger's algorithm over F_p with normal-strategy pair selection.

Pairs are pruned with the Gebauer-Moeller update (coprime leading monomials
and the chain criterion).  Ideals generated by monomials never enter
Buchberger: their reduced basis is the set of minimal generators.
"""

from __future__ import annotations

import heapq
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import ResourceLimitError
from .ffpoly import Exps, Poly, PolyRing

DEFAULT_PAIR_BUDGET = 10**5


def divides(a: Exps, b: Exps) -> bool:
    return all(x <= y for x, y in zip(a, b))


def lcm_exps(a: Exps, b: Exps) -> Exps:
    return tuple([x if x > y else y for x, y in zip(a, b)])


def coprime(a: Exps, b: Exps) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def minimal_monomials(monos: Iterable[Exps]) -> List[Exps]:
    """Minimal elements under divisibility, deduplicated."""
    out: List[Exps] = []
    for m in sorted(set(monos), key=sum):
        if not any(divides(g, m) for g in out):
            out.append(m)
    return out


def _reduce(terms: Dict[Exps, int], basis: Sequence[Tuple[Exps, Dict[Exps, int]]],
            ring: PolyRing) -> Dict[Exps, int]:
    """Fully reduce ``terms`` by monic ``basis`` entries (lm, terms)."""
    if not terms or not basis:
        return dict(terms)
    p = ring.p
    key = ring.key
    f = dict(terms)
    heap = [tuple(-v for v in key(m)) + (m,) for m in f]
    heapq.heapify(heap)
    rem: Dict[Exps, int] = {}
    while heap:
        m = heapq.heappop(heap)[-1]
        c = f.pop(m, 0)
        if not c:
            continue
        for lm, g in basis:
            if divides(lm, m):
                shift = [x - y for x, y in zip(m, lm)]
                for e, gc in g.items():
                    t = tuple([a + b for a, b in zip(e, shift)])
                    if t == m:
                        continue
                    old = f.get(t)
                    v = ((old or 0) - c * gc) % p
                    if v:
                        f[t] = v
                        if old is None:
                            heapq.heappush(heap, tuple(-w for w in key(t)) + (t,))
                    elif old is not None:
                        del f[t]
                break
        else:
            rem[m] = c
    return rem


class GroebnerBasis:
    """Reduced Groebner basis: monic generators sorted by decreasing leading monomial."""

    def __init__(self, ring: PolyRing, generators: Sequence[Poly], reduced: bool = True):
        self.ring = ring
        self.generators = tuple(generators)
        self.reduced = reduced
        self._table = [(g.lm(), g.terms) for g in self.generators]
        self.is_monomial = all(len(g) == 1 for g in self.generators)

    @property
    def order(self):
        return self.ring.order

    def leading_monomials(self) -> List[Exps]:
        return [lm for lm, _ in self._table]

    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant()

    def is_zero(self) -> bool:
        return not self.generators

    def normal_form(self, g: Poly) -> Poly:
        if g.ring != self.ring:
            raise ValueError("ring mismatch in normal_form")
        if self.is_monomial:
            lms = self.leading_monomials()
            return Poly(self.ring, {e: c for e, c in g.terms.items()
                                    if not any(divides(m, e) for m in lms)})
        return Poly(self.ring, _reduce(g.terms, self._table, self.ring))

    def contains(self, g: Poly) -> bool:
        if self.is_monomial:
            lms = self.leading_monomials()
            return all(any(divides(m, e) for m in lms) for e in g.terms)
        return not self.normal_form(g)

    def key(self) -> tuple:
        """Hashable canonical identifier of the ideal (for this ring/order)."""
        return tuple(tuple(sorted(g.terms.items())) for g in self.generators)

    def __eq__(self, other):
        return isinstance(other, GroebnerBasis) and self.ring == other.ring and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __repr__(self):
        return "GroebnerBasis([" + ", ".join(str(g) for g in self.generators) + "])"


def _sort_desc(ring: PolyRing, polys: Iterable[Poly]) -> List[Poly]:
    return sorted(polys, key=lambda g: ring.key(g.lm()), reverse=True)


def _interreduce(ring: PolyRing, polys: List[Poly]) -> List[Poly]:
    lms = [g.lm() for g in polys]
    keep = []
    for i, g in enumerate(polys):
        if not any(j != i and divides(lms[j], lms[i]) and (lms[j] != lms[i] or j < i)
                   for j in range(len(polys))):
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = [(h.lm(), h.terms) for j, h in enumerate(keep) if j != i]
        lm, lc = g.lead()
        tail = {e: c for e, c in g.terms.items() if e != lm}
        red = _reduce(tail, others, ring)
        red[lm] = lc
        out.append(Poly(ring, red).monic())
    return _sort_desc(ring, out)


def groebner_basis(gens: Iterable[Poly], ring: Optional[PolyRing] = None,
                   pair_budget: int = DEFAULT_PAIR_BUDGET) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Raises :class:`ResourceLimitError` once more than ``pair_budget``
    S-pairs have been processed.
    """
    gens = [g for g in gens if g]
    if ring is None:
        if not gens:
            raise ValueError("ring required for an empty generator list")
        ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators live in different rings")
    if not gens:
        return GroebnerBasis(ring, [])
    if any(g.is_constant() for g in gens):
        return GroebnerBasis(ring, [ring.one()])
    if all(len(g) == 1 for g in gens):
        mins = minimal_monomials(g.lm() for g in gens)
        return GroebnerBasis(ring, _sort_desc(ring, (ring.monomial(m) for m in mins)))
    return GroebnerBasis(ring, _buchberger(ring, gens, pair_budget))


def _buchberger(ring: PolyRing, gens: List[Poly], budget: int) -> List[Poly]:
    key = ring.key
    p = ring.p
    # canonical input order so the run (and budget use) is input-order independent
    work = sorted({g.monic() for g in gens}, key=lambda g: (key(g.lm()), sorted(g.terms.items())))
    polys: List[Poly] = []
    active: List[int] = []
    pairs: Dict[Tuple[int, int], Exps] = {}

    def table():
        return [(polys[i].lm(), polys[i].terms) for i in active]

    def update(h: int):
        nonlocal active, pairs
        lh = polys[h].lm()
        cands = [(g, lcm_exps(lh, polys[g].lm())) for g in active]
        kept: List[Tuple[int, Exps]] = []
        while cands:
            g, l = cands.pop(0)
            if coprime(lh, polys[g].lm()) or not (
                    any(divides(l2, l) for _, l2 in cands) or any(divides(l2, l) for _, l2 in kept)):
                kept.append((g, l))
        new_pairs = {}
        for (i, j), l in pairs.items():
            if divides(lh, l) and lcm_exps(polys[i].lm(), lh) != l and lcm_exps(polys[j].lm(), lh) != l:
                continue
            new_pairs[(i, j)] = l
        for g, l in kept:
            if not coprime(lh, polys[g].lm()):
                new_pairs[(g, h)] = l
        pairs = new_pairs
        active = [g for g in active if not divides(lh, polys[g].lm())] + [h]

    for g in work:
        r = _reduce(g.terms, table(), ring)
        if not r:
            continue
        h = Poly(ring, r).monic()
        if h.is_constant():
            return [ring.one()]
        polys.append(h)
        update(len(polys) - 1)

    processed = 0
    while pairs:
        (i, j), l = min(pairs.items(), key=lambda kv: (sum(kv[1]), key(kv[1]), kv[0]))
        del pairs[(i, j)]
        processed += 1
        if processed > budget:
            raise ResourceLimitError(f"Groebner pair budget of {budget} exceeded")
        f, g = polys[i], polys[j]
        sf = [a - b for a, b in zip(l, f.lm())]
        sg = [a - b for a, b in zip(l, g.lm())]
        s: Dict[Exps, int] = {}
        for e, c in f.terms.items():
            t = tuple([a + b for a, b in zip(e, sf)])
            s[t] = c
        for e, c in g.terms.items():
            t = tuple([a + b for a, b in zip(e, sg)])
            v = (s.get(t, 0) - c) % p
            if v:
                s[t] = v
            else:
                s.pop(t, None)
        r = _reduce(s, table(), ring)
        if not r:
            continue
        h = Poly(ring, r).monic()
        if h.is_constant():
            return [ring.one()]
        polys.append(h)
        update(len(polys) - 1)

    return _interreduce(ring, [polys[i] for i in active])


def normal_form(g: Poly, basis: GroebnerBasis) -> Poly:
    """Unique remainder of ``g`` modulo a reduced Groebner basis."""
    return basis.normal_form(g)


def ideal_member(g: Poly, gens: Iterable[Poly] | GroebnerBasis,
                 pair_budget: int = DEFAULT_PAIR_BUDGET) -> bool:
    if isinstance(gens, GroebnerBasis):
        return gens.contains(g)
    return groebner_basis(gens, g.ring, pair_budget).contains(g)
