"""Acceptance suite: ten numbered criteria, each returning (passed, detail).

``run_all`` prints one ``PASS``/``FAIL`` line per criterion.  All comparisons
are equalities of canonical forms (reduced Gröbner bases).
"""

from __future__ import annotations

import random
import sys
import time
from typing import Callable, Dict, List, Tuple

from .ffpoly import Poly, PolyRing
from .frobpure import RingPresentation, check_lattice_structure, special_ideal_lattice
from .idealkit import Ideal, frobenius_power, pth_root
from .skewmod import build_truncation, crosscheck_with_stight, graded_annihilator
from .stight import (MultSet, big_test_ideal, realize_as_s_test_ideal, s_test_ideal, test_ideal_chain,
                     tight_closure_membership)

FIXTURE_SECONDS = 60.0

FIXTURES = {
    "fp17_1": (2, "X,Y,Z", ["X*Y", "X*Z", "Y*Z"], False),
    "fp17_2": (2, "X,Y,Z,W", ["X*Y*Z", "X*Y*W", "X*Z*W", "Y*Z*W"], False),
    "fp17_3": (2, "X,Y,Z", ["X*Y", "Y*Z"], False),
    "fp17_4": (2, "X,Y,Z,W", ["X*Y", "Z*W"], False),
    "fp14a": (7, "X,Y,Z", ["X^3+Y^3+Z^3"], True),
}

_cache: Dict[str, tuple] = {}


def fixture(name: str, p: int | None = None):
    """(R, lattice) for a named fixture, optionally in another characteristic."""
    key = f"{name}@{p}"
    if key not in _cache:
        p0, names, gens, prime = FIXTURES[name]
        R = RingPresentation.from_strings(p or p0, names.split(","), gens, declared_prime=prime)
        _cache[key] = (R, special_ideal_lattice(R))
    return _cache[key]


def ideals(R: RingPresentation, *texts: str) -> List[Ideal]:
    """Parse ``"X,Y"`` style generator lists as ideals of R (the defining ideal added)."""
    out = []
    for t in texts:
        gens = [R.ring.parse(g) for g in t.split(",")] if t else []
        out.append((Ideal(R.ring, gens) + R.a).reduced())
    return out


def _same_set(got, want) -> bool:
    return sorted(map(str, got)) == sorted(map(str, want)) and len(set(map(str, got))) == len(got)


def _chain_ok(R, L, want_texts) -> Tuple[bool, str]:
    ch = test_ideal_chain(R, lattice=L)
    want = ideals(R, *want_texts)
    ok = len(ch.members) == len(want) and all(x == y for x, y in zip(ch.members, want))
    return ok, "chain " + " < ".join(map(str, ch.members))


def _primes_exact(name, want) -> Tuple[bool, str]:
    R, L = fixture(name)
    ok = _same_set(L.primes, ideals(R, *want))
    return ok, f"{len(L.primes)} primes: " + "; ".join(map(str, L.primes))


SIX = "X*Y,X*Z,X*W,Y*Z,Y*W,Z*W"


def criterion_1():
    R, L = fixture("fp17_1")
    ok1, d1 = _primes_exact("fp17_1", ["X,Y", "X,Z", "Y,Z", "X,Y,Z"])
    ok2, d2 = _chain_ok(R, L, ["", "X,Y,Z", "1"])
    return R.is_fpure and ok1 and ok2, f"F-pure={R.is_fpure} (u={R.u}); {d1}; {d2}"


def criterion_2():
    R, L = fixture("fp17_3")
    ok1, d1 = _primes_exact("fp17_3", ["X,Z", "Y", "X,Y,Z"])
    ok2, d2 = _chain_ok(R, L, ["", "X,Y,Z", "1"])
    return ok1 and ok2, f"{d1}; {d2}"


def _subset_and_chain(name, listed):
    R, L = fixture(name)
    want = ideals(R, *listed)
    missing = [w for w in want if not any(w == q for q in L.primes)]
    ok2, d2 = _chain_ok(R, L, ["", SIX, ",".join(R.ring.names), "1"])
    return not missing and ok2, f"{len(want)} listed primes, missing {len(missing)} of them; " \
                                f"{len(L.primes)} computed; {d2}"


def criterion_3():
    listed = ["X,Y", "X,Z", "X,W", "Y,Z", "Y,W", "Z,W", "X,Y,Z", "X,Y,W", "X,Z,W", "Y,Z,W", "X,Y,Z,W"]
    return _subset_and_chain("fp17_2", listed)


def criterion_4():
    listed = ["X,Z", "X,W", "Y,Z", "Y,W", "X,Y,Z", "X,Y,W", "X,Z,W", "Y,Z,W", "X,Y,Z,W"]
    return _subset_and_chain("fp17_4", listed)


def criterion_5():
    R, L = fixture("fp14a")
    ok1 = _same_set(L.primes, ideals(R, "", "X,Y,Z"))
    tau = big_test_ideal(L, R)
    ok2 = tau == ideals(R, "X,Y,Z")[0]
    return R.is_fpure and ok1 and ok2, f"F-pure={R.is_fpure} (u={R.u}); primes " + \
        "; ".join(map(str, L.primes)) + f"; big test ideal {tau}"


def criterion_6():
    total, bad = 0, []
    for name in FIXTURES:
        R, L = fixture(name)
        for b in L.members:
            total += 1
            S = realize_as_s_test_ideal(L, b, R, check=False)
            if s_test_ideal(L, S, R) != b:
                bad.append(f"{name}:{b}")
    return not bad, f"{total} members round-tripped, {len(bad)} failures {bad[:3]}"


def random_poly(ring: PolyRing, rng: random.Random, max_deg: int = 3, max_terms: int = 3) -> Poly:
    f = ring.zero()
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(1, max_deg)
        e = [0] * ring.nvars
        for _ in range(d):
            e[rng.randrange(ring.nvars)] += 1
        f = f + ring.monomial(tuple(e), rng.randrange(1, ring.p))
    return f


def frobenius_closure_trials(name: str, n_ideals: int = 50, n_elements: int = 20, N: int = 4,
                             seed: int = 0) -> Tuple[int, List[str]]:
    R, _ = fixture(name)
    rng = random.Random(f"{name}:{seed}")
    failures, count = [], 0
    made = 0
    while made < n_ideals:
        gens = [random_poly(R.ring, rng) for _ in range(rng.randint(1, 2))]
        a_test = (Ideal(R.ring, gens) + R.a).reduced()
        if a_test.is_unit():
            continue
        made += 1
        got = 0
        while got < n_elements:
            r = random_poly(R.ring, rng)
            if a_test.contains(r):
                continue
            got += 1
            count += 1
            v = tight_closure_membership(r, a_test, MultSet.one(), R, N=N)
            if v.status != "non-member" or not v.certified or v.level is None or v.level > N:
                failures.append(f"r={r} in {a_test}: {v.status}")
    return count, failures


def criterion_7():
    details, ok = [], True
    for name in FIXTURES:
        t = time.perf_counter()
        count, failures = frobenius_closure_trials(name)
        dt = time.perf_counter() - t
        ok &= not failures and dt < FIXTURE_SECONDS
        details.append(f"{name}: {count} trials, {len(failures)} failures, {dt:.1f}s")
    return ok, "; ".join(details)


def criterion_8():
    problems = []
    for name in FIXTURES:
        R, L = fixture(name)
        problems += [f"{name}: {msg}" for msg in check_lattice_structure(L, R)]
    for name, (p, names, gens, _) in FIXTURES.items():
        if p != 2 or not fixture(name)[0].a.is_monomial:
            continue
        L2, L3 = fixture(name)[1], fixture(name, 3)[1]
        s2 = sorted(b.to_strings().__str__() for b in L2.members)
        s3 = sorted(b.to_strings().__str__() for b in L3.members)
        if s2 != s3:
            problems.append(f"{name}: lattices differ between p=2 and p=3")
    return not problems, f"{len(problems)} problems {problems[:3]}"


def criterion_9():
    R, L = fixture("fp17_1")
    a_test = ideals(R, "X+Y")[0]
    X = R.ring.parse("X")
    v = tight_closure_membership(X, a_test, MultSet.rcirc(), R, N=4, lattice=L)
    ok1 = v.is_member and v.certificate == R.ring.parse("X+Y+Z")
    T = build_truncation(R, a_test, 4, 6)
    cc = crosscheck_with_stight(T, MultSet.rcirc(), R, L)
    ok2 = cc["agree"] and cc["classes_checked"] == R.p ** len(T.bases[0])
    return ok1 and ok2, (f"verdict {v.status} with certificate {v.certificate}; "
                         f"{cc['classes_checked']} classes, {len(cc['members'])} members, "
                         f"dim delta = {cc['delta_dimension']}, {len(cc['mismatches'])} mismatches")


# -- criterion 10: property suites -------------------------------------------

def _small_ring(p: int, rng: random.Random) -> PolyRing:
    return PolyRing(p, ("X", "Y", "Z")[:rng.choice((2, 3))])


def _random_ideal(ring, rng, max_deg=3, k=2) -> Ideal:
    return Ideal(ring, [random_poly(ring, rng, max_deg) for _ in range(rng.randint(1, k))])


def idealkit_properties(p: int, n: int, seed: int = 0) -> List[str]:
    """Galois connection I_1(J) ⊆ K ⟺ J ⊆ K^[p]; semilinearity I_1(f^p J) = f·I_1(J)."""
    rng = random.Random(f"idealkit:{p}:{seed}")
    bad = []
    for i in range(n):
        ring = _small_ring(p, rng)
        J = _random_ideal(ring, rng, max_deg=2 * p)
        K = _random_ideal(ring, rng, max_deg=2)
        root = pth_root(J)
        lhs = root.issubset(K)
        rhs = J.issubset(frobenius_power(K, 1))
        if lhs != rhs:
            bad.append(f"galois {J} {K}")
        if not J.issubset(frobenius_power(root, 1)):
            bad.append(f"unit {J}")
        if not pth_root(frobenius_power(K, 1)) == K.reduced():
            bad.append(f"counit {K}")
        f = random_poly(ring, rng, 2, 2)
        fJ = Ideal(ring, [f.frobenius(1) * g for g in J.generators])
        if pth_root(fJ) != Ideal(ring, [f * g for g in root.generators]):
            bad.append(f"semilinear {f} {J}")
        L = _random_ideal(ring, rng, max_deg=2 * p)
        if pth_root(J + L) != (root + pth_root(L)):
            bad.append(f"additive {J} {L}")
    return bad


def skewmod_properties(p: int, n: int, seed: int = 0) -> List[str]:
    """x is p-semilinear: x(r·h + g) = r^p·x(h) + x(g); and c ⊆ ann(h) ⟺ c·x^k h = 0 for k ≤ N."""
    rng = random.Random(f"skewmod:{p}:{seed}")
    bad = []
    names = ("X", "Y", "Z")
    rings = {}
    for i in range(n):
        case = i % 2
        key = (p, case)
        if key not in rings:
            gens = ["X*Y", "X*Z", "Y*Z"] if case == 0 else ["X*Y", "Y*Z"]
            R = RingPresentation.from_strings(p, names, gens)
            a_test = (Ideal(R.ring, [R.ring.parse("X+Y")]) + R.a).reduced()
            rings[key] = (R, build_truncation(R, a_test, 2, 4))
        R, T = rings[key]
        ring = R.ring
        h, g, r = (random_poly(ring, rng, 3, 3) for _ in range(3))
        lvl = rng.randrange(T.N)
        left = T.x(r * h + g, lvl)
        right = T.ideals[lvl + 1].normal_form(r.frobenius(1) * T.x(h, lvl) + T.x(g, lvl))
        if left != right:
            bad.append(f"semilinear {r} {h} {g}")
        c = _random_ideal(ring, rng, 2, 2)
        ann = graded_annihilator(T, [h]).levels[0]
        lhs = c.issubset(ann)
        rhs = all(T.ideals[k].contains(cg * h.frobenius(k)) for cg in c.generators for k in range(T.N + 1))
        if lhs != rhs:
            bad.append(f"galois {c} {h}")
    return bad


def criterion_10(n: int = 200):
    details, ok = [], True
    for p in (2, 3):
        b1 = idealkit_properties(p, n)
        b2 = skewmod_properties(p, n)
        ok &= not b1 and not b2
        details.append(f"p={p}: idealkit {n - len(b1)}/{n}, skewmod {n - len(b2)}/{n}")
    return ok, "; ".join(details)


CRITERIA: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = [
    ("1 coordinate axes: F-pure, lattice primes, chain", criterion_1),
    ("2 plane plus line: lattice primes, chain", criterion_2),
    ("3 planes in 4-space: chain, listed primes", criterion_3),
    ("4 two planes: chain, listed primes", criterion_4),
    ("5 Fermat cubic p=7: F-pure, primes {0, m}, big test ideal m", criterion_5),
    ("6 S-test ideal realization round-trip", criterion_6),
    ("7 trivial Frobenius closure for S = {1}", criterion_7),
    ("8 lattice structure and p-independence", criterion_8),
    ("9 stight / skewmod cross-check", criterion_9),
    ("10 Galois connection and semilinearity", criterion_10),
]


def run_all(verbose: bool = True, stream=None, only=None) -> List[Tuple[str, bool, str]]:
    stream = stream or sys.stdout
    results = []
    for label, fn in CRITERIA:
        if only is not None and int(label.split()[0]) not in only:
            continue
        t = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001 - a crash is a failed criterion
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t
        results.append((label, ok, detail))
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'} criterion {label} [{dt:.1f}s] {detail}", file=stream, flush=True)
    return results


if __name__ == "__main__":
    res = run_all()
    sys.exit(0 if all(ok for _, ok, _ in res) else 1)
