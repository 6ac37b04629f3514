"""Scenario files: a ring presentation plus an ordered task list.

Format (one ``key: value`` per line, ``#`` starts a comment)::

    characteristic: 2
    variables: X, Y, Z
    ideal: X*Y, X*Z, Y*Z
    declared-prime: no                 # optional; yes if the defining ideal is prime
    minimal-primes: (X,Y); (X,Z)       # optional; needed for non-monomial, non-prime ideals
    seeds: (X+Y)                       # optional extra seeds for lattice discovery
    description: free text             # optional

    [task chain]
    expect: (0); (X,Y,Z); (1)

Ideal lists are separated by ``;``; an ideal is ``(g1, g2, ...)``, ``(0)`` or
``(1)``.  Ideals named inside tasks are ideals of R, so the defining ideal is
added to them: ``(0)`` denotes a itself.

Task kinds and their keys (every key is optional unless noted):

    fpure-check          expect: true|false
    special-ideals       mode: uniform|single, alt-u: <poly>, expect-primes, expect-primes-include,
                         expect-member-count
    s-test-ideal         S (required), expect
    big-test-ideal       expect
    realize              target (required), expect
    tight-closure        r (required), a-test (required), S, levels, expect, expect-certificate
    chain                max-steps, expect
    skewmod-crosscheck   a-test (required), S, levels, degree-cap, expect: agree

``S`` is one of ``one``, ``rcirc``, ``complement <ideal list>``, ``powers <poly>``.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from . import __version__
from .errors import CharpLabError, FalsifiedExpectation, PolynomialSyntaxError, UnknownVariableError
from .ffpoly import MonomialOrder, Poly, PolyRing
from .frobpure import (COMPLETION_NOTICE, RingPresentation, SpecialIdealLattice, lattice_diff,
                       special_ideal_lattice)
from .groebner import DEFAULT_PAIR_BUDGET
from .idealkit import Ideal
from .skewmod import DEFAULT_DEGREE_CAP, DEFAULT_LEVELS, build_truncation, crosscheck_with_stight
from .stight import (DEFAULT_LEVELS as TC_LEVELS, MultSet, realize_as_s_test_ideal,
                     s_test_element, s_test_ideal, test_ideal_chain, tight_closure_membership)

HEADER_KEYS = {"characteristic", "variables", "ideal", "declared-prime", "minimal-primes", "seeds",
               "order", "description"}
TASK_KEYS = {
    "fpure-check": {"expect"},
    "special-ideals": {"mode", "alt-u", "expect-primes", "expect-primes-include", "expect-member-count"},
    "s-test-ideal": {"S", "expect"},
    "big-test-ideal": {"expect"},
    "realize": {"target", "expect"},
    "tight-closure": {"r", "a-test", "S", "levels", "expect", "expect-certificate"},
    "chain": {"max-steps", "expect"},
    "skewmod-crosscheck": {"a-test", "S", "levels", "degree-cap", "expect"},
}
REQUIRED_TASK_KEYS = {"s-test-ideal": {"S"}, "realize": {"target"}, "tight-closure": {"r", "a-test"},
                      "skewmod-crosscheck": {"a-test"}}


class ScenarioError(CharpLabError):
    def __init__(self, message: str, line: int, column: int = 1, path: str = "<scenario>"):
        self.line = line
        self.column = column
        super().__init__(f"{path}:{line}:{column}: {message}")


@dataclass
class Entry:
    value: str
    line: int
    column: int


@dataclass
class Task:
    kind: str
    line: int
    params: Dict[str, Entry] = field(default_factory=dict)


@dataclass
class Scenario:
    header: Dict[str, Entry]
    tasks: List[Task]
    path: str = "<scenario>"


def parse_scenario(text: str, path: str = "<scenario>") -> Scenario:
    header: Dict[str, Entry] = {}
    tasks: List[Task] = []
    current: Optional[Task] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        stripped = line.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ScenarioError("unterminated section header", lineno, indent + 1, path)
            inner = stripped[1:-1].split()
            if len(inner) != 2 or inner[0] != "task":
                raise ScenarioError(f"expected '[task <kind>]', got {stripped!r}", lineno, indent + 1, path)
            if inner[1] not in TASK_KEYS:
                raise ScenarioError(f"unknown task kind {inner[1]!r}", lineno, indent + 1 + stripped.index(inner[1]),
                                    path)
            current = Task(inner[1], lineno)
            tasks.append(current)
            continue
        if ":" not in stripped:
            raise ScenarioError("expected 'key: value'", lineno, indent + 1, path)
        key, value = stripped.split(":", 1)
        key = key.strip()
        vcol = indent + len(stripped.split(":", 1)[0]) + 2 + (len(value) - len(value.lstrip()))
        entry = Entry(value.strip(), lineno, vcol)
        allowed = HEADER_KEYS if current is None else TASK_KEYS[current.kind]
        if key not in allowed:
            where = "scenario header" if current is None else f"task {current.kind!r}"
            raise ScenarioError(f"unknown field {key!r} in {where}", lineno, indent + 1, path)
        target = header if current is None else current.params
        if key in target:
            raise ScenarioError(f"duplicate field {key!r}", lineno, indent + 1, path)
        target[key] = entry
    for k in ("characteristic", "variables"):
        if k not in header:
            raise ScenarioError(f"missing required field {k!r}", 1, 1, path)
    for t in tasks:
        for k in REQUIRED_TASK_KEYS.get(t.kind, ()):
            if k not in t.params:
                raise ScenarioError(f"task {t.kind!r} requires field {k!r}", t.line, 1, path)
    return Scenario(header, tasks, path)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), str(path))


# -- value parsing ------------------------------------------------------------

def split_top(text: str, sep: str) -> List[Tuple[str, int]]:
    """Split on ``sep`` outside parentheses; returns (piece, offset) pairs with pieces stripped."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append((text[start:i], start))
            start = i + 1
    out.append((text[start:], start))
    res = []
    for piece, off in out:
        lead = len(piece) - len(piece.lstrip())
        if piece.strip():
            res.append((piece.strip(), off + lead))
    return res


class _Context:
    def __init__(self, scenario: Scenario, pair_budget: int):
        self.scenario = scenario
        self.pair_budget = pair_budget
        h = scenario.header
        try:
            p = int(h["characteristic"].value)
        except ValueError:
            raise ScenarioError("characteristic must be an integer", h["characteristic"].line,
                                h["characteristic"].column, scenario.path) from None
        names = [n for n, _ in split_top(h["variables"].value, ",")]
        order = h["order"].value if "order" in h else "grevlex"
        try:
            self.ring = PolyRing(p, tuple(names), MonomialOrder(order))
        except ValueError as exc:
            e = h["variables"]
            raise ScenarioError(str(exc), e.line, e.column, scenario.path) from None
        gens = self.polys(h["ideal"]) if "ideal" in h else []
        declared = "declared-prime" in h and h["declared-prime"].value.lower() in ("yes", "true")
        a = Ideal(self.ring, gens, prime=True if declared else None, pair_budget=pair_budget)
        minimal = None
        if "minimal-primes" in h:
            minimal = [self.raw_ideal(s, h["minimal-primes"], off, prime=True)
                       for s, off in split_top(h["minimal-primes"].value, ";")]
        seeds = [self.raw_ideal(s, h["seeds"], off) for s, off in split_top(h["seeds"].value, ";")] \
            if "seeds" in h else []
        self.R = RingPresentation(self.ring, a, minimal_primes=minimal, declared_primes=[a] if declared else [],
                                  seeds=seeds)
        self._lattice: Optional[SpecialIdealLattice] = None

    def error(self, msg: str, entry: Entry, offset: int = 0):
        return ScenarioError(msg, entry.line, entry.column + offset, self.scenario.path)

    def poly(self, text: str, entry: Entry, offset: int = 0) -> Poly:
        try:
            return self.ring.parse(text)
        except PolynomialSyntaxError as exc:
            raise self.error(str(exc), entry, offset + exc.position) from None
        except (UnknownVariableError, CharpLabError) as exc:
            raise self.error(str(exc), entry, offset) from None

    def polys(self, entry: Entry) -> List[Poly]:
        return [self.poly(s, entry, off) for s, off in split_top(entry.value, ",")]

    def raw_ideal(self, text: str, entry: Entry, offset: int = 0, prime: Optional[bool] = None) -> Ideal:
        t = text.strip()
        if not (t.startswith("(") and t.endswith(")")):
            raise self.error(f"ideal must be written as (g1, ..., gk), got {t!r}", entry, offset)
        inner = t[1:-1]
        gens = [self.poly(s, entry, offset + 1 + off) for s, off in split_top(inner, ",")]
        return Ideal(self.ring, gens, prime=prime, pair_budget=self.pair_budget)

    def r_ideal(self, text: str, entry: Entry, offset: int = 0) -> Ideal:
        return (self.raw_ideal(text, entry, offset) + self.R.a).reduced()

    def r_ideals(self, entry: Entry) -> List[Ideal]:
        return [self.r_ideal(s, entry, off) for s, off in split_top(entry.value, ";")]

    def mult_set(self, entry: Entry) -> MultSet:
        v = entry.value.strip()
        word = v.split(None, 1)[0] if v else ""
        rest = v[len(word):].strip()
        off = len(v) - len(rest)
        if word == "one" and not rest:
            return MultSet.one()
        if word == "rcirc" and not rest:
            return MultSet.rcirc()
        if word == "complement":
            primes = []
            for s, o in split_top(rest, ";"):
                q = self.r_ideal(s, entry, off + o)
                known = q.is_known_prime() or any(q == d for d in self.R.declared_primes) \
                    or any(q == m for m in self.R.minimal_primes)
                if not known:
                    raise self.error(f"{q} is not known to be prime", entry, off + o)
                q.prime = True
                primes.append(q)
            return MultSet.complement(primes)
        if word == "powers" and rest:
            return MultSet.powers(self.poly(rest, entry, off))
        raise self.error("S must be one of: one, rcirc, complement <ideals>, powers <poly>", entry)

    def int_value(self, entry: Optional[Entry], default: int) -> int:
        if entry is None:
            return default
        try:
            return int(entry.value)
        except ValueError:
            raise self.error("expected an integer", entry) from None

    @property
    def lattice(self) -> SpecialIdealLattice:
        if self._lattice is None:
            self._lattice = special_ideal_lattice(self.R)
        return self._lattice


def _ideal_set(ideals) -> List[str]:
    return sorted({str(I) for I in ideals})


def _run_task(ctx: _Context, task: Task, opts: dict) -> dict:
    P = task.params
    R = ctx.R
    out: dict = {"kind": task.kind, "line": task.line, "warnings": []}
    expect: dict = {}

    if task.kind == "fpure-check":
        out["result"] = {"fpure": R.is_fpure, "u": None if R.u is None else str(R.u),
                         "fedder_module": [str(g) for g in R.fedder_module().gb]}
        if "expect" in P:
            want = P["expect"].value.lower() in ("true", "yes")
            expect = {"fpure": want, "ok": want == R.is_fpure}

    elif task.kind == "special-ideals":
        mode = P["mode"].value if "mode" in P else "uniform"
        L = ctx.lattice if mode == "uniform" else special_ideal_lattice(R, mode=mode)
        out["result"] = L.to_json()
        out["result"]["member_count"] = len(L.members)
        out["warnings"] += L.warnings
        alt = opts.get("alt_u") or (P["alt-u"].value if "alt-u" in P else None)
        if alt:
            u_alt = ctx.poly(alt, P["alt-u"]) if "alt-u" in P and alt == P["alt-u"].value else ctx.ring.parse(alt)
            L_alt = special_ideal_lattice(R, u=u_alt)
            out["result"]["alt_u"] = {"u": str(u_alt), "lattice": L_alt.to_json(), "diff": lattice_diff(L, L_alt)}
        got = _ideal_set(L.primes)
        ok = True
        if "expect-primes" in P:
            want = _ideal_set(ctx.r_ideals(P["expect-primes"]))
            expect["primes"] = want
            ok &= want == got
        if "expect-primes-include" in P:
            want = _ideal_set(ctx.r_ideals(P["expect-primes-include"]))
            expect["primes_include"] = want
            ok &= set(want) <= set(got)
        if "expect-member-count" in P:
            want = ctx.int_value(P["expect-member-count"], 0)
            expect["member_count"] = want
            ok &= want == len(L.members)
        if expect:
            expect["ok"] = ok

    elif task.kind in ("s-test-ideal", "big-test-ideal"):
        S = ctx.mult_set(P["S"]) if task.kind == "s-test-ideal" else MultSet.rcirc()
        tau = s_test_ideal(ctx.lattice, S, R)
        res = {"S": S.resolve(R).describe(), "ideal": str(tau)}
        if S.resolve(R).has_test_elements:
            res["test_element"] = str(s_test_element(ctx.lattice, S, R))
        out["result"] = res
        if "expect" in P:
            want = ctx.r_ideal(P["expect"].value, P["expect"])
            expect = {"ideal": str(want), "ok": want == tau}

    elif task.kind == "realize":
        target = ctx.r_ideal(P["target"].value, P["target"])
        S = realize_as_s_test_ideal(ctx.lattice, target, R)
        back = s_test_ideal(ctx.lattice, S, R)
        out["result"] = {"target": str(target), "S": S.describe(), "roundtrip": str(back),
                         "roundtrip_ok": back == target}
        if "expect" in P:
            want = ctx.mult_set(P["expect"])
            expect = {"S": want.describe(), "ok": want == S}

    elif task.kind == "tight-closure":
        r = ctx.poly(P["r"].value, P["r"])
        a_test = ctx.r_ideal(P["a-test"].value, P["a-test"])
        S = ctx.mult_set(P["S"]) if "S" in P else MultSet.rcirc()
        N = ctx.int_value(P.get("levels"), opts.get("levels") or TC_LEVELS)
        lattice = ctx.lattice if S.resolve(R).has_test_elements else None
        v = tight_closure_membership(r, a_test, S, R, N=N, lattice=lattice)
        out["result"] = {"r": str(r), "a_test": str(a_test), "S": S.resolve(R).describe(), "verdict": v.to_json()}
        ok = True
        if "expect" in P:
            want = P["expect"].value
            expect["status"] = want
            ok &= (v.is_member if want == "member" else v.status == want)
        if "expect-certificate" in P:
            want_c = ctx.poly(P["expect-certificate"].value, P["expect-certificate"])
            expect["certificate"] = str(want_c)
            ok &= v.certificate == want_c
        if expect:
            expect["ok"] = ok

    elif task.kind == "chain":
        steps = ctx.int_value(P.get("max-steps"), 32)
        ch = test_ideal_chain(R, max_steps=steps, lattice=ctx.lattice)
        out["result"] = ch.to_json()
        if "expect" in P:
            want = ctx.r_ideals(P["expect"])
            expect = {"chain": [str(w) for w in want],
                      "ok": len(want) == len(ch.members) and all(x == y for x, y in zip(want, ch.members))}
        if not all(ch.in_lattice):
            out["warnings"].append("a chain member is missing from the original lattice")

    elif task.kind == "skewmod-crosscheck":
        a_test = ctx.r_ideal(P["a-test"].value, P["a-test"])
        S = ctx.mult_set(P["S"]) if "S" in P else MultSet.rcirc()
        N = ctx.int_value(P.get("levels"), opts.get("levels") or DEFAULT_LEVELS)
        D = ctx.int_value(P.get("degree-cap"), opts.get("degree_cap") or DEFAULT_DEGREE_CAP)
        lattice = ctx.lattice if S.resolve(R).has_test_elements else None
        out["result"] = crosscheck_with_stight(build_truncation(R, a_test, N, D), S, R, lattice)
        if "expect" in P:
            expect = {"agree": True, "ok": out["result"]["agree"]}

    if expect:
        out["expect"] = expect
    return out


def run_scenario(path_or_scenario, *, levels: Optional[int] = None, degree_cap: Optional[int] = None,
                 pair_budget: int = DEFAULT_PAIR_BUDGET, alt_u: Optional[str] = None) -> Tuple[dict, int]:
    """Execute a scenario; returns (report, exit code 0/1/2)."""
    scenario = path_or_scenario if isinstance(path_or_scenario, Scenario) else load_scenario(path_or_scenario)
    opts = {"levels": levels, "degree_cap": degree_cap, "alt_u": alt_u}
    report: dict = {"tool": "charp-lab", "version": __version__,
                    "scenario": {k: e.value for k, e in sorted(scenario.header.items())},
                    "notices": [COMPLETION_NOTICE], "tasks": [], "timings": {}}
    t0 = time.perf_counter()
    try:
        ctx = _Context(scenario, pair_budget)
    except CharpLabError as exc:
        report["status"] = "error"
        report["error"] = str(exc)
        return _finish(report), 1
    report["scenario"]["defining_ideal"] = str(ctx.R.a)
    report["scenario"]["minimal_primes"] = [str(q) for q in ctx.R.minimal_primes]
    status = "ok"
    for i, task in enumerate(scenario.tasks):
        t = time.perf_counter()
        try:
            res = _run_task(ctx, task, opts)
        except CharpLabError as exc:
            res = {"kind": task.kind, "line": task.line, "error": f"{type(exc).__name__}: {exc}"}
            if isinstance(exc, FalsifiedExpectation):
                status = status if status == "error" else "falsified"
            else:
                status = "error"
        report["timings"][f"task{i}:{task.kind}"] = round(time.perf_counter() - t, 4)
        if "expect" in res and not res["expect"]["ok"] and status == "ok":
            status = "falsified"
        report["tasks"].append(res)
    report["timings"]["total"] = round(time.perf_counter() - t0, 4)
    report["status"] = status
    return _finish(report), {"ok": 0, "falsified": 2, "error": 1}[status]


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _finish(report: dict) -> dict:
    body = {k: v for k, v in report.items() if k != "timings"}
    report["determinism_hash"] = hashlib.sha256(canonical_json(body).encode()).hexdigest()
    return report


def fixtures_dir() -> Path:
    return Path(__file__).parent / "fixtures"


def bundled_fixtures() -> Dict[str, Path]:
    return {p.stem: p for p in sorted(fixtures_dir().glob("*.scenario"))}
