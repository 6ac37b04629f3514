"""Exact multivariate polynomials over a prime field F_p.

A polynomial is stored as a dict mapping exponent tuples to nonzero residues
in ``range(p)``; two equal polynomials therefore have identical dicts, which
is the canonical form.  Printing lists terms in decreasing monomial order.

Text grammar accepted by :func:`parse_polynomial`::

    expr    := ["+" | "-"] term (("+" | "-") term)*
    term    := factor ("*" factor)*
    factor  := ("+" | "-") factor | power
    power   := atom ["^" integer]
    atom    := integer | variable | "(" expr ")"

Integer literals are reduced mod p.  ``**`` is accepted as a synonym for
``^``.  Implicit multiplication is not supported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, Iterator, Sequence, Tuple

from .errors import ExponentOverflowError, PolynomialSyntaxError, UnknownVariableError

MAX_EXPONENT = 2**31 - 1
MAX_CHARACTERISTIC = 2**31 - 1

Exps = Tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Characteristic:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not 2 <= self.p <= MAX_CHARACTERISTIC:
            raise ValueError(f"characteristic must be an integer in [2, 2^31-1], got {self.p!r}")
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")


def _grevlex_key(e: Exps):
    return (sum(e), *[-x for x in reversed(e)])


def _lex_key(e: Exps):
    return e


@dataclass(frozen=True)
class MonomialOrder:
    """Monomial order with variables ranked in declaration order.

    ``kind`` is ``"grevlex"`` or ``"lex"``.  A positive ``block`` turns the
    order into a product order eliminating the first ``block`` variables
    (grevlex inside each block); used internally for intersections.
    """

    kind: str = "grevlex"
    block: int = 0

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key_function(self) -> Callable[[Exps], tuple]:
        if self.block:
            k = self.block
            return lambda e: _grevlex_key(e[:k]) + _grevlex_key(e[k:])
        return _grevlex_key if self.kind == "grevlex" else _lex_key


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


@dataclass(frozen=True)
class PolyRing:
    """The ambient ring F_p[names] with a fixed monomial order."""

    p: int
    names: Tuple[str, ...]
    order: MonomialOrder = GREVLEX
    key: Callable[[Exps], tuple] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        Characteristic(self.p)
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for n in names:
            if not (n[:1].isalpha() or n[:1] == "_") or not all(c.isalnum() or c == "_" for c in n):
                raise ValueError(f"invalid variable name {n!r}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "key", self.order.key_function())

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def characteristic(self) -> Characteristic:
        return Characteristic(self.p)

    def zero(self) -> Poly:
        return Poly(self, {})

    def one(self) -> Poly:
        return self.const(1)

    def const(self, c: int) -> Poly:
        c %= self.p
        return Poly(self, {(0,) * self.nvars: c} if c else {})

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> Poly:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent vector length does not match variable count")
        _check_exps(exps)
        coeff %= self.p
        return Poly(self, {exps: coeff} if coeff else {})

    def var(self, which) -> Poly:
        i = self.names.index(which) if isinstance(which, str) else which
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self) -> list[Poly]:
        return [self.var(i) for i in range(self.nvars)]

    def parse(self, text: str) -> Poly:
        return parse_polynomial(text, self)

    def with_order(self, order: MonomialOrder) -> PolyRing:
        return PolyRing(self.p, self.names, order)

    def __str__(self):
        return f"F_{self.p}[{','.join(self.names)}]"


def _check_exps(e: Iterable[int]):
    for x in e:
        if x < 0:
            raise ValueError("negative exponent")
        if x > MAX_EXPONENT:
            raise ExponentOverflowError(f"exponent {x} exceeds {MAX_EXPONENT}")


class Poly:
    """Immutable polynomial in a :class:`PolyRing`."""

    __slots__ = ("ring", "terms", "_lead", "_hash")

    def __init__(self, ring: PolyRing, terms: Dict[Exps, int]):
        # callers guarantee reduced nonzero coefficients
        self.ring = ring
        self.terms = terms
        self._lead = None
        self._hash = None

    # -- construction helpers -------------------------------------------------
    @classmethod
    def from_terms(cls, ring: PolyRing, items: Iterable[Tuple[Exps, int]]) -> Poly:
        p = ring.p
        d: Dict[Exps, int] = {}
        for e, c in items:
            c = (d.get(e, 0) + c) % p
            if c:
                d[e] = c
            else:
                d.pop(e, None)
        return cls(ring, d)

    # -- inspection -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_monomial(self) -> bool:
        """True for a single term (any nonzero coefficient)."""
        return len(self.terms) == 1

    def __len__(self):
        return len(self.terms)

    def lead(self) -> Tuple[Exps, int]:
        """Leading (exponents, coefficient) pair; raises on zero."""
        if self._lead is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading term")
            e = max(self.terms, key=self.ring.key)
            self._lead = (e, self.terms[e])
        return self._lead

    def lm(self) -> Exps:
        return self.lead()[0]

    def lc(self) -> int:
        return self.lead()[1]

    def sorted_terms(self) -> list[Tuple[Exps, int]]:
        """Terms in decreasing monomial order."""
        return sorted(self.terms.items(), key=lambda t: self.ring.key(t[0]), reverse=True)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def max_exponent(self) -> int:
        return max((max(e, default=0) for e in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        d = dict(self.terms)
        for e, c in other.terms.items():
            c = (d.get(e, 0) + c) % p
            if c:
                d[e] = c
            else:
                del d[e]
        return Poly(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Poly(self.ring, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: int) -> Poly:
        c %= self.ring.p
        if not c:
            return self.ring.zero()
        p = self.ring.p
        return Poly(self.ring, {e: (x * c) % p for e, x in self.terms.items()})

    def mul_term(self, exps: Exps, c: int) -> Poly:
        """Multiply by the single term c * x^exps."""
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        if self.max_exponent() + max(exps, default=0) > MAX_EXPONENT:
            raise ExponentOverflowError("exponent overflow in multiplication")
        return Poly(self.ring, {tuple(a + b for a, b in zip(e, exps)): (x * c) % p
                                for e, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self.terms) > len(other.terms):
            a, b = self, other
        else:
            a, b = other, self
        if a.max_exponent() + b.max_exponent() > MAX_EXPONENT:
            raise ExponentOverflowError("exponent overflow in multiplication")
        p = self.ring.p
        d: Dict[Exps, int] = {}
        for eb, cb in b.terms.items():
            for ea, ca in a.terms.items():
                e = tuple([x + y for x, y in zip(ea, eb)])
                d[e] = d.get(e, 0) + ca * cb
        return Poly(self.ring, {e: c % p for e, c in d.items() if c % p})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        if n and self.max_exponent() * n > MAX_EXPONENT:
            raise ExponentOverflowError(f"power {n} overflows exponents")
        result = self.ring.one()
        base = self
        # peel off p-th powers with Frobenius (cheap and exact)
        p = self.ring.p
        k = 0
        while n:
            n, digit = divmod(n, p)
            if digit:
                piece = base.frobenius(k) if k else base
                for _ in range(digit):
                    result = result * piece
            k += 1
        return result

    def frobenius(self, e: int = 1) -> Poly:
        """Return self^(p^e); coefficients are fixed by Fermat's little theorem."""
        return frobenius_pow_poly(self, e)

    def monic(self) -> Poly:
        if not self.terms:
            return self
        return self.scale(pow(self.lc(), -1, self.ring.p))

    def embed(self, ring: PolyRing, positions: Sequence[int]) -> Poly:
        """Map into ``ring`` sending variable i to variable ``positions[i]``."""
        n = ring.nvars
        d = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, x in enumerate(e):
                new[positions[i]] = x
            d[tuple(new)] = c
        return Poly(ring, d)

    # -- comparison / printing ------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.p, self.ring.names, frozenset(self.terms.items())))
        return self._hash

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Poly({format_polynomial(self)!r})"

    def __iter__(self) -> Iterator[Tuple[Exps, int]]:
        return iter(self.sorted_terms())


def frobenius_pow_poly(f: Poly, e: int) -> Poly:
    """f^(p^e), computed termwise (exact in characteristic p over F_p)."""
    if e < 0:
        raise ValueError("Frobenius exponent must be non-negative")
    if e == 0:
        return f
    q = f.ring.p ** e
    if f.max_exponent() * q > MAX_EXPONENT:
        raise ExponentOverflowError(f"p^{e} * max exponent exceeds {MAX_EXPONENT}")
    return Poly(f.ring, {tuple([x * q for x in m]): c for m, c in f.terms.items()})


def format_monomial(names: Sequence[str], e: Exps) -> str:
    parts = []
    for n, x in zip(names, e):
        if x == 1:
            parts.append(n)
        elif x:
            parts.append(f"{n}^{x}")
    return "*".join(parts)


def format_polynomial(f: Poly) -> str:
    if not f.terms:
        return "0"
    out = []
    for e, c in f.sorted_terms():
        mono = format_monomial(f.ring.names, e)
        if not mono:
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)


# -- parser ------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.tokens = list(self._tokenize())
        self.i = 0

    def _tokenize(self):
        text = self.text
        i, n = 0, len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                yield ("int", int(text[i:j]), i)
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                yield ("name", text[i:j], i)
                i = j
            elif text.startswith("**", i):
                yield ("^", "^", i)
                i += 2
            elif ch in "+-*^()":
                yield (ch, ch, i)
                i += 1
            else:
                raise PolynomialSyntaxError(f"unexpected character {ch!r}", text, i)
        yield ("end", None, n)

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise PolynomialSyntaxError(f"expected {kind!r}, found {what}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            raise PolynomialSyntaxError("empty expression", self.text, 0)
        result = self.expr()
        self.take("end")
        return result

    def expr(self) -> Poly:
        result = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> Poly:
        result = self.factor()
        while self.peek()[0] == "*":
            self.take()
            result = result * self.factor()
        return result

    def factor(self) -> Poly:
        kind = self.peek()[0]
        if kind in ("+", "-"):
            self.take()
            f = self.factor()
            return -f if kind == "-" else f
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("int")
            n = tok[1]
            if n > MAX_EXPONENT or (n and base.max_exponent() * n > MAX_EXPONENT):
                raise ExponentOverflowError(f"exponent {n} at position {tok[2]} overflows")
            return base ** n
        return base

    def atom(self) -> Poly:
        kind, value, pos = self.peek()
        if kind == "int":
            self.take()
            return self.ring.const(value)
        if kind == "name":
            self.take()
            if value not in self.ring.names:
                raise UnknownVariableError(
                    f"unknown variable {value!r} at position {pos}; declared: {', '.join(self.ring.names)}")
            return self.ring.var(value)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(value)
        raise PolynomialSyntaxError(f"unexpected {what}", self.text, pos)


def parse_polynomial(text: str, ring: PolyRing) -> Poly:
    """Parse ``text`` into canonical form over ``ring``."""
    return _Parser(text, ring).parse()
