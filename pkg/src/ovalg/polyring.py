"""Sparse polynomials over GF(p) with grevlex order.

Monomials are plain tuples of exponents. A ``Ring`` fixes the number of
variables, the field and the quotient regime:

* ``free``   : K[x_1..x_n], no relations.
* ``graded`` : x_i^q = 0, the graded ring R used for Hilbert series.
* ``affine`` : x_i^q = x_i, the ring S of functions on F_q^n.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import BadParameters, DimensionMismatch, ParseError, ZeroPolynomial
from .ffield import FieldSpec, fe_inv

Monomial = tuple

QUOTIENTS = ("free", "graded", "affine")


def grevlex_key(m: Monomial) -> tuple:
    """Sort key: larger key means larger monomial in grevlex."""
    return (sum(m), tuple(-e for e in reversed(m)))


def grevlex_compare(a: Monomial, b: Monomial) -> int:
    """Return 1 if a > b, -1 if a < b and 0 if equal."""
    if len(a) != len(b):
        raise DimensionMismatch("monomials in different numbers of variables")
    da, db = sum(a), sum(b)
    if da != db:
        return 1 if da > db else -1
    for ea, eb in zip(reversed(a), reversed(b)):
        if ea != eb:
            return 1 if ea < eb else -1
    return 0


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def graded_component_dim(n: int, d: int, F: FieldSpec | None = None,
                         field_equations: bool | None = None) -> int:
    """Number of degree-d monomials in n variables, with exponents < q if field equations hold."""
    if d < 0:
        return 0
    bounded = F is not None and (F.field_equations if field_equations is None else field_equations)
    if not bounded:
        return comb(n + d - 1, d) if n > 0 else int(d == 0)
    q = F.p
    total = 0
    for k in range(0, n + 1):
        rest = d - k * q
        if rest < 0:
            break
        total += (-1) ** k * comb(n, k) * (comb(n + rest - 1, rest) if n > 0 else int(rest == 0))
    return total


@lru_cache(maxsize=4096)
def _monomials(n: int, d: int, bound: int, support: tuple) -> tuple:
    out = []
    k = len(support)

    def rec(i, left, acc):
        if i == k - 1:
            if left <= bound:
                acc.append(left)
                out.append(tuple(acc))
                acc.pop()
            return
        for e in range(min(left, bound), -1, -1):
            acc.append(e)
            rec(i + 1, left - e, acc)
            acc.pop()

    if k == 0:
        return ((0,) * n,) if d == 0 else ()
    rec(0, d, [])
    full = []
    for exps in out:
        m = [0] * n
        for idx, e in zip(support, exps):
            m[idx] = e
        full.append(tuple(m))
    full.sort(key=grevlex_key, reverse=True)
    return tuple(full)


def monomials_of_degree(n: int, d: int, F: FieldSpec | None = None,
                        restrict_to: Iterable[int] | None = None,
                        field_equations: bool | None = None) -> list[Monomial]:
    """Degree-d monomials in grevlex-descending order.

    ``restrict_to`` lists 0-based variable indices allowed to appear.
    """
    if d < 0:
        return []
    bounded = F is not None and (F.field_equations if field_equations is None else field_equations)
    bound = F.p - 1 if bounded else d
    support = tuple(range(n)) if restrict_to is None else tuple(sorted(set(restrict_to)))
    return list(_monomials(n, d, bound, support))


def default_names(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, n + 1))


@dataclass(frozen=True)
class Ring:
    """Polynomial ring in n variables over a prime field, with a quotient regime."""

    n: int
    field: FieldSpec
    quotient: str = "free"
    names: tuple = ()

    def __post_init__(self):
        if self.n < 1:
            raise BadParameters("need at least one variable")
        if self.quotient not in QUOTIENTS:
            raise BadParameters(f"unknown quotient {self.quotient!r}")
        if self.field.field_equations and self.quotient == "free":
            object.__setattr__(self, "quotient", "graded")
        if not self.names:
            object.__setattr__(self, "names", default_names(self.n))
        elif len(self.names) != self.n:
            raise BadParameters("wrong number of variable names")

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def bounded(self) -> bool:
        return self.quotient != "free"

    def with_quotient(self, quotient: str) -> "Ring":
        return Ring(self.n, self.field, quotient, self.names)

    def reduce_monomial(self, m: Monomial) -> Monomial | None:
        """Normal form of a monomial in the quotient; None when it vanishes."""
        if self.quotient == "free":
            return m
        q = self.p
        if self.quotient == "graded":
            return None if any(e >= q for e in m) else m
        return tuple(e if e < q else (e - 1) % (q - 1) + 1 for e in m)

    def monomials(self, d: int, restrict_to=None) -> list[Monomial]:
        return monomials_of_degree(self.n, d, self.field, restrict_to, field_equations=self.bounded)

    def component_dim(self, d: int) -> int:
        return graded_component_dim(self.n, d, self.field, field_equations=self.bounded)

    def zero(self) -> "Polynomial":
        return Polynomial({}, self)

    def one(self) -> "Polynomial":
        return Polynomial({(0,) * self.n: 1}, self)

    def const(self, c: int) -> "Polynomial":
        return Polynomial({(0,) * self.n: c}, self)

    def var(self, i: int) -> "Polynomial":
        """The variable with 0-based index i."""
        m = [0] * self.n
        m[i] = 1
        return Polynomial({tuple(m): 1}, self)

    def monomial(self, m: Monomial, c: int = 1) -> "Polynomial":
        return Polynomial({tuple(m): c}, self)

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.n)]

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def to_dict(self) -> dict:
        d = {"n": self.n, "field": self.field.to_dict(), "quotient": self.quotient}
        if self.names != default_names(self.n):
            d["names"] = list(self.names)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Ring":
        return cls(int(d["n"]), FieldSpec.from_dict(d["field"]), d.get("quotient", "free"),
                   tuple(d.get("names", ())))


class Polynomial:
    """Immutable sparse polynomial: a map monomial -> nonzero residue."""

    __slots__ = ("terms", "ring", "_hash")

    def __init__(self, terms: Mapping[Monomial, int], ring: Ring, reduce: bool = True):
        p = ring.p
        if reduce:
            clean: dict = {}
            for m, c in terms.items():
                if len(m) != ring.n:
                    raise DimensionMismatch("monomial length differs from ring size")
                m = ring.reduce_monomial(tuple(m))
                if m is None:
                    continue
                clean[m] = (clean.get(m, 0) + int(c)) % p
            terms = {m: c for m, c in clean.items() if c}
        self.terms = dict(terms)
        self.ring = ring
        self._hash = None

    # -- basic queries
    @property
    def n(self) -> int:
        return self.ring.n

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("degree of the zero polynomial")
        return max(sum(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def coefficient(self, m: Monomial) -> int:
        return self.terms.get(tuple(m), 0)

    def monomials(self) -> list[Monomial]:
        """Support in grevlex-descending order."""
        return sorted(self.terms, key=grevlex_key, reverse=True)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ZeroPolynomial("leading monomial of zero")
        return max(self.terms, key=grevlex_key)

    def leading_coefficient(self) -> int:
        return self.terms[self.leading_monomial()]

    def variables(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial({m: c for m, c in self.terms.items() if sum(m) == d}, self.ring, False)

    def top_part(self) -> "Polynomial":
        return self.homogeneous_part(self.degree())

    def monic(self) -> "Polynomial":
        inv = fe_inv(self.leading_coefficient(), self.ring.field)
        return self.scale(inv)

    def evaluate(self, point: Sequence[int]) -> int:
        p = self.ring.p
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * pow(int(x), e, p) % p
            total += v
        return total % p

    # -- arithmetic
    def _check(self, other: "Polynomial"):
        if self.ring.n != other.ring.n or self.ring.p != other.ring.p:
            raise DimensionMismatch("polynomials live in different rings")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.const(int(other))

    def __add__(self, other):
        other = self._lift(other)
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial(out, self.ring, False)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial({m: (-c) % p for m, c in self.terms.items()}, self.ring, False)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial({m: v * c % p for m, v in self.terms.items()}, self.ring, False)

    def mul_monomial(self, mono: Monomial, c: int = 1) -> "Polynomial":
        ring = self.ring
        p = ring.p
        out: dict = {}
        for m, v in self.terms.items():
            r = ring.reduce_monomial(mono_mul(m, mono))
            if r is None:
                continue
            out[r] = (out.get(r, 0) + v * c) % p
        return Polynomial({m: v for m, v in out.items() if v}, ring, False)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(int(other))
        return poly_mul(self, other)

    def __rmul__(self, other):
        return self.scale(int(other))

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring.n == other.ring.n and self.ring.p == other.ring.p and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.n, self.ring.p, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)

    def to_dense(self, columns: Mapping[Monomial, int], length: int) -> list[int]:
        row = [0] * length
        for m, c in self.terms.items():
            row[columns[m]] = c
        return row


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    """Product of f and g, reduced in the ring's quotient."""
    f._check(g)
    ring = f.ring
    p = ring.p
    out: dict = {}
    for mg, cg in g.terms.items():
        for mf, cf in f.terms.items():
            r = ring.reduce_monomial(mono_mul(mf, mg))
            if r is None:
                continue
            out[r] = (out.get(r, 0) + cf * cg) % p
    return Polynomial({m: c for m, c in out.items() if c}, ring, False)


def top_part(f: Polynomial) -> Polynomial:
    return f.top_part()


# ---------------------------------------------------------------- text format

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|(\+)|(-)|(\()|(\)))")


def _tokens(text: str) -> Iterator[tuple[str, str]]:
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at {pos}")
        pos = mt.end()
        kinds = ("int", "name", "^", "*", "+", "-", "(", ")")
        for kind, val in zip(kinds, mt.groups()):
            if val is not None:
                yield kind, val
                break


def parse_polynomial(text: str, ring: Ring) -> Polynomial:
    """Parse terms like ``x1*x2 + 2*x3^2 + 1``; coefficients are reduced mod p."""
    index = {name: i for i, name in enumerate(ring.names)}
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty polynomial")
    p = ring.p
    terms: dict = {}
    i = 0
    sign = 1
    expect_term = True
    coeff, exps = 1, [0] * ring.n
    seen_factor = False

    def flush():
        nonlocal coeff, exps, seen_factor
        if not seen_factor:
            raise ParseError("empty term")
        m = tuple(exps)
        terms[m] = (terms.get(m, 0) + sign * coeff) % p
        coeff, exps, seen_factor = 1, [0] * ring.n, False

    while i < len(toks):
        kind, val = toks[i]
        if kind in ("+", "-"):
            if seen_factor:
                flush()
            elif not expect_term or (i > 0 and toks[i - 1][0] in ("+", "-")):
                raise ParseError(f"dangling {val!r}")
            sign = -1 if kind == "-" else 1
            expect_term = True
            i += 1
            continue
        if kind == "*":
            if not seen_factor:
                raise ParseError("'*' without a left factor")
            i += 1
            if i >= len(toks) or toks[i][0] not in ("int", "name"):
                raise ParseError("'*' without a right factor")
            continue
        if seen_factor and toks[i - 1][0] != "*":
            raise ParseError(f"missing operator before {val!r}")
        if kind == "int":
            coeff = coeff * int(val) % p
            i += 1
        elif kind == "name":
            if val not in index:
                raise ParseError(f"unknown variable {val!r}")
            e = 1
            if i + 1 < len(toks) and toks[i + 1][0] == "^":
                if i + 2 >= len(toks) or toks[i + 2][0] != "int":
                    raise ParseError("exponent must be an integer")
                e = int(toks[i + 2][1])
                i += 2
            exps[index[val]] += e
            i += 1
        else:
            raise ParseError(f"unexpected {val!r}")
        seen_factor = True
        expect_term = False
    if seen_factor:
        flush()
    else:
        raise ParseError("trailing operator")
    return Polynomial(terms, ring)


def format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    out = []
    for m in f.monomials():
        c = f.terms[m]
        mono = format_monomial(m, f.ring.names)
        if mono == "1":
            out.append(str(c))
        elif c == 1:
            out.append(mono)
        else:
            out.append(f"{c}*{mono}")
    return " + ".join(out)


def squarefree_monomials(n: int, d: int) -> list[Monomial]:
    """Squarefree degree-d monomials (the q = 2 case), grevlex-descending."""
    out = []
    for idx in combinations(range(n), d):
        m = [0] * n
        for i in idx:
            m[i] = 1
        out.append(tuple(m))
    out.sort(key=grevlex_key, reverse=True)
    return out
