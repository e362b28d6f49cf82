"""Truncated power series, rational generating functions and Hilbert-series predictors."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .errors import NonUnitConstantTerm, NotFoundWithin, UnderdeterminedNotCovered, BadParameters
from .ffield import FieldSpec


# ---------------------------------------------------------------- integer polynomials

def ipoly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def ipoly_pow(a: Sequence[int], k: int) -> list[int]:
    out = [1]
    base = list(a)
    while k:
        if k & 1:
            out = ipoly_mul(out, base)
        k >>= 1
        if k:
            base = ipoly_mul(base, base)
    return out


def ipoly_trim(a: Sequence[int]) -> list[int]:
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def geometric_block(q: int, step: int = 1) -> list[int]:
    """Coefficients of 1 + t^step + ... + t^((q-1)step)."""
    out = [0] * ((q - 1) * step + 1)
    for i in range(q):
        out[i * step] = 1
    return out


def one_minus_t_pow(d: int) -> list[int]:
    out = [0] * (d + 1)
    out[0] = 1
    out[d] -= 1
    return out


# ---------------------------------------------------------------- series types

@dataclass(frozen=True)
class TruncatedSeries:
    """Integer coefficients a_0..a_D of a power series."""

    coeffs: tuple

    def __init__(self, coeffs: Sequence[int]):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in coeffs))

    @property
    def D(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, d):
        return self.coeffs[d]

    def __iter__(self):
        return iter(self.coeffs)

    def get(self, d: int, default: int = 0) -> int:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else default

    def truncate(self, D: int) -> "TruncatedSeries":
        if D > self.D:
            raise BadParameters(f"cannot extend a series known to degree {self.D} up to {D}")
        return TruncatedSeries(self.coeffs[: D + 1])

    def _common(self, other: "TruncatedSeries") -> int:
        return min(self.D, other.D)

    def __add__(self, other):
        D = self._common(other)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs[: D + 1], other.coeffs[: D + 1])])

    def __sub__(self, other):
        D = self._common(other)
        return TruncatedSeries([a - b for a, b in zip(self.coeffs[: D + 1], other.coeffs[: D + 1])])

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries([a * other for a in self.coeffs])
        D = self._common(other)
        return TruncatedSeries(ipoly_mul(self.coeffs[: D + 1], other.coeffs[: D + 1])[: D + 1])

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by t^k, keeping the truncation degree."""
        return TruncatedSeries(([0] * k + list(self.coeffs))[: self.D + 1])

    def cumulative(self) -> "TruncatedSeries":
        out, acc = [], 0
        for a in self.coeffs:
            acc += a
            out.append(acc)
        return TruncatedSeries(out)

    def coefmax(self, other: "TruncatedSeries") -> "TruncatedSeries":
        D = self._common(other)
        return TruncatedSeries([max(a, b) for a, b in zip(self.coeffs[: D + 1], other.coeffs[: D + 1])])

    def first_nonpositive(self) -> int | None:
        for d, a in enumerate(self.coeffs):
            if a <= 0:
                return d
        return None

    def to_dict(self) -> dict:
        return {"coeffs": list(self.coeffs), "D": self.D}

    @classmethod
    def from_dict(cls, d: dict) -> "TruncatedSeries":
        s = cls(d["coeffs"])
        if "D" in d and int(d["D"]) != s.D:
            raise BadParameters("D does not match the number of coefficients")
        return s

    def __str__(self):
        return format_series(self)


@dataclass(frozen=True)
class RationalGF:
    """num(t)/den(t) with integer coefficients listed in ascending degree."""

    num: tuple
    den: tuple = (1,)
    label: str = field(default="", compare=False)

    def __init__(self, num: Sequence[int], den: Sequence[int] = (1,), label: str = ""):
        num = ipoly_trim(num) or [0]
        den = ipoly_trim(den) or [0]
        if den[0] not in (1, -1):
            raise NonUnitConstantTerm(f"denominator constant term {den[0]} is not a unit")
        if den[0] == -1:
            num = [-c for c in num]
            den = [-c for c in den]
        object.__setattr__(self, "num", tuple(num))
        object.__setattr__(self, "den", tuple(den))
        object.__setattr__(self, "label", label)

    def expand(self, D: int) -> TruncatedSeries:
        return expand(self, D)

    def to_dict(self) -> dict:
        return {"num": list(self.num), "den": list(self.den)}

    @classmethod
    def from_dict(cls, d: dict) -> "RationalGF":
        return cls(d["num"], d.get("den", [1]))


def expand(gf: RationalGF, D: int) -> TruncatedSeries:
    """First D+1 coefficients of num/den, signs kept."""
    if D < 0:
        raise BadParameters("truncation degree must be non-negative")
    num, den = gf.num, gf.den
    if den[0] not in (1, -1):
        raise NonUnitConstantTerm(f"denominator constant term {den[0]} is not a unit")
    out = [0] * (D + 1)
    for k in range(D + 1):
        acc = num[k] if k < len(num) else 0
        for j in range(1, min(k, len(den) - 1) + 1):
            if den[j]:
                acc -= den[j] * out[k - j]
        out[k] = acc * den[0]
    return TruncatedSeries(out)


def bracket(s: TruncatedSeries) -> TruncatedSeries:
    """Keep coefficients up to the first nonpositive one, zero from there on."""
    t0 = s.first_nonpositive()
    if t0 is None:
        return s
    return TruncatedSeries(list(s.coeffs[:t0]) + [0] * (len(s) - t0))


def format_series(s: TruncatedSeries, var: str = "t") -> str:
    parts = []
    for d, a in enumerate(s.coeffs):
        if a == 0:
            continue
        mono = "" if d == 0 else (var if d == 1 else f"{var}^{d}")
        if mono and abs(a) == 1:
            body = mono
        else:
            body = f"{abs(a)}{mono}"
        sign = "-" if a < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


# ---------------------------------------------------------------- predictors

def _degs(m: int, degs) -> list[int]:
    if degs is None:
        return [2] * m
    degs = list(degs)
    if len(degs) != m:
        raise BadParameters(f"expected {m} equation degrees, got {len(degs)}")
    return degs


def default_truncation(n: int, v: int = 0, user: int | None = None) -> int:
    return max(2 * n, 2 * (v + 2), user or 0)


def predict_semiregular_char0(n: int, m: int, degs=None) -> RationalGF:
    """prod(1 - t^d_i) / (1 - t)^n."""
    num = [1]
    for d in _degs(m, degs):
        num = ipoly_mul(num, one_minus_t_pow(d))
    return RationalGF(num, ipoly_pow([1, -1], n), label=f"semiregular char0 n={n} m={m}")


def predict_semiregular_fq(n: int, m: int, q: int, degs=None) -> RationalGF:
    """(1 + ... + t^(q-1))^n / prod(1 + t^d_i + ... + t^((q-1)d_i))."""
    if q < 2:
        raise BadParameters("q must be at least 2")
    den = [1]
    for d in _degs(m, degs):
        den = ipoly_mul(den, geometric_block(q, d))
    return RationalGF(ipoly_pow(geometric_block(q), n), den, label=f"semiregular GF({q}) n={n} m={m}")


def predict_oil_ring(n: int, v: int, F: FieldSpec | None = None) -> RationalGF:
    """Series of K[x_{v+1}..x_n], bounded exponents when field equations are imposed."""
    if not 0 <= v < n:
        raise BadParameters("need 0 <= v < n")
    k = n - v
    if F is not None and F.field_equations:
        return RationalGF(ipoly_pow(geometric_block(F.p), k), [1], label="oil ring")
    return RationalGF([1], ipoly_pow([1, -1], k), label="oil ring")


def oil_monomials(n: int, v: int, d: int) -> int:
    """Degree-d monomials in the n - v oil variables (free ring)."""
    k = n - v
    return comb(k + d - 1, d) if d >= 0 else 0


def oil_monomials_cumulative(n: int, v: int, d: int) -> int:
    """Oil monomials of degree at most d (free ring)."""
    return comb(n - v + d, d) if d >= 0 else 0


def predict_ov_hfg(n: int, v: int, m: int, D: int, degs=None) -> TruncatedSeries:
    """max{[HS_{R/G}](d) - dim (K_o)_d, 0}: the expected H_{V/F} of a generic OV system.

    Only 0 <= d <= v+1 is covered by the definition; values beyond are reported as is.
    """
    base = bracket(expand(predict_semiregular_char0(n, m, degs), D))
    return TruncatedSeries([max(base[d] - oil_monomials(n, v, d), 0) for d in range(D + 1)])


def hfg_window(v: int) -> int:
    """Last degree for which the H_{V/F} prediction is defined."""
    return v + 1


def predict_ov_semiregular(n: int, v: int, m: int, D: int, degs=None) -> tuple[TruncatedSeries, str]:
    """Expected HS_{R/F} of an OV system and the branch used.

    Branches: ``"m<=v"`` (plain semi-regular expansion), ``"m>=n"`` (max with the oil
    ring) and ``"v<m<n"`` (base expansion; the correction s(t) t^(v+2) has to be
    measured, see ``measure_correction``).
    """
    raw = expand(predict_semiregular_char0(n, m, degs), D)
    if m <= v:
        return raw, "m<=v"
    if m >= n:
        oil = expand(predict_oil_ring(n, v), D)
        return bracket(raw).coefmax(oil), "m>=n"
    return raw, "v<m<n"


def measure_correction(computed: TruncatedSeries, base: TruncatedSeries, v: int) -> TruncatedSeries:
    """s(t) such that computed = base + s(t) t^(v+2), read off coefficientwise."""
    diff = computed - base
    start = v + 2
    bad = [d for d in range(min(start, len(diff))) if diff[d] != 0]
    if bad:
        raise BadParameters(f"series differ below degree v+2 at {bad}")
    return TruncatedSeries(diff.coeffs[start:] or (0,))


def predict_dreg_bound(n: int, v: int, m: int) -> int:
    """Upper bound v+1 on the degree of regularity of an overdetermined OV system."""
    if m < n:
        raise UnderdeterminedNotCovered(f"m={m} < n={n}: the bound needs m >= n")
    return v + 1


def dreg_witness(n: int, v: int) -> int:
    """dim (V/F)_v for m = n, which is binom(n-1, v-1)."""
    return comb(n - 1, v - 1) if v >= 1 else 0


def cumulative_solving_bound(h: TruncatedSeries, oil: tuple[int, int] | None = None,
                             oil_count: str = "cumulative") -> int:
    """Least d >= 1 with sum_{i<=d} h_i (minus the oil column count) <= 0.

    ``oil_count`` is ``"cumulative"`` for binom(n-v+d, d) or ``"exact"`` for
    binom(n-v+d-1, d).
    """
    if oil_count not in ("cumulative", "exact"):
        raise BadParameters(f"unknown oil count {oil_count!r}")
    acc = h[0]
    for d in range(1, h.D + 1):
        acc += h[d]
        value = acc
        if oil is not None:
            n, v = oil
            value -= (oil_monomials_cumulative(n, v, d) if oil_count == "cumulative"
                      else oil_monomials(n, v, d))
        if value <= 0:
            return d
    raise NotFoundWithin(h.D, "cumulative solving bound")
