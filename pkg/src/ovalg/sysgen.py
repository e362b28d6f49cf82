"""Quadratic systems: random generation, OV classification, coordinate changes and file I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .errors import BadParameters, DimensionMismatch, NotMixed, NotOV, ParseError, SingularTransform
from .ffield import FieldSpec, matrix_rank, row_reduce
from .polyring import Polynomial, Ring

KINDS = ("ov", "mixed", "full")

# Coefficients of char-0 proxy systems are drawn below this bound so the same
# integer system is valid modulo every proxy prime.
PROXY_COEFF_BOUND = 2**20


def fresh_seed() -> int:
    return int(np.random.SeedSequence().entropy) & (2**64 - 1)


def default_quotient(F: FieldSpec, homogeneous: bool) -> str:
    """Graded quotient for homogeneous systems, affine one otherwise."""
    if not F.field_equations:
        return "free"
    return "graded" if homogeneous else "affine"


@dataclass
class PolySystem:
    """A list of polynomials over one ring, with its OV/mixed/full shape."""

    polys: list
    ring: Ring
    homogeneous: bool = True
    kind: str = "full"
    v: int = 0
    e: int = 0
    u: int = 0
    seed: int | None = None
    validate: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        self.polys = list(self.polys)
        if self.kind not in KINDS:
            raise BadParameters(f"unknown kind {self.kind!r}")
        for f in self.polys:
            if f.ring.n != self.ring.n or f.ring.p != self.ring.p:
                raise DimensionMismatch("polynomial from a different ring")
        if not self.validate:
            return
        if self.homogeneous:
            for f in self.polys:
                if f and (not f.is_homogeneous() or f.degree() != 2):
                    raise BadParameters("homogeneous systems must consist of quadratic forms")
        if self.kind == "ov":
            if not 0 <= self.v < self.n:
                raise BadParameters("need 0 <= v < n")
            if not all(is_ov_polynomial(f, self.v) for f in self.polys):
                raise NotOV(f"some polynomial has an oil-oil monomial for v={self.v}")
        elif self.kind == "mixed":
            if self.e + self.u != len(self.polys):
                raise NotMixed(f"e+u={self.e + self.u} but the system has {len(self.polys)} polynomials")
            if not all(is_ov_polynomial(f, self.v) for f in self.polys[: self.e]):
                raise NotMixed(f"one of the first {self.e} polynomials is not OV for v={self.v}")

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def m(self) -> int:
        return len(self.polys)

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def kind_label(self) -> str:
        if self.kind == "ov":
            return f"ov {self.v}"
        if self.kind == "mixed":
            return f"mixed {self.v} {self.e} {self.u}"
        return "full"

    def top_parts(self) -> "PolySystem":
        tops = [f.top_part() for f in self.polys if f]
        return PolySystem(tops, self.ring, all(t.degree() == 2 for t in tops) if tops else True,
                          self.kind, self.v, self.e, self.u, self.seed, validate=False)

    def in_ring(self, ring: Ring) -> "PolySystem":
        """Same integer coefficients read in another ring (other prime or quotient)."""
        polys = [Polynomial(f.terms, ring) for f in self.polys]
        return PolySystem(polys, ring, self.homogeneous, self.kind, self.v, self.e, self.u,
                          self.seed, validate=False)

    def with_prime(self, p: int) -> "PolySystem":
        return self.in_ring(Ring(self.n, self.field.with_prime(p), self.ring.quotient, self.ring.names))

    def subsystem(self, idx: Iterable[int]) -> "PolySystem":
        polys = [self.polys[i] for i in idx]
        return PolySystem(polys, self.ring, self.homogeneous, "full", seed=self.seed, validate=False)

    # -- serialization
    def to_text(self) -> str:
        F = self.field
        head = f"ring GF({F.p}) vars {self.n}"
        if F.field_equations:
            head += " field_equations"
            if self.ring.quotient != default_quotient(F, self.homogeneous):
                head += f" {self.ring.quotient}"
        if F.char0_proxy:
            head += " char0_proxy"
        lines = [head, f"kind {self.kind_label()}", f"homogeneous {str(self.homogeneous).lower()}"]
        if self.seed is not None:
            lines.append(f"# seed {self.seed}")
        lines += [str(f) for f in self.polys]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        F = self.field
        return {
            "ring": {"p": F.p, "vars": self.n, "field_equations": F.field_equations,
                     "char0_proxy": F.char0_proxy, "quotient": self.ring.quotient},
            "kind": self.kind, "v": self.v, "e": self.e, "u": self.u,
            "homogeneous": self.homogeneous, "seed": self.seed,
            "polys": [str(f) for f in self.polys],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def is_ov_polynomial(f: Polynomial, v: int) -> bool:
    """True when no degree-2 monomial of f uses only variables beyond the first v."""
    for m in f.terms:
        if sum(m) == 2 and all(e == 0 for e in m[:v]):
            return False
    return True


def is_ov(S: PolySystem | Sequence[Polynomial], vinegar: Iterable[int] | None = None):
    """Smallest prefix v making the system OV, or None if none is proper.

    With ``vinegar`` given (0-based indices) return that set when it works, else None.
    """
    polys = S.polys if isinstance(S, PolySystem) else list(S)
    if vinegar is not None:
        vin = set(vinegar)
        for f in polys:
            for m in f.terms:
                if sum(m) == 2 and not any(m[i] for i in vin):
                    return None
        return sorted(vin)
    if not polys:
        return 0
    n = polys[0].ring.n
    v = 0
    for f in polys:
        for m in f.terms:
            if sum(m) == 2:
                first = next(i for i, e in enumerate(m) if e)
                v = max(v, first + 1)
    return v if v < n else None


# ---------------------------------------------------------------- generation

def _coeff_bound(F: FieldSpec) -> int:
    return min(F.p, PROXY_COEFF_BOUND) if F.char0_proxy else F.p


def _support(ring: Ring, homogeneous: bool, v: int | None) -> list:
    quad = ring.monomials(2)
    if v is not None:
        quad = [m for m in quad if any(m[:v])]
    if homogeneous:
        return quad
    return quad + ring.monomials(1) + ring.monomials(0)


def _random_poly(ring: Ring, support: list, rng: np.random.Generator, bound: int) -> Polynomial:
    while True:
        coeffs = rng.integers(0, bound, size=len(support))
        if coeffs.any():
            return Polynomial({m: int(c) for m, c in zip(support, coeffs) if c}, ring)


def _make_ring(n: int, F: FieldSpec, homogeneous: bool, quotient: str | None) -> Ring:
    return Ring(n, F, quotient or default_quotient(F, homogeneous))


def gen_ov(n: int, v: int, m: int, F: FieldSpec, homogeneous: bool = True,
           seed: int | None = None, quotient: str | None = None) -> PolySystem:
    """m random OV polynomials with vinegar variables x1..xv."""
    if not 0 < v < n or m < 1:
        raise BadParameters("gen_ov needs 0 < v < n and m >= 1")
    seed = fresh_seed() if seed is None else seed
    rng = np.random.default_rng(seed)
    ring = _make_ring(n, F, homogeneous, quotient)
    support = _support(ring, homogeneous, v)
    polys = [_random_poly(ring, support, rng, _coeff_bound(F)) for _ in range(m)]
    return PolySystem(polys, ring, homogeneous, "ov", v=v, seed=seed)


def gen_full(n: int, m: int, F: FieldSpec, homogeneous: bool = True,
             seed: int | None = None, quotient: str | None = None) -> PolySystem:
    """m random quadratic polynomials with unrestricted support."""
    if n < 1 or m < 1:
        raise BadParameters("gen_full needs n >= 1 and m >= 1")
    seed = fresh_seed() if seed is None else seed
    rng = np.random.default_rng(seed)
    ring = _make_ring(n, F, homogeneous, quotient)
    support = _support(ring, homogeneous, None)
    polys = [_random_poly(ring, support, rng, _coeff_bound(F)) for _ in range(m)]
    return PolySystem(polys, ring, homogeneous, "full", seed=seed)


def gen_mixed(n: int, v: int, e: int, u: int, F: FieldSpec, homogeneous: bool = True,
              seed: int | None = None, quotient: str | None = None) -> PolySystem:
    """e OV polynomials (vinegar x1..xv) followed by u fully quadratic ones."""
    if not 0 < v < n or e < 1 or u < 1:
        raise BadParameters("gen_mixed needs 0 < v < n, e >= 1 and u >= 1")
    seed = fresh_seed() if seed is None else seed
    rng = np.random.default_rng(seed)
    ring = _make_ring(n, F, homogeneous, quotient)
    bound = _coeff_bound(F)
    ov_support = _support(ring, homogeneous, v)
    full_support = _support(ring, homogeneous, None)
    polys = [_random_poly(ring, ov_support, rng, bound) for _ in range(e)]
    polys += [_random_poly(ring, full_support, rng, bound) for _ in range(u)]
    return PolySystem(polys, ring, homogeneous, "mixed", v=v, e=e, u=u, seed=seed)


# ---------------------------------------------------------------- transforms

@dataclass(frozen=True)
class LinearTransform:
    """Invertible substitution x_i = sum_j matrix[i][j] y_j."""

    matrix: tuple
    field: FieldSpec

    def __init__(self, matrix, field: FieldSpec):
        rows = tuple(tuple(int(c) % field.p for c in r) for r in matrix)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("transform matrix must be square")
        if matrix_rank(np.array(rows, dtype=np.int64).reshape(n, n), field) != n:
            raise SingularTransform("transform matrix is singular")
        object.__setattr__(self, "matrix", rows)
        object.__setattr__(self, "field", field)

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def invertible(self) -> bool:
        return True

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "LinearTransform":
        return cls(np.eye(n, dtype=np.int64).tolist(), field)

    def inverse(self) -> "LinearTransform":
        n = self.n
        aug = np.hstack([np.array(self.matrix, dtype=np.int64), np.eye(n, dtype=np.int64)])
        red = row_reduce(aug, self.field)
        return LinearTransform(red.rref[:, n:].tolist(), self.field)

    def compose(self, other: "LinearTransform") -> "LinearTransform":
        """x = A y and y = B z give x = (A B) z."""
        prod = np.array(self.matrix, dtype=object) @ np.array(other.matrix, dtype=object)
        return LinearTransform((prod % self.field.p).tolist(), self.field)


def apply_transform(S: PolySystem, T: LinearTransform) -> PolySystem:
    """Substitute x_i = sum_j T_ij y_j in every polynomial."""
    if T.n != S.n:
        raise DimensionMismatch("transform size differs from the number of variables")
    ring = S.ring
    linear = []
    for i in range(S.n):
        terms = {}
        for j, c in enumerate(T.matrix[i]):
            if c:
                mono = [0] * S.n
                mono[j] = 1
                terms[tuple(mono)] = c
        linear.append(Polynomial(terms, ring))
    out = []
    for f in S.polys:
        acc = ring.zero()
        for m, c in f.terms.items():
            term = ring.const(c)
            for i, e in enumerate(m):
                for _ in range(e):
                    term = term * linear[i]
            acc = acc + term
        out.append(acc)
    return PolySystem(out, ring, S.homogeneous, "full", seed=S.seed, validate=False)


def _quadratic_forms(S: PolySystem) -> np.ndarray:
    """Upper-triangular coefficient matrices of the degree-2 parts, shape (m, n, n)."""
    n = S.n
    Q = np.zeros((len(S.polys), n, n), dtype=np.int64)
    for k, f in enumerate(S.polys):
        for m, c in f.terms.items():
            if sum(m) != 2:
                continue
            idx = [i for i, e in enumerate(m) for _ in range(e)]
            Q[k, idx[0], idx[1]] = c
    return Q


def _isotropic_checker(S: PolySystem):
    """Callables testing f(u) = 0 and the polar form B_f(u, w) = 0 for all f."""
    p = S.field.p
    Q = _quadratic_forms(S)
    Bsym = (Q + np.transpose(Q, (0, 2, 1))) % p

    def value_zero(u):
        return not np.any(np.einsum("i,kij,j->k", u, Q, u) % p)

    def polar_zero(u, w):
        return not np.any(np.einsum("i,kij,j->k", u, Bsym, w) % p)

    return value_zero, polar_zero


def _complete_basis(oil: list, n: int, F: FieldSpec) -> LinearTransform:
    """Transform whose last columns are the oil vectors; the rest are unit vectors."""
    k = len(oil)
    red = row_reduce(np.array(oil, dtype=np.int64).reshape(k, n), F)
    pivots = set(red.pivots)
    vin = []
    for c in range(n):
        if c not in pivots:
            e = [0] * n
            e[c] = 1
            vin.append(e)
    cols = vin + [list(u) for u in oil]
    matrix = np.array(cols, dtype=np.int64).T
    return LinearTransform(matrix.tolist(), F)


def search_ov_transform(S: PolySystem, target_v: int, budget: int | None = None,
                        mode: str = "auto", seed: int | None = None) -> LinearTransform | None:
    """Find an invertible T making apply_transform(S, T) OV with v = target_v.

    The last n - target_v columns of T span a subspace on which every quadratic
    part vanishes identically. ``exhaustive`` walks all such subspaces in
    reduced echelon form with pruning; ``random`` samples ``budget`` subspaces.
    """
    n = S.n
    F = S.field
    p = F.p
    k = n - target_v
    if not 0 <= target_v <= n:
        raise BadParameters("target_v must lie in [0, n]")
    if k == 0:
        return LinearTransform.identity(n, F)
    if mode == "auto":
        mode = "exhaustive" if p <= 3 and n <= 8 else "random"
    if mode not in ("exhaustive", "random"):
        raise BadParameters(f"unknown search mode {mode!r}")
    value_zero, polar_zero = _isotropic_checker(S)

    def accept(basis):
        T = _complete_basis(basis, n, F)
        return T if is_ov(apply_transform(S, T), range(target_v)) is not None else None

    if mode == "random":
        rng = np.random.default_rng(seed)
        tries = budget if budget is not None else 1000
        for _ in range(tries):
            B = rng.integers(0, p, size=(k, n))
            if matrix_rank(B, F) < k:
                continue
            rows = [r for r in B]
            if all(value_zero(u) for u in rows) and all(polar_zero(a, b) for a, b in combinations(rows, 2)):
                T = accept([list(map(int, r)) for r in rows])
                if T is not None:
                    return T
        return None

    visited = [0]

    def extend(pivots, basis):
        if len(basis) == k:
            return accept(basis)
        start = pivots[-1] + 1 if pivots else 0
        for piv in range(start, n - (k - len(basis)) + 1):
            free = list(range(piv + 1, n))
            for vals in product(range(p), repeat=len(free)):
                if budget is not None and visited[0] >= budget:
                    return None
                visited[0] += 1
                u = np.zeros(n, dtype=np.int64)
                u[piv] = 1
                u[free] = vals
                if not value_zero(u) or not all(polar_zero(u, w) for w in basis):
                    continue
                T = extend(pivots + [piv], basis + [u])
                if T is not None:
                    return T
        return None

    return extend([], [])


# ---------------------------------------------------------------- file format

def _parse_ring_line(line: str, homogeneous: bool | None = None):
    tok = line.split()
    if len(tok) < 4 or tok[0] != "ring" or tok[2] != "vars":
        raise ParseError(f"bad ring line: {line!r}")
    spec = tok[1]
    if not (spec.startswith("GF(") and spec.endswith(")")):
        raise ParseError(f"bad field {spec!r}")
    try:
        p = int(spec[3:-1])
        n = int(tok[3])
    except ValueError as exc:
        raise ParseError(f"bad ring line: {line!r}") from exc
    flags = set(tok[4:])
    unknown = flags - {"field_equations", "char0_proxy", "graded", "affine"}
    if unknown:
        raise ParseError(f"unknown ring flags {sorted(unknown)}")
    F = FieldSpec(p, "field_equations" in flags, "char0_proxy" in flags)
    quotient = "affine" if "affine" in flags else "graded" if "graded" in flags else None
    return F, n, quotient


def _parse_kind(tok: list[str]) -> dict:
    if not tok:
        raise ParseError("empty kind")
    try:
        if tok[0] == "ov" and len(tok) == 2:
            return {"kind": "ov", "v": int(tok[1])}
        if tok[0] == "mixed" and len(tok) == 4:
            return {"kind": "mixed", "v": int(tok[1]), "e": int(tok[2]), "u": int(tok[3])}
        if tok[0] == "full" and len(tok) == 1:
            return {"kind": "full"}
    except ValueError as exc:
        raise ParseError(f"bad kind {' '.join(tok)!r}") from exc
    raise ParseError(f"bad kind {' '.join(tok)!r}")


def parse_system(text: str) -> PolySystem:
    """Read the plain-text system format."""
    lines = []
    seed = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "seed":
                seed = int(parts[1])
            continue
        lines.append(line)
    if len(lines) < 3:
        raise ParseError("a system file needs ring, kind and homogeneous lines")
    F, n, quotient = _parse_ring_line(lines[0])
    ktok = lines[1].split()
    if ktok[0] != "kind":
        raise ParseError("second line must start with 'kind'")
    kind = _parse_kind(ktok[1:])
    htok = lines[2].split()
    if len(htok) != 2 or htok[0] != "homogeneous" or htok[1] not in ("true", "false"):
        raise ParseError("third line must be 'homogeneous true|false'")
    homogeneous = htok[1] == "true"
    ring = Ring(n, F, quotient or default_quotient(F, homogeneous))
    polys = [ring.parse(line) for line in lines[3:]]
    return PolySystem(polys, ring, homogeneous, seed=seed, **kind)


def system_from_dict(d: dict) -> PolySystem:
    r = d["ring"]
    F = FieldSpec(int(r["p"]), bool(r.get("field_equations", False)), bool(r.get("char0_proxy", False)))
    homogeneous = bool(d.get("homogeneous", True))
    ring = Ring(int(r["vars"]), F, r.get("quotient") or default_quotient(F, homogeneous))
    polys = [ring.parse(s) for s in d["polys"]]
    return PolySystem(polys, ring, homogeneous, d.get("kind", "full"), int(d.get("v", 0)),
                      int(d.get("e", 0)), int(d.get("u", 0)), d.get("seed"))


def load_system(path: str) -> PolySystem:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return system_from_dict(json.loads(text))
    return parse_system(text)


def save_system(S: PolySystem, path: str, fmt: str = "text") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(S.to_json() + "\n" if fmt == "json" else S.to_text())
