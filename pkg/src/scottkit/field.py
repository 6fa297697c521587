"""Graphs coded as radical towers over rational function fields.

A graph on n vertices becomes the field k(b_1, ..., b_n)(s_e : e an edge)
with s_e^2 = b_i + b_j, or s_e^3 = b_i + b_j in characteristic 2.  Edges
are recovered by asking which b_i + b_j have a root in the tower.

Base-field arithmetic runs on python-flint polynomials.  The tower
arithmetic, inversion through conjugates, and the radical membership test
live here.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import FiniteStructure, graph_edges, is_simple_graph, isomorphic, make_graph
from .errors import InvalidStructure, ShapeError
from .ratfunc import RationalFunction, RationalFunctionField


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


class FieldPresentation:
    """Generators b_1..b_n (one per vertex label) and one radical per edge."""

    def __init__(self, characteristic: int, vertices: Sequence[int],
                 radicals: Iterable[tuple[int, int]]):
        if characteristic != 0 and not _is_prime(characteristic):
            raise InvalidStructure(f"characteristic {characteristic} is neither 0 nor prime")
        self.characteristic = characteristic
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidStructure("duplicate vertex labels")
        pos = {v: i for i, v in enumerate(self.vertices)}
        rads = []
        for u, v in radicals:
            if u == v:
                raise InvalidStructure(f"radical label {(u, v)} is a loop")
            if u not in pos or v not in pos:
                raise InvalidStructure(f"radical label {(u, v)} names an unknown vertex")
            rads.append((u, v) if pos[u] < pos[v] else (v, u))
        rads.sort(key=lambda e: (pos[e[0]], pos[e[1]]))
        if len(set(rads)) != len(rads):
            raise InvalidStructure("duplicate radical labels")
        self.radicals = tuple(rads)
        self.degree = 3 if characteristic == 2 else 2
        self._pos = pos
        names = tuple(f"b{i + 1}" for i in range(len(self.vertices)))
        self.base = RationalFunctionField(names, characteristic)
        self.gens = self.base.gens
        self.radicands = tuple(self.linear_form(u, v) for u, v in self.radicals)

    def __repr__(self) -> str:
        return (f"FieldPresentation(char={self.characteristic}, vertices={list(self.vertices)}, "
                f"radicals={list(self.radicals)})")

    def __eq__(self, other) -> bool:
        return (isinstance(other, FieldPresentation)
                and (self.characteristic, self.vertices, self.radicals)
                == (other.characteristic, other.vertices, other.radicals))

    def __hash__(self) -> int:
        return hash((self.characteristic, self.vertices, self.radicals))

    def b(self, v: int):
        return self.gens[self._pos[v]]

    def linear_form(self, u: int, v: int):
        return self.b(u) + self.b(v)

    # element constructors
    def zero(self) -> "FieldElement":
        return FieldElement(self, {})

    def one(self) -> "FieldElement":
        return self.const(1)

    def const(self, c) -> "FieldElement":
        return self.embed(self.base(c))

    def embed(self, x) -> "FieldElement":
        """A base-field element as a tower element."""
        return FieldElement(self, {self._unit(): self.base(x)})

    def gen(self, v: int) -> "FieldElement":
        return self.embed(self.b(v))

    def radical(self, u: int, v: int) -> "FieldElement":
        key = (u, v) if self._pos[u] < self._pos[v] else (v, u)
        try:
            j = self.radicals.index(key)
        except ValueError:
            raise ShapeError(f"no radical for {key}") from None
        e = [0] * len(self.radicals)
        e[j] = 1
        return FieldElement(self, {tuple(e): self.base.one})

    def _unit(self) -> tuple[int, ...]:
        return (0,) * len(self.radicals)

    # serialization
    def to_json(self) -> dict:
        return {"characteristic": self.characteristic, "vertices": list(self.vertices),
                "radicals": [list(e) for e in self.radicals]}

    @classmethod
    def from_json(cls, data: Mapping) -> "FieldPresentation":
        return cls(int(data["characteristic"]), data["vertices"],
                   [tuple(e) for e in data["radicals"]])


@dataclass(frozen=True)
class FieldElement:
    """Finite sum of radical monomials with base-field coefficients.

    Keys hold one exponent per radical, each below the radical degree.
    """

    F: FieldPresentation
    terms: Mapping[tuple[int, ...], object] = dc_field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {k: v for k, v in self.terms.items() if v})

    def _check(self, other: "FieldElement") -> "FieldElement":
        if not isinstance(other, FieldElement):
            other = self.F.const(other)
        if other.F != self.F:
            raise ShapeError("elements live in different presentations")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, self.F.base.zero) + v
        return FieldElement(self.F, out)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.F, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        F, deg = self.F, self.F.degree
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                c = v1 * v2
                key = []
                for j, (e1, e2) in enumerate(zip(k1, k2)):
                    e = e1 + e2
                    if e >= deg:
                        e -= deg
                        c = c * F.radicands[j]
                    key.append(e)
                key = tuple(key)
                out[key] = out.get(key, F.base.zero) + c
        return FieldElement(F, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out, base = self.F.one(), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        return self * self._check(other).inv()

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            try:
                other = self.F.const(other)
            except Exception:
                return NotImplemented
        return self.F == other.F and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.F, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_base(self) -> bool:
        return all(not any(k) for k in self.terms)

    def base_value(self):
        if not self.is_base():
            raise ShapeError("element involves radicals")
        return self.terms.get(self.F._unit(), self.F.base.zero)

    def inv(self) -> "FieldElement":
        if not self.terms:
            raise ZeroDivisionError("inverse of zero")
        # x = t^m * y with m the exponentwise minimum over terms; stripping t^m
        # first keeps the norm from being a large power of y's norm.
        P = self.F
        m = tuple(min(k[j] for k in self.terms) for j in range(len(P.radicals)))
        y = FieldElement(P, {tuple(a - b for a, b in zip(k, m)): v for k, v in self.terms.items()})
        adj, norm = y._adjugate()
        scale = 1 / norm
        for j, e in enumerate(m):
            if e:
                scale = scale / P.radicands[j]
        shift = tuple((P.degree - e) % P.degree for e in m)
        terms = {}
        for k, v in adj.terms.items():
            key = tuple(a + b for a, b in zip(k, shift))
            # a full power of a radical folds back into its radicand
            for j, a in enumerate(key):
                if a >= P.degree:
                    v = v * P.radicands[j]
            terms[tuple(a % P.degree for a in key)] = v * scale
        return FieldElement(P, terms)

    def _adjugate(self) -> tuple["FieldElement", object]:
        """(a, n) with self * a == n, n in the base field, built radical by radical."""
        P = self.F
        used = [j for j in range(len(P.radicals)) if any(k[j] for k in self.terms)]
        if not used:
            return P.one(), self.base_value()
        j = used[-1]
        parts = [FieldElement(P, {}) for _ in range(P.degree)]
        for k, v in self.terms.items():
            rest = k[:j] + (0,) + k[j + 1:]
            parts[k[j]] = parts[k[j]] + FieldElement(P, {rest: v})
        d = P.embed(P.radicands[j])
        t = FieldElement(P, {tuple(int(i == j) for i in range(len(P.radicals))): P.base.one})
        if P.degree == 2:
            A, B = parts
            norm = A * A - B * B * d
            adj = A - B * t
        else:
            A, B, C = parts
            norm = A * A * A + B * B * B * d + C * C * C * d * d - A * B * C * d * 3
            adj = (A * A - B * C * d) + (C * C * d - A * B) * t + (B * B - A * C) * t * t
        rest_adj, n = norm._adjugate()
        return adj * rest_adj, n

    def to_json(self) -> list:
        out = []
        for k in sorted(self.terms):
            rads = [list(e) for e, n in zip(self.F.radicals, k) for _ in range(n)]
            v = self.terms[k]
            out.append({"radicals": rads, "num": v.terms("num"), "den": v.terms("den")})
        return out

    @classmethod
    def from_json(cls, F: FieldPresentation, data: Sequence[Mapping]) -> "FieldElement":
        terms = {}
        for term in data:
            key = [0] * len(F.radicals)
            for e in term["radicals"]:
                key[F.radicals.index(tuple(e))] += 1
            c = F.base.from_terms(term["num"]) / F.base.from_terms(term["den"])
            terms[tuple(key)] = terms.get(tuple(key), F.base.zero) + c
        return cls(F, terms)


def build_field(G: FiniteStructure, char: int = 0) -> FieldPresentation:
    if not is_simple_graph(G):
        raise InvalidStructure("build_field needs a simple undirected graph")
    return FieldPresentation(char, G.universe, graph_edges(G))


# ---------------------------------------------------------------------------
# radical membership

def _prime_forms(F: FieldPresentation) -> list[tuple[tuple[int, ...], RationalFunction]]:
    singles = [((v,), F.b(v)) for v in F.vertices]
    pairs = [((u, v), F.linear_form(u, v)) for u, v in itertools.combinations(F.vertices, 2)]
    return singles + pairs


def factor_over_forms(F: FieldPresentation, d) -> tuple[dict[tuple[int, ...], int], object]:
    """Write ``d`` as c * prod p^e over the primes b_v and b_u + b_v.

    Keys are ``(v,)`` for b_v and ``(u, v)`` for b_u + b_v.  Returns the
    nonzero exponents and the constant c (a Fraction, or an int mod p).
    Raises ShapeError when d has any other factor.
    """
    d = F.base(d)
    if not d:
        raise ShapeError("zero has no factorization")
    exps: dict[tuple[int, ...], int] = {}
    num, den = d.num, d.den
    for key, form in _prime_forms(F):
        ell = form.num
        e = 0
        for sign in (1, -1):
            p = num if sign == 1 else den
            while not p.is_constant():
                q, r = divmod(p, ell)
                if not r.is_zero():
                    break
                p = q
                e += sign
            if sign == 1:
                num = p
            else:
                den = p
        if e:
            exps[key] = e
    c = RationalFunction(F.base, num, den).constant()
    if c is None:
        raise ShapeError("d is not a constant times a product of forms b_i and b_i + b_j")
    return exps, c


def _solve_mod(rows: list[list[int]], rhs: list[int], p: int) -> list[int] | None:
    """One solution x of rows * x = rhs over GF(p), or None."""
    m = len(rows[0]) if rows else 0
    aug = [[x % p for x in row] + [r % p] for row, r in zip(rows, rhs)]
    pivots, r = [], 0
    for col in range(m):
        piv = next((i for i in range(r, len(aug)) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][col], -1, p)
        aug[r] = [x * inv % p for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    if any(row[-1] for row in aug[r:]):
        return None
    x = [0] * m
    for i, col in enumerate(pivots):
        x[col] = aug[i][-1]
    return x


def _is_power(F: FieldPresentation, c) -> bool:
    p, n = F.characteristic, F.degree
    if p == 0:
        q = Fraction(c)
        if q < 0:
            return False
        return (math.isqrt(q.numerator) ** 2 == q.numerator
                and math.isqrt(q.denominator) ** 2 == q.denominator)
    return any(pow(x, n, p) == c % p for x in range(1, p))


def _constant_root(F: FieldPresentation, c):
    p, n = F.characteristic, F.degree
    if p == 0:
        q = Fraction(c)
        return Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator))
    return next(x for x in range(1, p) if pow(x, n, p) == c % p)


def has_root(F: FieldPresentation, d) -> bool:
    """Whether ``d`` has a square root (cube root in characteristic 2) in the tower.

    ``d`` must be a base-field element c * prod p^e over the primes b_v and
    b_u + b_v.  By Kummer theory a root exists exactly when the exponent
    vector of d, taken mod the root degree, is a combination of the
    radicands' exponent vectors and the leftover constant is a power in the
    prime field.
    """
    return find_root(F, d) is not None


def find_root(F: FieldPresentation, d) -> FieldElement | None:
    """A tower element r with r**degree == d, or None."""
    d = d.base_value() if isinstance(d, FieldElement) else F.base(d)
    if not d:
        return F.zero()
    n = F.degree
    exps, c = factor_over_forms(F, d)
    rad = [factor_over_forms(F, r) for r in F.radicands]
    keys = sorted(set(exps).union(*(e for e, _ in rad)))
    coef = _solve_mod([[e.get(k, 0) for e, _ in rad] for k in keys],
                      [exps.get(k, 0) for k in keys], n)
    if coef is None:
        return None
    for (e, ce), x in zip(rad, coef):
        for k in keys:
            exps[k] = exps.get(k, 0) - x * e.get(k, 0)
        c = Fraction(c) / Fraction(ce) ** x if F.characteristic == 0 \
            else c * pow(ce, -x, F.characteristic) % F.characteristic
    if not _is_power(F, c):
        return None
    base = F.base(_constant_root(F, c))
    forms = dict(_prime_forms(F))
    for k, e in exps.items():
        if e:
            base = base * forms[k] ** (e // n)
    root = F.embed(base)
    for j, x in enumerate(coef):
        if x:
            root = root * FieldElement(F, {tuple(int(i == j) for i in range(len(F.radicals))):
                                           F.base.one}) ** x
    return root


def decode_field(F: FieldPresentation) -> FiniteStructure:
    edges = [(u, v) for u, v in itertools.combinations(F.vertices, 2)
             if has_root(F, F.linear_form(u, v))]
    return make_graph(F.vertices, edges)


def presentations_isomorphic(F: FieldPresentation, F2: FieldPresentation) -> bool:
    """Generator-permuting isomorphism test through the decoded root pattern."""
    if F.characteristic != F2.characteristic:
        return False
    return isomorphic(decode_field(F), decode_field(F2)) is not None


def field_same_orbit(F: FieldPresentation, a: Sequence[int], a2: Sequence[int]) -> bool:
    """Same orbit of generator tuples under generator-permuting automorphisms."""
    if len(a) != len(a2):
        raise ShapeError("tuple lengths differ")
    D = decode_field(F)
    return isomorphic(D, D, fix=list(zip(a, a2))) is not None


__all__ = [
    "FieldPresentation", "FieldElement", "build_field", "has_root", "find_root",
    "factor_over_forms", "decode_field", "presentations_isomorphic", "field_same_orbit",
]
