"""Rational functions k(b_1, ..., b_n) over QQ or GF(p) on top of python-flint.

Values are kept as numerator/denominator with gcd 1 and a monic
denominator, so structural equality is field equality.
"""
from __future__ import annotations

from fractions import Fraction

import flint


def _fraction(c) -> Fraction:
    if isinstance(c, int):
        return Fraction(c)
    return Fraction(int(c.p), int(c.q))


class RationalFunctionField:
    def __init__(self, names: tuple[str, ...], characteristic: int = 0):
        self.names = tuple(names)
        self.characteristic = characteristic
        if characteristic == 0:
            self.ring = flint.fmpq_mpoly_ctx.get(self.names, "lex")
        else:
            self.ring = flint.nmod_mpoly_ctx.get(self.names, characteristic, "lex")
        self._one = self.ring.from_dict({(0,) * len(self.names): 1})
        self.zero = RationalFunction(self, self._one * 0, self._one, _canonical=True)
        self.one = RationalFunction(self, self._one, self._one, _canonical=True)
        self.gens = tuple(RationalFunction(self, g, self._one, _canonical=True)
                          for g in self.ring.gens())

    def scalar(self, c):
        if self.characteristic == 0:
            c = Fraction(c)
            return flint.fmpq(c.numerator, c.denominator)
        c = Fraction(c)
        p = self.characteristic
        if c.denominator % p == 0:
            raise ZeroDivisionError(f"{c} is not defined in GF({p})")
        return flint.nmod(c.numerator * pow(c.denominator, -1, p), p)

    def __call__(self, x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            if x.K is not self:
                raise ValueError("element of another rational function field")
            return x
        return RationalFunction(self, self._one * self.scalar(x), self._one, _canonical=True)

    def from_poly(self, poly) -> "RationalFunction":
        return RationalFunction(self, poly, self._one, _canonical=True)

    def from_terms(self, terms) -> "RationalFunction":
        """Polynomial from ``[(exponents, coefficient), ...]``."""
        poly = self._one * 0
        for mono, c in terms:
            poly += self.ring.from_dict({tuple(mono): self.scalar(c)})
        return RationalFunction(self, poly, self._one, _canonical=True)


class RationalFunction:
    __slots__ = ("K", "num", "den")

    def __init__(self, K: RationalFunctionField, num, den, _canonical: bool = False):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _canonical:
            if num.is_zero():
                den = K._one
            else:
                g = num.gcd(den)
                if not g.is_one():
                    num, den = num / g, den / g
                lc = den.leading_coefficient()
                if lc != 1:
                    inv = 1 / lc
                    num, den = num * inv, den * inv
        self.K, self.num, self.den = K, num, den

    @classmethod
    def _coprime(cls, K: RationalFunctionField, num, den) -> "RationalFunction":
        """num/den already in lowest terms; only the leading coefficient is fixed."""
        if num.is_zero():
            return K.zero
        lc = den.leading_coefficient()
        if lc != 1:
            inv = 1 / lc
            num, den = num * inv, den * inv
        return cls(K, num, den, _canonical=True)

    def _lift(self, other) -> "RationalFunction":
        return other if isinstance(other, RationalFunction) else self.K(other)

    def __add__(self, other):
        # gcds are taken of denominator parts only, never of the full product
        o = self._lift(other)
        if self.den == o.den:
            return RationalFunction(self.K, self.num + o.num, self.den)
        g = self.den.gcd(o.den)
        if g.is_one():
            return self._coprime(self.K, self.num * o.den + o.num * self.den, self.den * o.den)
        b, d = self.den / g, o.den / g
        t = self.num * d + o.num * b
        g2 = t.gcd(g)
        if not g2.is_one():
            t, g = t / g2, g / g2
        return self._coprime(self.K, t, b * d * g)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.K, -self.num, self.den, _canonical=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        if self.num.is_zero() or o.num.is_zero():
            return self.K.zero
        g1, g2 = self.num.gcd(o.den), o.num.gcd(self.den)
        a, d = (self.num / g1, o.den / g1) if not g1.is_one() else (self.num, o.den)
        c, b = (o.num / g2, self.den / g2) if not g2.is_one() else (o.num, self.den)
        return self._coprime(self.K, a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.K, self.num ** n, self.den ** n, _canonical=True)

    def inverse(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.K, self.den, self.num)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFunction):
            try:
                other = self.K(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((str(self.num), str(self.den)))

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __repr__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def constant(self):
        """The value as a Fraction (int mod p in positive characteristic), or None."""
        if not (self.num.is_constant() and self.den.is_constant()):
            return None
        zero = (0,) * len(self.K.names)
        n = self.num.to_dict().get(zero, 0)
        d = self.den.to_dict()[zero]
        if self.K.characteristic:
            return int(n) * pow(int(d), -1, self.K.characteristic) % self.K.characteristic
        return _fraction(n) / _fraction(d)

    def terms(self, which: str = "num") -> list:
        poly = self.num if which == "num" else self.den
        out = []
        for mono, c in sorted(poly.to_dict().items()):
            if self.K.characteristic:
                out.append([[int(e) for e in mono], int(c)])
            else:
                q = _fraction(c)
                out.append([[int(e) for e in mono], q.numerator if q.denominator == 1 else str(q)])
        return out
