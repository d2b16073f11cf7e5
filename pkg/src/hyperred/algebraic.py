"""Simple algebraic extensions ``F[alpha]/(m(alpha))`` of a tower field.

``m`` is irreducible over QQ.  QQ is algebraically closed in a regular
tower, so ``m`` stays irreducible over every ``F_i`` and the quotient is a
field.  Elements are polynomials in ``alpha`` of degree ``< deg m`` with
tower-element coefficients; ``alpha`` is a constant for the derivation.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvariantViolation, ZeroDenominator
from .field import Tower, TowerElement
from .poly import Polynomial, extended_gcd
from .tower import derive

ALPHA = "alpha"


class AlgebraicField:
    def __init__(self, minpoly: Polynomial, tower: Tower):
        self.minpoly = minpoly.monic()
        self.tower = tower
        self.degree = self.minpoly.degree
        self._m = self.minpoly.map_coeffs(tower.convert, tower)
        self._m = Polynomial(self._m.coeffs, tower, ALPHA)
        self.zero = AlgebraicElement(self, ())
        self.one = AlgebraicElement(self, (tower.one,))
        self._traces = self._power_traces()

    def __repr__(self) -> str:
        return f"AlgebraicField({self.minpoly})"

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraicField) and other.tower == self.tower and other.minpoly == self.minpoly

    def __hash__(self) -> int:
        return hash(tuple(self.minpoly.coeffs))

    def _power_traces(self) -> list:
        # Newton's identities for the power sums of the roots of m
        e = self.degree
        c = self.minpoly.coeffs  # monic, c[e] = 1
        s = [Fraction(e)]
        for k in range(1, e):
            acc = -k * c[e - k]
            for j in range(1, k):
                acc -= c[e - j] * s[k - j]
            s.append(Fraction(acc))
        return s

    def convert(self, value) -> "AlgebraicElement":
        if isinstance(value, AlgebraicElement):
            return value
        return AlgebraicElement(self, (self.tower.convert(value),))

    __call__ = convert

    def gen(self) -> "AlgebraicElement":
        if self.degree == 1:
            return self.convert(-self.minpoly.coeffs[0])
        return AlgebraicElement(self, (self.tower.zero, self.tower.one))

    def from_rational_poly(self, p: Polynomial) -> "AlgebraicElement":
        """Value at ``alpha`` of a polynomial with rational coefficients."""
        return self._reduce(p.map_coeffs(self.tower.convert, self.tower))

    def _reduce(self, p: Polynomial) -> "AlgebraicElement":
        p = Polynomial(p.coeffs, self.tower, ALPHA)
        r = p % self._m
        return AlgebraicElement(self, tuple(r.coeffs))

    def trace(self, a: "AlgebraicElement") -> TowerElement:
        acc = self.tower.zero
        for k, c in enumerate(a.coeffs):
            if c:
                acc = acc + c * self.tower.convert(self._traces[k])
        return acc


class AlgebraicElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: AlgebraicField, coeffs):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    def _poly(self) -> Polynomial:
        return Polynomial(self.coeffs, self.field.tower, ALPHA)

    def _other(self, other) -> "AlgebraicElement":
        return self.field.convert(other)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other):
        o = self._other(other)
        n = max(len(self.coeffs), len(o.coeffs))
        z = self.field.tower.zero
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = o.coeffs + (z,) * (n - len(o.coeffs))
        return AlgebraicElement(self.field, [p + q for p, q in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicElement(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        o = self._other(other)
        if not self or not o:
            return self.field.zero
        return self.field._reduce(self._poly() * o._poly())

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicElement":
        if not self:
            raise ZeroDenominator("inverse of zero in an algebraic extension")
        g, u, _ = extended_gcd(self._poly(), self.field._m)
        if g.degree != 0:
            raise InvariantViolation("minimal polynomial is reducible over the tower")
        return self.field._reduce(u)

    def __truediv__(self, other):
        return self * self._other(other).inverse()

    def __rtruediv__(self, other):
        return self._other(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.field.one
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def derive(self) -> "AlgebraicElement":
        return AlgebraicElement(self.field, [derive(c) for c in self.coeffs])

    def in_base(self) -> bool:
        return len(self.coeffs) <= 1

    def base_value(self) -> TowerElement:
        if not self.in_base():
            raise ValueError("element involves alpha")
        return self.coeffs[0] if self.coeffs else self.field.tower.zero

    def trace(self) -> TowerElement:
        return self.field.trace(self)

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({c})*alpha^{k}" if k else f"({c})")
        return " + ".join(terms) if terms else "0"


def derive_alg_poly(p: Polynomial, i: int) -> Polynomial:
    """Derivative of a polynomial in ``var_i`` over an algebraic extension."""
    K = p.domain
    tw = K.tower
    if not p:
        return p
    dt = tw.derivation(i).as_poly(i) if i > 0 else None
    out = Polynomial([c.derive() for c in p.coeffs], K, p.var)
    if i == 0:
        return out + p.diff()
    return out + p.diff() * dt.map_coeffs(K.convert, K)
