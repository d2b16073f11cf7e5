"""Differential towers QQ(x)(t1, ..., tn) and their elements.

A :class:`Tower` fixes the generator names and their derivatives.  Every
:class:`TowerElement` of the tower is stored as a canonical quotient of two
integer multivariate polynomials (python-flint ``fmpz_mpoly``): numerator and
denominator are coprime and the denominator has a positive leading
coefficient, so equality is structural.

The recursive view used by the algorithms (a polynomial in ``t_i`` whose
coefficients lie in ``F_{i-1}``) is produced on demand by
:meth:`TowerElement.num_den` and :meth:`Tower.from_poly`.  Variable index 0 is
``x``; index ``i >= 1`` is the i-th generator.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import flint

from .errors import (
    DegreeBoundExceeded,
    DuplicateGenerator,
    PreconditionViolated,
    UnsupportedTower,
    ZeroDenominator,
)
from .poly import Polynomial

DEFAULT_MAX_DEGREE = 512


_bound: list = []


def reset_max_degree() -> None:
    """Forget the cached bound so ``HYPERRED_MAX_DEGREE`` is read again."""
    _bound.clear()


def max_degree() -> int:
    """The degree bound from ``HYPERRED_MAX_DEGREE`` (read once, then cached)."""
    if not _bound:
        raw = os.environ.get("HYPERRED_MAX_DEGREE", "").strip()
        try:
            _bound.append(int(raw) if raw else DEFAULT_MAX_DEGREE)
        except ValueError:
            raise PreconditionViolated(f"HYPERRED_MAX_DEGREE must be an integer, got {raw!r}") from None
    return _bound[0]


def _check_degree(num, den) -> None:
    bound = max_degree()
    if num.total_degree() > bound or den.total_degree() > bound:
        raise DegreeBoundExceeded(f"intermediate degree exceeds HYPERRED_MAX_DEGREE={bound}")


@dataclass(frozen=True)
class Generator:
    """One generator t_i of the tower.

    ``kind`` is ``"hyperexponential"`` (``t' = sigma * t``) or ``"monomial"``
    (``t'`` an arbitrary polynomial in ``t`` over the field below).
    ``regular`` records the user's assertion that no new constants appear.
    """

    name: str
    kind: str
    sigma: Optional["TowerElement"]
    derivative: "TowerElement"
    form: str = ""
    regular: bool = True


class Tower:
    """An immutable differential tower ``QQ(x)(t1)...(tn)`` with ``x' = 1``."""

    def __init__(self, names=("x",), generators=()):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise DuplicateGenerator(f"duplicate generator names in {names}")
        self.names = names
        self.ctx = flint.fmpz_mpoly_ctx.get(names, "lex")
        self.generators: tuple = tuple(generators)
        self._zero_mp = self.ctx.constant(0)
        self._one_mp = self.ctx.constant(1)
        self.zero = TowerElement(self, self._zero_mp, self._one_mp)
        self.one = TowerElement(self, self._one_mp, self._one_mp)

    # -- building -----------------------------------------------------------

    @property
    def n(self) -> int:
        """Number of generators above ``x``."""
        return len(self.names) - 1

    def __repr__(self) -> str:
        gens = ", ".join(g.name for g in self.generators)
        return f"Tower(QQ(x)({gens}))" if gens else "Tower(QQ(x))"

    def __eq__(self, other) -> bool:
        # mpoly contexts are cached per name tuple, so equal names share one
        if self is other:
            return True
        if not isinstance(other, Tower):
            return NotImplemented
        if self.names != other.names:
            return False
        return all(
            a.kind == b.kind and a.derivative.num == b.derivative.num and a.derivative.den == b.derivative.den
            for a, b in zip(self.generators, other.generators)
        )

    def __hash__(self) -> int:
        return hash(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def _grow(self, name: str) -> "Tower":
        if name in self.names:
            raise DuplicateGenerator(f"generator {name!r} already declared")
        return Tower(self.names + (name,), ())

    def extend_hyperexponential(self, name: str, sigma, form: str = "", regular: bool = True) -> "Tower":
        """Adjoin ``t`` with ``t'/t = sigma`` where ``sigma`` lies in this tower."""
        sigma = self.convert(sigma)
        new = self._grow(name)
        gens = [new._embed_generator(g) for g in self.generators]
        s = new.embed(sigma)
        t = new.gen(new.n)
        gens.append(Generator(name, "hyperexponential", s, s * t, form, regular))
        new.generators = tuple(gens)
        return new

    def extend_monomial(self, name: str, derivative_builder, form: str = "", regular: bool = True) -> "Tower":
        """Adjoin a general monomial; ``derivative_builder(tower, t)`` returns t'."""
        new = self._grow(name)
        gens = [new._embed_generator(g) for g in self.generators]
        new.generators = tuple(gens)  # lower derivations usable by the builder
        d = new.convert(derivative_builder(new, new.gen(new.n)))
        if d.den_degree(new.n) > 0:
            raise UnsupportedTower(f"derivative of {name} is not a polynomial in {name}")
        gens.append(Generator(name, "monomial", None, d, form, regular))
        new.generators = tuple(gens)
        return new

    def _embed_generator(self, g: Generator) -> Generator:
        return Generator(
            g.name,
            g.kind,
            None if g.sigma is None else self.embed(g.sigma),
            self.embed(g.derivative),
            g.form,
            g.regular,
        )

    def prefix(self, level: int) -> "Tower":
        """The subtower ``F_level``."""
        tw = Tower(("x",))
        for g in self.generators[:level]:
            if g.kind == "hyperexponential":
                tw = tw.extend_hyperexponential(g.name, tw.restrict(g.sigma), g.form, g.regular)
            else:
                d = g.derivative
                tw = tw.extend_monomial(g.name, lambda t2, _t, d=d: t2.restrict(d), g.form, g.regular)
        return tw

    def restrict(self, elem: "TowerElement") -> "TowerElement":
        """Map an element of a taller tower that only involves our variables."""
        src = elem.tower.names
        k = len(self.names)
        if src[:k] != self.names:
            return self.embed(elem)
        if elem.level >= k:
            raise PreconditionViolated(f"{elem} involves generators outside {self!r}")

        def drop(mp):
            return self.ctx.from_dict({e[:k]: c for e, c in mp.to_dict().items()})

        return TowerElement(self, drop(elem.num), drop(elem.den))

    def embed(self, elem: "TowerElement") -> "TowerElement":
        """Map an element of a tower whose names are a prefix of ours."""
        if elem.tower is self:
            return elem
        src = elem.tower.names
        if self.names[: len(src)] != src:
            raise PreconditionViolated("cannot embed: generator names are not a prefix")
        pad = len(self.names) - len(src)

        def lift(mp):
            return self.ctx.from_dict({e + (0,) * pad: c for e, c in mp.to_dict().items()})

        return TowerElement(self, lift(elem.num), lift(elem.den))

    # -- elements -----------------------------------------------------------

    def gen(self, i: int) -> "TowerElement":
        return TowerElement(self, self.ctx.gens()[i], self._one_mp)

    @property
    def x(self) -> "TowerElement":
        return self.gen(0)

    def convert(self, value) -> "TowerElement":
        if isinstance(value, TowerElement):
            if value.tower is self:
                return value
            return self.embed(value)
        if isinstance(value, Fraction):
            return self.element(self.ctx.constant(value.numerator), self.ctx.constant(value.denominator))
        if isinstance(value, int):
            return TowerElement(self, self.ctx.constant(value), self._one_mp)
        raise TypeError(f"cannot convert {type(value).__name__} into {self!r}")

    def element(self, num, den) -> "TowerElement":
        """Canonical element ``num / den`` from two ``fmpz_mpoly`` values."""
        if den.is_zero():
            raise ZeroDenominator("zero denominator")
        if num.is_zero():
            return self.zero
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        _check_degree(num, den)
        return TowerElement(self, num, den)

    def derivation(self, i: int) -> "TowerElement":
        """``D(var_i)``: 1 for x, the declared derivative for generators."""
        return self.one if i == 0 else self.generators[i - 1].derivative

    def sigma(self, i: int) -> "TowerElement":
        g = self.generators[i - 1]
        if g.kind != "hyperexponential":
            raise PreconditionViolated(f"{g.name} is not hyperexponential")
        return g.sigma

    def is_hyperexponential(self, i: int) -> bool:
        return i >= 1 and self.generators[i - 1].kind == "hyperexponential"

    def derivative_degree(self, i: int) -> int:
        """``deg_{t_i}(t_i')`` (``0`` for x)."""
        if i == 0:
            return 0
        return self.generators[i - 1].derivative.num_degree(i)

    def is_rationally_hyperexponential(self) -> bool:
        return all(g.kind == "hyperexponential" and g.sigma.level == 0 for g in self.generators)

    # -- recursive views ----------------------------------------------------

    def split_mpoly(self, mp, i: int) -> dict:
        """Group ``mp`` by powers of var i: ``{k: coefficient mpoly}``."""
        groups: dict = {}
        for exps, c in mp.to_dict().items():
            k = exps[i]
            key = exps[:i] + (0,) + exps[i + 1:]
            groups.setdefault(k, {})[key] = c
        return {k: self.ctx.from_dict(d) for k, d in groups.items()}

    def poly_from_mpoly(self, mp, i: int, scale=None) -> Polynomial:
        """``mp / scale`` as a polynomial in var i over ``F_{i-1}``."""
        groups = self.split_mpoly(mp, i)
        deg = max(groups) if groups else -1
        sc = self._one_mp if scale is None else scale
        coeffs = [self.element(groups[k], sc) if k in groups else self.zero for k in range(deg + 1)]
        return Polynomial(coeffs, self, self.names[i])

    def from_poly(self, p: Polynomial, i: int) -> "TowerElement":
        """Evaluate a polynomial over ``F_{i-1}`` at ``var_i``."""
        if not p:
            return self.zero
        den = self._one_mp
        for c in p.coeffs:
            if c:
                den = den * (c.den / den.gcd(c.den))
        v = self.ctx.gens()[i]
        num = self._zero_mp
        for k, c in enumerate(p.coeffs):
            if c:
                num = num + c.num * (den / c.den) * v ** k
        return self.element(num, den)

    def from_laurent(self, coeffs: dict, i: int) -> "TowerElement":
        """``sum(c * t_i**k for k, c in coeffs.items())`` for integer ``k``."""
        t = self.gen(i)
        acc = self.zero
        for k, c in coeffs.items():
            if c:
                acc = acc + c * t ** k
        return acc

    def poly_gcd(self, p: Polynomial, q: Polynomial) -> Polynomial:
        """Monic gcd in ``F_{i-1}[var_i]`` through a multivariate integer gcd.

        Returns ``None`` for auxiliary variables outside the tower.
        """
        if p.var not in self.names:
            return None
        i = self.index(p.var)
        a = self.from_poly(p, i).num
        b = self.from_poly(q, i).num
        g = a.gcd(b)
        groups = self.split_mpoly(g, i)
        return self.poly_from_mpoly(g, i, groups[max(groups)])

    # -- domain protocol for Polynomial ------------------------------------

    def __call__(self, value) -> "TowerElement":
        return self.convert(value)


def _promoting(method):
    """Evaluate a binary operation in the larger tower when operands differ."""

    @functools.wraps(method)
    def wrapper(self, other):
        if (
            isinstance(other, TowerElement)
            and other.tower is not self.tower
            and len(other.tower.names) > len(self.tower.names)
        ):
            return getattr(other.tower.embed(self), method.__name__)(other)
        return method(self, other)

    return wrapper


class TowerElement:
    """An element of ``F_n``: a canonical quotient of integer polynomials."""

    __slots__ = ("tower", "num", "den")

    def __init__(self, tower: Tower, num, den):
        self.tower = tower
        self.num = num
        self.den = den

    # -- queries ------------------------------------------------------------

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def as_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        if self.num.is_zero():
            return Fraction(0)
        return Fraction(int(self.num.leading_coefficient()), int(self.den.leading_coefficient()))

    @property
    def level(self) -> int:
        """Index of the highest variable the element depends on (0 for QQ(x))."""
        top = 0
        for mp in (self.num, self.den):
            for i, d in enumerate(mp.degrees()):
                if d > 0 and i > top:
                    top = i
        return top

    def depends_on(self, i: int) -> bool:
        return self.num.degrees()[i] > 0 or self.den.degrees()[i] > 0

    def num_degree(self, i: int) -> int:
        return self.num.degrees()[i] if self else -1

    def den_degree(self, i: int) -> int:
        return self.den.degrees()[i]

    def is_polynomial_in(self, i: int) -> bool:
        return self.den.degrees()[i] == 0

    def num_den(self, i: int):
        """``(num(f), den(f))`` as polynomials in var i over ``F_{i-1}``, den monic."""
        tw = self.tower
        dgroups = tw.split_mpoly(self.den, i)
        lc = dgroups[max(dgroups)]
        return tw.poly_from_mpoly(self.num, i, lc), tw.poly_from_mpoly(self.den, i, lc)

    def as_poly(self, i: int) -> Polynomial:
        """The element as a polynomial in var i (requires a var-i-free denominator)."""
        if not self.is_polynomial_in(i):
            raise PreconditionViolated(f"{self} is not a polynomial in {self.tower.names[i]}")
        return self.tower.poly_from_mpoly(self.num, i, self.den)

    # -- arithmetic -----------------------------------------------------------

    def _other(self, other) -> "TowerElement":
        if isinstance(other, TowerElement):
            if other.tower is not self.tower:
                return self.tower.convert(other)
            return other
        return self.tower.convert(other)

    @_promoting
    def __add__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        if not o:
            return self
        if not self:
            return o
        tw = self.tower
        if self.den == o.den:
            return tw.element(self.num + o.num, self.den)
        # only the common part of the denominators can cancel
        d = self.den.gcd(o.den)
        if d.is_one():
            return tw.element(self.num * o.den + o.num * self.den, self.den * o.den)
        d1, d2 = self.den / d, o.den / d
        num = self.num * d2 + o.num * d1
        if num.is_zero():
            return tw.zero
        g = num.gcd(d)
        if not g.is_one():
            num, d = num / g, d / g
        den = d1 * d2 * d
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        _check_degree(num, den)
        return TowerElement(tw, num, den)

    __radd__ = __add__

    def __neg__(self):
        return TowerElement(self.tower, -self.num, self.den)

    @_promoting
    def __sub__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    @_promoting
    def __rsub__(self, other):
        try:
            return self._other(other) - self
        except TypeError:
            return NotImplemented

    @_promoting
    def __mul__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        if not self or not o:
            return self.tower.zero
        tw = self.tower
        num, den = self.num, self.den
        onum, oden = o.num, o.den
        # cross cancellation; trivial denominators need no gcd
        if not oden.is_one():
            g1 = num.gcd(oden)
            if not g1.is_one():
                num, oden = num / g1, oden / g1
        if not den.is_one():
            g2 = onum.gcd(den)
            if not g2.is_one():
                onum, den = onum / g2, den / g2
        num, den = num * onum, den * oden
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        _check_degree(num, den)
        return TowerElement(tw, num, den)

    __rmul__ = __mul__

    def inverse(self) -> "TowerElement":
        if not self:
            raise ZeroDenominator("inverse of zero")
        num, den = self.den, self.num
        if den.leading_coefficient() < 0:
            num, den = -num, -den
        return TowerElement(self.tower, num, den)

    @_promoting
    def __truediv__(self, other):
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    @_promoting
    def __rtruediv__(self, other):
        try:
            return self._other(other) * self.inverse()
        except TypeError:
            return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return self.tower.one
        num, den = self.num ** k, self.den ** k
        _check_degree(num, den)
        return TowerElement(self.tower, num, den)

    @_promoting
    def __eq__(self, other) -> bool:
        try:
            o = self._other(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.num.to_dict().items())), tuple(sorted(self.den.to_dict().items()))))

    def derive(self) -> "TowerElement":
        from .tower import derive

        return derive(self)

    def __repr__(self) -> str:
        from .frontend.formatting import format_plain

        return format_plain(self)

    __str__ = __repr__
