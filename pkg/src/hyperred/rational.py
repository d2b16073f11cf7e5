"""Reductions over QQ(x): Hermite-Ostrogradsky, residual forms and the
Hermite reduction for hyperexponential functions.

All elements here have level 0 (they may live in a larger tower).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import NotDifferentialReduced, PreconditionViolated
from .field import TowerElement
from .kernel import NORMALIZED, gks, integer_lambda_candidates
from .poly import QQ, Polynomial
from .reductions import gkr, gsr, three_way_split


def _require_level0(f: TowerElement) -> None:
    if f.level != 0:
        raise PreconditionViolated(f"{f} does not lie in QQ(x)")


def to_qq(p: Polynomial) -> Polynomial:
    """Coefficients of a level-0 polynomial as Fractions."""
    return Polynomial([c.as_fraction() for c in p.coeffs], QQ, p.var)


def from_qq(tw, p: Polynomial) -> TowerElement:
    x = tw.x
    acc = tw.zero
    for k, c in enumerate(p.coeffs):
        if c:
            acc = acc + tw.convert(c) * x ** k
    return acc


def integrate_polynomial(p: TowerElement) -> TowerElement:
    """Antiderivative (zero constant term) of a polynomial in x over QQ."""
    tw = p.tower
    q = to_qq(p.as_poly(0))
    coeffs = [Fraction(0)] + [c / (k + 1) for k, c in enumerate(q.coeffs)]
    return from_qq(tw, Polynomial(coeffs, QQ, "x"))


def hermite_ostrogradsky(f: TowerElement):
    """``f = u' + v`` with ``v`` x-simple; ``v = 0`` iff ``f`` has a rational integral."""
    _require_level0(f)
    tw = f.tower
    a, h, q = gsr(tw.zero, f, 0)
    return a + integrate_polynomial(q), h


# ---------------------------------------------------------------------------
# phi_xi and its complement


def _phi(num: Polynomial, den: Polynomial, a: Polynomial) -> Polynomial:
    return den * a.diff() + num * a


class ResidualBasis:
    """Echelon basis of ``im(phi_xi)`` for ``phi_xi(a) = den(xi) a' + num(xi) a``.

    The map is injective unless ``xi`` has a negative integer residue (then
    ``x**k`` with ``k = -residue`` is annihilated), which is rejected.
    Pivots are the leading degrees of the reduced images of ``x^0, ..., x^bound``.
    Degrees that are not pivots span the complement ``N``.  The value is
    immutable; :meth:`extended` returns a larger basis.
    """

    def __init__(self, xi: TowerElement, bound: int, _check: bool = True):
        _require_level0(xi)
        if _check:
            bad = [m for m in integer_lambda_candidates(xi, xi.num_den(0)[1], 0, NORMALIZED) if m < 0]
            if bad:
                raise NotDifferentialReduced(f"phi is not injective for {xi} (witness {max(bad)})", max(bad))
        self.xi = xi
        num, den = xi.num_den(0)
        self.num = to_qq(num)
        self.den = to_qq(den)
        self.shift = max(self.den.degree - 1, self.num.degree)
        self.critical = self._critical_index()
        self.bound = bound
        self.pivots: dict = {}
        for k in range(bound + 1):
            self._insert(k)

    def _critical_index(self) -> int:
        # phi(x^k) loses its top term when k*lc(den) + lc(num) = 0
        if self.num and self.num.degree == self.den.degree - 1:
            k = -self.num.lc / self.den.lc
            if k.denominator == 1 and k > 0:
                return int(k)
        return 0

    def _insert(self, k: int) -> None:
        mono = Polynomial.monomial(Fraction(1), k, QQ, "x")
        img = _phi(self.num, self.den, mono)
        pre = mono
        while img and img.degree in self.pivots:
            pimg, ppre = self.pivots[img.degree]
            c = img.lc / pimg.lc
            img = img - pimg.scale(c)
            pre = pre - ppre.scale(c)
        if img:
            self.pivots[img.degree] = (img, pre)

    def required_bound(self, degree: int) -> int:
        return max(degree + self.den.degree + 2 + self.critical, 0)

    def extended(self, bound: int) -> "ResidualBasis":
        if bound <= self.bound:
            return self
        new = object.__new__(ResidualBasis)
        new.xi, new.num, new.den = self.xi, self.num, self.den
        new.shift, new.critical = self.shift, self.critical
        new.bound = bound
        new.pivots = dict(self.pivots)
        for k in range(self.bound + 1, bound + 1):
            new._insert(k)
        return new

    def complement_degrees(self, upto: int) -> list:
        """Degrees ``<= upto`` spanning ``N``."""
        basis = self.extended(self.required_bound(upto))
        return [d for d in range(upto + 1) if d not in basis.pivots]

    def split(self, p: Polynomial):
        """``p = phi(b) + q`` with ``q`` in ``N``; returns ``(b, q)`` over QQ."""
        basis = self.extended(self.required_bound(p.degree))
        b = Polynomial.zero(QQ, "x")
        q = Polynomial.zero(QQ, "x")
        rest = p
        while rest:
            d = rest.degree
            if d in basis.pivots:
                img, pre = basis.pivots[d]
                c = rest.lc / img.lc
                rest = rest - img.scale(c)
                b = b + pre.scale(c)
            else:
                top = Polynomial.monomial(rest.lc, d, QQ, "x")
                q = q + top
                rest = rest - top
        return b, q

    def project(self, p: Polynomial) -> Polynomial:
        return self.split(p)[1]


def build_residual_basis(xi: TowerElement, bound: Optional[int] = None) -> ResidualBasis:
    _require_level0(xi)
    if bound is None:
        bound = xi.num_den(0)[1].degree + 2
    return ResidualBasis(xi, bound)


@dataclass(frozen=True)
class ResidualForm:
    """``v + q/den(xi)`` with ``v`` x-simple and ``q`` in the complement ``N``."""

    simple: TowerElement
    poly: TowerElement
    xi: TowerElement = field(repr=False)

    def value(self) -> TowerElement:
        den = self.xi.tower.from_poly(self.xi.num_den(0)[1], 0)
        return self.simple + self.poly / den

    def is_zero(self) -> bool:
        return not self.simple and not self.poly


@dataclass(frozen=True)
class HermiteResult:
    """``g*eta = w' + w*xi + residual`` so ``g y = (w/eta y)' + residual/eta y``."""

    w: TowerElement
    residual: ResidualForm
    xi: TowerElement
    eta: TowerElement

    def antiderivative_factor(self) -> TowerElement:
        """``w / eta``: the coefficient of ``y`` in the reduced integral."""
        return self.w / self.eta

    def remainder_factor(self) -> TowerElement:
        """``residual / eta``: the coefficient of ``y`` in the remainder."""
        return self.residual.value() / self.eta


def hyperexp_hermite(g: TowerElement, omega: TowerElement, seed: int = 0, kernel_shell=None) -> HermiteResult:
    """Hermite reduction of ``g * exp(int(omega))`` for ``g, omega`` in QQ(x).

    ``kernel_shell`` may carry a precomputed normalized kernel and shell of
    ``omega``.
    """
    _require_level0(g)
    _require_level0(omega)
    tw = g.tower
    ks = kernel_shell if kernel_shell is not None else gks(omega, 0, NORMALIZED, seed)
    xi, eta = ks.kernel, ks.shell
    num_xi, den_xi = xi.num_den(0)
    den_e = tw.from_poly(den_xi, 0)
    G = g * eta
    if not G:
        return HermiteResult(tw.zero, ResidualForm(tw.zero, tw.zero, xi), xi, eta)
    g1, g2, g3, d2 = three_way_split(xi, G, 0)
    a1, h, q = gsr(xi, g1, 0)
    w = a1
    if g2:
        m = 1
        while not d2.divides(den_xi ** m):
            m += 1
        a2, q2 = gkr(xi, (g2 * den_e ** m).as_poly(0), m, 0, check=False)
        w, q = w + a2, q + q2
    q = q + g3 * den_e
    basis = ResidualBasis(xi, 0, _check=False)
    b, qn = basis.split(to_qq(q.as_poly(0)))
    w = w + from_qq(tw, b)
    return HermiteResult(w, ResidualForm(h, from_qq(tw, qn), xi), xi, eta)


def solve_rde(c: TowerElement, s: TowerElement, seed: int = 0):
    """A rational solution of ``y' + c*y = s`` in QQ(x), or ``None``.

    Also returns a basis element of the homogeneous solutions (``None`` when
    the only homogeneous solution is zero).
    """
    res = hyperexp_hermite(s, c, seed)
    hom = None if res.xi else res.eta.inverse()
    if not res.residual.is_zero():
        return None, hom
    return res.antiderivative_factor(), hom
