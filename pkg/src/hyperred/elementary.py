"""Residues, the elementary-integrability test and elementary integrals.

A remainder ``r`` from :func:`ad_rht` has an elementary integral iff its
level-0 projection is an x-simple element of QQ(x) and, for every ``i >= 1``,
``pi_i(r)`` is a t_i-simple element of ``F_i`` whose residues are algebraic
numbers.  Residues are the roots of the Rothstein-Trager resultant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .additive import AdditiveDecomposition, ad_rht
from .algebraic import ALPHA, AlgebraicElement, AlgebraicField, derive_alg_poly
from .errors import InvariantViolation, PreconditionViolated
from .field import TowerElement
from .poly import QQ, Polynomial, factor_rational, gcd, interpolate, resultant
from .rational import from_qq, hermite_ostrogradsky, to_qq
from .tower import derive, derive_poly, is_simple, require_rationally_hyperexponential

Z = "z"


# ---------------------------------------------------------------------------
# residues


def _level(h: TowerElement, i: Optional[int]) -> int:
    return h.level if i is None else i


def _require_simple(h: TowerElement, i: int) -> None:
    if h and not is_simple(h, i):
        raise PreconditionViolated(f"{h} is not {h.tower.names[i]}-simple")


def rothstein_trager_resultant(h: TowerElement, i: Optional[int] = None) -> Polynomial:
    """``R(z) = res_t(num(h) - z*den(h)', den(h))`` over ``F_{i-1}`` with ``den(h)`` monic.

    The resultant is evaluated at ``z = 0, ..., deg den`` and interpolated.
    """
    i = _level(h, i)
    tw = h.tower
    _require_simple(h, i)
    if not h:
        return Polynomial.zero(tw, Z)
    num, den = h.num_den(i)
    dden = derive_poly(den, i)
    d = den.degree
    d_a = max(num.degree, dden.degree)
    zs = list(range(d + 1))
    # den first: monic, so the value is stable when num - z*den' drops degree
    vals = [resultant(den, num - dden.scale(tw.convert(z))) for z in zs]
    S = interpolate(zs, vals, tw, Z)
    return -S if (d_a * d) % 2 else S


@dataclass(frozen=True)
class ResidueData:
    """Monic squarefree ``R(z)`` over QQ and its irreducible factors."""

    poly: Polynomial
    factors: tuple

    def rational_residues(self) -> list:
        return [-m.coeffs[0] for m in self.factors if m.degree == 1]


def residues_constant(h: TowerElement, i: Optional[int] = None):
    """``(ok, data)``: whether all residues of ``h`` are algebraic numbers.

    ``data`` is a :class:`ResidueData` when ``ok`` and ``None`` otherwise.
    """
    i = _level(h, i)
    _require_simple(h, i)
    if not h:
        return True, ResidueData(Polynomial.constant(Fraction(1), QQ, Z), ())
    R = rothstein_trager_resultant(h, i)
    sq = R.exact_div(gcd(R, R.diff())).monic()
    if not all(c.is_constant() for c in sq.coeffs):
        return False, None
    rq = Polynomial([c.as_fraction() for c in sq.coeffs], QQ, Z)
    _, facs = factor_rational(rq)
    return True, ResidueData(rq, tuple(m for m, _ in facs))


# ---------------------------------------------------------------------------
# the test


@dataclass(frozen=True)
class LevelDiagnosis:
    level: int
    ok: bool
    reason: str = ""

    def __str__(self) -> str:
        status = "ok" if self.ok else "fails"
        return f"pi_{self.level}(r): {status}" + (f" ({self.reason})" if self.reason else "")


def _power_name(tw, exps) -> str:
    parts = []
    for j, e in enumerate(exps, start=1):
        if e:
            parts.append(tw.names[j] if e == 1 else f"{tw.names[j]}^{e}")
    return "*".join(parts)


def elementary_test(decomp: AdditiveDecomposition):
    """``(ok, diagnoses)``: the elementary-integrability criterion, level by level."""
    tw = decomp.tower
    diags = []
    for i in range(tw.n + 1):
        reasons = []
        for term in decomp.terms:
            if term.level != i:
                continue
            if any(term.exponents):
                T = _power_name(tw, term.exponents)
                reasons.append(f"term with power product {T} != 1 is not in F_{i}")
                continue
            if not is_simple(term.coeff, i):
                reasons.append(f"{term.coeff} is not {tw.names[i]}-simple")
                continue
            if i > 0 and not residues_constant(term.coeff, i)[0]:
                reasons.append(f"{term.coeff} has a nonconstant residue")
        diags.append(LevelDiagnosis(i, not reasons, "; ".join(reasons)))
    return all(d.ok for d in diags), tuple(diags)


# ---------------------------------------------------------------------------
# logarithmic parts


@dataclass(frozen=True)
class LogTerm:
    """``coeff * log(arg)`` with a rational ``coeff``."""

    coeff: Fraction
    arg: TowerElement

    def derivative(self) -> TowerElement:
        return self.coeff * derive(self.arg) / self.arg


@dataclass(frozen=True)
class RootSum:
    """``sum over alpha with minpoly(alpha) = 0 of coeff(alpha) * log(arg(alpha))``.

    ``arg`` is a polynomial in ``var_level`` over ``F_{level-1}[alpha]``.
    ``display`` optionally keeps ``coeff`` as an unreduced quotient of two
    polynomials in ``alpha`` over QQ.
    """

    minpoly: Polynomial
    coeff: AlgebraicElement
    arg: Polynomial
    level: int
    display: Optional[tuple] = None

    @property
    def field(self) -> AlgebraicField:
        return self.coeff.field

    def derivative(self) -> TowerElement:
        """``Tr(coeff * arg'/arg)`` written over the norm of ``arg``."""
        K = self.field
        tw = K.tower
        i = self.level
        # N = prod over the conjugates of arg, an element of F_i
        by_alpha = [tw.zero] * K.degree
        for j, c in enumerate(self.arg.coeffs):
            for k, ck in enumerate(c.coeffs):
                by_alpha[k] = by_alpha[k] + ck * tw.gen(i) ** j
        N = resultant(K._m, Polynomial(by_alpha, tw, ALPHA))
        Np = N.as_poly(i).map_coeffs(K.convert, K)
        cofactor = Np.exact_div(self.arg)
        prod = derive_alg_poly(self.arg, i) * cofactor
        traced = Polynomial([(self.coeff * c).trace() for c in prod.coeffs], tw, tw.names[i])
        return tw.from_poly(traced, i) / N


@dataclass(frozen=True)
class LogPart:
    logs: tuple = ()
    root_sums: tuple = ()

    def derivative(self, tower) -> TowerElement:
        acc = tower.zero
        for t in self.logs:
            acc = acc + t.derivative()
        for s in self.root_sums:
            acc = acc + s.derivative()
        return acc

    def is_empty(self) -> bool:
        return not self.logs and not self.root_sums


@dataclass(frozen=True)
class IntegralExpression:
    """``int f = g + logs`` when elementary, else ``int f = g + int remainder``."""

    f: TowerElement
    g: TowerElement
    log_part: LogPart
    remainder: TowerElement
    diagnosis: tuple = field(default=(), compare=False)

    @property
    def tower(self):
        return self.f.tower

    @property
    def is_elementary(self) -> bool:
        return not self.remainder

    def derivative(self) -> TowerElement:
        return derive(self.g) + self.log_part.derivative(self.tower) + self.remainder

    def verify(self) -> bool:
        return self.derivative() == self.f


# ---------------------------------------------------------------------------
# construction


def _alg_poly(p: Polynomial, K: AlgebraicField) -> Polynomial:
    return Polynomial([K.convert(c) for c in p.coeffs], K, p.var)


def _logs_at_level(h: TowerElement, i: int, data: ResidueData, logs: list, sums: list) -> TowerElement:
    """Append the logs of ``h`` and return ``h`` minus their derivatives."""
    tw = h.tower
    num, den = h.num_den(i)
    dden = derive_poly(den, i)
    rest = h
    for m in data.factors:
        if m.degree == 1:
            c = -m.coeffs[0]
            arg = tw.from_poly(gcd(num - dden.scale(tw.convert(c)), den), i)
            term = LogTerm(c, arg)
            logs.append(term)
        else:
            K = AlgebraicField(Polynomial(m.coeffs, QQ, ALPHA), tw)
            a = K.gen()
            Ka, Kd, Kdd = (_alg_poly(p, K) for p in (num, den, dden))
            arg = gcd(Ka - Kdd.scale(a), Kd)
            term = RootSum(K.minpoly, a, arg, i)
            sums.append(term)
        rest = rest - term.derivative()
    return rest


def _logs_at_zero(v: TowerElement, logs: list, sums: list) -> None:
    """Logs of an x-simple ``v``: rational residues first, then root sums over
    the remaining irreducible denominator factors."""
    tw = v.tower
    if not v:
        return
    ok, data = residues_constant(v, 0)
    rest = v
    for c in data.rational_residues():
        num, den = rest.num_den(0)
        dden = derive_poly(den, 0)
        arg = tw.from_poly(gcd(num - dden.scale(tw.convert(c)), den), 0)
        term = LogTerm(c, arg)
        logs.append(term)
        rest = rest - term.derivative()
    if not rest:
        return
    num, den = (to_qq(p) for p in rest.num_den(0))
    dden = den.diff()
    _, facs = factor_rational(den)
    for p, _ in facs:
        pa = Polynomial(p.coeffs, QQ, ALPHA)
        if p.degree == 1:
            root = -p.coeffs[0]
            term = LogTerm(num(root) / dden(root), from_qq(tw, Polynomial((-root, 1), QQ, "x")))
            logs.append(term)
            continue
        K = AlgebraicField(pa, tw)
        na = Polynomial(num.coeffs, QQ, ALPHA)
        da = Polynomial(dden.coeffs, QQ, ALPHA)
        coeff = K.from_rational_poly(na) / K.from_rational_poly(da)
        arg = Polynomial((-K.gen(), K.one), K, "x")
        sums.append(RootSum(K.minpoly, coeff, arg, 0, (na % pa, da % pa)))


def integrate(f: TowerElement, seed: int = 0) -> IntegralExpression:
    """An elementary integral of ``f`` when one exists.

    Otherwise the result carries ``g`` and the nonzero remainder, with an
    empty log part.
    """
    tw = f.tower
    require_rationally_hyperexponential(tw)
    decomp = ad_rht(f, seed)
    ok, diags = elementary_test(decomp)
    if not ok:
        return IntegralExpression(f, decomp.g, LogPart(), decomp.r, diags)
    g = decomp.g
    logs: list = []
    sums: list = []
    base = tw.zero
    for term in decomp.terms:
        if term.level == 0:
            base = base + term.coeff
            continue
        _, data = residues_constant(term.coeff, term.level)
        rest = _logs_at_level(term.coeff, term.level, data, logs, sums)
        if rest.level != 0:
            raise InvariantViolation(f"log extraction at level {term.level} left {rest}")
        base = base + rest
    u, v = hermite_ostrogradsky(base)
    g = g + u
    _logs_at_zero(v, logs, sums)
    out = IntegralExpression(f, g, LogPart(tuple(logs), tuple(sums)), tw.zero, diags)
    if not out.verify():
        raise InvariantViolation("elementary integral does not differentiate back to the integrand")
    return out
