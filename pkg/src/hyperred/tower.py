"""Derivation, orders and the normal/special/proper classification.

All functions take the level ``i`` of the monomial ``t = var_i`` they work
with; ``i = 0`` treats ``x`` itself as a monomial over QQ (``x' = 1``).
"""

from __future__ import annotations

import math
from typing import NamedTuple, Optional

from .errors import PreconditionViolated, UnsupportedTower
from .field import Tower, TowerElement
from .poly import Polynomial, gcd, solve_diophantine, squarefree_part

TowerSpec = Tower


def _derive_mpoly(tw: Tower, mp) -> TowerElement:
    acc = tw.zero
    for i, d in enumerate(mp.degrees()):
        if d > 0:
            acc = acc + tw.derivation(i) * tw.element(mp.derivative(i), tw._one_mp)
    return acc


def derive(f: TowerElement) -> TowerElement:
    """The tower derivation: extends d/dx by the declared generator derivatives."""
    tw = f.tower
    if f.is_constant():
        return tw.zero
    dn = _derive_mpoly(tw, f.num)
    if f.den.is_constant():
        return dn * tw.element(tw._one_mp, f.den)
    dd = _derive_mpoly(tw, f.den)
    num = tw.element(f.num, tw._one_mp)
    den = tw.element(f.den, tw._one_mp)
    return (dn * den - num * dd) / (den * den)


def derive_poly(p: Polynomial, i: int) -> Polynomial:
    """Derivative of ``p`` in ``F_{i-1}[t_i]``, again a polynomial in ``t_i``."""
    if not p:
        return p
    tw = p.domain
    return derive(tw.from_poly(p, i)).as_poly(i)


def order_at(f: TowerElement, p: Polynomial) -> float:
    """``nu_p(f)``; ``math.inf`` for ``f = 0``.  ``p`` names its variable."""
    i = f.tower.index(p.var)
    if p.degree < 1:
        raise PreconditionViolated("order_at needs a polynomial of positive degree")
    if not f:
        return math.inf
    num, den = f.num_den(i)
    if p.divides(den):
        m = 0
        while den and p.divides(den):
            den = den.exact_div(p)
            m += 1
        return -m
    m = 0
    while p.divides(num):
        num = num.exact_div(p)
        m += 1
    return m


def is_normal(p: Polynomial, i: int) -> bool:
    if p.degree <= 0:
        return True
    return gcd(p, derive_poly(p, i)).degree == 0


def is_special(p: Polynomial, i: int) -> bool:
    if p.degree <= 0:
        return True
    return p.divides(derive_poly(p, i))


class NormalSpecialSplit(NamedTuple):
    normal: Polynomial
    special: Polynomial
    exceptional: Optional[Polynomial]


def _split_factor(p: Polynomial, i: int):
    # p = normal * special, special monic
    one = Polynomial.constant(p.domain.one, p.domain, p.var)
    if p.degree <= 0:
        return p, one
    s = gcd(p, derive_poly(p, i)).exact_div(gcd(p, p.diff()))
    if s.degree == 0:
        return p, one
    qn, qs = _split_factor(p.exact_div(s), i)
    return qn, (s * qs).monic()


def split_normal_special(p: Polynomial, i: int) -> NormalSpecialSplit:
    """``p = normal * special`` with ``special`` the special part of ``p``.

    For a hyperexponential generator the special part is ``t^m`` with
    ``m = nu_t(p)``.  ``exceptional`` reports a squarefree factor ``q`` of the
    normal part with ``gcd(q, q')`` nontrivial, which cannot happen over a
    regular tower.
    """
    if not p:
        raise PreconditionViolated("split_normal_special of zero")
    tw = p.domain
    if i >= 1 and tw.is_hyperexponential(i):
        m = p.trailing_degree()
        normal = p.shift(-m)
        special = Polynomial.monomial(tw.one, m, tw, p.var)
        q = squarefree_part(normal)
        g = gcd(q, derive_poly(q, i)) if q.degree > 0 else q
        exceptional = g if g.degree > 0 else None
        return NormalSpecialSplit(normal, special, exceptional)
    normal, special = _split_factor(p, i)
    return NormalSpecialSplit(normal, special, None)


def proper_split(f: TowerElement, i: int):
    """``f = proper + reduced`` with ``proper`` normally t_i-proper.

    For a hyperexponential ``t_i`` the second component is a Laurent
    polynomial in ``t_i`` over ``F_{i-1}``.
    """
    tw = f.tower
    if not f:
        return tw.zero, tw.zero
    num, den = f.num_den(i)
    quo, rem = num.divmod(den)
    normal, special, _ = split_normal_special(den, i)
    normal = normal.monic()
    if special.degree <= 0:
        return tw.from_poly(rem, i) / tw.from_poly(den, i), tw.from_poly(quo, i)
    u, v = solve_diophantine(normal, special, rem)
    # rem / (normal * special) = v / normal + u / special
    proper = tw.from_poly(v, i) / tw.from_poly(normal, i) if v else tw.zero
    reduced = tw.from_poly(quo, i) + tw.from_poly(u, i) / tw.from_poly(special, i)
    return proper, reduced


class Classification(NamedTuple):
    is_normal: bool
    is_special: bool
    is_simple: bool
    is_reduced: bool
    is_normally_proper: bool


def classify(f: TowerElement, i: int) -> Classification:
    """Flags of ``f`` as an element of ``F_{i-1}(t_i)``; they refer to den(f)."""
    num, den = f.num_den(i)
    proper = num.degree < den.degree
    normal = is_normal(den, i)
    special = is_special(den, i)
    nsplit = split_normal_special(den, i)
    return Classification(
        is_normal=normal,
        is_special=special,
        is_simple=proper and normal,
        is_reduced=special,
        is_normally_proper=proper and nsplit.special.degree <= 0,
    )


def is_simple(f: TowerElement, i: int) -> bool:
    return classify(f, i).is_simple


def in_base(f: TowerElement, i: int) -> bool:
    """True when ``f`` lies in ``F_{i-1}`` (does not involve var i or above)."""
    return f.level < i or (i == 0 and f.is_constant())


def laurent_coefficients(f: TowerElement, i: int) -> dict:
    """``{k: c_k}`` for a Laurent polynomial ``f = sum c_k t_i^k``."""
    num, den = f.num_den(i)
    m = den.trailing_degree()
    if den.degree != m:
        raise PreconditionViolated(f"{f} is not a Laurent polynomial in {den.var}")
    return {k - m: c for k, c in enumerate(num.coeffs) if c}


def require_rationally_hyperexponential(tower: Tower) -> None:
    for g in tower.generators:
        if g.kind != "hyperexponential":
            raise UnsupportedTower(f"{g.name} is not hyperexponential")
        if g.sigma.level != 0:
            raise UnsupportedTower(f"{g.name}'/{g.name} = {g.sigma} is not in QQ(x)")
