"""Shell, kernel and kernel-shell reductions modulo ``V_f = {a' + a f}``.

Every function works in ``F(t)`` with ``F = F_{i-1}`` and ``t = var_i``.
Polynomials are :class:`~hyperred.poly.Polynomial` values in ``t``; results
are returned as tower elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotWeaklyNormalized, PreconditionViolated
from .field import TowerElement
from .kernel import WEAK, is_weakly_normalized
from .poly import Polynomial, coprime_split, gcd, partial_fractions, solve_diophantine, squarefree_factorization
from .tower import derive, derive_poly, split_normal_special


@dataclass(frozen=True)
class ReductionCertificate:
    """``g = a' + a*f + h + r/den(f)`` with ``h`` t-simple and ``r`` t-reduced."""

    a: TowerElement
    h: TowerElement
    r: TowerElement
    f: TowerElement
    level: int

    def den_f(self) -> TowerElement:
        return den_element(self.f, self.level)

    def remainder(self) -> TowerElement:
        """The t-reduced contribution ``r / den(f)``."""
        return self.r / self.den_f()

    def rebuild(self) -> TowerElement:
        return derive(self.a) + self.a * self.f + self.h + self.remainder()

    def holds_for(self, g: TowerElement) -> bool:
        return self.rebuild() == g


def den_element(f: TowerElement, i: int) -> TowerElement:
    """``den(f)`` in ``F[t_i]``, made monic, as a tower element."""
    return f.tower.from_poly(f.num_den(i)[1], i)


def _elem(p: Polynomial, i: int) -> TowerElement:
    return p.domain.from_poly(p, i)


def _require_weak(f: TowerElement, i: int, check: bool) -> None:
    if check:
        res = is_weakly_normalized(f, i, WEAK)
        if not res:
            raise NotWeaklyNormalized(f"{f} is not weakly normalized (witness {res.witness})")


def gsr(f: TowerElement, g: TowerElement, i: int):
    """Shell reduction: ``g = a' + a*f + h + q/den(f)``.

    Returns ``(a, h, q)`` with ``h`` t-simple, ``den(h) | den(g)`` and ``q`` a
    polynomial in ``t``.  ``den(g)`` must be free of special factors and
    coprime with ``den(f)``.
    """
    tw = g.tower
    if not g:
        return tw.zero, tw.zero, tw.zero
    nf, df = f.num_den(i)
    num, den = g.num_den(i)
    if split_normal_special(den, i).special.degree > 0:
        raise PreconditionViolated("den(g) has a nontrivial special factor")
    if gcd(den, df).degree > 0:
        raise PreconditionViolated("den(g) and den(f) are not coprime")
    parts = squarefree_factorization(den)
    poly_part, terms = partial_fractions(num, parts)
    a = tw.zero
    h = tw.zero
    q = poly_part * df
    for (p, mult), digits in zip(parts, terms):
        dp = derive_poly(p, i)
        cur = list(digits)  # cur[k-1] is the numerator over p**k
        for k in range(mult, 1, -1):
            qk = cur[k - 1]
            if not qk:
                continue
            u1, u2 = solve_diophantine(p, dp, qk)
            inv = Fraction(1, k - 1)
            u3 = u2.scale(tw.convert(-inv))
            u4 = derive_poly(u2, i).scale(tw.convert(inv)) + u1
            pk = p ** (k - 1)
            a = a + _elem(u3, i) / _elem(pk, i)
            # -u3*f/p^(k-1) = A/p^(k-1) + B/den(f)
            B, A = solve_diophantine(pk, df, -(u3 * nf))
            cur[k - 2] = cur[k - 2] + u4 + A
            q = q + B
        quo, rem = cur[0].divmod(p)
        if rem:
            h = h + _elem(rem, i) / _elem(p, i)
        q = q + quo * df
    return a, h, _elem(q, i)


def gkr(f: TowerElement, p, m: int, i: int, check: bool = True):
    """Kernel reduction: ``p/den(f)^m = a' + a*f + q/den(f)``; returns ``(a, q)``."""
    tw = f.tower
    if m < 1:
        raise PreconditionViolated("gkr needs m >= 1")
    _require_weak(f, i, check)
    if isinstance(p, TowerElement):
        p = p.as_poly(i)
    nf, df = f.num_den(i)
    ddf = derive_poly(df, i)
    a = tw.zero
    while m > 1 and p:
        v, u = solve_diophantine(df, nf - ddf.scale(tw.convert(m - 1)), p)
        a = a + _elem(u, i) / _elem(df, i) ** (m - 1)
        p = v - derive_poly(u, i)
        m -= 1
    return a, _elem(p, i)


def three_way_split(f: TowerElement, g: TowerElement, i: int):
    """``g = g1 + g2 + g3`` for the kernel-shell reduction.

    ``g1`` is normally t-proper with denominator coprime to ``den(f)``, ``g2``
    is t-proper with denominator supported on ``den(f)``, and ``g3`` collects
    the polynomial part and the special part of the denominator.
    """
    tw = g.tower
    _, df = f.num_den(i)
    num, den = g.num_den(i)
    normal, special, _ = split_normal_special(den, i)
    normal = normal.monic()
    d2 = Polynomial.constant(tw.one, tw, den.var)
    rest = normal
    c = gcd(rest, df)
    while c.degree > 0:
        d2 = d2 * c
        rest = rest.exact_div(c)
        c = gcd(rest, df)
    quo, rem = num.divmod(den)
    blocks = [rest, d2, special]
    pieces = coprime_split(rem, blocks)
    g1, g2, g3 = (_elem(a, i) / _elem(b, i) for a, b in zip(pieces, blocks))
    return g1, g2, g3 + _elem(quo, i), d2


def gksr(f: TowerElement, g: TowerElement, i: int, check: bool = True) -> ReductionCertificate:
    """Kernel-shell reduction of ``g`` with respect to a weakly normalized ``f``."""
    tw = g.tower
    _require_weak(f, i, check)
    if not g:
        return ReductionCertificate(tw.zero, tw.zero, tw.zero, f, i)
    _, df = f.num_den(i)
    g1, g2, g3, d2 = three_way_split(f, g, i)
    a1, h, r1 = gsr(f, g1, i)
    a, r = a1, r1
    if g2:
        m = 1
        while not d2.divides(df ** m):
            m += 1
        p = g2 * _elem(df, i) ** m
        a2, q = gkr(f, p.as_poly(i), m, i, check=False)
        a, r = a + a2, r + q
    r = r + g3 * _elem(df, i)
    return ReductionCertificate(a, h, r, f, i)


def in_Vf(f: TowerElement, g: TowerElement, i: int, check: bool = True) -> bool:
    """True iff ``g = a' + a*f`` for some ``a`` in ``F_{i-1}(t_i)``."""
    from .membership import in_Vf as _in_vf

    return _in_vf(f, g, i, check)
