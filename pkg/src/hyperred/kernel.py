"""Kernels and shells: ``f = eta'/eta + xi`` with ``xi`` (weakly) normalized.

The integer "residues" that must be moved into the shell are found without
factoring over function fields: candidates are integer roots of a
specialized Rothstein-Trager resultant, and each candidate ``m`` is then
verified and isolated symbolically with ``gcd(num - m*den', p)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import flint

from .errors import PreconditionViolated
from .field import TowerElement
from .poly import QQ, Polynomial, gcd, integer_roots, interpolate
from .tower import derive, derive_poly

WEAK = "weak"
NORMALIZED = "normalized"

_MAX_TRIES = 24


@dataclass(frozen=True)
class KernelShell:
    kernel: TowerElement
    shell: TowerElement
    mode: str


@dataclass(frozen=True)
class NormalizationCheck:
    ok: bool
    witness: Optional[int] = None
    factor: Optional[Polynomial] = None

    def __bool__(self) -> bool:
        return self.ok


def _check_mode(mode: str) -> None:
    if mode not in (WEAK, NORMALIZED):
        raise PreconditionViolated(f"unknown mode {mode!r}")


def _evaluate(c: TowerElement, point) -> Fraction:
    d = c.den(*point)
    if d == 0:
        raise ZeroDivisionError
    return Fraction(int(c.num(*point)), int(d))


def _flint_poly(p: Polynomial):
    return flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in p.coeffs])


def _fraction(q) -> Fraction:
    return Fraction(int(q.p), int(q.q))


def _specialize(p: Polynomial, point) -> Polynomial:
    return Polynomial([_evaluate(c, point) for c in p.coeffs], QQ, p.var)


def _candidate_roots(num: Polynomial, dnum: Polynomial, den: Polynomial, rng: random.Random) -> list:
    """Integer roots of ``res_t(num - z*dnum, den)`` after a random specialization.

    Every integer root of the symbolic resultant survives as long as the
    degree of ``den`` is preserved, so the returned list is a superset.
    """
    tw = den.domain
    d = den.degree
    for attempt in range(_MAX_TRIES):
        spread = 10 + 40 * attempt
        point = [rng.randint(-spread, spread) for _ in tw.names]
        try:
            ns, ps, ds = (_specialize(q, point) for q in (num, dnum, den))
        except ZeroDivisionError:
            continue
        if ds.degree != d:
            continue
        # monic keeps res(ds, .) stable when the other degree drops
        fd, fn, fp = (_flint_poly(q) for q in (ds.monic(), ns, ps))
        zs = list(range(d + 1))
        vals = [_fraction(fd.resultant(fn - z * fp)) for z in zs]
        r = interpolate(zs, vals, QQ, "z")
        if not r:
            continue
        return integer_roots(r)
    raise PreconditionViolated("no usable evaluation point found")


def _common_factor(num, dnum, den, m) -> Polynomial:
    return gcd(num - dnum.scale(den.domain.convert(m)), den)


def _allowed(m: int, mode: str) -> bool:
    return m > 0 if mode == WEAK else m != 0


def integer_lambda_candidates(f: TowerElement, p: Polynomial, i: int, mode: str = NORMALIZED, seed: int = 0) -> list:
    """Integers ``m`` with ``gcd(num(f) - m*den(f)', p)`` nontrivial.

    ``mode`` restricts the search to positive integers (``"weak"``) or all
    nonzero integers (``"normalized"``).  Every returned value is verified
    symbolically, so the list is exact.
    """
    _check_mode(mode)
    if p.degree <= 0:
        return []
    num, den = f.num_den(i)
    dden = derive_poly(den, i)
    rng = random.Random(seed)
    out = []
    for m in _candidate_roots(num, dden, p, rng):
        if _allowed(m, mode) and _common_factor(num, dden, p, m).degree > 0:
            out.append(m)
    return out


def is_weakly_normalized(f: TowerElement, i: int, mode: str = WEAK, seed: int = 0) -> NormalizationCheck:
    """Decide ``gcd(num(f) - k*den(f)', den(f)) = 1`` for all admissible ``k``.

    On failure the check carries the offending ``k`` of least absolute value
    and the common factor.
    """
    _check_mode(mode)
    if not f.depends_on(i) and (i > 0 or f.is_constant()):
        return NormalizationCheck(True)
    num, den = f.num_den(i)
    if den.degree <= 0:
        return NormalizationCheck(True)
    dden = derive_poly(den, i)
    rng = random.Random(seed)
    cands = sorted((m for m in _candidate_roots(num, dden, den, rng) if _allowed(m, mode)), key=lambda m: (abs(m), m))
    for m in cands:
        g = _common_factor(num, dden, den, m)
        if g.degree > 0:
            return NormalizationCheck(False, m, g)
    return NormalizationCheck(True)


def normal_simple_part(den: Polynomial, i: int) -> Polynomial:
    """Product of the normal irreducible factors of multiplicity one in ``den``."""
    dd = derive_poly(den, i)
    w = den.exact_div(gcd(den, dd))
    return w.exact_div(gcd(w, dd)).monic()


def gks(f: TowerElement, i: int, mode: str = WEAK, seed: int = 0) -> KernelShell:
    """Weakly normalized (or normalized) kernel and shell of ``f`` in ``F_{i-1}(t_i)``."""
    _check_mode(mode)
    tw = f.tower
    if not f.depends_on(i):
        return KernelShell(f, tw.one, mode)
    num, den = f.num_den(i)
    dden = derive_poly(den, i)
    p = normal_simple_part(den, i)
    if p.degree <= 0:
        return KernelShell(f, tw.one, mode)
    xi, eta = f, tw.one
    for m in _candidate_roots(num, dden, p, random.Random(seed)):
        if not _allowed(m, mode):
            continue
        h = _common_factor(num, dden, p, m)
        if h.degree <= 0:
            continue
        he = tw.from_poly(h, i)
        xi = xi - m * derive(he) / he
        eta = eta * he ** m
    return KernelShell(xi, eta, mode)
