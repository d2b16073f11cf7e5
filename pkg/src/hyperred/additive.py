"""Additive decompositions ``f = g' + r`` in rationally hyperexponential towers.

The remainder ``r`` is kept in Matryoshka form.  A level ``i >= 1`` term is
``h * T`` with ``h`` t_i-simple.  A level-0 term is either the x-simple part
of the ``T = 1`` coefficient, or ``(v + q/den(xi_T)) / eta_T * T`` where
``v + q/den(xi_T)`` is a residual form for the normalized kernel ``xi_T`` of
``T'/T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InvariantViolation
from .field import Tower, TowerElement
from .kernel import NORMALIZED, gks
from .matryoshka import (
    MatryoshkaDecomposition,
    MatryoshkaTerm,
    log_derivative_of,
    matryoshka_decompose,
    power_product,
)
from .rational import HermiteResult, ResidualForm, hermite_ostrogradsky, hyperexp_hermite
from .reductions import gksr
from .tower import derive, require_rationally_hyperexponential


@dataclass(frozen=True)
class RemainderTerm:
    level: int
    exponents: tuple
    coeff: TowerElement
    residual: Optional[ResidualForm] = None
    eta: Optional[TowerElement] = None

    def power_product(self) -> TowerElement:
        return power_product(self.coeff.tower, self.exponents)

    def value(self) -> TowerElement:
        return self.coeff * self.power_product()


@dataclass(frozen=True)
class AdditiveDecomposition:
    """``f = g' + r`` with ``r = sum of terms``; ``r = 0`` iff ``f`` is a derivative."""

    tower: Tower
    f: TowerElement
    g: TowerElement
    terms: tuple

    @property
    def r(self) -> TowerElement:
        acc = self.tower.zero
        for term in self.terms:
            acc = acc + term.value()
        return acc

    def remainder_decomposition(self) -> MatryoshkaDecomposition:
        return MatryoshkaDecomposition(
            self.tower, tuple(MatryoshkaTerm(t.level, t.exponents, t.coeff) for t in self.terms)
        )

    def projection(self, i: int) -> TowerElement:
        acc = self.tower.zero
        for term in self.terms:
            if term.level == i:
                acc = acc + term.value()
        return acc

    def is_zero(self) -> bool:
        return not self.terms

    def holds(self) -> bool:
        return derive(self.g) + self.r == self.f


def ad_rht(f: TowerElement, seed: int = 0) -> AdditiveDecomposition:
    """Additive decomposition of ``f`` in its (rationally hyperexponential) tower."""
    tw = f.tower
    require_rationally_hyperexponential(tw)
    if not f:
        return AdditiveDecomposition(tw, f, tw.zero, ())
    decomp = matryoshka_decompose(f)
    g = tw.zero
    terms = []
    hermite_cache: dict = {}
    for term in decomp.terms:
        T = term.power_product()
        sigma_T = log_derivative_of(tw, term.exponents)
        if term.level >= 1:
            cert = gksr(sigma_T, term.coeff, term.level, check=False)
            if cert.r:
                raise InvariantViolation("nonzero reduced part for a normally proper coefficient")
            g = g + cert.a * T
            if cert.h:
                terms.append(RemainderTerm(term.level, term.exponents, cert.h))
        elif not any(term.exponents):
            u, v = hermite_ostrogradsky(term.coeff)
            g = g + u
            if v:
                terms.append(RemainderTerm(0, term.exponents, v))
        else:
            res = _hermite(hermite_cache, term, sigma_T, seed)
            g = g + res.antiderivative_factor() * T
            if not res.residual.is_zero():
                terms.append(
                    RemainderTerm(0, term.exponents, res.remainder_factor(), res.residual, res.eta)
                )
    terms.sort(key=lambda t: (t.level, t.exponents))
    return AdditiveDecomposition(tw, f, g, tuple(terms))


def _hermite(cache: dict, term: MatryoshkaTerm, sigma_T: TowerElement, seed: int) -> HermiteResult:
    # the kernel and shell of T'/T depend only on the exponent vector
    key = term.exponents
    if key not in cache:
        cache[key] = gks(sigma_T, 0, NORMALIZED, seed)
    return hyperexp_hermite(term.coeff, sigma_T, seed, kernel_shell=cache[key])


def is_derivative(f: TowerElement, seed: int = 0) -> bool:
    """True iff ``f = g'`` for some ``g`` in the tower."""
    return ad_rht(f, seed).is_zero()
