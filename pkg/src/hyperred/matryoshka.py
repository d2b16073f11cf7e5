"""Laurent-Matryoshka decomposition ``F_n = L_0 + L_1 + ... + L_n``.

A level-``i`` term is ``g_T * T`` with ``g_T`` normally t_i-proper (in
``QQ(x)`` for ``i = 0``) and ``T`` a power product of ``t_{i+1}, ..., t_n``.
Power products are full exponent vectors ``(e_1, ..., e_n)`` whose entries
at positions ``<= i`` are zero.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import Tower, TowerElement
from .tower import laurent_coefficients, proper_split, require_rationally_hyperexponential


@dataclass(frozen=True)
class MatryoshkaTerm:
    level: int
    exponents: tuple
    coeff: TowerElement

    def power_product(self) -> TowerElement:
        return power_product(self.coeff.tower, self.exponents)

    def value(self) -> TowerElement:
        return self.coeff * self.power_product()


def power_product(tower: Tower, exponents: tuple) -> TowerElement:
    acc = tower.one
    for j, e in enumerate(exponents, start=1):
        if e:
            acc = acc * tower.gen(j) ** e
    return acc


def log_derivative_of(tower: Tower, exponents: tuple) -> TowerElement:
    """``T'/T = sum e_j sigma_j`` for the power product with these exponents."""
    acc = tower.zero
    for j, e in enumerate(exponents, start=1):
        if e:
            acc = acc + e * tower.sigma(j)
    return acc


@dataclass(frozen=True)
class MatryoshkaDecomposition:
    tower: Tower
    terms: tuple

    def projection(self, i: int) -> TowerElement:
        acc = self.tower.zero
        for term in self.terms:
            if term.level == i:
                acc = acc + term.value()
        return acc

    def recombine(self) -> TowerElement:
        acc = self.tower.zero
        for term in self.terms:
            acc = acc + term.value()
        return acc

    def at_level(self, i: int) -> list:
        return [term for term in self.terms if term.level == i]

    def as_dict(self) -> dict:
        return {(term.level, term.exponents): term.coeff for term in self.terms}


def _decompose(f: TowerElement, i: int, exps: list, out: list) -> None:
    if not f:
        return
    if i == 0:
        out.append(MatryoshkaTerm(0, tuple(exps), f))
        return
    proper, laurent = proper_split(f, i)
    if proper:
        out.append(MatryoshkaTerm(i, tuple(exps), proper))
    if laurent:
        for k, c in sorted(laurent_coefficients(laurent, i).items()):
            exps[i - 1] = k
            _decompose(c, i - 1, exps, out)
        exps[i - 1] = 0


def matryoshka_decompose(f: TowerElement) -> MatryoshkaDecomposition:
    """Split ``f`` into its Laurent-Matryoshka terms (sorted by level, then exponents)."""
    tw = f.tower
    require_rationally_hyperexponential(tw)
    out: list = []
    _decompose(f, tw.n, [0] * tw.n, out)
    out.sort(key=lambda term: (term.level, term.exponents))
    return MatryoshkaDecomposition(tw, tuple(out))


def project(f: TowerElement, i: int) -> TowerElement:
    """``pi_i(f)``."""
    return matryoshka_decompose(f).projection(i)
