"""Seeded random towers and elements for the property tests."""

from __future__ import annotations

import random
from fractions import Fraction

from hyperred.field import Tower
from hyperred.frontend.build import build_tower

TOWERS = {
    1: "t1=exp(x)",
    2: "t1=exp(x); t2=exp(x^2/2)",
    3: "t1=exp(x); t2=exp(x^2/2); t3=exp(-1/x)",
}

EXAMPLE_11 = "t1=exp(x); t2=exp(int(1/(x^3-x-2)))"
DEPTH3 = TOWERS[3]

_cache: dict = {}


def tower(depth: int) -> Tower:
    if depth not in _cache:
        _cache[depth] = build_tower(TOWERS[depth]) if depth else Tower()
    return _cache[depth]


def rand_const(rng: random.Random, lo: int = -3, hi: int = 3, nonzero: bool = False):
    while True:
        c = Fraction(rng.randint(lo, hi), rng.choice((1, 1, 1, 2)))
        if c or not nonzero:
            return c


def rand_poly(rng: random.Random, tw: Tower, level: int, deg: int, terms: int = 3, monic: bool = False):
    """A polynomial in var ``level`` whose coefficients are small elements one level down."""
    v = tw.gen(level)
    acc = tw.zero
    for k in range(deg):
        if rng.random() < 0.6:
            acc = acc + rand_coeff(rng, tw, level - 1) * v ** k
    lead = tw.one if monic else rand_coeff(rng, tw, level - 1, nonzero=True)
    return acc + lead * v ** deg


def rand_coeff(rng: random.Random, tw: Tower, level: int, nonzero: bool = False):
    """A small polynomial expression in x, t1, ..., t_level."""
    if level < 0:
        return tw.convert(rand_const(rng, nonzero=nonzero))
    while True:
        acc = tw.convert(rand_const(rng))
        for _ in range(rng.randint(0, 2)):
            j = rng.randint(0, level)
            acc = acc + rand_const(rng, nonzero=True) * tw.gen(j) ** rng.randint(1, 2)
        if acc or not nonzero:
            return acc


def rand_element(rng: random.Random, tw: Tower, level: int, num_deg: int = 2, den_deg: int = 2):
    """A random quotient with numerator and denominator of small degree in var ``level``."""
    num = rand_poly(rng, tw, level, rng.randint(0, num_deg)) if rng.random() < 0.9 else tw.zero
    den = rand_poly(rng, tw, level, rng.randint(0, den_deg), monic=True)
    if not den:
        den = tw.one
    return num / den


def rand_simple(rng: random.Random, tw: Tower, level: int, den_deg: int = 2):
    """A random t-simple element: proper, squarefree denominator coprime to t."""
    from hyperred.tower import is_simple

    while True:
        den = rand_poly(rng, tw, level, rng.randint(1, den_deg), monic=True)
        if level:
            low = den.num_den(level)[0].coeff(0)
            if not low:
                continue
        num = rand_poly(rng, tw, level, den.num_den(level)[0].degree - 1) if den.num_den(level)[0].degree > 1 else rand_coeff(rng, tw, level - 1, nonzero=True)
        h = num / den
        if h and is_simple(h, level):
            return h
