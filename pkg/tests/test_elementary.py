import random
from fractions import Fraction

import pytest

from _gen import DEPTH3, EXAMPLE_11, rand_poly, tower
from hyperred.additive import ad_rht
from hyperred.errors import PreconditionViolated
from hyperred.frontend.build import build_tower
from hyperred.elementary import elementary_test, integrate, residues_constant, rothstein_trager_resultant
from hyperred.poly import QQ, Polynomial, gcd
from hyperred.tower import derive, derive_poly, is_simple


def roots(data):
    return sorted(data.rational_residues())


def random_normal(rng, tw, i, deg):
    while True:
        p = rand_poly(rng, tw, i, deg, monic=True)
        pp = p.num_den(i)[0]
        if i and not pp.coeff(0):
            continue
        if gcd(pp, derive_poly(pp, i)).degree <= 0 and pp.degree == deg:
            return p


def simple_log_derivative(p, i):
    """``p'/p - d*t'/t - a'/a``: the simple part of a logarithmic derivative."""
    tw = p.tower
    pp = p.num_den(i)[0]
    lead = tw.from_poly(pp, i) / p  # p is monic, so this is 1 unless p has a content
    h = derive(p) / p - pp.degree * tw.sigma(i) - derive(lead) / lead if i else derive(p) / p
    return h


@pytest.fixture(scope="module")
def example11():
    tw = build_tower(EXAMPLE_11)
    return tw, (tw.x, tw.gen(1), tw.gen(2))


class TestResultant:
    def test_log_derivative(self, qx):
        x = qx.x
        p = x ** 3 - x - 2
        R = rothstein_trager_resultant(derive(p) / p, 0)
        assert R.degree == 3
        Rq = Polynomial([c.as_fraction() for c in R.coeffs], QQ, "z").monic()
        assert Rq == Polynomial([Fraction(-1), Fraction(1)], QQ, "z") ** 3

    def test_half_residues(self, qx):
        x = qx.x
        ok, data = residues_constant(1 / (x ** 2 - 1), 0)
        assert ok and roots(data) == [Fraction(-1, 2), Fraction(1, 2)]

    def test_zero(self, qx):
        ok, data = residues_constant(qx.zero, 0)
        assert ok and data.factors == ()

    def test_requires_simple(self, qx):
        with pytest.raises(PreconditionViolated):
            rothstein_trager_resultant(1 / qx.x ** 2, 0)

    @pytest.mark.parametrize("depth", [0, 1, 2])
    def test_constructed_residues(self, depth):
        tw = tower(depth)
        rng = random.Random(800 + depth)
        for _ in range(10):
            i = depth
            p = random_normal(rng, tw, i, rng.randint(1, 2))
            q = random_normal(rng, tw, i, rng.randint(1, 2))
            if gcd(p.num_den(i)[0], q.num_den(i)[0]).degree > 0:
                continue
            c = Fraction(rng.randint(-4, 4), rng.randint(1, 3)) or Fraction(1)
            d = Fraction(rng.randint(-4, 4), rng.randint(1, 3)) or Fraction(2)
            h = c * simple_log_derivative(q, i) + d * simple_log_derivative(p, i)
            assert is_simple(h, i)
            R = rothstein_trager_resultant(h, i)
            assert R.degree == h.num_den(i)[1].degree
            ok, data = residues_constant(h, i)
            assert ok
            assert set(roots(data)) == {c, d}

    @pytest.mark.parametrize("depth", [1, 2])
    def test_log_derivative_residues_are_one(self, depth):
        tw = tower(depth)
        rng = random.Random(900 + depth)
        for _ in range(10):
            p = random_normal(rng, tw, depth, rng.randint(1, 3))
            h = simple_log_derivative(p, depth)
            assert is_simple(h, depth)
            ok, data = residues_constant(h, depth)
            assert ok and roots(data) == [1]

    def test_products_have_integer_residues(self):
        tw = tower(1)
        rng = random.Random(950)
        for _ in range(10):
            p, q = random_normal(rng, tw, 1, 1), random_normal(rng, tw, 1, 2)
            if gcd(p.num_den(1)[0], q.num_den(1)[0]).degree > 0:
                continue
            w = p ** rng.choice((1, 2, -1)) * q ** rng.choice((-2, 1, 3))
            h = ad_rht(derive(w) / w).projection(1)
            ok, data = residues_constant(h, 1)
            assert ok and all(r.denominator == 1 for r in data.rational_residues())
            assert all(m.degree == 1 for m in data.factors)

    def test_nonconstant_residue(self):
        tw = tower(1)
        x, t = tw.x, tw.gen(1)
        h = x * simple_log_derivative(t + x, 1)
        assert is_simple(h, 1)
        ok, data = residues_constant(h, 1)
        assert not ok and data is None


class TestCriterion:
    def test_depth3_not_elementary(self):
        tw = build_tower(DEPTH3)
        x, t1, t2, t3 = tw.x, tw.gen(1), tw.gen(2), tw.gen(3)
        f = -(x - 1) * t1 / t2 + t3 / (1 + t2) ** 2 + x / (t3 + x) ** 2
        ok, diags = elementary_test(ad_rht(f))
        assert not ok
        assert not diags[2].ok and "pi_2" in str(diags[2]) and "t3" in diags[2].reason
        assert diags[0].ok and diags[1].ok

    def test_zero_remainder(self):
        tw = tower(2)
        ok, diags = elementary_test(ad_rht(derive(tw.gen(1) / (tw.gen(2) + 1))))
        assert ok and all(d.ok for d in diags)

    def test_example11_elementary(self, example11):
        tw, (x, t1, t2) = example11
        f = (x ** 3 - x - 3) * t1 / ((x ** 3 - x - 2) * (t1 + t2))
        assert elementary_test(ad_rht(f))[0]


class TestIntegrate:
    def test_example11(self, example11):
        tw, (x, t1, t2) = example11
        f = (x ** 3 - x - 3) * t1 / ((x ** 3 - x - 2) * (t1 + t2))
        res = integrate(f)
        assert res.is_elementary and res.verify()
        assert not res.g
        (log,) = res.log_part.logs
        assert log.coeff == 1 and log.arg == t1 + t2
        (rs,) = res.log_part.root_sums
        K = rs.coeff.field
        alpha = K.gen()
        assert [c for c in rs.minpoly.coeffs] == [-2, -1, 0, 1]
        assert rs.coeff == -1 / (3 * alpha ** 2 - 1)
        assert rs.arg.degree == 1

    def test_log_x(self, qx):
        res = integrate(1 / qx.x)
        assert res.verify() and not res.g
        (log,) = res.log_part.logs
        assert log.coeff == 1 and log.arg == qx.x

    def test_exact_derivative(self):
        tw = build_tower("t=exp(x^2)")
        x, t = tw.x, tw.gen(1)
        res = integrate(2 * x * t)
        assert res.g == t and res.log_part.is_empty() and res.verify()

    def test_rational_logs(self, qx):
        x = qx.x
        res = integrate(x / (x ** 2 + 1) + 1 / x ** 2)
        assert res.verify()
        assert res.g == -1 / x
        assert [(l.coeff, l.arg) for l in res.log_part.logs] == [(Fraction(1, 2), x ** 2 + 1)]

    def test_non_elementary(self):
        tw = build_tower("t=exp(x^2)")
        f = tw.gen(1)
        res = integrate(f)
        assert not res.is_elementary
        assert res.remainder == f
        assert res.log_part.is_empty()

    def test_random_rational(self):
        tw = tower(0)
        rng = random.Random(990)
        from _gen import rand_element

        for _ in range(30):
            res = integrate(rand_element(rng, tw, 0, 3, 4))
            assert res.is_elementary and res.verify()

    def test_random_level1_logs(self):
        tw = tower(1)
        rng = random.Random(991)
        for _ in range(10):
            p = random_normal(rng, tw, 1, rng.randint(1, 2))
            f = derive(p) / p + derive(tw.x / (tw.gen(1) + 1))
            res = integrate(f)
            assert res.is_elementary and res.verify()
