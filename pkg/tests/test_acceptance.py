"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest (the lines are repeated in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.  A criterion fails if any check
fails or if it takes 10 seconds or more.
"""

from __future__ import annotations

import io
import random
import sys
import time
import traceback
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import test_properties as props  # noqa: E402
from _gen import DEPTH3, EXAMPLE_11, rand_element, rand_poly, tower  # noqa: E402
from hyperred.additive import ad_rht, is_derivative  # noqa: E402
from hyperred.elementary import elementary_test, integrate, residues_constant  # noqa: E402
from hyperred.field import Tower  # noqa: E402
from hyperred.frontend.build import build_tower, evaluate  # noqa: E402
from hyperred.frontend.cli import main  # noqa: E402
from hyperred.frontend.formatting import plain_element  # noqa: E402
from hyperred.matryoshka import matryoshka_decompose  # noqa: E402
from hyperred.poly import gcd, partial_fractions, squarefree_factorization  # noqa: E402
from hyperred.reductions import gkr, gksr, gsr, in_Vf  # noqa: E402
from hyperred.tower import derive, derive_poly, is_simple  # noqa: E402

TIME_LIMIT = 10.0
RESULTS: list = []


def xyt_tower():
    tw = Tower().extend_monomial("y", lambda tw, t: 0)
    tw = tw.extend_hyperexponential("t", tw.x)
    return tw, (tw.x, tw.gen(1), tw.gen(2))


def c1_gsr():
    tw, (x, y, t) = xyt_tower()
    f, g = y / (t - x), x / (t + 1) ** 2
    a, h, q = gsr(f, g, 2)
    assert a == 1 / (t + 1)
    assert h == (x ** 2 + x + y) / ((x + 1) * (t + 1))
    assert q / (t - x) == -y / ((x + 1) * (t - x))
    assert derive(a) + a * f + h + q / (t - x) == g


def c2_gkr():
    tw, (x, y, t) = xyt_tower()
    f = y / (t - x)
    p = y + 1 - x * t
    a, q = gkr(f, p, 2, 2)
    assert (a, q) == (1 / (t - x), tw.zero)
    assert derive(a) + a * f + q / (t - x) == p / (t - x) ** 2

    tw = Tower().extend_hyperexponential("y", Tower().x)
    tw = tw.extend_hyperexponential("t", tw.x * tw.gen(1))
    x, y, t = tw.x, tw.gen(1), tw.gen(2)
    f = 1 / (t + y)
    p = (y + 1 - x ** 2 * y) * t - x ** 2 * y + y ** 2 + x + y
    a, q = gkr(f, p, 2, 2)
    assert a == x / (t + y)
    assert q / (t + y) == y / (t + y)
    assert derive(a) + a * f + q / (t + y) == p / (t + y) ** 2


def c3_gksr():
    tw, (x, y, t) = xyt_tower()
    f = y / (t - x)
    g = (-x * t ** 3 + (y - x + 1) * t ** 2 + (2 * y - 2 * x ** 2 - x + 2) * t + x ** 3 + y + 1) / (
        (1 + t) ** 2 * (t - x) ** 2
    )
    c = gksr(f, g, 2)
    assert c.h == (x ** 2 + x + y) / ((x + 1) * (1 + t))
    assert c.holds_for(g)
    assert in_Vf(f, g, 2) is False


def c4_matryoshka():
    tw = build_tower(DEPTH3)
    x, t1, t2, t3 = tw.x, tw.gen(1), tw.gen(2), tw.gen(3)
    f = t2 * t3 * (x - t3) / (t1 * (t2 + 1) * (t3 - 1))
    d = matryoshka_decompose(f)
    assert d.projection(0) == -t3 / t1 + (x - 1) / t1
    assert d.projection(1) == 0
    assert d.projection(2) == t3 / (t1 * (t2 + 1)) - (x - 1) / (t1 * (t2 + 1))
    assert d.projection(3) == (x - 1) * t2 / (t1 * (t2 + 1) * (t3 - 1))


def depth3_integrand():
    tw = build_tower(DEPTH3)
    x, t1, t2, t3 = tw.x, tw.gen(1), tw.gen(2), tw.gen(3)
    return tw, (x, t1, t2, t3), -(x - 1) * t1 / t2 + t3 / (1 + t2) ** 2 + x / (t3 + x) ** 2


def c5_ad_rht():
    tw, (x, t1, t2, t3), f = depth3_integrand()
    ad = ad_rht(f)
    assert ad.g == -(x ** 2) / ((x - 1) * (t3 + x)) + t3 / (x * (1 + t2)) + t1 / t2
    assert ad.r == (x ** 3 + x - 1) * t3 / (x ** 3 * (1 + t2)) + (x ** 2 - 3 * x + 1) / ((x - 1) ** 2 * (t3 + x))
    assert is_derivative(f) is False


def c6_elementary():
    tw = build_tower(EXAMPLE_11)
    x, t1, t2 = tw.x, tw.gen(1), tw.gen(2)
    f = (x ** 3 - x - 3) * t1 / ((x ** 3 - x - 2) * (t1 + t2))
    res = integrate(f)
    assert res.is_elementary
    assert [(l.coeff, l.arg) for l in res.log_part.logs] == [(1, t1 + t2)]
    (rs,) = res.log_part.root_sums
    assert list(rs.minpoly.coeffs) == [-2, -1, 0, 1]
    alpha = rs.coeff.field.gen()
    assert rs.coeff == -1 / (3 * alpha ** 2 - 1)
    # differentiate the output, expanding the root sum over QQ(alpha)
    assert res.derivative() - f == 0
    assert res.verify()


def c7_non_elementary():
    _, _, f = depth3_integrand()
    ok, diags = elementary_test(ad_rht(f))
    assert ok is False
    failing = [str(d) for d in diags if not d.ok]
    assert any(s.startswith("pi_2(r)") for s in failing)


def c8_properties():
    n = 67  # per depth, so 201 per entry point
    props.check_gsr_identity(n)
    props.check_gkr_identity(n)
    props.check_gksr_identity(n)
    props.check_ad_rht_identity(n)
    props.check_h_unique_modulo_Vf(10)
    for depth in props.DEPTHS:
        props.check_projection_commutes(depth, 8)
        props.check_remainder_idempotent_and_linear(depth, 6)
    assert props.check_kernel_is_weakly_normalized(34) >= 100
    rng = random.Random(8)
    for _ in range(60):
        coeffs = [rng.randint(-6, 6) for _ in range(rng.randint(1, 7))]
        props.check_phi_injective(rng.choice(props.XI_TEXTS), coeffs)


def c9_oracles():
    # partial fractions over a tower recombine exactly
    tw = tower(2)
    rng = random.Random(9)
    for _ in range(20):
        g = rand_element(rng, tw, 2, 4, 4)
        num, den = g.num_den(2)
        parts = squarefree_factorization(den)
        poly, terms = partial_fractions(num, parts)
        back = tw.from_poly(poly, 2)
        for (p, _), digits in zip(parts, terms):
            pe = tw.from_poly(p, 2)
            for j, a in enumerate(digits, start=1):
                assert a.degree < p.degree
                back = back + tw.from_poly(a, 2) / pe ** j
        assert back == g
    # Matryoshka round trip
    tw = tower(3)
    for _ in range(20):
        f = rand_element(rng, tw, 3)
        assert matryoshka_decompose(f).recombine() == f
    # Rothstein-Trager residues of c*q'/q + d*p'/p are {c, d}
    for depth in (0, 1):
        tw = tower(depth)
        found = 0
        while found < 5:
            p = rand_poly(rng, tw, depth, 1, monic=True)
            q = rand_poly(rng, tw, depth, 2, monic=True)
            pp, qq = p.num_den(depth)[0], q.num_den(depth)[0]
            if depth and (not pp.coeff(0) or not qq.coeff(0)):
                continue
            if gcd(qq, derive_poly(qq, depth)).degree > 0 or gcd(pp, qq).degree > 0:
                continue
            c = Fraction(rng.randint(1, 5), rng.randint(1, 3))
            d = -Fraction(rng.randint(1, 5), rng.randint(1, 3))
            h = c * _simple_log(q, depth) + d * _simple_log(p, depth)
            assert is_simple(h, depth)
            ok, data = residues_constant(h, depth)
            assert ok and set(data.rational_residues()) == {c, d}
            found += 1
    assert props.check_derivative_then_decompose(34) >= 100


def _simple_log(p, i):
    h = derive(p) / p
    if i:
        h = h - p.num_den(i)[0].degree * p.tower.sigma(i)
    return h


MALFORMED = [
    ["integrate", "--expr", "x+"],
    ["integrate", "--expr", "(x"],
    ["integrate", "--expr", "y"],
    ["integrate", "--expr", "1/(x-x)"],
    ["integrate", "--tower", "t=exp(x); t=exp(x)", "--expr", "t"],
    ["integrate", "--tower", "t=exp(x)", "--expr", "exp(x^3)"],
    ["integrate", "--tower", "t=x", "--expr", "x"],
    ["decompose", "--tower", "t=exp(x", "--expr", "t"],
    ["kernel", "--expr", "x", "--mode", "strong"],
    ["frobnicate"],
]


def c10_frontend():
    count = 0
    for depth in range(4):
        tw = tower(depth)
        rng = random.Random(1000 + depth)
        for _ in range(25):
            f = rand_element(rng, tw, depth, 3, 3)
            assert evaluate(plain_element(f), tw) == f
            count += 1
    assert count >= 100
    assert build_tower(EXAMPLE_11).n == 2
    assert build_tower(DEPTH3).n == 3
    for argv in MALFORMED:
        sink = io.StringIO()
        with redirect_stdout(sink), redirect_stderr(sink):
            try:
                code = main(argv)
            except SystemExit as exc:
                code = exc.code
        assert code == 2, (argv, code, sink.getvalue())
        assert "Traceback" not in sink.getvalue()


CRITERIA = [
    (1, "shell reduction golden values", c1_gsr),
    (2, "kernel reduction golden values", c2_gkr),
    (3, "kernel-shell reduction golden value and membership", c3_gksr),
    (4, "Laurent-Matryoshka projections", c4_matryoshka),
    (5, "additive decomposition in the depth-3 tower", c5_ad_rht),
    (6, "elementary integral with a root sum", c6_elementary),
    (7, "non-elementary detection names pi_2(r)", c7_non_elementary),
    (8, "property suite", c8_properties),
    (9, "oracle round trips", c9_oracles),
    (10, "frontend round trip, tower builds, exit code 2", c10_frontend),
]


def run_criterion(number, title, fn):
    start = time.perf_counter()
    detail = ""
    try:
        fn()
        ok = True
    except Exception:
        ok = False
        detail = traceback.format_exc(limit=3).strip().splitlines()[-1]
    elapsed = time.perf_counter() - start
    if ok and elapsed >= TIME_LIMIT:
        ok = False
        detail = f"took {elapsed:.1f}s, limit {TIME_LIMIT:.0f}s"
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({elapsed:.2f}s)"
    if detail:
        line += f" -- {detail}"
    RESULTS.append(line)
    print(line)
    return ok, line


@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, title, fn):
    ok, line = run_criterion(number, title, fn)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
