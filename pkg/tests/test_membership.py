import random
from fractions import Fraction

import pytest

from _gen import rand_element, tower
from hyperred.frontend.build import build_tower
from hyperred.kernel import gks
from hyperred.membership import find_exponents, homogeneous_solution, in_Vf, solve_vf
from hyperred.tower import derive


def test_find_exponents_basic(qx):
    x = qx.x
    # -y'/y = 1/x + 2*(-1) gives y = exp(2x)/x
    assert find_exponents(1 / x - 2, [qx.one], 0) == [2]
    assert find_exponents(qx.x, [qx.one], 0) is None


def test_find_exponents_none_for_zero(qx):
    assert find_exponents(qx.zero, [qx.one, qx.x], 0) == [0, 0]


def test_homogeneous_solution(qx):
    x = qx.x
    y = homogeneous_solution(-2 / x, 0)
    assert y is not None and derive(y) - 2 / x * y == 0
    assert homogeneous_solution(1 / (x ** 2 + 1), 0) is None


def test_solve_vf_rational(qx):
    x = qx.x
    a = (x + 1) / (x ** 2 - 3)
    f = 1 / x
    s = derive(a) + a * f
    sol = solve_vf(f, s, 0)
    assert sol is not None and derive(sol) + f * sol == s


def test_level1_decoupled():
    tw = tower(1)
    x, t = tw.x, tw.gen(1)
    f = x
    a = t ** 2 * x + 3 / t
    assert in_Vf(f, derive(a) + a * f, 1)
    # b' + (1 + x) b = 1 has no rational solution
    assert not in_Vf(f, t, 1)
    assert solve_vf(f, t, 1) is None


def test_level1_coupled():
    tw = tower(1)
    x, t = tw.x, tw.gen(1)
    f = gks(x * t / (t ** 2 + x), 1).kernel
    a = t / (t ** 2 + x) + x * t
    assert in_Vf(f, derive(a) + a * f, 1)


@pytest.mark.parametrize("depth", [1, 2])
def test_random_members(depth):
    tw = tower(depth)
    rng = random.Random(1000 + depth)
    for _ in range(12):
        i = depth
        f = gks(rand_element(rng, tw, i, 2, 1), i).kernel
        a = rand_element(rng, tw, i, 2, 2)
        assert in_Vf(f, derive(a) + a * f, i)


def test_nonmember_with_simple_part():
    tw = tower(1)
    x, t = tw.x, tw.gen(1)
    assert not in_Vf(x, 1 / (t + 1), 1)


def test_exp_x_squared_not_member():
    tw = build_tower("t=exp(x^2)")
    # exp(x^2) = t is not a' + a*0 for any a, since erf is not hyperexponential
    assert not in_Vf(tw.zero, tw.gen(1), 1)
    assert in_Vf(tw.zero, 2 * tw.x * tw.gen(1), 1)


def test_scaling(qx):
    assert find_exponents(qx.one * Fraction(3), [qx.one], 0) == [-3]
