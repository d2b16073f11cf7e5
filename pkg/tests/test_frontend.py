import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _gen import DEPTH3, EXAMPLE_11, rand_element, tower
from hyperred.additive import ad_rht
from hyperred.elementary import integrate
from hyperred.errors import DuplicateGenerator, HyperredError, UnsupportedTower
from hyperred.frontend.build import (
    EvaluationError,
    UndeclaredGenerator,
    build_tower,
    evaluate,
    split_declarations,
    tower_declarations,
)
from hyperred.frontend.formatting import format_value, from_json, latex_element, plain_element, to_json_dict
from hyperred.frontend.parser import BinOp, Exp, ExpressionSyntaxError, Neg, Num, Pow, UnknownIdentifier, Var, parse
from hyperred.kernel import gks
from hyperred.reductions import gksr


class TestParser:
    def test_generator_reference(self):
        src = parse("x/(exp(-1/x)+x)^2")
        (ref,) = src.generator_refs()
        assert ref == Exp(BinOp("/", Neg(Num(Fraction(1))), Var("x", 11)), False, 4)

    def test_integral_form(self):
        src = parse("exp(int(1/(x^3-x-2)))")
        (ref,) = src.generator_refs()
        assert ref.integral

    def test_trailing_operator(self):
        with pytest.raises(ExpressionSyntaxError) as info:
            parse("x+")
        assert info.value.column == 3
        assert "column 3" in str(info.value)

    def test_precedence(self):
        assert parse("-x^2").ast == Neg(Pow(Var("x", 2), 2))
        assert parse("1-2-3").ast == BinOp("-", BinOp("-", Num(1), Num(2)), Num(3))
        assert parse("x**-2").ast == Pow(Var("x", 1), -2)
        assert parse("x^(-2)").ast == Pow(Var("x", 1), -2)

    def test_decimal(self):
        assert parse("0.25").ast == Num(Fraction(1, 4))

    def test_unknown_identifier(self):
        with pytest.raises(UnknownIdentifier) as info:
            parse("x + y", names=("t1",))
        assert info.value.column == 5

    def test_reserved_word(self):
        with pytest.raises(ExpressionSyntaxError):
            parse("int(x)")

    @pytest.mark.parametrize(
        "text, column",
        [("", 1), ("(x", 3), ("x)", 2), ("x^y", 3), ("x^1.5", 3), ("exp x", 5), ("x $ 1", 3), ("2 3", 3), ("exp(int(x)", 11)],
    )
    def test_error_columns(self, text, column):
        with pytest.raises(ExpressionSyntaxError) as info:
            parse(text)
        assert info.value.column == column

    @settings(max_examples=300, deadline=None)
    @given(st.text(alphabet="x+-*/^()0123456789.exptin_ $t1", max_size=25))
    def test_fuzz_never_crashes(self, text):
        try:
            parse(text)
        except (ExpressionSyntaxError, UnknownIdentifier):
            pass

    @settings(max_examples=200, deadline=None)
    @given(st.text(max_size=20))
    def test_fuzz_unicode(self, text):
        try:
            evaluate(text, tower(1))
        except HyperredError:
            pass


class TestBuild:
    def test_depth3(self):
        tw = build_tower(DEPTH3)
        x = tw.x
        assert [tw.sigma(j) for j in (1, 2, 3)] == [tw.one, x, 1 / x ** 2]

    def test_example11(self):
        tw = build_tower(EXAMPLE_11)
        assert tw.sigma(2) == 1 / (tw.x ** 3 - tw.x - 2)

    def test_integral_form(self):
        tw = build_tower("t=exp(int((x+1)/x))")
        assert tw.sigma(1) == (tw.x + 1) / tw.x

    def test_list_input(self):
        assert build_tower(["t1=exp(x)", "t2=exp(x^2/2)"]) == build_tower(TOWERS_2)

    def test_generator_in_exponent(self):
        with pytest.raises(UnsupportedTower):
            build_tower("t1=exp(x); t2=exp(t1)")

    def test_undeclared_in_exponent(self):
        with pytest.raises(UnknownIdentifier):
            build_tower("t2=exp(t1)")

    @pytest.mark.parametrize("decls", ["t=exp(x); t=exp(x^2)", "x=exp(x)"])
    def test_duplicate(self, decls):
        with pytest.raises(DuplicateGenerator):
            build_tower(decls)

    @pytest.mark.parametrize("decls", ["t=exp(x); s=exp(2*x)", "t=exp(int(1/x))", "t=exp(int(0))", "t=exp(3)"])
    def test_dependent_generators(self, decls):
        with pytest.raises(UnsupportedTower):
            build_tower(decls)

    @pytest.mark.parametrize("decls", ["t=x+1", "t", "t=exp(", "1t=exp(x)"])
    def test_malformed(self, decls):
        with pytest.raises(ExpressionSyntaxError):
            build_tower(decls)

    def test_split(self):
        decls = split_declarations("a=exp(x);\n b = exp(int(1/(x^2+1)))")
        assert [(d.name, d.form) for d in decls] == [("a", "exp(x)"), ("b", "exp(int(1/(x^2+1)))")]

    def test_rebuild_from_declarations(self):
        tw = build_tower(EXAMPLE_11)
        assert build_tower(tower_declarations(tw)) == tw

    def test_inline_exp(self):
        tw = build_tower(DEPTH3)
        x, t1, t3 = tw.x, tw.gen(1), tw.gen(3)
        assert evaluate("x/(exp(-1/x)+x)^2", tw) == x / (t3 + x) ** 2
        assert evaluate("exp(2*x) + exp(int(-1))", tw) == t1 ** 2 + 1 / t1

    def test_inline_exp_must_match(self):
        tw = build_tower(DEPTH3)
        with pytest.raises(UndeclaredGenerator):
            evaluate("exp(x^3)", tw)
        # same derivative, different constant: not the declared function
        with pytest.raises(UndeclaredGenerator):
            evaluate("exp(x+1)", tw)

    def test_division_by_zero(self):
        with pytest.raises(EvaluationError):
            evaluate("1/(x-x)", tower(1))
        with pytest.raises(EvaluationError):
            evaluate("(t1-t1)^-1", tower(1))


TOWERS_2 = "t1=exp(x); t2=exp(x^2/2)"


class TestPlain:
    def test_x_plus_one(self, qx):
        assert format_value(qx.x + 1).body == "x + 1"

    @pytest.mark.parametrize("depth", [0, 1, 2, 3])
    def test_round_trip(self, depth):
        tw = tower(depth)
        rng = random.Random(1100 + depth)
        for _ in range(30):
            f = rand_element(rng, tw, depth, 3, 3)
            assert evaluate(plain_element(f), tw) == f

    def test_integral_plain(self):
        tw = build_tower(EXAMPLE_11)
        x, t1, t2 = tw.x, tw.gen(1), tw.gen(2)
        f = (x ** 3 - x - 3) * t1 / ((x ** 3 - x - 2) * (t1 + t2))
        body = format_value(integrate(f)).body
        assert "log(t1 + t2)" in body
        assert "sum(alpha^3 - alpha - 2 = 0, -1/(3*alpha^2 - 1)*log(x - alpha))" in body


class TestLatex:
    def test_root_sum(self):
        tw = build_tower(EXAMPLE_11)
        x, t1, t2 = tw.x, tw.gen(1), tw.gen(2)
        f = (x ** 3 - x - 3) * t1 / ((x ** 3 - x - 2) * (t1 + t2))
        body = format_value(integrate(f), "latex").body
        assert "\\sum_{\\alpha^3-\\alpha-2=0}" in body
        assert "\\log" in body

    def test_element(self):
        tw = tower(1)
        x, t = tw.x, tw.gen(1)
        assert latex_element(1 / (t + x)) == "\\frac{1}{x+t_{1}}"
        assert latex_element((x - 1) / (3 * t ** 2)) == "\\frac{x-1}{3t_{1}^2}"
        assert latex_element(-x / t) == "-\\frac{x}{t_{1}}"
        assert latex_element(x ** 12) == "x^{12}"


class TestJson:
    def roundtrip(self, value):
        doc = format_value(value, "json").body
        data = json.loads(doc)
        assert data["version"] == 1
        again = from_json(doc)
        assert again == value
        return data

    def test_element(self):
        tw = tower(2)
        data = self.roundtrip(tw.gen(1) / (tw.gen(2) + Fraction(1, 3)))
        assert data["kind"] == "element" and data["tower"] == ["t1=exp(x)", "t2=exp(x^2/2)"]

    def test_decomposition(self):
        tw = build_tower(DEPTH3)
        x, t1, t2, t3 = tw.x, tw.gen(1), tw.gen(2), tw.gen(3)
        f = -(x - 1) * t1 / t2 + t3 / (1 + t2) ** 2 + x / (t3 + x) ** 2
        data = self.roundtrip(ad_rht(f))
        assert data["result"]["is_derivative"] is False

    def test_integral(self):
        tw = build_tower(EXAMPLE_11)
        x, t1, t2 = tw.x, tw.gen(1), tw.gen(2)
        f = (x ** 3 - x - 3) * t1 / ((x ** 3 - x - 2) * (t1 + t2))
        data = self.roundtrip(integrate(f))
        assert data["result"]["root_sums"][0]["minpoly"] == ["-2/1", "-1/1", "0/1", "1/1"]

    def test_certificate_and_kernel(self):
        tw = tower(1)
        x, t = tw.x, tw.gen(1)
        f = gks(x / (t + 1), 1).kernel
        self.roundtrip(gksr(f, 1 / (t + 2) + t, 1))
        self.roundtrip(gks(derive_example(tw), 1))

    def test_rationals_as_strings(self, qx):
        data = to_json_dict(integrate(qx.x / 3 + 1 / (2 * qx.x)))
        assert data["result"]["g"] == "x^2/6"
        assert data["result"]["logs"] == [{"coeff": "1/2", "arg": "x"}]

    def test_random_round_trip(self):
        tw = tower(3)
        rng = random.Random(1200)
        for _ in range(20):
            self.roundtrip(rand_element(rng, tw, 3))

    def test_bad_version(self):
        with pytest.raises(ValueError):
            from_json('{"version": 2}')


def derive_example(tw):
    from hyperred.tower import derive

    p = tw.gen(1) - tw.x
    return derive(p) / p + tw.x
