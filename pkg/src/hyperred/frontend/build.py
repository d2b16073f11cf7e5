"""Tower declarations and evaluation of parsed expressions.

A declaration list reads ``t1=exp(x); t2=exp(int(1/(x^3-x-2)))``.  Each
generator is hyperexponential with ``t'/t`` in QQ(x): ``exp(R)`` gives
``sigma = R'`` and ``exp(int(S))`` gives ``sigma = S``.  Inline ``exp`` forms
in expressions must match a declared generator up to an integer power.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..errors import DuplicateGenerator, HyperredError, UnsupportedCase, UnsupportedTower, ZeroDenominator
from ..field import Tower, TowerElement
from ..membership import find_exponents
from ..tower import derive
from .parser import (
    BinOp,
    Exp,
    ExpressionSyntaxError,
    Neg,
    Num,
    Pow,
    SourceExpression,
    Var,
    parse,
)

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


class EvaluationError(HyperredError, ArithmeticError):
    """An expression divides by something that normalizes to zero."""


class UndeclaredGenerator(HyperredError, ValueError):
    """An inline ``exp(...)`` matches no declared generator."""


@dataclass(frozen=True)
class Declaration:
    name: str
    form: str
    column: int = 1


def split_declarations(text: str) -> list:
    """Split ``name=form; name=form`` (``;`` or newlines) into declarations."""
    out = []
    pos = 0
    for chunk in re.split(r"[;\n]", text):
        start = pos
        pos += len(chunk) + 1
        if not chunk.strip():
            continue
        if "=" not in chunk:
            col = start + len(chunk) - len(chunk.lstrip()) + 1
            raise ExpressionSyntaxError("expected 'name=exp(...)'", text, col)
        name, form = chunk.split("=", 1)
        col = start + len(name) + 2
        if not _NAME.match(name.strip()):
            raise ExpressionSyntaxError(f"invalid generator name {name.strip()!r}", text, start + 1)
        out.append(Declaration(name.strip(), form.strip(), col))
    return out


def _shifted(err: ExpressionSyntaxError, text: str, offset: int) -> ExpressionSyntaxError:
    return ExpressionSyntaxError(err.reason, text, err.column + offset)


class _Evaluator:
    def __init__(self, tower: Tower, exps: dict):
        self.tower = tower
        self.exps = exps  # name -> (integral, R or S) in QQ(x)

    def __call__(self, node) -> TowerElement:
        tw = self.tower
        try:
            if isinstance(node, Num):
                return tw.convert(node.value)
            if isinstance(node, Var):
                return tw.gen(tw.index(node.name))
            if isinstance(node, Neg):
                return -self(node.arg)
            if isinstance(node, Pow):
                base = self(node.base)
                if node.exponent < 0 and not base:
                    raise EvaluationError("negative power of zero")
                return base ** node.exponent
            if isinstance(node, BinOp):
                a, b = self(node.left), self(node.right)
                if node.op == "+":
                    return a + b
                if node.op == "-":
                    return a - b
                if node.op == "*":
                    return a * b
                if not b:
                    raise EvaluationError("division by an expression that is zero")
                return a / b
            if isinstance(node, Exp):
                return self.exp(node)
        except ZeroDenominator as exc:
            raise EvaluationError(str(exc)) from exc
        raise TypeError(f"unknown node {node!r}")

    def exp(self, node: Exp) -> TowerElement:
        tw = self.tower
        v = self(node.arg)
        sigma = v if node.integral else derive(v)
        for name, (integral, ref) in self.exps.items():
            j = tw.index(name)
            s = tw.sigma(j)
            if not s:
                continue
            k = sigma / s
            if not k.is_constant():
                continue
            k = k.as_fraction()
            if k.denominator != 1 or k == 0:
                continue
            # two exp(R) forms must agree exactly, not just up to a constant factor
            if not integral and not node.integral and v != int(k) * ref:
                continue
            return tw.gen(j) ** int(k)
        kind = "exp(int(...))" if node.integral else "exp(...)"
        raise UndeclaredGenerator(f"{kind} at column {node.column} matches no declared generator")


def evaluate(expr: Union[str, SourceExpression], tower: Tower) -> TowerElement:
    """Evaluate an expression in ``tower``; strings are parsed first."""
    if isinstance(expr, str):
        expr = parse(expr, tower.names)
    return _Evaluator(tower, _declared(tower))(expr.ast)


def _declared(tower: Tower) -> dict:
    exps = {}
    for g in tower.generators:
        if g.kind != "hyperexponential":
            continue
        integral, ref = True, g.sigma
        if g.form:
            try:
                node = parse(g.form, tower.names).ast
            except HyperredError:
                node = None
            if isinstance(node, Exp) and not node.integral:
                integral, ref = False, _Evaluator(tower, exps)(node.arg)
        exps[g.name] = (integral, ref)
    return exps


def build_tower(declarations: Union[str, list, None]) -> Tower:
    """Build a rationally hyperexponential tower from ``name=form`` declarations.

    Raises :class:`UnsupportedTower` when some ``t'/t`` is not in QQ(x) or
    the generators fail to be algebraically independent without new
    constants.
    """
    if declarations is None:
        return Tower(("x",))
    text = declarations if isinstance(declarations, str) else "; ".join(declarations)
    decls = split_declarations(text)
    tw = Tower(("x",))
    exps: dict = {}
    for d in decls:
        if d.name == "x" or d.name in tw.names:
            raise DuplicateGenerator(f"generator {d.name!r} declared twice")
        if d.name in ("exp", "int"):
            raise ExpressionSyntaxError(f"reserved name {d.name!r}", text, d.column - len(d.name) - 1)
        lead = len(d.form) - len(d.form.lstrip())
        try:
            node = parse(d.form, tw.names).ast
        except ExpressionSyntaxError as exc:
            raise _shifted(exc, text, d.column - 1 + lead) from None
        if not isinstance(node, Exp):
            raise ExpressionSyntaxError(f"{d.name} must be declared as exp(...) or exp(int(...))", text, d.column)
        ev = _Evaluator(tw, exps)
        value = ev(node.arg)
        sigma = value if node.integral else derive(value)
        if sigma.level != 0:
            raise UnsupportedTower(f"{d.name}'/{d.name} = {sigma} is not in QQ(x)")
        new = tw.extend_hyperexponential(d.name, sigma, form=d.form)
        ref = sigma if node.integral else new.embed(value)
        exps = {k: (i, new.embed(r)) for k, (i, r) in exps.items()}
        exps[d.name] = (node.integral, ref)
        tw = new
    check_regular(tw)
    return tw


def check_regular(tw: Tower) -> None:
    """Reject towers with a relation ``prod t_j^e_j in QQ(x)``.

    Such a relation exists iff some nonzero rational combination of the
    ``sigma_j`` has no polynomial part, only simple poles and rational
    residues; the exponent system is then underdetermined.
    """
    if not tw.n:
        return
    base = tw.prefix(0)
    sigmas = [base.restrict(tw.sigma(j)) for j in range(1, tw.n + 1)]
    try:
        ks = find_exponents(base.zero, sigmas, 0)
    except UnsupportedCase:
        ks = None
    if ks is None or any(ks):
        names = ", ".join(tw.names[1:])
        raise UnsupportedTower(f"generators {names} are not independent over QQ(x): new constants appear")


def tower_declarations(tw: Tower) -> list:
    """Declarations that rebuild ``tw``."""
    out = []
    for g in tw.generators:
        form = g.form or f"exp(int({g.sigma}))"
        out.append(f"{g.name}={form}")
    return out
