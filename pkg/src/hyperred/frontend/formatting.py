"""Plain, LaTeX and JSON renderings of engine values.

Plain output of a tower element uses the input grammar, so it parses back
to the same element.  JSON documents have the shape
``{"kind", "version", "tower", "result"}`` with rationals as ``"p/q"``
strings and tower elements as plain-format strings; :func:`from_json`
rebuilds the value.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

JSON_VERSION = 1
FORMATS = ("plain", "latex", "json")


@dataclass(frozen=True)
class OutputDocument:
    format: str
    body: str

    def __str__(self) -> str:
        return self.body


# ---------------------------------------------------------------------------
# shared term assembly


def _join(terms: list, sep_plus: str, sep_minus: str, neg_lead: str) -> str:
    """Join ``(negative, text)`` pairs into a signed sum."""
    if not terms:
        return "0"
    out = []
    for k, (neg, text) in enumerate(terms):
        if k == 0:
            out.append((neg_lead if neg else "") + text)
        else:
            out.append((sep_minus if neg else sep_plus) + text)
    return "".join(out)


def _qq(c: Fraction) -> str:
    return str(Fraction(c))


def _exact(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# plain


def _plain_mpoly(mp) -> str:
    return str(mp)


def _is_atom_power(text: str) -> bool:
    return re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*(\^\d+)?|\d+", text) is not None


def plain_element(e) -> str:
    num = _plain_mpoly(e.num)
    if e.den.is_one():
        return num
    den = _plain_mpoly(e.den)
    if len(e.num) > 1:
        num = f"({num})"
    if not _is_atom_power(den):
        den = f"({den})"
    return f"{num}/{den}"


def _wrap(text: str) -> str:
    return text if _is_atom_power(text) else f"({text})"


def _mono(var: str, k: int, power: str = "^") -> str:
    if k == 0:
        return ""
    return var if k == 1 else f"{var}{power}{k}"


def plain_qq_poly(p) -> str:
    """A polynomial with rational coefficients, e.g. ``alpha^3 - alpha - 2``."""
    terms = []
    for k in range(p.degree, -1, -1):
        c = Fraction(p.coeffs[k])
        if not c:
            continue
        mono = _mono(p.var, k)
        a = abs(c)
        if not mono:
            text = _qq(a)
        elif a == 1:
            text = mono
        else:
            text = f"{_qq(a)}*{mono}"
        terms.append((c < 0, text))
    return _join(terms, " + ", " - ", "-")


def _plain_coeff_poly(coeffs, var: str, show) -> str:
    """``sum c_k var^k`` for coefficients rendered by ``show``."""
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        text = show(c)
        mono = _mono(var, k)
        if not mono:
            single = text.startswith("-") and " + " not in text and " - " not in text
            terms.append((True, text[1:]) if single else (False, text))
        elif text == "1":
            terms.append((False, mono))
        elif text == "-1":
            terms.append((True, mono))
        else:
            terms.append((False, f"{_wrap(text)}*{mono}"))
    return _join(terms, " + ", " - ", "-")


def plain_algebraic(a) -> str:
    from ..algebraic import ALPHA

    return _plain_coeff_poly(a.coeffs, ALPHA, plain_element)


def _plain_root_sum(s) -> str:
    if s.display is not None:
        num, den = s.display
        n = plain_qq_poly(num)
        coeff = f"{n if num.degree == 0 else _wrap(n)}/{_wrap(plain_qq_poly(den))}"
    else:
        coeff = _wrap(plain_algebraic(s.coeff))
    arg = _plain_coeff_poly(s.arg.coeffs, s.arg.var, plain_algebraic)
    return f"sum({plain_qq_poly(s.minpoly)} = 0, {coeff}*log({arg}))"


def _plain_log(t) -> str:
    c = Fraction(t.coeff)
    arg = f"log({plain_element(t.arg)})"
    if c == 1:
        return arg
    if c == -1:
        return "-" + arg
    return f"{_wrap(_qq(c)) if c < 0 else _qq(c)}*{arg}"


def _plain_integral(v) -> str:
    parts = [plain_element(v.g)] if v.g else []
    parts += [_plain_log(t) for t in v.log_part.logs]
    parts += [_plain_root_sum(s) for s in v.log_part.root_sums]
    if v.remainder:
        parts.append(f"int({plain_element(v.remainder)})")
    lines = [f"int({plain_element(v.f)}) = " + (" + ".join(parts) if parts else "0")]
    if not v.is_elementary:
        lines.append("not elementary:")
        lines += [f"  {d}" for d in v.diagnosis]
    return "\n".join(lines)


def _plain_decomposition(v) -> str:
    lines = [
        f"g = {plain_element(v.g)}",
        f"r = {plain_element(v.r)}",
        f"is_derivative = {'true' if v.is_zero() else 'false'}",
    ]
    for i in range(v.tower.n + 1):
        p = v.projection(i)
        if p:
            lines.append(f"pi_{i}(r) = {plain_element(p)}")
    return "\n".join(lines)


def _plain_certificate(v) -> str:
    return "\n".join(
        [
            f"a = {plain_element(v.a)}",
            f"h = {plain_element(v.h)}",
            f"r = {plain_element(v.r)}",
            f"r/den(f) = {plain_element(v.remainder())}",
        ]
    )


def _plain_kernel(v) -> str:
    return f"kernel = {plain_element(v.kernel)}\nshell = {plain_element(v.shell)}"


def format_plain(value) -> str:
    kind = _kind(value)
    if kind == "element":
        return plain_element(value)
    return {
        "decomposition": _plain_decomposition,
        "integral": _plain_integral,
        "certificate": _plain_certificate,
        "kernel_shell": _plain_kernel,
    }[kind](value)


# ---------------------------------------------------------------------------
# latex


def latex_name(name: str) -> str:
    if name == "alpha":
        return "\\alpha"
    m = re.fullmatch(r"([A-Za-z]+)_?(\d+)", name)
    if m:
        return f"{m.group(1)}_{{{m.group(2)}}}"
    if len(name) == 1:
        return name
    return f"\\mathit{{{name.replace('_', chr(92) + '_')}}}"


def _latex_pow(base: str, k: int) -> str:
    if k == 1:
        return base
    return f"{base}^{k}" if 0 <= k < 10 else f"{base}^{{{k}}}"


def _latex_factors(factors: list) -> str:
    out = ""
    for f in factors:
        # a control word swallows a following letter
        if out and re.search(r"\\[A-Za-z]+$", out) and f[:1].isalpha():
            out += " "
        out += f
    return out


def _latex_terms(items) -> str:
    """``items``: ``(coeff Fraction, [factor strings])`` in display order."""
    terms = []
    for c, factors in items:
        a = abs(c)
        body = _latex_factors(factors)
        if not body:
            text = _latex_qq(a)
        elif a == 1:
            text = body
        else:
            text = _latex_qq(a) + (" " if body[:1] == "\\" and a.denominator != 1 else "") + body
        terms.append((c < 0, text))
    return _join(terms, "+", "-", "-")


def _latex_qq(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    sign = "-" if c < 0 else ""
    return f"{sign}\\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"


def _latex_mpoly(mp) -> str:
    names = [latex_name(n) for n in mp.context().names()]
    items = []
    for exps, c in sorted(mp.to_dict().items(), reverse=True):
        factors = [_latex_pow(names[j], e) for j, e in enumerate(exps) if e]
        items.append((Fraction(int(c)), factors))
    return _latex_terms(items)


def latex_element(e) -> str:
    num = _latex_mpoly(e.num)
    if e.den.is_one():
        return num
    den = _latex_mpoly(e.den)
    if len(e.num) == 1 and num.startswith("-"):
        return f"-\\frac{{{num[1:]}}}{{{den}}}"
    return f"\\frac{{{num}}}{{{den}}}"


def latex_qq_poly(p) -> str:
    var = latex_name(p.var)
    items = [
        (Fraction(p.coeffs[k]), [_latex_pow(var, k)] if k else [])
        for k in range(p.degree, -1, -1)
        if p.coeffs[k]
    ]
    return _latex_terms(items)


def _latex_paren(text: str) -> str:
    return f"\\left({text}\\right)"


def _latex_coeff_poly(coeffs, var: str, show) -> str:
    parts = []
    v = latex_name(var)
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        text = show(c)
        mono = _latex_pow(v, k) if k else ""
        simple = re.fullmatch(r"-?[A-Za-z0-9_{}\\^]+", text) is not None and "+" not in text
        if not mono:
            parts.append(text)
        elif text == "1":
            parts.append(mono)
        elif text == "-1":
            parts.append("-" + mono)
        else:
            parts.append((text if simple else _latex_paren(text)) + " " + mono)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def _latex_algebraic(a) -> str:
    from ..algebraic import ALPHA

    return _latex_coeff_poly(a.coeffs, ALPHA, latex_element)


def _latex_root_sum(s) -> str:
    if s.display is not None:
        num, den = s.display
        n, d = latex_qq_poly(num), latex_qq_poly(den)
        if num.degree == 0 and Fraction(num.coeffs[0]) < 0:
            coeff = f"-\\frac{{{n[1:]}}}{{{d}}}"
        else:
            coeff = f"\\frac{{{n}}}{{{d}}}"
    else:
        coeff = _latex_algebraic(s.coeff)
        if "+" in coeff or "-" in coeff[1:]:
            coeff = _latex_paren(coeff)
    arg = _latex_coeff_poly(s.arg.coeffs, s.arg.var, _latex_algebraic)
    return f"\\sum_{{{latex_qq_poly(s.minpoly)}=0}} {coeff} \\log{_latex_paren(arg)}"


def _latex_log(t) -> str:
    c = Fraction(t.coeff)
    arg = f"\\log{_latex_paren(latex_element(t.arg))}"
    if c == 1:
        return arg
    if c == -1:
        return "-" + arg
    return f"{_latex_qq(c)} {arg}"


def _latex_sum(parts: list) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " " + p if p.startswith("-") else " + " + p
    return out


def _latex_integral(v) -> str:
    parts = [latex_element(v.g)] if v.g else []
    parts += [_latex_log(t) for t in v.log_part.logs]
    parts += [_latex_root_sum(s) for s in v.log_part.root_sums]
    if v.remainder:
        parts.append(f"\\int {latex_element(v.remainder)}\\,dx")
    return f"\\int {latex_element(v.f)}\\,dx = " + _latex_sum(parts)


def _latex_decomposition(v) -> str:
    g, r = latex_element(v.g), latex_element(v.r)
    return f"{latex_element(v.f)} = \\left({g}\\right)' + {r}"


def _latex_certificate(v) -> str:
    return (
        f"a = {latex_element(v.a)},\\quad h = {latex_element(v.h)},\\quad "
        f"r = {latex_element(v.r)}"
    )


def _latex_kernel(v) -> str:
    return f"\\xi = {latex_element(v.kernel)},\\quad \\eta = {latex_element(v.shell)}"


def format_latex(value) -> str:
    kind = _kind(value)
    if kind == "element":
        return latex_element(value)
    return {
        "decomposition": _latex_decomposition,
        "integral": _latex_integral,
        "certificate": _latex_certificate,
        "kernel_shell": _latex_kernel,
    }[kind](value)


# ---------------------------------------------------------------------------
# json


def _kind(value) -> str:
    from ..additive import AdditiveDecomposition
    from ..elementary import IntegralExpression
    from ..field import TowerElement
    from ..kernel import KernelShell
    from ..reductions import ReductionCertificate

    for cls, name in (
        (TowerElement, "element"),
        (AdditiveDecomposition, "decomposition"),
        (IntegralExpression, "integral"),
        (ReductionCertificate, "certificate"),
        (KernelShell, "kernel_shell"),
    ):
        if isinstance(value, cls):
            return name
    raise TypeError(f"cannot format {type(value).__name__}")


def _tower_of(value, kind: str):
    if kind == "element":
        return value.tower
    if kind == "certificate":
        return value.f.tower
    if kind == "kernel_shell":
        return value.kernel.tower
    return value.tower


def _qq_list(p) -> list:
    return [_exact(c) for c in p.coeffs]


def _alg_list(a) -> list:
    return [plain_element(c) for c in a.coeffs]


def _json_result(value, kind: str) -> dict:
    s = plain_element
    if kind == "element":
        return {"value": s(value)}
    if kind == "certificate":
        return {"f": s(value.f), "level": value.level, "a": s(value.a), "h": s(value.h), "r": s(value.r)}
    if kind == "kernel_shell":
        return {"kernel": s(value.kernel), "shell": s(value.shell), "mode": value.mode}
    if kind == "decomposition":
        terms = []
        for t in value.terms:
            entry = {"level": t.level, "exponents": list(t.exponents), "coeff": s(t.coeff)}
            if t.residual is not None:
                entry["residual"] = {
                    "simple": s(t.residual.simple),
                    "poly": s(t.residual.poly),
                    "xi": s(t.residual.xi),
                }
                entry["eta"] = s(t.eta)
            terms.append(entry)
        return {
            "f": s(value.f),
            "g": s(value.g),
            "r": s(value.r),
            "is_derivative": value.is_zero(),
            "terms": terms,
        }
    sums = []
    for rs in value.log_part.root_sums:
        sums.append(
            {
                "level": rs.level,
                "minpoly": _qq_list(rs.minpoly),
                "coeff": _alg_list(rs.coeff),
                "arg": [_alg_list(c) for c in rs.arg.coeffs],
                "display": None
                if rs.display is None
                else {"num": _qq_list(rs.display[0]), "den": _qq_list(rs.display[1])},
            }
        )
    return {
        "f": s(value.f),
        "g": s(value.g),
        "elementary": value.is_elementary,
        "logs": [{"coeff": _exact(t.coeff), "arg": s(t.arg)} for t in value.log_part.logs],
        "root_sums": sums,
        "remainder": s(value.remainder),
        "diagnosis": [{"level": d.level, "ok": d.ok, "reason": d.reason} for d in value.diagnosis],
    }


def to_json_dict(value) -> dict:
    from .build import tower_declarations

    kind = _kind(value)
    return {
        "kind": kind,
        "version": JSON_VERSION,
        "tower": tower_declarations(_tower_of(value, kind)),
        "result": _json_result(value, kind),
    }


def format_json(value) -> str:
    return json.dumps(to_json_dict(value), indent=2)


def from_json(text):
    """Rebuild the value of a JSON document produced by :func:`format_json`."""
    from ..additive import AdditiveDecomposition, RemainderTerm
    from ..algebraic import ALPHA, AlgebraicElement, AlgebraicField
    from ..elementary import IntegralExpression, LevelDiagnosis, LogPart, LogTerm, RootSum
    from ..kernel import KernelShell
    from ..poly import QQ, Polynomial
    from ..rational import ResidualForm
    from ..reductions import ReductionCertificate
    from .build import build_tower, evaluate

    doc = json.loads(text) if isinstance(text, str) else text
    if doc.get("version") != JSON_VERSION:
        raise ValueError(f"unsupported document version {doc.get('version')!r}")
    tw = build_tower(doc["tower"])
    res = doc["result"]
    kind = doc["kind"]

    def el(s):
        return evaluate(s, tw)

    if kind == "element":
        return el(res["value"])
    if kind == "certificate":
        return ReductionCertificate(el(res["a"]), el(res["h"]), el(res["r"]), el(res["f"]), res["level"])
    if kind == "kernel_shell":
        return KernelShell(el(res["kernel"]), el(res["shell"]), res["mode"])
    if kind == "decomposition":
        terms = []
        for t in res["terms"]:
            residual = eta = None
            if "residual" in t:
                rf = t["residual"]
                residual = ResidualForm(el(rf["simple"]), el(rf["poly"]), el(rf["xi"]))
                eta = el(t["eta"])
            terms.append(RemainderTerm(t["level"], tuple(t["exponents"]), el(t["coeff"]), residual, eta))
        return AdditiveDecomposition(tw, el(res["f"]), el(res["g"]), tuple(terms))
    if kind != "integral":
        raise ValueError(f"unknown document kind {kind!r}")

    def qq_poly(cs):
        return Polynomial([Fraction(c) for c in cs], QQ, ALPHA)

    sums = []
    for rs in res["root_sums"]:
        K = AlgebraicField(qq_poly(rs["minpoly"]), tw)
        coeff = AlgebraicElement(K, [el(c) for c in rs["coeff"]])
        arg = Polynomial([AlgebraicElement(K, [el(c) for c in cs]) for cs in rs["arg"]], K, tw.names[rs["level"]])
        disp = rs["display"]
        display = None if disp is None else (qq_poly(disp["num"]), qq_poly(disp["den"]))
        sums.append(RootSum(K.minpoly, coeff, arg, rs["level"], display))
    logs = tuple(LogTerm(Fraction(t["coeff"]), el(t["arg"])) for t in res["logs"])
    diags = tuple(LevelDiagnosis(d["level"], d["ok"], d["reason"]) for d in res["diagnosis"])
    return IntegralExpression(el(res["f"]), el(res["g"]), LogPart(logs, tuple(sums)), el(res["remainder"]), diags)


# ---------------------------------------------------------------------------


def format_value(value, fmt: str = "plain") -> OutputDocument:
    """Render ``value`` as a plain, latex or json document."""
    if fmt == "plain":
        return OutputDocument(fmt, format_plain(value))
    if fmt == "latex":
        return OutputDocument(fmt, format_latex(value))
    if fmt == "json":
        return OutputDocument(fmt, format_json(value))
    raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
