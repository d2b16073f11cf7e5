"""Deciding ``g in V_f = {a' + a*f}`` for hyperexponential monomials.

After a kernel-shell reduction ``g = A' + A*f + h + r/den(f)`` the question is
whether ``h = 0`` and ``a' + f*a = r/den(f)`` has a Laurent polynomial
solution ``a``.  When ``f`` does not involve ``t`` the equation decouples
into one Risch equation per Laurent coefficient, solved one level down.
Otherwise ``a`` is found by a triangular solve over an explicit Laurent
support.  The support bounds need the (at most one) integer ``k`` for which
``y' + (c + k*sigma) y = 0`` has a nonzero solution; this is decided over
QQ(x) and reported as :class:`UnsupportedCase` higher up.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

import flint

from .errors import InvariantViolation, UnsupportedCase
from .field import TowerElement
from .kernel import NORMALIZED, gks
from .poly import QQ, Polynomial, extended_gcd, factor_rational, gcd, partial_fractions
from .rational import hyperexp_hermite, solve_rde, to_qq
from .reductions import gksr
from .tower import derive, laurent_coefficients


def in_Vf(f: TowerElement, g: TowerElement, i: int, check: bool = True) -> bool:
    """True iff ``g = a' + a*f`` for some ``a`` in ``F_{i-1}(t_i)``.

    ``f`` must be weakly normalized.  Raises :class:`UnsupportedCase` when the
    Laurent support of a candidate ``a`` cannot be bounded.
    """
    cert = gksr(f, g, i, check=check)
    if cert.h:
        return False
    s = cert.remainder()
    if not s:
        return True
    return solve_vf(f, s, i) is not None


def solve_vf(f: TowerElement, s: TowerElement, i: int) -> Optional[TowerElement]:
    """Some ``a`` in ``F_i`` with ``a' + f*a = s``, or ``None`` if there is none."""
    tw = s.tower
    if not s:
        return tw.zero
    for vec, y in parametric_solve(f, [s], i):
        if vec[0]:
            a = y / vec[0]
            if derive(a) + f * a != s:
                raise InvariantViolation("membership certificate does not satisfy the equation")
            return a
    return None


def homogeneous_solution(kappa: TowerElement, level: int) -> Optional[TowerElement]:
    """A nonzero ``y`` in ``F_level`` with ``y' + kappa*y = 0``, or ``None``."""
    sols = parametric_solve(kappa, [], level)
    return sols[0][1] if sols else None


# ---------------------------------------------------------------------------
# linear algebra over QQ


def q_nullspace(elems: list) -> list:
    """Basis of ``{c in QQ^n : sum c_j elems_j = 0}`` by coefficient comparison."""
    n = len(elems)
    nz = [e for e in elems if e]
    if not nz:
        return [tuple(Fraction(int(j == l)) for j in range(n)) for l in range(n)]
    tw = nz[0].tower
    L = tw._one_mp
    for e in nz:
        L = L * (e.den / L.gcd(e.den))
    cols = [(e.num * (L / e.den)).to_dict() if e else {} for e in elems]
    monos = sorted({m for col in cols for m in col})
    mat = flint.fmpz_mat(len(monos), n, [int(col.get(m, 0)) for m in monos for col in cols])
    null, nullity = mat.nullspace()
    return [tuple(Fraction(int(null[j, l])) for j in range(n)) for l in range(nullity)]


def _scaled(e: TowerElement, c: Fraction) -> TowerElement:
    return e * c if c != 1 else e


class _Space:
    """A QQ-basis of candidate solutions under construction.

    Each entry is ``(vec, a, extra)``: ``vec`` holds the coefficients of the
    right-hand sides, ``a`` maps Laurent exponents to coefficients and
    ``extra`` is an additional summand of the solution.
    """

    def __init__(self, width: int, entries):
        self.width = width
        self.entries = list(entries)

    def restrict(self, combos: list) -> None:
        """Replace the basis by the combinations ``sum nu_b entry_b``."""
        new = []
        for nu in combos:
            vec = [Fraction(0)] * self.width
            a: dict = {}
            extra = None
            for coef, (v, ab, eb) in zip(nu, self.entries):
                if not coef:
                    continue
                vec = [p + coef * q for p, q in zip(vec, v)]
                for k, val in ab.items():
                    term = _scaled(val, coef)
                    a[k] = a[k] + term if k in a else term
                if eb is not None and eb:
                    term = _scaled(eb, coef)
                    extra = term if extra is None else extra + term
            new.append((tuple(vec), {k: v for k, v in a.items() if v}, extra))
        self.entries = new

    def impose(self, values: list) -> None:
        """Keep the combinations with ``sum nu_b values_b = 0``."""
        if any(values):
            self.restrict(q_nullspace(values))

    def step(self, kappa: TowerElement, values: list, k: int, level: int) -> None:
        """Solve ``a_k' + kappa*a_k = values_b`` jointly and set ``a_k``."""
        sols = parametric_solve(kappa, values, level)
        self.restrict([nu for nu, _ in sols])
        for idx, (_, y) in enumerate(sols):
            vec, a, extra = self.entries[idx]
            if y:
                a = dict(a)
                a[k] = a[k] + y if k in a else y
            self.entries[idx] = (vec, a, extra)

    def append(self, a: dict) -> None:
        self.entries.append((tuple(Fraction(0) for _ in range(self.width)), a, None))


# ---------------------------------------------------------------------------
# the parametric solver


def parametric_solve(f: TowerElement, rhs: list, i: int) -> list:
    """Basis of ``{(c, y) : y' + f*y = sum c_j rhs_j}`` over QQ with ``y`` in ``F_i``.

    Entries are pairs ``(c, y)`` with ``c`` a tuple of Fractions.
    """
    tw = f.tower
    m = len(rhs)
    if i == 0:
        return _parametric_qx(f, rhs)
    if not f.depends_on(i) and not any(s.depends_on(i) for s in rhs):
        sols = parametric_solve(f, rhs, i - 1)
        # a t_i^k part with k != 0 solves the homogeneous equation; at most one k qualifies
        if tw.is_hyperexponential(i):
            ks = find_exponents(f, [tw.sigma(i)], i - 1)
            if ks is not None and ks[0] != 0:
                w = homogeneous_solution(f + ks[0] * tw.sigma(i), i - 1)
                sols.append((tuple(Fraction(0) for _ in range(m)), w * tw.gen(i) ** ks[0]))
        return sols
    if not tw.is_hyperexponential(i):
        raise UnsupportedCase(f"membership over the non-hyperexponential monomial {tw.names[i]}")
    # with a normalized kernel every solution is a Laurent polynomial in t_i
    ks = gks(f, i, NORMALIZED)
    xi, eta = ks.kernel, ks.shell
    certs = [gksr(xi, s * eta, i, check=False) for s in rhs]
    unit = [tuple(Fraction(int(j == l)) for j in range(m)) for l in range(m)]
    space = _Space(m, ((unit[l], {}, certs[l].a) for l in range(m)))
    space.impose([c.h for c in certs])
    R = [laurent_coefficients(c.r, i) if c.r else {} for c in certs]
    if xi.depends_on(i):
        _Coupled(xi, R, i).solve(space)
    else:
        _decoupled(xi, R, i, space)
    t = tw.gen(i)
    out = []
    for vec, a, extra in space.entries:
        y = extra if extra is not None else tw.zero
        for k, ak in a.items():
            y = y + ak * t ** k
        out.append((vec, y / eta))
    return out


def _rhs_values(space: _Space, R: list, m: int) -> list:
    """``sum_j vec_j R_j[m]`` for every basis entry."""
    vals = []
    for vec, _, _ in space.entries:
        acc = None
        for c, Rj in zip(vec, R):
            if c and m in Rj:
                term = _scaled(Rj[m], c)
                acc = term if acc is None else acc + term
        vals.append(acc)
    return vals


def _decoupled(xi: TowerElement, R: list, i: int, space: _Space) -> None:
    tw = xi.tower
    sigma = tw.sigma(i)
    support = sorted({k for Rj in R for k in Rj})
    for k in support:
        vals = [v if v is not None else tw.zero for v in _rhs_values(space, R, k)]
        space.step(xi + k * sigma, vals, k, i - 1)
    ks = find_exponents(xi, [sigma], i - 1)
    if ks is not None and ks[0] not in support:
        space.append({ks[0]: homogeneous_solution(xi + ks[0] * sigma, i - 1)})


class _Coupled:
    """Triangular solve of ``D a' + N a = sum c_j R_j`` with ``D = den(xi)`` monic.

    The Laurent support of ``a`` is bounded from the top and bottom degrees;
    an operator that can cancel its leading term only does so at the unique
    degenerate index found by :func:`find_exponents`.
    """

    def __init__(self, xi: TowerElement, R: list, i: int):
        tw = xi.tower
        self.tw, self.i, self.R = tw, i, R
        self.sigma = tw.sigma(i)
        num, den = xi.num_den(i)
        self.D = {j: c for j, c in enumerate(den.coeffs) if c}
        self.N = {j: c for j, c in enumerate(num.coeffs) if c}
        self.d, self.n = den.degree, num.degree
        self.nu, self.nuN = den.trailing_degree(), num.trailing_degree()
        self._dcache: dict = {}

    def _bounds(self, degR: int, valR: int):
        d, n, nu, nuN = self.d, self.n, self.nu, self.nuN
        if d > n:
            hi = max(degR - d, 0)
        elif n > d:
            hi = degR - n
        else:
            ks = find_exponents(self.N[n] / self.D[d], [self.sigma], self.i - 1)
            hi = degR - d if ks is None else max(degR - d, ks[0])
        if nu < nuN:
            lo = min(valR - nu, 0)
        elif nu > nuN:
            lo = valR - nuN
        else:
            ks = find_exponents(self.N[nu] / self.D[nu], [self.sigma], self.i - 1)
            lo = valR - nu if ks is None else min(valR - nu, ks[0])
        return lo, hi

    def _derive(self, e: TowerElement) -> TowerElement:
        hit = self._dcache.get(id(e))
        if hit is None or hit[0] is not e:
            hit = (e, derive(e))
            self._dcache[id(e)] = hit
        return hit[1]

    def _contrib(self, a: dict, m: int) -> TowerElement:
        acc = self.tw.zero
        for k, ak in a.items():
            j = m - k
            if j in self.D:
                acc = acc + self.D[j] * (self._derive(ak) + k * self.sigma * ak)
            if j in self.N:
                acc = acc + self.N[j] * ak
        return acc

    def _residuals(self, space: _Space, m: int) -> list:
        vals = _rhs_values(space, self.R, m)
        out = []
        for (_, a, _), v in zip(space.entries, vals):
            r = v if v is not None else self.tw.zero
            out.append(r - self._contrib(a, m))
        return out

    def solve(self, space: _Space) -> None:
        support = sorted({k for Rj in self.R for k in Rj})
        if not support:
            return
        lo, hi = self._bounds(support[-1], support[0])
        top, bot = max(self.d, self.n), min(self.nu, self.nuN)
        for k in range(hi, lo - 1, -1):
            vals = self._residuals(space, k + top)
            if self.n > self.d:
                lead = self.N[self.n]
                for idx, v in enumerate(vals):
                    vec, a, extra = space.entries[idx]
                    if v:
                        a = dict(a)
                        a[k] = v / lead
                    space.entries[idx] = (vec, a, extra)
                continue
            kappa = k * self.sigma
            if self.n == self.d:
                kappa = kappa + self.N[self.n]
            space.step(kappa, vals, k, self.i - 1)
        for m in range(lo + top - 1, lo + bot - 1, -1):
            space.impose(self._residuals(space, m))
        for m in support:
            if m < lo + bot or m > hi + top:
                space.impose(self._residuals(space, m))


def _parametric_qx(f: TowerElement, rhs: list) -> list:
    tw = f.tower
    m = len(rhs)
    ks = gks(f, 0, NORMALIZED)
    xi, eta = ks.kernel, ks.shell
    results = [hyperexp_hermite(s, f, kernel_shell=ks) for s in rhs]
    out = []
    if m:
        for nu in q_nullspace([r.residual.value() for r in results]):
            y = tw.zero
            for c, r in zip(nu, results):
                if c and r.w:
                    y = y + _scaled(r.w, c)
            out.append((nu, y / eta))
    if not xi:
        out.append((tuple(Fraction(0) for _ in range(m)), eta.inverse()))
    return out


# ---------------------------------------------------------------------------
# degenerate indices


def _normalized(c: TowerElement, level: int):
    """``c = eta'/eta + xi`` with ``xi`` free of ``t_level``; ``(None, None)`` if impossible.

    A solution ``z`` of ``z' + xi*z = 0`` with ``xi`` normalized has no normal
    zeros or poles, so ``z = w * t^e`` and ``xi`` must lie one level down.
    """
    tw = c.tower
    if not tw.is_hyperexponential(level):
        raise UnsupportedCase(f"logarithmic derivatives over the monomial {tw.names[level]}")
    ks = gks(c, level, NORMALIZED)
    if ks.kernel.depends_on(level):
        return None, None
    return ks.kernel, ks.shell


def find_exponents(c: TowerElement, sigmas: list, level: int) -> Optional[list]:
    """Integers ``k_j`` with ``c + sum k_j sigmas_j = -y'/y`` for some nonzero ``y`` in ``F_level``.

    The ``sigmas`` are logarithmic derivatives of algebraically independent
    hyperexponential monomials above ``F_level``, so the vector is unique.
    """
    if any(s.level > level or (level and s.depends_on(level)) for s in sigmas):
        raise UnsupportedCase("exponent search with directions that involve the current monomial")
    if level == 0:
        return _exponents_qx(c, sigmas)
    xi, _ = _normalized(c, level)
    if xi is None:
        return None
    ks = find_exponents(xi, list(sigmas) + [c.tower.sigma(level)], level - 1)
    return None if ks is None else ks[:-1]


def _exponents_qx(c: TowerElement, sigmas: list) -> Optional[list]:
    """``find_exponents`` over QQ(x) by a linear system on partial fractions.

    Polynomial parts, higher-order polar parts and the irrational coordinates
    of residues must cancel; these are rational linear equations in the
    ``k_j``.  The remaining rational residue coordinates must be integers.
    """
    tw = c.tower
    funcs = [c] + list(sigmas)
    m = len(sigmas)
    nds = [tuple(to_qq(p) for p in f.num_den(0)) if f else None for f in funcs]
    Dc = Polynomial((Fraction(1),), QQ, "x")
    for nd in nds:
        if nd is not None:
            Dc = Dc * nd[1].exact_div(gcd(Dc, nd[1]))
    parts = factor_rational(Dc)[1] if Dc.degree > 0 else []
    # columns: one per function; every row reads  col_0 + sum k_j col_j = 0
    rows: list = []
    integral: list = []
    expansions = []
    for nd in nds:
        if nd is None:
            expansions.append(None)
            continue
        num = nd[0] * Dc.exact_div(nd[1])
        expansions.append(partial_fractions(num, parts))
    zero = Polynomial.zero(QQ, "x")

    def column(getter):
        return [getter(e) if e is not None else zero for e in expansions]

    def add_rows(polys, deg, target):
        for j in range(deg):
            target.append([p.coeff(j) for p in polys])

    polys = column(lambda e: e[0])
    add_rows(polys, max((p.degree for p in polys), default=-1) + 1, rows)
    for l, (p, mult) in enumerate(parts):
        dp = p.diff()
        inv = extended_gcd(dp % p, p)[1]
        for j in range(1, mult):
            add_rows(column(lambda e: e[1][l][j]), p.degree, rows)
        res = [(a * inv) % p for a in column(lambda e: e[1][l][0])]
        add_rows([r.shift(-1) for r in res], p.degree - 1, rows)
        integral.append([r.coeff(0) for r in res])
    ks = _solve_rational(rows, m)
    if ks is _INCONSISTENT:
        return None
    if ks is None:
        raise UnsupportedCase("exponent vector not determined by the polar structure")
    if any(k.denominator != 1 for k in ks):
        return None
    for row in integral:
        val = row[0] + sum(k * r for k, r in zip(ks, row[1:]))
        if val.denominator != 1:
            return None
    ks = [int(k) for k in ks]
    kappa = c
    for k, s in zip(ks, sigmas):
        kappa = kappa + k * s
    if kappa and solve_rde(kappa, tw.zero)[1] is None:
        return None
    return ks


_INCONSISTENT = object()


def _solve_rational(rows: list, m: int):
    """Unique solution of ``row[0] + sum k_j row[j+1] = 0``; ``None`` if not unique."""
    rows = [r for r in rows if any(r)]
    if m == 0:
        return _INCONSISTENT if rows else []
    if not rows:
        return None
    entries = [Fraction(v) for r in rows for v in ([-v for v in r[1:]] + [r[0]])]
    mat = flint.fmpq_mat(len(rows), m + 1, [flint.fmpq(v.numerator, v.denominator) for v in entries])
    red, rank = mat.rref()
    for r in range(rank):
        pivot = next(j for j in range(m + 1) if red[r, j] != 0)
        if pivot == m:
            return _INCONSISTENT
    if rank < m:
        return None
    return [Fraction(int(red[j, m].p), int(red[j, m].q)) for j in range(m)]
