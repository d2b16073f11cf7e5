"""Dense univariate polynomials over an exact coefficient field.

The coefficient field is abstract: anything whose elements support ``+``,
``-``, ``*``, ``/`` and truthiness (zero is falsy) works.  Three fields are
used in practice: the rationals (:data:`QQ`), the tower fields of
:mod:`hyperred.field`, and the algebraic extensions of
:mod:`hyperred.algebraic`.

Coefficients are stored low degree first.  The zero polynomial has an empty
coefficient list and degree ``-1``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NoSolution, PreconditionViolated

RationalNumber = Fraction


class RationalField:
    """The field of rational numbers as a coefficient domain."""

    zero = Fraction(0)
    one = Fraction(1)

    def convert(self, value) -> Fraction:
        return Fraction(value)

    def __repr__(self) -> str:
        return "QQ"


QQ = RationalField()


class Polynomial:
    """An immutable dense polynomial in one variable over ``domain``."""

    __slots__ = ("coeffs", "domain", "var")

    def __init__(self, coeffs: Iterable, domain, var: str = "t"):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.domain = domain
        self.var = var

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, domain, var="t") -> "Polynomial":
        return cls((), domain, var)

    @classmethod
    def constant(cls, c, domain, var="t") -> "Polynomial":
        return cls((c,), domain, var)

    @classmethod
    def monomial(cls, c, k: int, domain, var="t") -> "Polynomial":
        return cls([domain.zero] * k + [c], domain, var)

    def _new(self, coeffs) -> "Polynomial":
        return Polynomial(coeffs, self.domain, self.var)

    # -- basic queries ------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.domain.zero

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return self.domain.zero

    def trailing_degree(self) -> int:
        """Largest k with var^k dividing self (``-1`` for zero)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return -1

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if not self.coeffs:
            return not other
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial((self.domain.convert(other),), self.domain, self.var)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self._new([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(self.domain.convert(other))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return self._new(())
        out = [self.domain.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = out[i + j] + ai * bj
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self._new((self.domain.one,))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        if not c:
            return self._new(())
        return self._new([c * a for a in self.coeffs])

    def shift(self, k: int) -> "Polynomial":
        """Multiply by var^k (k >= 0) or drop the k lowest coefficients (k < 0)."""
        if not self.coeffs:
            return self
        if k >= 0:
            return self._new([self.domain.zero] * k + list(self.coeffs))
        return self._new(self.coeffs[-k:])

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            return self
        inv = self.domain.one / self.coeffs[-1]
        return self._new([c * inv for c in self.coeffs[:-1]] + [self.domain.one])

    def divmod(self, other: "Polynomial"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        if len(rem) - 1 < db:
            return self._new(()), self
        inv = self.domain.one / other.lc
        q = [self.domain.zero] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db]
            if not c:
                continue
            c = c * inv
            q[k] = c
            for j in range(db + 1):
                if bc[j]:
                    rem[k + j] = rem[k + j] - c * bc[j]
        return self._new(q), self._new(rem[:db])

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = self.divmod(other)
        if r:
            raise PreconditionViolated("inexact polynomial division")
        return q

    def divides(self, other: "Polynomial") -> bool:
        """True when ``self`` divides ``other``."""
        if not self:
            return not other
        return not (other % self)

    def pseudo_rem(self, other: "Polynomial") -> "Polynomial":
        """lc(other)^(deg self - deg other + 1) * self mod other, fraction free."""
        if not other:
            raise ZeroDivisionError("pseudo-remainder by zero")
        r = self
        db = other.degree
        e = self.degree - db + 1
        if e <= 0:
            return r
        lcb = other.lc
        while r and r.degree >= db:
            t = Polynomial.monomial(r.lc, r.degree - db, self.domain, self.var)
            r = r.scale(lcb) - t * other
            e -= 1
        return r.scale(lcb ** e) if e else r

    def diff(self) -> "Polynomial":
        """Formal derivative with respect to the polynomial's own variable."""
        return self._new([c * k for k, c in enumerate(self.coeffs)][1:])

    def __call__(self, value):
        acc = self.domain.zero
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def map_coeffs(self, fn, domain=None) -> "Polynomial":
        return Polynomial([fn(c) for c in self.coeffs], domain or self.domain, self.var)


# ---------------------------------------------------------------------------
# gcd family


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd over the coefficient field (zero when both inputs are zero)."""
    fast = getattr(p.domain, "poly_gcd", None)
    if fast is not None and p and q:
        g = fast(p, q)
        if g is not None:
            return g
    while q:
        p, q = q, p % q
    return p.monic()


def extended_gcd(p: Polynomial, q: Polynomial):
    """Return ``(g, u, v)`` with ``g`` monic, ``g = gcd(p, q)`` and ``u p + v q = g``."""
    dom, var = p.domain, p.var
    zero = Polynomial.zero(dom, var)
    one = Polynomial.constant(dom.one, dom, var)
    r0, r1 = p, q
    s0, s1 = one, zero
    t0, t1 = zero, one
    while r1:
        quo, rem = r0.divmod(r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if not r0:
        return zero, zero, zero
    inv = dom.one / r0.lc
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def solve_diophantine(p: Polynomial, q: Polynomial, r: Polynomial):
    """Solve ``u p + v q = r``.

    The returned ``v`` is the unique solution with ``deg v < deg(p / gcd(p, q))``,
    so in particular ``deg v < deg p`` whenever ``p`` is nonconstant.  Raises
    :class:`NoSolution` when ``gcd(p, q)`` does not divide ``r``.
    """
    g, s, t = extended_gcd(p, q)
    if not g:
        if r:
            raise NoSolution("u*0 + v*0 = r has no solution for r != 0")
        return r, r
    rq, rr = r.divmod(g)
    if rr:
        raise NoSolution("gcd(p, q) does not divide r")
    pg = p.exact_div(g)
    v = (t * rq) % pg if pg.degree > 0 else Polynomial.zero(p.domain, p.var)
    if not p:
        # p = 0: v q = r
        return Polynomial.zero(p.domain, p.var), r.exact_div(q)
    u = (r - v * q).exact_div(p)
    return u, v


def resultant(p: Polynomial, q: Polynomial):
    """Resultant via the subresultant PRS.

    Sign convention: the Sylvester determinant with the rows of ``p`` first,
    so ``resultant(t - a, t - b) == a - b`` and
    ``resultant(p, q) == lc(p)**deg(q) * prod(q(root) for root of p)``.
    """
    dom = p.domain
    if not p or not q:
        return dom.zero
    A, B = p, q
    s = dom.one
    if A.degree < B.degree:
        A, B = B, A
        if A.degree % 2 == 1 and B.degree % 2 == 1:
            s = -s
    if B.degree == 0:
        return s * B.lc ** A.degree
    g = dom.one
    h = dom.one
    while True:
        delta = A.degree - B.degree
        if A.degree % 2 == 1 and B.degree % 2 == 1:
            s = -s
        R = A.pseudo_rem(B)
        A = B
        if not R:
            return dom.zero
        B = R.scale(dom.one / (g * h ** delta))
        g = A.lc
        h = (g ** delta) / (h ** (delta - 1)) if delta >= 1 else h
        if B.degree == 0:
            dA = A.degree
            h = B.lc ** dA / (h ** (dA - 1)) if dA >= 1 else h
            return s * h


def squarefree_factorization(p: Polynomial):
    """Yun's algorithm: ``p = lc(p) * prod(f**m for f, m in result)``.

    Factors are monic, squarefree and pairwise coprime; multiplicities are
    strictly increasing and factors of degree zero are omitted.
    """
    if not p:
        raise PreconditionViolated("squarefree factorization of zero")
    if p.degree == 0:
        return []
    f = p.monic()
    out = []
    d = f.diff()
    a0 = gcd(f, d)
    b = f.exact_div(a0)
    c = d.exact_div(a0)
    e = c - b.diff()
    i = 1
    while b.degree > 0:
        a = gcd(b, e)
        if a.degree > 0:
            out.append((a, i))
        b = b.exact_div(a)
        c = e.exact_div(a)
        e = c - b.diff()
        i += 1
    return out


def squarefree_part(p: Polynomial) -> Polynomial:
    """Product of the distinct monic irreducible factors of ``p``."""
    if p.degree <= 0:
        return Polynomial.constant(p.domain.one, p.domain, p.var)
    return p.monic().exact_div(gcd(p, p.diff()))


def partial_fractions(num: Polynomial, parts: Sequence[tuple]):
    """Full partial-fraction expansion of ``num / prod(p**m for p, m in parts)``.

    ``parts`` must be pairwise coprime.  Returns ``(poly_part, terms)`` where
    ``terms[i]`` is the list ``[a_i1, ..., a_im]`` with ``deg a_ij < deg p_i``
    and the expansion reads ``poly_part + sum_ij a_ij / p_i**j``.
    """
    dom, var = num.domain, num.var
    one = Polynomial.constant(dom.one, dom, var)
    blocks = [p ** m for p, m in parts]
    den = one
    for b in blocks:
        den = den * b
    if not den:
        raise PreconditionViolated("zero factor in partial_fractions")
    poly_part, rem = num.divmod(den)
    pieces = coprime_split(rem, blocks)
    terms = []
    for (p, m), A in zip(parts, pieces):
        digits = []
        for _ in range(m):
            A, c = A.divmod(p)
            digits.append(c)
        # A = sum_j digits[j] p^j, so A / p^m = sum_j digits[j] / p^(m-j)
        terms.append(list(reversed(digits)))
    return poly_part, terms


def coprime_split(num: Polynomial, blocks: Sequence[Polynomial]):
    """Numerators ``A_k`` with ``num / prod(blocks) = sum_k A_k / blocks[k]``.

    Requires pairwise coprime blocks and ``deg num < deg prod(blocks)``; each
    ``A_k`` then satisfies ``deg A_k < deg blocks[k]``.
    """
    out = []
    rest = num
    for k, b in enumerate(blocks):
        if k == len(blocks) - 1:
            out.append(rest)
            break
        Q = Polynomial.constant(num.domain.one, num.domain, num.var)
        for other in blocks[k + 1:]:
            Q = Q * other
        if b.degree <= 0:
            out.append(Polynomial.zero(num.domain, num.var))
            rest = rest.scale(num.domain.one / b.lc) if b else rest
            continue
        try:
            u, v = solve_diophantine(b, Q, rest)
        except NoSolution as exc:
            raise PreconditionViolated("blocks are not pairwise coprime") from exc
        out.append(v)
        rest = u
    return out


def interpolate(points: Sequence, values: Sequence, domain, var="z") -> Polynomial:
    """Newton interpolation through ``(points[k], values[k])``."""
    n = len(points)
    coef = list(values)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / domain.convert(points[i] - points[i - j])
    result = Polynomial.zero(domain, var)
    for i in range(n - 1, -1, -1):
        lin = Polynomial((domain.convert(-points[i]), domain.one), domain, var)
        result = result * lin + coef[i]
    return result


def integer_roots(p: Polynomial) -> list:
    """Integer roots of a polynomial with rational coefficients."""
    import flint

    if not p:
        raise PreconditionViolated("integer roots of the zero polynomial")
    qp = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in p.coeffs])
    roots = []
    for fac, _ in qp.factor()[1]:
        if fac.degree() == 1:
            c1, c0 = fac[1], fac[0]
            r = -Fraction(int(c0.p), int(c0.q)) / Fraction(int(c1.p), int(c1.q))
            if r.denominator == 1:
                roots.append(int(r))
    return sorted(roots)


def factor_rational(p: Polynomial):
    """Irreducible factorization over QQ: ``(lc, [(monic factor, multiplicity)])``."""
    import flint

    if not p:
        raise PreconditionViolated("factorization of zero")
    qp = flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in p.coeffs])
    lc, facs = qp.factor()
    out = []
    for fac, m in facs:
        cs = [Fraction(int(c.p), int(c.q)) for c in fac.coeffs()]
        out.append((Polynomial(cs, QQ, p.var).monic(), int(m)))
    out.sort(key=lambda fm: (fm[0].degree, [str(c) for c in fm[0].coeffs]))
    return p.lc, out
