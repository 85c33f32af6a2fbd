"""Exact sparse multivariate polynomial arithmetic.

A monomial is a sorted tuple of (variable, exponent) pairs with strictly
positive exponents; the empty tuple is 1.  A polynomial maps monomials to
nonzero coefficients in an explicit domain (rationals or a prime field), so
every operation here is exact: no floating point anywhere.

Variables are 0-based internally; the text and JSON forms use the 1-based
names x1, x2, ... with X_1 highest in the ordering precedence.
"""

from __future__ import annotations

import math
from itertools import product as _cartesian

from .domains import PrimeField, Rationals
from .errors import (ArityMismatch, DimensionMismatch, DomainMismatch,
                     ExpansionTooLarge, InexactDivision, InvalidParams,
                     ZeroPolynomial)

# Monomial: ((var, exp), ...) sorted by var, all exps > 0.  () is 1.
Mono = tuple

DEFAULT_TERM_CAP = 10**7


def mono_from_dict(d: dict) -> Mono:
    return tuple(sorted((v, e) for v, e in d.items() if e))


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(a: Mono) -> int:
    return sum(e for _, e in a)


def mono_support(a: Mono) -> tuple:
    return tuple(v for v, _ in a)


def mono_is_multilinear(a: Mono) -> bool:
    return all(e <= 1 for _, e in a)


def mono_pow(a: Mono, k: int) -> Mono:
    return tuple((v, e * k) for v, e in a) if k else ()


class MonomialOrder:
    """A total multiplicative monomial order with 1 minimal.

    kind "graded-lex" compares total degree first, then lex; "lex" is pure
    lexicographic.  Precedence is fixed as X_1 > X_2 > ...
    """

    def __init__(self, kind: str = "graded-lex"):
        if kind not in ("graded-lex", "lex"):
            raise InvalidParams(f"unknown monomial order {kind!r}")
        self.kind = kind

    def key(self, m: Mono):
        # Encoding (-var, exp) per pair makes tuple comparison agree with
        # lex order under the X_1 > X_2 > ... precedence.
        lex = tuple((-v, e) for v, e in m)
        if self.kind == "lex":
            return lex
        return (mono_degree(m), lex)

    def max(self, monos):
        return max(monos, key=self.key)

    def min(self, monos):
        return min(monos, key=self.key)

    def __repr__(self):
        return f"MonomialOrder({self.kind!r})"


GRLEX = MonomialOrder("graded-lex")
LEX = MonomialOrder("lex")


class Polynomial:
    """Immutable sparse polynomial over an explicit coefficient domain."""

    __slots__ = ("domain", "nvars", "terms")

    def __init__(self, domain, nvars: int, terms: dict, *, _normalized: bool = False):
        self.domain = domain
        self.nvars = nvars
        if _normalized:
            self.terms = terms
        else:
            clean = {}
            for mono, c in terms.items():
                c = domain.coerce(c)
                if domain.is_zero(c):
                    continue
                if any(e <= 0 for _, e in mono) or any(
                        not (0 <= v < nvars) for v, _ in mono):
                    raise InvalidParams(f"bad monomial {mono} for nvars={nvars}")
                clean[mono] = c
            self.terms = clean

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def zero(cls, domain, nvars: int) -> "Polynomial":
        return cls(domain, nvars, {}, _normalized=True)

    @classmethod
    def constant(cls, domain, nvars: int, c) -> "Polynomial":
        c = domain.coerce(c)
        if domain.is_zero(c):
            return cls.zero(domain, nvars)
        return cls(domain, nvars, {(): c}, _normalized=True)

    @classmethod
    def variable(cls, domain, nvars: int, v: int) -> "Polynomial":
        if not 0 <= v < nvars:
            raise InvalidParams(f"variable {v} out of range for nvars={nvars}")
        return cls(domain, nvars, {((v, 1),): domain.one}, _normalized=True)

    # ------------------------------------------------------------------
    # basic structure

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial."""
        return max((mono_degree(m) for m in self.terms), default=0)

    def support_monomials(self) -> set:
        return set(self.terms)

    def num_terms(self) -> int:
        return len(self.terms)

    def coefficient(self, mono: Mono):
        return self.terms.get(mono, self.domain.zero)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.domain == other.domain
                and self.nvars == other.nvars and self.terms == other.terms)

    def __hash__(self):
        return hash((self.domain, self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self.to_text()} over {self.domain}, nvars={self.nvars})"

    def _check_compat(self, other: "Polynomial"):
        if self.domain != other.domain:
            raise DomainMismatch(f"{self.domain} vs {other.domain}")
        if self.nvars != other.nvars:
            raise DimensionMismatch(f"nvars {self.nvars} vs {other.nvars}")

    # ------------------------------------------------------------------
    # ring arithmetic

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_compat(other)
        dom = self.domain
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = dom.add(out.get(m, dom.zero), c)
            if dom.is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
        return Polynomial(dom, self.nvars, out, _normalized=True)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check_compat(other)
        dom = self.domain
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = dom.sub(out.get(m, dom.zero), c)
            if dom.is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
        return Polynomial(dom, self.nvars, out, _normalized=True)

    def __neg__(self) -> "Polynomial":
        dom = self.domain
        return Polynomial(dom, self.nvars,
                          {m: dom.neg(c) for m, c in self.terms.items()},
                          _normalized=True)

    def scale(self, c) -> "Polynomial":
        dom = self.domain
        c = dom.coerce(c)
        if dom.is_zero(c):
            return Polynomial.zero(dom, self.nvars)
        return Polynomial(dom, self.nvars,
                          {m: dom.mul(co, c) for m, co in self.terms.items()},
                          _normalized=True)

    def mul(self, other: "Polynomial", term_cap: int | None = None,
            degree_cap: int | None = None) -> "Polynomial":
        """Product, optionally truncated to total degree <= degree_cap.

        Raises ExpansionTooLarge if the result would exceed term_cap terms.
        """
        self._check_compat(other)
        dom = self.domain
        out: dict = {}
        for ma, ca in self.terms.items():
            da = mono_degree(ma)
            for mb, cb in other.terms.items():
                if degree_cap is not None and da + mono_degree(mb) > degree_cap:
                    continue
                m = mono_mul(ma, mb)
                s = dom.add(out.get(m, dom.zero), dom.mul(ca, cb))
                if dom.is_zero(s):
                    out.pop(m, None)
                else:
                    out[m] = s
            if term_cap is not None and len(out) > term_cap:
                raise ExpansionTooLarge(len(out), term_cap)
        return Polynomial(dom, self.nvars, out, _normalized=True)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def pow(self, k: int, term_cap: int | None = None,
            degree_cap: int | None = None) -> "Polynomial":
        if k < 0:
            raise InvalidParams("negative power")
        result = Polynomial.constant(self.domain, self.nvars, self.domain.one)
        for _ in range(k):
            result = result.mul(self, term_cap=term_cap, degree_cap=degree_cap)
        return result

    def __pow__(self, k: int) -> "Polynomial":
        return self.pow(k)

    # ------------------------------------------------------------------
    # the operations the rest of the package is built on

    def trailing_monomial(self, order: MonomialOrder = GRLEX) -> Mono:
        """The order-minimal monomial of the support; error on zero."""
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no trailing monomial")
        return order.min(self.terms)

    def leading_monomial(self, order: MonomialOrder = GRLEX) -> Mono:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading monomial")
        return order.max(self.terms)

    def homogeneous_component(self, i: int) -> "Polynomial":
        """The degree-i part; zero when i is out of range."""
        return Polynomial(self.domain, self.nvars,
                          {m: c for m, c in self.terms.items() if mono_degree(m) == i},
                          _normalized=True)

    def homogeneous_le(self, i: int) -> "Polynomial":
        return Polynomial(self.domain, self.nvars,
                          {m: c for m, c in self.terms.items() if mono_degree(m) <= i},
                          _normalized=True)

    def homogeneous_ge(self, i: int) -> "Polynomial":
        return Polynomial(self.domain, self.nvars,
                          {m: c for m, c in self.terms.items() if mono_degree(m) >= i},
                          _normalized=True)

    def homogeneous_tuple(self) -> tuple:
        """All components ordered degree-descending: (h^d, ..., h^0)."""
        d = self.degree()
        return tuple(self.homogeneous_component(i) for i in range(d, -1, -1))

    def translate(self, point) -> "Polynomial":
        """P(X + a), computed exactly one variable at a time."""
        if len(point) != self.nvars:
            raise DimensionMismatch(f"point has {len(point)} coords, nvars={self.nvars}")
        dom = self.domain
        result = self
        for j, aj in enumerate(point):
            aj = dom.coerce(aj)
            if dom.is_zero(aj):
                continue
            out: dict = {}
            for mono, c in result.terms.items():
                md = dict(mono)
                e = md.pop(j, 0)
                if e == 0:
                    s = dom.add(out.get(mono, dom.zero), c)
                    if dom.is_zero(s):
                        out.pop(mono, None)
                    else:
                        out[mono] = s
                    continue
                rest = tuple(sorted(md.items()))
                # (X_j + a_j)^e expanded binomially, exact in the domain
                apow = dom.one
                for i in range(e, -1, -1):
                    coeff = dom.mul(c, dom.mul(dom.coerce(math.comb(e, i)), apow))
                    m = mono_mul(rest, ((j, i),) if i else ())
                    s = dom.add(out.get(m, dom.zero), coeff)
                    if dom.is_zero(s):
                        out.pop(m, None)
                    else:
                        out[m] = s
                    apow = dom.mul(apow, aj)
            result = Polynomial(dom, self.nvars, out, _normalized=True)
        return result

    def dilate(self, z) -> "Polynomial":
        """P(z*X): each degree-j term picks up a factor z^j."""
        dom = self.domain
        z = dom.coerce(z)
        out: dict = {}
        for m, c in self.terms.items():
            d = mono_degree(m)
            zc = dom.one
            for _ in range(d):
                zc = dom.mul(zc, z)
            c2 = dom.mul(c, zc)
            if not dom.is_zero(c2):
                out[m] = c2
        return Polynomial(dom, self.nvars, out, _normalized=True)

    def partial_derivative(self, gamma: Mono) -> "Polynomial":
        """Iterated formal derivative with respect to the monomial gamma."""
        dom = self.domain
        out: dict = {}
        for mono, c in self.terms.items():
            md = dict(mono)
            coeff = c
            dead = False
            for v, g in gamma:
                e = md.get(v, 0)
                if e < g:
                    dead = True
                    break
                for i in range(g):
                    coeff = dom.mul(coeff, dom.coerce(e - i))
                if e == g:
                    del md[v]
                else:
                    md[v] = e - g
            if dead or dom.is_zero(coeff):
                continue
            m = tuple(sorted(md.items()))
            s = dom.add(out.get(m, dom.zero), coeff)
            if dom.is_zero(s):
                out.pop(m, None)
            else:
                out[m] = s
        return Polynomial(dom, self.nvars, out, _normalized=True)

    def multilinear_project(self) -> "Polynomial":
        """Keep exactly the terms whose exponents are all <= 1."""
        return Polynomial(self.domain, self.nvars,
                          {m: c for m, c in self.terms.items()
                           if mono_is_multilinear(m)},
                          _normalized=True)

    def evaluate(self, point):
        """Exact evaluation at a point of the domain."""
        if len(point) != self.nvars:
            raise DimensionMismatch(f"point has {len(point)} coords, nvars={self.nvars}")
        dom = self.domain
        pt = [dom.coerce(x) for x in point]
        total = dom.zero
        for mono, c in self.terms.items():
            term = c
            for v, e in mono:
                x = pt[v]
                for _ in range(e):
                    term = dom.mul(term, x)
                if dom.is_zero(term):
                    break
            total = dom.add(total, term)
        return total

    def set_vars_zero(self, dead) -> "Polynomial":
        """Substitute 0 for every variable in `dead`."""
        dead = set(dead)
        return Polynomial(self.domain, self.nvars,
                          {m: c for m, c in self.terms.items()
                           if not (set(mono_support(m)) & dead)},
                          _normalized=True)

    # ------------------------------------------------------------------
    # text and JSON forms

    def to_text(self, var_prefix: str = "x") -> str:
        """Canonical text: terms descending under graded-lex, exact coefficients."""
        if not self.terms:
            return "0"
        dom = self.domain
        monos = sorted(self.terms, key=GRLEX.key, reverse=True)
        pieces: list[str] = []
        for idx, m in enumerate(monos):
            c = self.terms[m]
            c_str = dom.format(c)
            negative = c_str.startswith("-")
            if negative:
                c_str = c_str[1:]
            body = _term_text(c_str, m, var_prefix)
            if idx == 0:
                pieces.append(("-" if negative else "") + body)
            else:
                pieces.append((" - " if negative else " + ") + body)
        return "".join(pieces)

    @classmethod
    def from_text(cls, domain, nvars: int, text: str,
                  var_prefix: str = "x") -> "Polynomial":
        """Parse the canonical text form (tolerant about whitespace)."""
        text = text.strip()
        if text in ("0", ""):
            return cls.zero(domain, nvars)
        norm = text.replace(" - ", " + -").replace(" + ", "\x00")
        out = cls.zero(domain, nvars)
        for raw in norm.split("\x00"):
            raw = raw.strip()
            negate = raw.startswith("-")
            if negate:
                raw = raw[1:].strip()
            coeff = domain.one
            mono: dict = {}
            for factor in raw.split("*"):
                factor = factor.strip()
                if not factor:
                    raise InvalidParams(f"empty factor in term {raw!r}")
                if factor.startswith(var_prefix) and factor[len(var_prefix):][:1].isdigit():
                    body = factor[len(var_prefix):]
                    if "^" in body:
                        v_str, e_str = body.split("^", 1)
                        v, e = int(v_str) - 1, int(e_str)
                    else:
                        v, e = int(body) - 1, 1
                    if not (0 <= v < nvars) or e <= 0:
                        raise InvalidParams(f"bad variable factor {factor!r}")
                    mono[v] = mono.get(v, 0) + e
                else:
                    coeff = domain.mul(coeff, domain.parse(factor))
            if negate:
                coeff = domain.neg(coeff)
            term = cls(domain, nvars, {mono_from_dict(mono): coeff})
            out = out + term
        return out

    def terms_to_json(self) -> list:
        """Term list with exact string coefficients and 1-based variables."""
        dom = self.domain
        monos = sorted(self.terms, key=GRLEX.key, reverse=True)
        return [{"coeff": dom.format(self.terms[m]),
                 "mono": {str(v + 1): e for v, e in m}} for m in monos]

    @classmethod
    def terms_from_json(cls, domain, nvars: int, items) -> "Polynomial":
        terms: dict = {}
        for item in items:
            c = domain.parse(item["coeff"])
            mono_d = {}
            for v_str, e in item.get("mono", {}).items():
                v = int(v_str) - 1
                if not (0 <= v < nvars) or not isinstance(e, int) or e <= 0:
                    raise InvalidParams(f"bad monomial entry {v_str}:{e}")
                mono_d[v] = e
            m = mono_from_dict(mono_d)
            prev = terms.get(m, domain.zero)
            terms[m] = domain.add(prev, c)
        return cls(domain, nvars, terms)


def _term_text(c_str: str, m: Mono, var_prefix: str) -> str:
    mono_str = "*".join(
        f"{var_prefix}{v + 1}^{e}" if e > 1 else f"{var_prefix}{v + 1}" for v, e in m)
    if not mono_str:
        return c_str
    if c_str == "1":
        return mono_str
    return f"{c_str}*{mono_str}"


def compose(outer: Polynomial, inners: list, term_cap: int | None = DEFAULT_TERM_CAP,
            degree_cap: int | None = None) -> Polynomial:
    """Exact substitution of `inners` into `outer`, fully expanded.

    outer lives in t variables; inners are t polynomials over one shared
    domain.  Raises ArityMismatch / DomainMismatch / ExpansionTooLarge.
    """
    if outer.nvars != len(inners):
        raise ArityMismatch(f"outer has {outer.nvars} variables, got {len(inners)} inners")
    if not inners:
        # 0-variate outer is a constant; the caller supplies the target space
        raise ArityMismatch("compose needs at least one inner polynomial")
    dom = inners[0].domain
    nvars = inners[0].nvars
    for q in inners:
        if q.domain != dom:
            raise DomainMismatch("inner polynomials on different domains")
        if q.nvars != nvars:
            raise DimensionMismatch("inner polynomials on different variable counts")
    if outer.domain != dom:
        raise DomainMismatch("outer and inner polynomials on different domains")

    powers: list[dict[int, Polynomial]] = [dict() for _ in inners]

    def power(j: int, e: int) -> Polynomial:
        memo = powers[j]
        if e not in memo:
            if e == 0:
                memo[e] = Polynomial.constant(dom, nvars, dom.one)
            else:
                memo[e] = power(j, e - 1).mul(inners[j], term_cap=term_cap,
                                              degree_cap=degree_cap)
        return memo[e]

    total = Polynomial.zero(dom, nvars)
    for mono, c in outer.terms.items():
        piece = Polynomial.constant(dom, nvars, c)
        for v, e in mono:
            piece = piece.mul(power(v, e), term_cap=term_cap, degree_cap=degree_cap)
        total = total + piece
        if term_cap is not None and total.num_terms() > term_cap:
            raise ExpansionTooLarge(total.num_terms(), term_cap)
    return total


def divide_exact(p: Polynomial, d: Polynomial, order: MonomialOrder = GRLEX) -> Polynomial:
    """Quotient p / d when the division is exact; InexactDivision otherwise."""
    p._check_compat(d)
    if d.is_zero():
        raise InexactDivision("division by the zero polynomial")
    dom = p.domain
    lead_d = d.leading_monomial(order)
    cd = d.terms[lead_d]
    cd_inv = dom.inv(cd)
    lead_d_dict = dict(lead_d)
    quotient = Polynomial.zero(dom, p.nvars)
    rem = p
    while not rem.is_zero():
        lead_r = rem.leading_monomial(order)
        md = dict(lead_r)
        for v, e in lead_d_dict.items():
            if md.get(v, 0) < e:
                raise InexactDivision(f"{lead_d} does not divide {lead_r}")
            if md[v] == e:
                del md[v]
            else:
                md[v] -= e
        q_mono = tuple(sorted(md.items()))
        q_coeff = dom.mul(rem.terms[lead_r], cd_inv)
        q_term = Polynomial(dom, p.nvars, {q_mono: q_coeff}, _normalized=True)
        quotient = quotient + q_term
        rem = rem - q_term.mul(d)
    return quotient
