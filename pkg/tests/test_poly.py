"""Polynomial substrate: operation examples and algebraic properties."""

import random
from fractions import Fraction

import pytest

from rankpit.domains import PrimeField, Rationals
from rankpit.errors import (ArityMismatch, DimensionMismatch, ExpansionTooLarge,
                            InexactDivision, ZeroPolynomial)
from rankpit.poly import (GRLEX, LEX, MonomialOrder, Polynomial, compose,
                          divide_exact, mono_mul)

Q = Rationals()
F11 = PrimeField(11)
FP = PrimeField(1_000_003)


def x(i, nvars=2, dom=Q):
    return Polynomial.variable(dom, nvars, i)


def const(c, nvars=2, dom=Q):
    return Polynomial.constant(dom, nvars, c)


def random_poly(rng, dom, nvars, max_deg, max_terms=6):
    terms = {}
    for _ in range(rng.randrange(max_terms + 1)):
        mono = {}
        for _ in range(rng.randrange(max_deg + 1)):
            v = rng.randrange(nvars)
            mono[v] = mono.get(v, 0) + 1
        c = rng.randrange(-4, 5)
        m = tuple(sorted(mono.items()))
        terms[m] = terms.get(m, 0) + c
    return Polynomial(dom, nvars, terms)


# ----------------------------------------------------------------------
# trailing monomial

def test_trailing_monomial_examples():
    p = x(0) * x(0) + x(0) * x(1)
    assert p.trailing_monomial(GRLEX) == ((0, 1), (1, 1))  # x1*x2 below x1^2
    assert (const(1) + x(0)).trailing_monomial() == ()
    p2 = x(0).pow(3) * x(1) + x(0) * x(1).pow(3) + x(1)
    assert p2.trailing_monomial() == ((1, 1),)


def test_trailing_monomial_zero_errors():
    with pytest.raises(ZeroPolynomial):
        Polynomial.zero(Q, 2).trailing_monomial()


def test_trailing_monomial_multiplicative():
    rng = random.Random(7)
    for order in (GRLEX, LEX):
        for _ in range(60):
            p = random_poly(rng, Q, 3, 3)
            q = random_poly(rng, Q, 3, 3)
            if p.is_zero() or q.is_zero():
                continue
            lhs = (p * q).trailing_monomial(order)
            rhs = mono_mul(p.trailing_monomial(order), q.trailing_monomial(order))
            assert lhs == rhs


def test_order_total_and_one_minimal():
    rng = random.Random(3)
    for order in (GRLEX, LEX):
        monos = set()
        for _ in range(40):
            p = random_poly(rng, Q, 3, 4)
            monos |= p.support_monomials()
        for m in monos:
            assert order.key(()) <= order.key(m)
            assert (order.key(m) < order.key(mono_mul(m, ((0, 1),))))


# ----------------------------------------------------------------------
# homogeneous components

def test_homogeneous_component_examples():
    p = const(1) + x(0) + x(0) * x(0)
    assert p.homogeneous_component(1) == x(0)
    cube = (x(0) + const(1)).pow(3)
    assert cube.homogeneous_component(2) == x(0) * x(0) * 3
    assert cube.homogeneous_component(9).is_zero()


def test_homogeneous_decomposition_identity():
    rng = random.Random(11)
    for _ in range(40):
        p = random_poly(rng, Q, 3, 4)
        total = Polynomial.zero(Q, 3)
        for comp in p.homogeneous_tuple():
            total = total + comp
        assert total == p
        assert len(p.homogeneous_tuple()) == p.degree() + 1


def test_homogeneous_of_product_convolves():
    rng = random.Random(13)
    for _ in range(40):
        p = random_poly(rng, Q, 3, 3)
        q = random_poly(rng, Q, 3, 3)
        prod = p * q
        for i in range(p.degree() + q.degree() + 1):
            acc = Polynomial.zero(Q, 3)
            for j in range(i + 1):
                acc = acc + p.homogeneous_component(j) * q.homogeneous_component(i - j)
            assert acc == prod.homogeneous_component(i)


def test_h_le_ge_split():
    rng = random.Random(17)
    for _ in range(20):
        p = random_poly(rng, Q, 3, 4)
        for i in range(6):
            assert p.homogeneous_le(i) + p.homogeneous_ge(i + 1) == p


# ----------------------------------------------------------------------
# translation

def test_translate_examples():
    p = x(0) * x(0)
    assert p.translate([1, 0]) == p + x(0) * 2 + const(1)
    q = x(0) * x(1)
    expected = Polynomial.from_text(Q, 2, "x1*x2 + 2*x1 + x2 + 2")
    assert q.translate([1, 2]) == expected
    assert q.translate([0, 0]) == q


def test_translate_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        x(0).translate([1])


def test_translate_roundtrip_and_degree():
    rng = random.Random(19)
    for dom in (Q, FP):
        for _ in range(30):
            p = random_poly(rng, dom, 3, 3)
            a = [dom.coerce(rng.randrange(-3, 7)) for _ in range(3)]
            back = [dom.neg(v) for v in a]
            assert p.translate(a).translate(back) == p
            assert p.translate(a).degree() == p.degree()


# ----------------------------------------------------------------------
# derivatives, projection, evaluation

def test_partial_derivative_examples():
    assert (x(0) * x(1)).partial_derivative(((0, 1),)) == x(1)
    assert x(0).pow(3).partial_derivative(((0, 2),)) == x(0) * 6
    assert x(0).partial_derivative(((0, 2),)).is_zero()


def test_multilinear_project():
    p = x(0).pow(2) * x(1) + x(0) * x(1)
    assert p.multilinear_project() == x(0) * x(1)
    ml = x(0) * x(1) + x(1) * 3
    assert ml.multilinear_project() == ml
    assert (x(0).pow(2) + x(1).pow(2)).multilinear_project().is_zero()


def test_multilinear_project_linear_idempotent():
    rng = random.Random(23)
    for _ in range(30):
        p = random_poly(rng, Q, 3, 3)
        q = random_poly(rng, Q, 3, 3)
        assert (p + q).multilinear_project() == \
            p.multilinear_project() + q.multilinear_project()
        assert p.multilinear_project().multilinear_project() == \
            p.multilinear_project()


def test_evaluate_examples():
    assert (x(0) + x(1)).evaluate([1, 2]) == 3
    p = x(0) * x(1) + const(5)
    assert p.evaluate([0, 0]) == 5
    pm = x(0, dom=F11) * x(1, dom=F11) - const(1, dom=F11)
    assert pm.evaluate([3, 4]) == 0


# ----------------------------------------------------------------------
# composition

def test_compose_examples():
    f = Polynomial.from_text(Q, 2, "z1^2 - 2*z2", var_prefix="z")
    assert compose(f, [x(0) + x(1), x(0) * x(1)]) == x(0).pow(2) + x(1).pow(2)
    proj = Polynomial.variable(Q, 2, 0)
    assert compose(proj, [x(0) * x(1), x(1)]) == x(0) * x(1)
    ann = Polynomial.from_text(Q, 2, "z2 - z1^2", var_prefix="z")
    assert compose(ann, [x(0), x(0).pow(2)]).is_zero()


def test_compose_arity_mismatch():
    f = Polynomial.from_text(Q, 2, "z1 + z2", var_prefix="z")
    with pytest.raises(ArityMismatch):
        compose(f, [x(0)])


def test_compose_term_cap():
    f = Polynomial.variable(Q, 1, 0)
    big = sum((x(i, nvars=8) for i in range(8)), Polynomial.zero(Q, 8)).pow(3)
    with pytest.raises(ExpansionTooLarge):
        compose(f.pow(4), [big], term_cap=10)


def test_compose_evaluate_homomorphism():
    rng = random.Random(29)
    for dom in (Q, FP):
        for _ in range(25):
            f = random_poly(rng, dom, 2, 2)
            qs = [random_poly(rng, dom, 3, 2) for _ in range(2)]
            pt = [dom.coerce(rng.randrange(9)) for _ in range(3)]
            lhs = compose(f, qs).evaluate(pt)
            rhs = f.evaluate([q.evaluate(pt) for q in qs])
            assert lhs == rhs


# ----------------------------------------------------------------------
# ring axioms, exactness

def test_ring_axioms_random():
    rng = random.Random(31)
    for dom in (Q, F11):
        for _ in range(40):
            p = random_poly(rng, dom, 3, 3)
            q = random_poly(rng, dom, 3, 3)
            r = random_poly(rng, dom, 3, 3)
            assert (p + q) * r == p * r + q * r
            assert p * q == q * p
            assert (p * q) * r == p * (q * r)
            assert p + (-p) == Polynomial.zero(dom, 3)


def test_exact_rational_arithmetic():
    third = const(Fraction(1, 3))
    assert (third * 3) == const(1)
    p = const(Fraction(1, 3)) + const(Fraction(1, 6))
    assert p == const(Fraction(1, 2))


# ----------------------------------------------------------------------
# text and JSON forms

def test_text_form_canonical():
    p = x(0).pow(2) - x(0) * x(1) * 2 + const(Fraction(3, 4))
    assert p.to_text() == "x1^2 - 2*x1*x2 + 3/4"
    assert Polynomial.zero(Q, 2).to_text() == "0"
    assert Polynomial.from_text(Q, 2, p.to_text()) == p


def test_text_descending_default_order():
    p = x(1) + x(0) + x(0) * x(1)
    assert p.to_text() == "x1*x2 + x1 + x2"


def test_json_terms_roundtrip():
    rng = random.Random(37)
    for dom in (Q, F11):
        for _ in range(25):
            p = random_poly(rng, dom, 4, 3)
            items = p.terms_to_json()
            assert Polynomial.terms_from_json(dom, 4, items) == p


def test_divide_exact():
    rng = random.Random(41)
    for _ in range(25):
        p = random_poly(rng, Q, 3, 2)
        q = random_poly(rng, Q, 3, 2)
        if q.is_zero():
            continue
        assert divide_exact(p * q, q) == p
    with pytest.raises(InexactDivision):
        divide_exact(x(0) + const(1), x(1))


def test_dilate_matches_component_scaling():
    rng = random.Random(43)
    for _ in range(20):
        p = random_poly(rng, Q, 3, 4)
        z = Fraction(rng.randrange(1, 5))
        dil = p.dilate(z)
        acc = Polynomial.zero(Q, 3)
        for i in range(p.degree() + 1):
            acc = acc + p.homogeneous_component(i).scale(z ** i)
        assert dil == acc


def test_from_text_rejects_garbage():
    import rankpit.errors as errors
    with pytest.raises(errors.InvalidParams):
        Polynomial.from_text(Q, 2, "x1 + * x2")
    with pytest.raises(errors.InvalidParams):
        Polynomial.from_text(Q, 2, "x9")  # out of range
    with pytest.raises(ValueError):
        Polynomial.from_text(Q, 2, "spam*x1")


def test_translate_matches_composition_oracle():
    # independent route: substitute x_j -> x_j + a_j via compose
    rng = random.Random(47)
    for dom in (Q, FP):
        for _ in range(20):
            p = random_poly(rng, dom, 3, 3)
            a = [dom.coerce(rng.randrange(-2, 5)) for _ in range(3)]
            subs = [Polynomial.variable(dom, 3, j) +
                    Polynomial.constant(dom, 3, a[j]) for j in range(3)]
            assert p.translate(a) == compose(p, subs)
