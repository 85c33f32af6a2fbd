"""Measure dimension: worked examples, bounds, and quick property checks.

The full 1000-trial property suites live in test_acceptance; these are the
fast per-property smoke versions plus every pinned example value.
"""

import random
from itertools import combinations

import pytest

from rankpit.domains import PrimeField, Rationals
from rankpit.errors import HypothesisViolated, InvalidParams, MatrixTooLarge
from rankpit.measure import (MeasureSpec, circuit_measure_bound,
                             composition_upper_bound, psp_dimension)
from rankpit.poly import Polynomial, compose

Q = Rationals()
FP = PrimeField(1_000_003)


def xs(nvars, dom=Q):
    return [Polynomial.variable(dom, nvars, i) for i in range(nvars)]


def test_worked_example_dimension_five():
    v = xs(4)
    p = v[0] * v[1] + v[2] * v[3]
    spec = MeasureSpec.of([((0, 1),), ((2, 1),)], 1)
    rep = psp_dimension(p, spec)
    assert rep.dimension == 5


def test_zero_polynomial_dimension_zero():
    spec = MeasureSpec.of([((0, 1),)], 1)
    assert psp_dimension(Polynomial.zero(Q, 4), spec).dimension == 0


def test_single_derivative_no_shift():
    v = xs(2)
    spec = MeasureSpec.of([((0, 1),)], 0)
    assert psp_dimension(v[0] * v[1], spec).dimension == 1


def test_spec_requires_uniform_degree():
    with pytest.raises(InvalidParams):
        MeasureSpec.of([((0, 1),), ((0, 2),)], 1)


def test_matrix_cap():
    v = xs(10)
    p = v[0] * v[1]
    spec = MeasureSpec.multilinear(10, 2, 3)
    with pytest.raises(MatrixTooLarge):
        psp_dimension(p, spec, matrix_cap=100)


def test_composition_upper_bound_values():
    assert composition_upper_bound(8, 2, 1, 1, 1) == 672
    assert composition_upper_bound(8, 2, 0, 1, 1) == 8 * 1 * 8  # r=0: N*C(N,m)
    assert composition_upper_bound(8, 2, 1, 3, 1) > 0  # boundary m+rs = N/2
    with pytest.raises(HypothesisViolated):
        composition_upper_bound(8, 2, 1, 4, 1)


def test_circuit_measure_bound_values():
    assert circuit_measure_bound(1, 8, 1, 2, 1, 1, 1) == 896
    assert circuit_measure_bound(2, 8, 1, 2, 1, 1, 1) == 2 * 896  # linear in T
    assert circuit_measure_bound(1, 8, 0, 5, 0, 2, 1) == 8 * 28  # k=0, r=0


def test_subadditivity_quick():
    rng = random.Random(97)
    from test_poly import random_poly
    for _ in range(40):
        n = 6
        p = random_poly(rng, FP, n, 3)
        q = random_poly(rng, FP, n, 3)
        alpha, beta = rng.randrange(1, 5), rng.randrange(1, 5)
        spec = MeasureSpec.multilinear(n, 1, 1)
        lhs = psp_dimension(p.scale(alpha) + q.scale(beta), spec).dimension
        assert lhs <= psp_dimension(p, spec).dimension + psp_dimension(q, spec).dimension


def test_homogeneous_component_inequality_quick():
    rng = random.Random(101)
    from test_poly import random_poly
    for _ in range(30):
        n = 6
        p = random_poly(rng, FP, n, 3)
        spec = MeasureSpec.multilinear(n, 1, 1)
        full = psp_dimension(p, spec).dimension
        for i in range(p.degree() + 1):
            assert psp_dimension(p.homogeneous_component(i), spec).dimension <= full


def test_composition_bound_quick():
    rng = random.Random(103)
    from test_poly import random_poly
    for _ in range(20):
        n, t, r, m, s = 8, 2, 1, 1, 1
        inner = []
        while len(inner) < t:
            cand = random_poly(rng, FP, n, 2)
            if all(len(mono) <= s for mono in cand.terms):
                inner.append(cand)
        f = random_poly(rng, FP, t, 2)
        composed = compose(f, inner)
        spec = MeasureSpec.multilinear(n, r, m)
        val = psp_dimension(composed, spec).dimension
        assert val <= composition_upper_bound(n, t, r, m, s)


def test_monotone_in_derivative_set():
    rng = random.Random(107)
    from test_poly import random_poly
    n = 6
    for _ in range(20):
        p = random_poly(rng, FP, n, 3)
        small = [((0, 1),), ((1, 1),)]
        large = small + [((2, 1),), ((4, 1),)]
        v_small = psp_dimension(p, MeasureSpec.of(small, 1)).dimension
        v_large = psp_dimension(p, MeasureSpec.of(large, 1)).dimension
        assert v_small <= v_large


def test_permutation_invariance():
    rng = random.Random(109)
    from test_poly import random_poly
    n = 5
    for _ in range(15):
        p = random_poly(rng, Q, n, 3)
        perm = list(range(n))
        rng.shuffle(perm)
        p_perm = Polynomial(Q, n, {
            tuple(sorted((perm[v], e) for v, e in mono)): c
            for mono, c in p.terms.items()})
        gammas = [((0, 1), (1, 1))] if rng.random() < 0.5 else [((0, 2),)]
        gammas_perm = [tuple(sorted((perm[v], e) for v, e in g)) for g in gammas]
        m = rng.randrange(0, 3)
        a = psp_dimension(p, MeasureSpec.of(gammas, m)).dimension
        b = psp_dimension(p_perm, MeasureSpec.of(gammas_perm, m)).dimension
        assert a == b


def test_dimension_bounded_by_row_count():
    rng = random.Random(113)
    from test_poly import random_poly
    from math import comb
    for _ in range(15):
        n = 6
        p = random_poly(rng, Q, n, 3)
        spec = MeasureSpec.multilinear(n, 1, 2)
        rep = psp_dimension(p, spec)
        assert rep.dimension <= len(spec.monomials) * comb(n, 2)
        assert rep.dimension <= min(rep.rows, rep.cols) or rep.rows == 0


def test_exact_matches_modular_certificate():
    # same instance with and without the modular pre-pass
    rng = random.Random(127)
    from test_poly import random_poly
    for _ in range(15):
        p = random_poly(rng, Q, 6, 3)
        spec = MeasureSpec.multilinear(6, 1, 1)
        with_pass = psp_dimension(p, spec, modular_prepass=True)
        without = psp_dimension(p, spec, modular_prepass=False)
        assert with_pass.dimension == without.dimension
