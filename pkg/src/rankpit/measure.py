"""The projected-shifted-partial-derivatives dimension and its upper bounds.

For a derivative monomial set M of uniform degree r and a shift degree m, the
measure of P is the rank of the span of mult[(prod_{i in S} X_i) * dP/dgamma]
over gamma in M and |S| = m, where mult[] keeps only multilinear monomials.
The two closed-form bounds are the composition bound for functions of
low-support polynomials and the per-circuit bound derived from it; both are
exact big-integer formulas.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .domains import PrimeField, Rationals, is_prime
from .errors import HypothesisViolated, InvalidParams, MatrixTooLarge
from .linalg import rank_stream
from .poly import Mono, Polynomial, mono_degree, mono_is_multilinear

DEFAULT_MATRIX_CAP = 10**7


@dataclass(frozen=True)
class MeasureSpec:
    """Derivative set M (all of one degree r) and shift degree m."""

    monomials: tuple
    shift_degree: int
    degree: int

    @classmethod
    def of(cls, monomials, shift_degree: int) -> "MeasureSpec":
        monos = tuple(monomials)
        if shift_degree < 0:
            raise InvalidParams("shift degree must be >= 0")
        if not monos:
            raise InvalidParams("derivative set must be nonempty")
        degs = {mono_degree(m) for m in monos}
        if len(degs) != 1:
            raise InvalidParams(
                f"derivative monomials must share one degree, got degrees {sorted(degs)}")
        return cls(monomials=monos, shift_degree=shift_degree, degree=degs.pop())

    @classmethod
    def multilinear(cls, nvars: int, r: int, shift_degree: int) -> "MeasureSpec":
        """All multilinear derivative monomials of degree exactly r."""
        if r == 0:
            monos: list[Mono] = [()]
        else:
            monos = [tuple((v, 1) for v in subset)
                     for subset in combinations(range(nvars), r)]
        return cls.of(monos, shift_degree)


@dataclass(frozen=True)
class MeasureReport:
    dimension: int
    rows: int
    cols: int
    rank_method: str
    timing_ms: float | None = None
    shift_degree: int = 0
    derivative_degree: int = 0
    derivative_count: int = 0


def psp_dimension(p: Polynomial, spec: MeasureSpec, *,
                  matrix_cap: int = DEFAULT_MATRIX_CAP,
                  modular_prepass: bool = True,
                  record_timing: bool = False) -> MeasureReport:
    """Exact dimension of the projected shifted partial-derivative span.

    Rows are generated lazily, grouped by shift subset, and eliminated
    exactly over the polynomial's own domain.  Over the rationals a modular
    pre-pass (rank mod a random 62-bit prime, a sound lower bound) certifies
    full-rank matrices without exact elimination; otherwise the exact pass
    runs as well.
    """
    n = p.nvars
    m = spec.shift_degree
    cells = n * comb(n, m) * len(spec.monomials)
    if cells > matrix_cap:
        raise MatrixTooLarge(cells, matrix_cap)
    start = time.perf_counter() if record_timing else None
    dom = p.domain

    derivs = []
    for gamma in spec.monomials:
        dp = p.partial_derivative(gamma)
        ml = [(_mask(mono), coeff) for mono, coeff in dp.terms.items()
              if mono_is_multilinear(mono)]
        if ml:
            derivs.append(ml)

    counter = {"rows": 0, "cols": set()}

    def rows(transform=None):
        for ml in derivs:
            for subset in combinations(range(n), m):
                smask = 0
                for v in subset:
                    smask |= 1 << v
                row = {}
                for mask, coeff in ml:
                    if mask & smask:
                        continue
                    row[mask | smask] = transform(coeff) if transform else coeff
                if row:
                    counter["rows"] += 1
                    counter["cols"].update(row)
                    yield row

    rank_method = "exact-elimination"
    if isinstance(dom, Rationals) and modular_prepass:
        prime, to_modp = _modular_map(p)
        modp = PrimeField(prime)
        mod_rank = rank_stream(rows(transform=to_modp), modp)
        nrows, ncols = counter["rows"], len(counter["cols"])
        if mod_rank == min(nrows, ncols):
            dimension = mod_rank
            rank_method = "modular-full-rank-certificate"
        else:
            counter["rows"], counter["cols"] = 0, set()
            dimension = rank_stream(rows(), dom)
            nrows, ncols = counter["rows"], len(counter["cols"])
    else:
        dimension = rank_stream(rows(), dom)
        nrows, ncols = counter["rows"], len(counter["cols"])

    elapsed = (time.perf_counter() - start) * 1000 if record_timing else None
    return MeasureReport(dimension=dimension, rows=nrows, cols=ncols,
                         rank_method=rank_method, timing_ms=elapsed,
                         shift_degree=m, derivative_degree=spec.degree,
                         derivative_count=len(spec.monomials))


def _mask(mono: Mono) -> int:
    out = 0
    for v, _ in mono:
        out |= 1 << v
    return out


def _modular_map(p: Polynomial):
    """A 62-bit prime avoiding every denominator in p, plus the reduction map."""
    rng = random.Random(0xC0FFEE ^ p.num_terms())
    dens = {c.denominator for c in p.terms.values()}
    while True:
        cand = rng.getrandbits(62) | (1 << 61) | 1
        if is_prime(cand) and all(d % cand for d in dens):
            break

    def to_modp(frac: Fraction) -> int:
        return frac.numerator * pow(frac.denominator, -1, cand) % cand

    return cand, to_modp


def composition_upper_bound(n: int, t: int, r: int, m: int, s: int) -> int:
    """N * C(t+r, r) * C(N, m+rs): a ceiling on the measure of any F(Q_1..Q_t)
    whose inner polynomials have monomial support at most s, valid whenever
    m + r*s <= N/2."""
    _check_bound_args(n, t, r, m, s)
    return n * comb(t + r, r) * comb(n, m + r * s)


def circuit_measure_bound(t_fanin: int, n: int, k: int, deg: int, r: int,
                          m: int, s: int) -> int:
    """T * N * C(k(deg+1)+r, r) * C(N, m+rs): the per-circuit measure ceiling
    for top fan-in T and per-gate rank at most k, same hypothesis."""
    _check_bound_args(n, t_fanin, r, m, s)
    if k < 0 or deg < 0:
        raise InvalidParams("k and degree must be >= 0")
    return t_fanin * n * comb(k * (deg + 1) + r, r) * comb(n, m + r * s)


def _check_bound_args(n, t, r, m, s):
    if min(n, t) < 1 or min(r, m, s) < 0:
        raise InvalidParams("bound inputs out of range")
    if 2 * (m + r * s) > n:
        raise HypothesisViolated(
            f"m + r*s = {m + r * s} exceeds N/2 = {Fraction(n, 2)}")
