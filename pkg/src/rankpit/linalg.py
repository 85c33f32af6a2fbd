"""Exact linear algebra over a coefficient domain.

Streaming sparse rank for the measure matrices, dense reduced echelon form
for nullspaces and linear solves, and a vectorized numpy path for prime
fields small enough that products fit in int64.  Everything is exact;
nothing here ever touches floating point.
"""

from __future__ import annotations

import numpy as np

from .domains import PrimeField

# numpy int64 holds products of two residues only when p^2 < 2^63
_NUMPY_P_LIMIT = 1 << 31


def _use_numpy(domain) -> bool:
    return isinstance(domain, PrimeField) and domain.p < _NUMPY_P_LIMIT


def rank_stream(rows, domain) -> int:
    """Rank of a stream of sparse rows (dict col -> coeff), exact elimination.

    Keeps a basis of reduced rows keyed by their smallest column index, so
    memory is bounded by the rank, not by the number of rows.
    """
    basis: dict[int, dict] = {}
    rank = 0
    for raw in rows:
        v = {j: c for j, c in raw.items() if not domain.is_zero(c)}
        while v:
            pivot = min(v)
            b = basis.get(pivot)
            if b is None:
                inv = domain.inv(v[pivot])
                basis[pivot] = {j: domain.mul(c, inv) for j, c in v.items()}
                rank += 1
                break
            factor = v[pivot]
            for j, bj in b.items():
                s = domain.sub(v.get(j, domain.zero), domain.mul(factor, bj))
                if domain.is_zero(s):
                    v.pop(j, None)
                else:
                    v[j] = s
        # v exhausted without a new pivot: row was dependent
    return rank


def rref_dense(rows: list[list], domain) -> tuple[list[list], list[int]]:
    """Reduced row echelon form of a dense matrix; returns (rref, pivot_cols)."""
    a = [list(r) for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if not domain.is_zero(a[i][c]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = domain.inv(a[r][c])
        a[r] = [domain.mul(x, inv) for x in a[r]]
        for i in range(nrows):
            if i != r and not domain.is_zero(a[i][c]):
                f = a[i][c]
                a[i] = [domain.sub(x, domain.mul(f, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def _rref_modp(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.ascontiguousarray(a % p, dtype=np.int64)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        col_all = a[:, c].copy()
        col_all[r] = 0
        mask = col_all != 0
        if mask.any():
            a[mask] = (a[mask] - col_all[mask, None] * a[r][None, :]) % p
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def rank_dense(rows: list[list], domain) -> int:
    if not rows:
        return 0
    if _use_numpy(domain):
        arr = np.array([[int(x) for x in row] for row in rows], dtype=np.int64)
        _, pivots = _rref_modp(arr, domain.p)
        return len(pivots)
    _, pivots = rref_dense(rows, domain)
    return len(pivots)


def nullspace_modp(arr: np.ndarray, p: int) -> list[list[int]]:
    """Kernel basis of an int64 matrix mod p (reduced-echelon form basis)."""
    ncols = arr.shape[1]
    rref, pivots = _rref_modp(arr, p)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [0] * ncols
        v[free] = 1
        for row_idx, pc in enumerate(pivots):
            v[pc] = (-int(rref[row_idx, free])) % p
        basis.append(v)
    return basis


def nullspace_dense(rows: list[list], ncols: int, domain) -> list[list]:
    """Basis of {x : A x = 0} for A given by dense rows with ncols columns.

    One basis vector per free column, with a 1 in the free position: the
    standard reduced-echelon kernel basis, deterministic for fixed input.
    """
    if not rows:
        one, zero = domain.one, domain.zero
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    if _use_numpy(domain):
        arr = np.array([[int(x) for x in row] for row in rows], dtype=np.int64)
        return nullspace_modp(arr, domain.p)
    rref, pivots = rref_dense(rows, domain)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [domain.zero] * ncols
        v[free] = domain.one
        for row_idx, pc in enumerate(pivots):
            v[pc] = domain.neg(rref[row_idx][free])
        basis.append(v)
    return basis


def solve_dense(rows: list[list], rhs: list, domain) -> list | None:
    """One exact solution of A x = b (free variables set to 0), or None."""
    if not rows:
        return None
    ncols = len(rows[0])
    if _use_numpy(domain):
        p = domain.p
        arr = np.array(
            [[int(x) for x in row] + [int(b)] for row, b in zip(rows, rhs)],
            dtype=np.int64)
        rref, pivots = _rref_modp(arr, p)
        if pivots and pivots[-1] == ncols:
            return None
        x = [0] * ncols
        for row_idx, pc in enumerate(pivots):
            x[pc] = int(rref[row_idx, ncols])
        return x
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    rref, pivots = rref_dense(aug, domain)
    if pivots and pivots[-1] == ncols:
        return None
    x = [domain.zero] * ncols
    for row_idx, pc in enumerate(pivots):
        x[pc] = rref[row_idx][ncols]
    return x
