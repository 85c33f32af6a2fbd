"""The projected-shifted-partials measure and the toy-scale separation.

Computes the exact measure of a design polynomial at tiny parameters and
compares it with the closed-form ceiling for rank-bounded circuits: the
toy-scale version of the lower-bound argument (hard polynomial measure vs
per-gate ceiling), with no asymptotic claim attached.

Run:  python demos/03_measure_and_bounds.py
"""

from rankpit import (MeasureSpec, NWParams, Polynomial, Rationals,
                     circuit_measure_bound, composition_upper_bound,
                     nw_polynomial, psp_dimension)

Q = Rationals()

# the worked example: P = x1 x2 + x3 x4, derivatives {x1, x3}, one shift
v = [Polynomial.variable(Q, 4, i) for i in range(4)]
p = v[0] * v[1] + v[2] * v[3]
spec = MeasureSpec.of([((0, 1),), ((2, 1),)], 1)
rep = psp_dimension(p, spec)
print("P =", p.to_text())
print("dimension of the projected shifted partials span:", rep.dimension)
print("matrix:", rep.rows, "x", rep.cols, "| method:", rep.rank_method)

# a design polynomial at desk scale
params = NWParams(n=2, q=3, e=1)
hard = nw_polynomial(params)
print("\ndesign polynomial (n=2, q=3, e=1):", hard.to_text())

for r, m in [(0, 1), (1, 1), (1, 2), (2, 1)]:
    spec = MeasureSpec.multilinear(hard.nvars, r, m)
    rep = psp_dimension(hard, spec)
    bound = circuit_measure_bound(1, hard.nvars, 1, params.n, r, m, 1)
    print(f"  r={r} m={m}: measure {rep.dimension:4d}   "
          f"one-gate ceiling {bound:6d}   ratio {rep.dimension / bound:.4f}")

print("\ncomposition ceiling example: N=8, t=2, r=1, m=1, s=1 ->",
      composition_upper_bound(8, 2, 1, 1, 1))
