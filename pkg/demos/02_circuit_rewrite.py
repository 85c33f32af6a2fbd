"""Rewriting a circuit over the homogeneous components of its gate bases.

Each gate of a rank-bounded circuit can be re-expressed, after one shared
translation a, so that its inputs are the at most k(d+1) homogeneous
components of a transcendence basis of its original inputs: the dependent
inputs are recovered through their functional-dependence witnesses, and the
truncations become exact interpolated linear combinations inside the outer
expression DAG.  The expansion identity expand(C')(X) = expand(C)(X+a) is
checked on the nose.

Run:  python demos/02_circuit_rewrite.py
"""

from rankpit import (Circuit, DeclaredBounds, Gate, Polynomial, Rationals,
                     circuit_size, expand, rewrite_circuit)

Q = Rationals()
x1 = Polynomial.variable(Q, 2, 0)
x2 = Polynomial.variable(Q, 2, 1)

# gate 1: the dependent triple; gate 2: a dependent pair
g1 = Gate("product", [x1 + x2, x1 * x2, x1 * x1 + x2 * x2])
g2 = Gate("product", [x1, x1 * x1])
circuit = Circuit(Q, 2, DeclaredBounds(d=2, k=2, delta=5), [g1, g2])

print("original circuit: T =", circuit.top_fanin,
      "| size =", circuit_size(circuit))
print("expansion:", expand(circuit).to_text())

rewritten, a = rewrite_circuit(circuit, seed=7)
print("\nshared translation a =", tuple(str(v) for v in a))
for gi, gate in enumerate(rewritten.gates):
    bound = circuit.declared.k * (circuit.declared.d + 1)
    print(f"gate {gi + 1}: {len(gate.inner)} inner components"
          f" (bound k(d+1) = {bound})")
    for q in gate.inner:
        print("   ", q.to_text())

lhs = expand(rewritten)
rhs = expand(circuit).translate(a)
print("\nexpand(C')(X) == expand(C)(X + a):", lhs == rhs)
