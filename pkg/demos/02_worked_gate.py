"""The p = 11 example: from a short gamma to a solution of iota(x) x = 11.

The chain goes through; the last step, membership in Lambda_max, does not,
because the order as built is not iota-stable at 11.
"""

from ramanujan5 import gates, orders
from ramanujan5.algebra import charpoly, iota, verify_norm_equation

bundle = orders.OrderBundle.build()
vec = gates.WORKED_X_VEC
g = bundle.gamma_from_vec(vec)
print("Q_max(x) =", orders.qmax_eval(bundle.qmax, vec))
print("charpoly(gamma) =", [int(c.r) for c in charpoly(g)])

cand = gates.worked_candidate()
x = cand.x_from_gamma(g)
print("candidate field", cand.source_id, "valid:", gates.validate_candidate(cand) is None)
print("iota(x) x = 11:", verify_norm_equation(x, 11))
print("x in Lambda_max:", orders.lambda_max_contains(bundle, x))

basis = [type(g).from_vector(c) for c in bundle.lattice().columns()]
bad = sum(1 for b in basis if not orders.lambda_max_contains(bundle, iota(b)))
print(f"basis elements whose iota leaves Lambda_max: {bad} of {len(basis)}")

s = gates.worked_gate(bundle).element()
print("scaled gate is unitary in D:", iota(s) * s == type(s).scalar(1))
