"""Reduce the worked gate modulo n and check it lands in U_5(Z/n)."""

from ramanujan5 import gates, modn, orders

bundle = orders.OrderBundle.build()
gate = gates.worked_gate(bundle)

for n in (3, 5, 13, 15):
    gamma = modn.hensel_gamma(n)
    triv = modn.build_Bn(n)
    H = triv.hermitian()
    C, lam = modn.build_Cn(H)
    Z = modn.reduce_gate(gate, triv, (C, lam))
    sizes = modn.group_sizes(n, p=11)
    print(f"n = {n:2d}: N(gamma) = a mod n: {modn.norm_congruence_holds(gamma, n)}, "
          f"C^+ H C = {lam} J: {C.dagger() * H * C == modn.ModNMatrix.antidiagonal(n) * lam}, "
          f"gate unitary: {modn.is_unitary(Z)}, |U_5| = {sizes['u5']}, vertices = {sizes['vertices']}")

try:
    modn.reduce_gate(gate, modn.CompositeTrivialization(bundle, 33), None)
except ValueError as exc:
    print("n = 33:", exc)
