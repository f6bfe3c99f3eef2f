"""Build the maximal order, compare B_max with the tabulated matrix, count short vectors.

    python demos/01_order_and_census.py           # census up to bound 15
    python demos/01_order_and_census.py --full    # bound 40 (a few minutes)
"""

import sys
import time

from ramanujan5 import exact, orders
from ramanujan5.algebra import AlgebraElem

t = time.time()
bundle = orders.OrderBundle.build()
print(f"Lambda_max built in {time.time() - t:.1f}s")
print("B_max generates the tabulated lattice:", orders.same_lattice(bundle.bmax, orders.reference_bmax()))

q = exact.GramForm(bundle.qmax)
print("Q_max integral / non-negative / positive definite:",
      q.is_integral(), q.is_nonnegative(), q.is_positive_definite())

one = bundle.vec_from_gamma(AlgebraElem.scalar(1))
print("Q_max(1) =", q(one), "(Trd(1) = 5, the minimum)")

bound = 40 if "--full" in sys.argv else 15
t = time.time()
canon = exact.count_short(bundle.qmax, bound)
print(f"vectors with Q_max <= {bound}: {canon} up to sign, {2 * canon} counting +-x "
      f"({time.time() - t:.1f}s)")
