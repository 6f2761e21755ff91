"""
Groups as multiplication tables
===============================

Every group is a numpy table with the identity at index 0.
"""

import numpy as np

from cayleyfactor import catalog_group, direct_product, generated_subgroup
from cayleyfactor.groups import split_even_odd_parts, sylow_q2_decompose

# Q8 comes from two permutations of 8 points; elements are numbered in
# discovery order
q8 = catalog_group("Q8")
print(q8, "element orders:", q8.orders)

# products use a row-major encoding: (i, j) -> i * |Z3| + j
g = direct_product(q8, catalog_group("Z3"))
print(g.order, "elements, table shape", g.mul.shape)

# the Sylow splitting that every in-scope group must have
q, h = sylow_q2_decompose(g)
print("2-part order", q.order, "odd part order", h.order)

# an element of order 12 splits into a 2-part and an odd part that commute
a = int(np.argmax(g.orders))
a1, a2 = split_even_odd_parts(g, a)
print(f"a={a} (order {g.orders[a]}) = {a1} (order {g.orders[a1]}) * {a2} (order {g.orders[a2]})")

# Q8 is not cyclic, so no single element generates the 2-part; a generating
# set of Q8*Z3 therefore always holds at least two even-order elements
print("|<a1>| =", generated_subgroup(g, [a1]).order, "while |Q| =", q.order)
