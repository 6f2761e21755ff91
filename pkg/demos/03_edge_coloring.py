"""
Edge colouring
==============

Misra-Gries gives at most max degree + 1 colours. The exact solver decides
whether a regular graph splits into perfect matchings.
"""

import itertools

import numpy as np

from cayleyfactor import SimpleGraph, exact_one_factorize, verify_coloring, vizing_color

rng = np.random.default_rng(7)
n = 20
pairs = [p for p in itertools.combinations(range(n), 2) if rng.random() < 0.3]
g = SimpleGraph(n, pairs)
c = vizing_color(g)
print(f"{len(g.edges)} edges, max degree {g.max_degree}, colours used {len(set(c.color_of.values()))}")
print("proper:", verify_coloring(g, c).ok)

# the Petersen graph is cubic but has no 1-factorization
outer = [(i, (i + 1) % 5) for i in range(5)]
inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
spokes = [(i, i + 5) for i in range(5)]
print("Petersen factorization:", exact_one_factorize(SimpleGraph(10, outer + inner + spokes)))

# K6 does have one
k6 = SimpleGraph(6, list(itertools.combinations(range(6), 2)))
for cls in exact_one_factorize(k6).classes:
    print(" ", cls)
