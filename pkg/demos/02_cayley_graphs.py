"""
Cayley graphs and their quotients
=================================
"""

from cayleyfactor import build_cayley, components_by_cosets, parse_group_spec
from cayleyfactor.cayley import quotient_graph
from cayleyfactor.groups import generated_subgroup

g = parse_group_spec("Z4*Z3")

# S = {(1,1), (0,1)}; both have inverses outside S, so the valence is 4
gamma = build_cayley(g, [4, 1])
print("connection set", gamma.connection_set, "valence", gamma.valence, "edges", len(gamma.edges))

# a generating set that misses part of the group splits into coset components
print("components of Z4*Z3 under {(2,0)}:", components_by_cosets(g, [6]))

# quotient by N = <(2,0)>: fibres have two edges each and nothing folds
fib = quotient_graph(gamma, generated_subgroup(g, [6]))
print("quotient order", fib.target.group.order, "folds", fib.folds, "covering", fib.covering)

# in Z4 the generator 1 squares into N = <2>, so its image is a fold
z4 = parse_group_spec("Z4")
fold = quotient_graph(build_cayley(z4, [1]), generated_subgroup(z4, [2]))
print("Z4/<2> folds:", fold.folds, "fibre over the single edge:", fold.fibers[(0, 1)])
