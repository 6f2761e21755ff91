"""
Lifting through a quotient
==========================

A single even-order generator is handled in a quotient of shape Z2 x H,
whose factorization is then pulled back.
"""

from cayleyfactor import build_cayley, parse_group_spec, verify_factorization
from cayleyfactor.cayley import quotient_graph
from cayleyfactor.factorizer import lemma1_factorize, lift_from_quotient
from cayleyfactor.groups import generated_subgroup

g = parse_group_spec("Z8*Z3")
gens = [1 * 3 + 1, 0 * 3 + 1]  # (1,1), (0,1)
gamma = build_cayley(g, gens)

# a = (1,1) has 2-part a1 = (1,0); N = <a1^2> = <(2,0)>
n = generated_subgroup(g, [2 * 3])
fib = quotient_graph(gamma, n)
print("quotient order", fib.target.group.order, "covering", fib.covering, "folds", fib.folds)

down = lemma1_factorize(fib.target.group, fib.target.generators)
print("quotient classes", len(down.factorization), "via", down.certificate.data["completion"])

up = lift_from_quotient(fib, down.factorization)
print("lifted classes", len(up), "verified", verify_factorization(gamma, up).ok)
