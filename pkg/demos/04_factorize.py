"""
Factorizing a Cayley graph
==========================

The constructive pipeline and the certificate it leaves behind.
"""

import numpy as np

from cayleyfactor import build_cayley, factorize, parse_group_spec, replay_certificate, verify_factorization
from cayleyfactor.groups import random_generating_set

g = parse_group_spec("D4*Z3")
gens = random_generating_set(g, np.random.default_rng(1))
gamma = build_cayley(g, gens)
out = factorize(g, gens)

print("generators", gens, "valence", gamma.valence)
print("classes", len(out.factorization), "verified", verify_factorization(gamma, out.factorization).ok)


# the certificate is a tree of stages, one per step of the induction
def show(stage, depth=0):
    extra = stage.data.get("completion", "")
    print("  " * depth + f"{stage.branch} on {stage.vertex_count} vertices {extra}")
    for child in stage.children:
        show(child, depth + 1)


show(out.certificate)
print("replay:", replay_certificate(out.certificate).ok)
