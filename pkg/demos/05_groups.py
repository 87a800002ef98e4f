"""Entropy vectors from Abelian groups.

A group G with subgroups H_1..H_n gives the diagram of coset spaces G/H_I;
its entropy vector is log |G|/|H_I|.  On three variables every extremal ray of
the Shannon cone arises this way.
"""
from entrocone.geometry.cones import extremal_rays, smc
from entrocone.groups import (elementary, exact_entropy_vector, find_group_realization,
                              minimal_group_diagram, realize, span)
from entrocone.diagrams import entropy_vector, is_homogeneous
from entrocone.indexing import lambda_n

g = elementary(3, 3)
h = [span(g, [(1, 0, 0), (0, 1, 0)]), span(g, [(0, 1, 0), (0, 0, 1)]),
     span(g, [(0, 0, 1), (1, 0, 0)]), span(g, [(1, 1, 0), (0, 1, 1)])]
gd = minimal_group_diagram(g, h)
print("exact vector in base 3:", exact_entropy_vector(gd, 3))
d = realize(gd)
print("realized on", len(d.initial_space), "atoms; homogeneous:", is_homogeneous(d))
print("entropy vector of the realization (base 3):", entropy_vector(d, 3))

print("\nShannon rays on three variables:")
for ray in extremal_rays(smc(lambda_n(3))):
    found, q = find_group_realization(ray)
    print(f"  {str(ray):<24} <- {found.ambient.cyclic_orders}, base {q}")
