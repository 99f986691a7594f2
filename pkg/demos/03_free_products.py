"""
Free products of two-element chains
===================================

"""

from latcon.congruence import enumerate_con
from latcon.free import (ChainPresentation, VarietySpec, count_free_elements, eval_hom,
                         free_over_chains, relation_assignments)
from latcon.lattice import is_distributive
from latcon.replication import reference_D

# in the distributive variety two chains give the 18-element lattice D
V = VarietySpec.named("two")
D = free_over_chains(V, ChainPresentation.chains(2))
print(D.size, is_distributive(D.lattice)[0])
print([D.lattice.label(g) for g in D.generators])

# the hom fixed on generators maps D onto the hand-drawn picture
f = eval_hom(D, reference_D(), {"s0": "u0", "t0": "v0", "s1": "u1", "t1": "v1"})
print("bijective:", f.is_injective() and f.is_surjective())

# Con(D) is Boolean
con = enumerate_con(D.lattice)
print(len(con), "congruences")

# coordinates are assignments of the generators into M respecting s <= t
M3 = VarietySpec.named("m3")
for k in (1, 2, 3):
    print(k, len(relation_assignments(ChainPresentation.chains(k), M3.M)))

# sizes without building the lattice
for k in (1, 2, 3):
    print("E_M3(%d) =" % k, count_free_elements(M3, ChainPresentation.chains(k)))
