"""
Uniform refinement on finite semilattices
=========================================

"""

from latcon.congruence import enumerate_con
from latcon.lattice import distributive_lattices, m3
from latcon.semilattice import as_semilattice, check_URP_at, check_WURP_at

# the join reduct of M3 fails the weak property at the top
M = m3()
S = as_semilattice(M)
res = check_WURP_at(S, M.index("1"))
print(res.holds, res.certificate)
for c in res.certificate:
    print("pair", res.pairs[c[1]], res.pairs[c[2]])

# distributive lattices pass, with c_ij = a_i ^ b_j
B = distributive_lattices(6)[-1]
res = check_URP_at(as_semilattice(B), B.top)
print(res.holds)
print(res.witness.format(as_semilattice(B)))

# congruence lattices of finite lattices pass everywhere
C = as_semilattice(enumerate_con(M))
print([check_URP_at(C, e).holds for e in range(C.size)])
