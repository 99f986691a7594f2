"""
Congruence lattices
===================

"""

from latcon.congruence import enumerate_con, principal_congruence, theta_plus
from latcon.lattice import chain, is_distributive, m3, n5

# a congruence is a block labelling; Theta(a, b) is the least one gluing a and b
C3 = chain(3)
print(principal_congruence(C3, 0, 1))
print(principal_congruence(m3(), "0", "p"))    # M3 is simple

L = n5()
con = enumerate_con(L)
print(len(con), "congruences of N5")
for i, c in enumerate(con):
    print(i, c)

# Con(L) is always distributive
print(is_distributive(con.lattice))

# Theta+(a, b) forces a <= b
print(theta_plus(L, "a", "b"))
