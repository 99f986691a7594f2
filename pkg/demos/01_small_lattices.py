"""
Small lattices as numpy tables
==============================

"""

import numpy as np
from latcon.lattice import (all_lattices, chain, find_m3_or_n5, format_lattice, is_distributive,
                            m3, n5, to_dot)

# every lattice carries its order and both operations as n x n arrays
L = n5()
print(format_lattice(L, "the pentagon"))
print(L.meet)
print(L.join)

# distributivity fails in M3 and N5, and the witness is the least bad triple
for M in (m3(), n5(), chain(4)):
    print(M.size, is_distributive(M))

# by the M3-N5 theorem the two tests agree on every small lattice
lats = all_lattices(6)
agree = [is_distributive(K)[0] == (find_m3_or_n5(K) is None) for K in lats]
print(len(lats), "lattices up to size 6, tests agree:", all(agree))
print("sizes:", np.bincount([K.size for K in lats])[1:])

print(to_dot(m3(), "M3"))
