"""
Three chains in HSP(M3)
=======================

B(3) has about a million elements, so its congruences are read through the
meet-irreducible kernels instead of built directly.
"""

from latcon.free import ChainPresentation, KernelModel, VarietySpec, free_element_bounds
from latcon.replication import run_check

V = VarietySpec.named("m3")
P = ChainPresentation.chains(3, bounded=True)

print(free_element_bounds(V, P))

K = KernelModel(V, P)
print(K.summary())
print(K.count_congruences())

# Theta(s0, t0) and its join with Theta(s1, t1), as kernel bitmasks
a = K.theta("s0", "t0")
b = K.join(a, K.theta("s1", "t1"))
print(bin(a).count("1"), bin(b).count("1"), K.leq(a, b))

# the exhaustive search over candidate triples
(r,) = run_check("notriple", case="m3")
print(r.text())
