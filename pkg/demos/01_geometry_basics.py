"""Tour of the geometry layer: norms, the bilinear pairing, duality maps,
state pairs, and moduli of convexity."""

import numpy as np

from bollobas_lab import (INF, Space, duality_map, lp_norm, modulus_convexity,
                          pair, state_pair, support_states)

print("== norms ==")
print("||(3,4)||_2       =", lp_norm([3, 4], 2))
print("||(1,1)||_inf     =", lp_norm([1, 1], INF))
print("||(1,-2,3)||_1.5  =", lp_norm([1, -2, 3], 1.5))

print("\n== the pairing is bilinear; a geometric functional against ones ==")
w = 0.5 ** np.arange(1, 11)
print("<w, ones> =", pair(w, np.ones(10)), " (equals 1 - 2^-10)")

print("\n== duality map on l_3 ==")
s = Space(3.0, 2)
x = np.array([1.0, 1.0]) / 2 ** (1 / 3)
xs = duality_map(x, s)
print("x  =", x)
print("x* =", xs, " norm in the dual:", s.dual().norm(xs))
sp = state_pair(x, s)
print("state pair valid:", sp.is_valid())

print("\n== supporting functionals are a set once p hits 1 or inf ==")
s1 = Space(1.0, 4)
e1 = np.array([1.0, 0, 0, 0])
desc = support_states(e1, s1)
print("kind:", desc.kind, "(pinned first coordinate, free unit-disc rest)")
rng = np.random.default_rng(0)
for v in desc.sample(rng, 3):
    print("   sample:", np.round(v, 3))

print("\n== moduli of convexity ==")
for p in (2.0, 4.0, 1.5):
    vals = [modulus_convexity(Space(p, 2), e) for e in (0.5, 1.0, 1.5)]
    print(f"p={p}: delta(0.5, 1.0, 1.5) =", np.round(vals, 8))
print("p=2 closed form at eps=1:", 1 - np.sqrt(3) / 2)
