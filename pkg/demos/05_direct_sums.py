"""Connecting norm stability and radius stability through two-block sums.

Lifting T: W -> Z to (w, z) -> (0, Tw) preserves everything for outer sums
with exponent 1 or inf, with explicit modulus transfers in both directions.
Strictly between, the mechanism dies: the lifted identity tops out at
(1/p)^(1/p) (1/q)^(1/q) < 1.  And a radius-stable operator on a sum can
squeeze back to the zero operator.
"""

import numpy as np

from bollobas_lab import (INF, Dense, Lift, Space, corner_counterexample,
                          corner_profile_constant, eta_identity,
                          lift_nu_implies_norm, norm_implies_lift_nu,
                          numerical_radius, psum_counterexample)
from bollobas_lab.membership import EtaFunction
from bollobas_lab.norm_attainment import hilbert_norm_modulus

print("== modulus transfers across the lift ==")
H = Space(2, 3)
rng = np.random.default_rng(4)
M = rng.normal(size=(3, 3))
M /= np.linalg.svd(M)[1][0]
T = Dense(M, H, H)
eta_T = EtaFunction(lambda e: hilbert_norm_modulus(M, e) or 1.0,
                    "singular-value modulus")
for outer in (1.0, INF):
    res = norm_implies_lift_nu(T, outer, eta_T, H, H)
    vals = {e: round(res.eta_out(e), 8) for e in (0.2, 0.5, 0.8)}
    print(f"   outer {outer}: transferred eta:", vals)
back = lift_nu_implies_norm(T, INF, eta_identity())
print("   back-transfer (outer inf) halves the modulus: eta(0.4) =",
      back.eta_out(0.4))

print("\n== the lifted identity on a p-sum: the radius stays short of one ==")
for p in (1.5, 2.0, 3.0):
    rep = psum_counterexample(p, dim=3)
    print(f"   p={p}: nu = {rep.nu:.12f}"
          f" (profile constant {corner_profile_constant(p):.12f},"
          f" margin {rep.margin:.4f})")
rep = psum_counterexample(1.5, dim=3)
print("   why pairing one is impossible:")
for line in rep.trace[:4]:
    print("     -", line)

print("\n== radii of lifts across outer exponents ==")
for p in (1.0, 1.5, 2.0, 3.0, INF):
    L = Lift(Dense(np.eye(3), H, H), p)
    print(f"   outer {p}: nu(lift of identity) =",
          round(numerical_radius(L).value, 10))

print("\n== the corner operator: radius-stable, yet its squeeze-back is 0 ==")
for outer in (1.0, INF):
    rep = corner_counterexample(outer, dim=4)
    print(f"   outer {outer}: nu attained: {rep.nu_attained},"
          f" delift zero: {rep.delift_is_zero},"
          f" repair bounds verified: {rep.repair_checked}")
