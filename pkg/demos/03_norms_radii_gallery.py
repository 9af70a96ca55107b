"""Structure-aware norms and radii, their certainty labels, and the gallery
of counterexample operators with self-verifying claims."""

import numpy as np

from bollobas_lab import (INF, Dense, Space, gallery, numerical_radius,
                          operator_norm, norming_set, nu_attaining_states)

rng = np.random.default_rng(1)

print("== certainty labels track how a value was obtained ==")
M = rng.normal(size=(5, 5))
for dom, cod in [((1, 5), (1, 5)), ((2, 5), (2, 5)),
                 ((INF, 5), (2, 5)), ((2.5, 5), (1.7, 5))]:
    T = Dense(M, Space(*dom), Space(*cod))
    nr = operator_norm(T)
    print(f"   l_{dom[0]} -> l_{cod[0]}: {nr.value:.6f} [{nr.certainty}]"
          f" via {nr.method}")

print("\n== numerical radius routes ==")
T2 = Dense(M, Space(2, 5), Space(2, 5))
T1 = Dense(M, Space(1, 5), Space(1, 5))
print("   real Hilbert (symmetric part):", numerical_radius(T2).describe())
print("   l_1 (column sums):           ", numerical_radius(T1).describe())
Mc = M + 1j * rng.normal(size=(5, 5))
Tc = Dense(Mc, Space(2, 5, "complex"), Space(2, 5, "complex"))
print("   complex Hilbert (rotations): ", numerical_radius(Tc).describe())

print("\n== the finite shift: norm one, radius climbing to one ==")
for n in (2, 4, 8, 16):
    e = gallery("G-SHIFT", n)
    print(f"   dim {n:2d}: nu = {numerical_radius(e.expr).value:.8f}"
          f"   cos(pi/(n+1)) = {np.cos(np.pi / (n + 1)):.8f}")

print("\n== gallery claims are executable ==")
for gid in ("G-BLOCK", "G-RANK1-L1", "G-SKEW", "G-CORNER"):
    entry = gallery(gid, 8)
    results = entry.run_claims(seed=0)
    status = "all pass" if all(r.passed for r in results) else "FAILED"
    print(f"   {gid}@8: {len(results)} claims, {status}")
    for r in results[:2]:
        print(f"      {r.name}: {r.detail or 'ok'}")

print("\n== attaining sets and distances ==")
entry = gallery("G-SKEW", 8)
desc = nu_attaining_states(entry.expr)
x = np.zeros(8)
x[0] = 1.0
print("   skew rotations attain on the trailing block;",
      "distance of e_1 to it:", desc.pair_distance(x, x))
blk = gallery("G-BLOCK", 8)
ns = norming_set(blk.expr)
e_first = np.zeros(8)
e_first[6] = 1.0
print("   block operator norming distance of the last first-coordinate:",
      ns.distance(e_first), "(>= 1 always)")
