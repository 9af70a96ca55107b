"""Adversarial probes: estimating the stability modulus from above and tying
the symbolic verdicts to finite truncations.

For members, eta_hat stays above a certified floor at every truncation; for
non-members, the certificate witnesses drive it to zero.  Probe output
serializes to CSV for curve plotting.
"""

import numpy as np

from bollobas_lab import (CSV_HEADER, ConstantTail, Diagonal, ProbeBudget,
                          SequenceSpec, Space, diag_norm_eta_floor,
                          diag_norm_member, eta_probe_norm, identity,
                          ratio_to_one_tail, validate_eta)
from bollobas_lab.membership import eta_const, rank1_l1_eta
from bollobas_lab.gallery import gallery

BUD = ProbeBudget(restarts=32, iters=400)


def truncate(spec, dim, p):
    alphas = spec.materialize(dim)
    alphas = alphas / np.abs(alphas).max()
    return Diagonal(SequenceSpec(tuple(alphas.tolist())), Space(p, dim))


print("== a member: eta_hat never drops below the certified floor ==")
spec = SequenceSpec((1.0,), ConstantTail(0.5))
print("verdict:", diag_norm_member(spec, 2.0).member)
floor = diag_norm_eta_floor(spec, 2.0, 0.1)
print(CSV_HEADER)
for dim in (8, 16, 32):
    rep = eta_probe_norm(truncate(spec, dim, 2.0), 0.1, budget=BUD, seed=1)
    print(rep.csv_row(dim))
print(f"floor at eps=0.1: {floor:.8f}")

print("\n== a non-member: witnesses drive eta_hat to zero ==")
bad = SequenceSpec((1.0,), ratio_to_one_tail())
v = diag_norm_member(bad, 2.0)
print("verdict:", v.member, "|", v.reason)
print(CSV_HEADER)
for dim in (8, 16, 32, 64):
    rep = eta_probe_norm(truncate(bad, dim, 2.0), 0.1, budget=BUD, seed=1,
                         extra_seeds=v.witness.generate(dim))
    print(rep.csv_row(dim))

print("\n== every unit vector of the identity attains: the sentinel ==")
rep = eta_probe_norm(identity(Space(2, 6)), 0.5, budget=BUD, seed=0)
print("sentinel:", rep.sentinel, "| eta_hat:", rep.eta_hat)

print("\n== validating closed-form moduli adversarially ==")
entry = gallery("G-RANK1-L1", 16)
r = rank1_l1_eta()
ok = validate_eta(entry.expr, r.eta, [k / 10 for k in range(1, 10)],
                  mode="norm", budget=BUD, seed=0)
print("eta(eps) = eps/2 on the column operator:",
      "survives" if ok.passed else "violated")

zstar = gallery("G-DIAG-ZSTAR", 16)
bad_eta = validate_eta(zstar.expr, eta_const(0.125), [0.5], mode="norm",
                       budget=BUD, seed=0,
                       extra_seeds=[np.eye(16)[15]])
print("a constant modulus on the ratios functional:",
      "survives" if bad_eta.passed else "violated (as it must be)")
