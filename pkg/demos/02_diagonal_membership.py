"""Symbolic membership verdicts for diagonal multiplier operators.

A diagonal x -> (alpha_n x(n)) is stable for its norm exactly when the
unimodular set J is nonempty and either exhausts every index or the moduli
outside it stay uniformly below one.  The radius version additionally needs
finitely many distinct phases on J.  Verdicts are decided from the symbolic
prefix + tail data; negative ones materialize refuting witnesses.
"""

import json

import numpy as np

from bollobas_lab import (ConstantTail, SequenceSpec, ZeroTail,
                          diag_mixed_member, diag_norm_member, diag_nu_member,
                          drifting_phase_tail, functional_member,
                          geometric_tail, projection_member, ratio_to_one_tail)

CASES = [
    ("leading one, constant half tail",
     SequenceSpec((1.0,), ConstantTail(0.5)), 2.0, "norm"),
    ("leading one, moduli climbing to one",
     SequenceSpec((1.0,), ratio_to_one_tail()), "c0", "norm"),
    ("norm one but never attained",
     SequenceSpec((0.9,), ratio_to_one_tail()), 2.0, "norm"),
    ("all unimodular, one phase",
     SequenceSpec((), ConstantTail(1.0)), 3.0, "norm"),
    ("signs plus small tail (radius mode)",
     SequenceSpec((1.0, -1.0), ConstantTail(0.3)), 1.0, "nu"),
    ("infinitely many phases e^{i/k} (radius mode)",
     SequenceSpec((), drifting_phase_tail()), "c0", "nu"),
]

for label, spec, family, mode in CASES:
    fn = diag_norm_member if mode == "norm" else diag_nu_member
    v = fn(spec, family)
    print(f"-- {label} [family={family}, {mode}]")
    print("   member:", v.member, "|", v.reason)
    if v.witness is not None:
        print("   witness slack at dims 8/16/32:",
              [round(v.witness.slack_at(d), 6) for d in (8, 16, 32)])

print("\n-- canonical projections")
for fam in (1.0, 2.0, "c0", "linf"):
    print(f"   P_4 on {fam}: norm={projection_member(4, fam).member}",
          f"nu={projection_member(4, fam, 'nu').member}")

print("\n-- crossing families: c0 -> l2 needs finite support")
fin = diag_mixed_member(SequenceSpec((0.6, 0.8), ZeroTail()), "c0", 2.0)
r = 0.5
c = np.sqrt(1 - r * r) / r
geo = diag_mixed_member(SequenceSpec((), geometric_tail(c, r)), "c0", 2.0)
print("   finite support:", fin.member, "| normalized geometric:", geo.member)

print("\n-- functionals")
print("   any unit functional on l_3:",
      functional_member(SequenceSpec((1.0,)), 3.0).member)
zstar = functional_member(SequenceSpec((1.0,), ratio_to_one_tail()), 1.0)
print("   ratios-to-one functional on l_1:", zstar.member,
      "(the basis orbit is isolated; basis vectors far out refute it)")
print("\nverdict as JSON:")
print(json.dumps(zstar.to_json(), indent=2)[:400], "...")
